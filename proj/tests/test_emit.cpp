#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

#include "iqc/emit.hpp"
#include "iqc/families.hpp"

using namespace iqc;
using families::Family;

namespace {

std::vector<Family> benchmarks() {
  return {families::ghz(),   families::uniform(),    families::zn(),
          families::wn(),    families::rot(),        families::rotinv(),
          families::rev(),   families::qft(),        families::adder(),
          families::subtractor(), families::teleport()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

int run(const std::string& cmd) {
  int st = std::system(cmd.c_str());
  REQUIRE(st != -1);
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("ghz qasm at n = 2 is the textbook three-qubit circuit") {
  std::string q = emit_qasm(families::ghz().program, 2, {});
  CHECK(q ==
        "OPENQASM 3.0;\n"
        "include \"stdgates.inc\";\n"
        "qubit[3] q;\n"
        "h q[0];\n"
        "cx q[0], q[1];\n"
        "cx q[1], q[2];\n");
}

TEST_CASE("isqir text round-trips for every benchmark") {
  for (const Family& f : benchmarks()) {
    EmitInput in{f.program, {}, {}};
    std::string text = emit(in, {EmitTarget::Kind::IsqirText, 0}, {});
    CHECK(equal(parse_isqir(text), f.program));
  }
}

TEST_CASE("emitted qasm re-simulates to the internal unitary") {
  Registry reg = families::standard_registry();
  for (const Family& f : benchmarks()) {
    for (std::uint64_t n = 0; n <= 3; ++n) {
      std::uint64_t q = eval(f.qubits, Env(n, 0, 0));
      if (q == 0 || q > 7) continue;
      ParsedQasm pq = parse_qasm(emit_qasm(f.program, n, reg));
      REQUIRE(pq.qubits == q);
      INFO(f.name << " at n = " << n);
      CHECK(max_entry_diff(ops_unitary(pq.ops, q),
                           program_unitary(f.program, n, q, reg)) < 1e-9);
    }
  }
}

TEST_CASE("emitted adder circuit computes the addition table") {
  std::uint64_t n = 2;
  ParsedQasm pq = parse_qasm(emit_qasm(families::adder().program, n, {}));
  REQUIRE(pq.qubits == 2 * n + 2);
  Mat u = ops_unitary(pq.ops, pq.qubits);
  for (std::uint64_t a = 0; a < 4; ++a)
    for (std::uint64_t b = 0; b < 4; ++b) {
      std::uint64_t x = (a << 1) | (b << (n + 1));  // carries clear
      std::uint64_t y = (a << 1) | (((a + b) % 4) << (n + 1)) |
                        (((a + b) / 4) << (2 * n + 1));
      CHECK(std::abs(u[y][x] - Amp(1.0)) < 1e-9);
    }
}

TEST_CASE("qasm emission refuses oversized registers") {
  IsqirPtr wide = isq_const({op_gate("H", {nconst(24)})});
  CHECK_THROWS_AS(emit_qasm(wide, 0, {}), DimensionTooLarge);
}

TEST_CASE("emit targets parse and dispatch") {
  CHECK(parse_emit_target("isqir").kind == EmitTarget::Kind::IsqirText);
  CHECK(parse_emit_target("qasm:3").kind == EmitTarget::Kind::OpenQasm);
  CHECK(parse_emit_target("qasm:3").n == 3);
  CHECK(parse_emit_target("halpha").kind == EmitTarget::Kind::HAlphaJson);
  CHECK(parse_emit_target("trace").kind == EmitTarget::Kind::ProofTraceJson);
  CHECK_THROWS_AS(parse_emit_target("latex"), ParseError);

  Family zn = families::zn();
  EmitInput in{zn.program, *zn.halpha, {}};
  HAlpha back = halpha_from_json(emit(in, {EmitTarget::Kind::HAlphaJson, 0}, {}));
  CHECK(equal(back.h, zn.halpha->h));
  CHECK_THROWS(emit({zn.program, {}, {}}, {EmitTarget::Kind::HAlphaJson, 0}, {}));
}

TEST_CASE("registry json round-trips a component") {
  Registry reg;
  Family zn = families::zn();
  reg.components["ZN"] = {zn.program, *zn.halpha, zn.qubits};
  Registry back;
  registry_merge_from_json(back, registry_to_json(reg));
  REQUIRE(back.components.count("ZN") == 1);
  CHECK(equal(back.components.at("ZN").program, zn.program));
  CHECK(equal(back.components.at("ZN").qubits, zn.qubits));
}

TEST_CASE("cli simulate prints the ghz state") {
  write_file("cli_ghz.isqir", to_string(families::ghz().program));
  REQUIRE(run("./iqc simulate --program cli_ghz.isqir --n 2 --input 0"
              " > cli_sim.txt") == 0);
  std::ifstream in("cli_sim.txt");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text ==
        "|000> 0.7071+0.0000i\n"
        "|111> 0.7071+0.0000i\n");
}

TEST_CASE("cli exit codes: usage, reject, accept") {
  CHECK(run("./iqc simulate --no-such-flag 2> /dev/null") == 2);
  CHECK(run("./iqc verify --program missing.isqir --halpha missing.json"
            " 2> /dev/null") == 2);

  Family zn = families::zn();
  write_file("cli_zn.isqir", to_string(zn.program));
  write_file("cli_zn.halpha.json", halpha_to_json(*zn.halpha));
  write_file("cli_uni.isqir", to_string(families::uniform().program));
  CHECK(run("./iqc verify --program cli_zn.isqir --halpha cli_zn.halpha.json"
            " --qubits \"(+ n 1)\" --n-bound 4 > /dev/null") == 0);
  CHECK(run("./iqc verify --program cli_uni.isqir --halpha cli_zn.halpha.json"
            " --qubits \"(+ n 1)\" --n-bound 4 2> /dev/null") == 1);
}

TEST_CASE("cli synth produces the ghz program deterministically") {
  write_file("cli_ghz.spec",
             "GHZ_n : |0_{n+1}> -> |0_{n+1}> (+) |(2^(n+1)-1)_{n+1}>\n");
  REQUIRE(run("./iqc synth --spec cli_ghz.spec --gates H,CX --perm-depth 1"
              " --wall-clock 110 --n-bound 5 > cli_synth1.txt") == 0);
  REQUIRE(run("./iqc synth --spec cli_ghz.spec --gates H,CX --perm-depth 1"
              " --wall-clock 110 --n-bound 5 > cli_synth2.txt") == 0);
  std::ifstream a("cli_synth1.txt"), b("cli_synth2.txt");
  std::string ta((std::istreambuf_iterator<char>(a)),
                 std::istreambuf_iterator<char>());
  std::string tb((std::istreambuf_iterator<char>(b)),
                 std::istreambuf_iterator<char>());
  CHECK(ta == tb);
  CHECK(equal(parse_isqir(ta), families::ghz().program));
}
