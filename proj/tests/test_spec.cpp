#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "iqc/families.hpp"
#include "iqc/speclang.hpp"
#include "iqc/verifier.hpp"

using namespace iqc;

namespace {

const char* kGhz = "GHZ_n : |0_{n+1}> -> |0_{n+1}> (+) |(2^(n+1)-1)_{n+1}>";
const char* kUniform = "UNI_n : |0_{n+1}> -> U_{y in {0,1}^(n+1)} |y>";
const char* kQft =
    "QFT_n : |x[n+1]> -> U_{y in {0,1}^(n+1)} e^{2pi i * x*y/2^(n+1)} |y>";
const char* kTeleport =
    "TEL_n : |phi[n]>|0_n>|0_n> -> U_{z in {0,1}^(3*n)} "
    "delta(phi == z[2*n-1:n] xor z[3*n-1:2*n]) * "
    "e^{-pi i * redxor(n, z[n-1:0])} |z>";
const char* kAdder =
    "ADD_n : |0>|A[n]>|B[n]>|0_n> -> "
    "|(A+B)/2^n>_1 |A> |B> |(A+B) % 2^n>_{n}";

double norm_at(const CompiledSpec& cs, std::uint64_t n, std::uint64_t x,
               std::uint64_t q) {
  double acc = 0;
  for (std::uint64_t y = 0; y < (1ull << q); ++y) {
    std::complex<double> a = eval_entry(cs.alpha, Env(n, x, y));
    acc += std::norm(a);
  }
  return acc;
}

}  // namespace

TEST_CASE("ghz spec parses and compiles to the binary superposition") {
  SpecAst ast = parse_spec(kGhz);
  CHECK(ast.name == "GHZ_n");
  REQUIRE(ast.input.size() == 1);
  CHECK(ast.input[0].kind == SpecAst::InKind::ConstKet);
  REQUIRE(ast.branches.size() == 2);

  CompiledSpec cs = compile(kGhz);
  for (std::uint64_t n = 0; n <= 5; ++n)
    CHECK(eval(cs.q_count, Env(n, 0, 0)) == n + 1);
  CHECK(eval(cs.alpha.beta, Env(3, 0, 0)) == 2);

  // hypothesis admits only x = 0 (within range)
  CHECK(eval(cs.hypothesis, Env(2, 0, 1)));
  CHECK(!eval(cs.hypothesis, Env(2, 5, 1)));

  double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(eval_entry(cs.alpha, Env(2, 0, 0)) - r) < 1e-12);
  CHECK(std::abs(eval_entry(cs.alpha, Env(2, 0, 7)) - r) < 1e-12);
  CHECK(std::abs(eval_entry(cs.alpha, Env(2, 0, 3))) < 1e-12);
}

TEST_CASE("compiled ghz target verifies against the ghz program") {
  SolverConfig cfg;
  cfg.mode = SolverMode::Bounded;
  cfg.n_max = 5;
  Verifier v({}, cfg);
  CompiledSpec cs = compile(kGhz);
  ProofTrace tr =
      v.check_judgement(cs.target(), families::ghz().program, cs.q_count);
  CHECK(tr.accepted);
}

TEST_CASE("adder spec example: layout, hypothesis, carry sugar rejected") {
  const char* text = "|0>|A[n]>|B[n]>|0_n> -> |c0>|A>|B>|A+B>";
  SpecAst ast = parse_spec(text);
  REQUIRE(ast.input.size() == 4);
  CHECK(ast.input[1].kind == SpecAst::InKind::VarKet);
  CHECK(ast.input[1].var == "A");

  auto [lay, h] = derive_layout(ast);
  REQUIRE(lay.segs.size() == 4);
  CHECK(lay.const_eqs.size() == 2);  // one conjunct per constant segment
  Env e3(3, 0, 0);
  CHECK(eval(lay.segs[1].lo, e3) == 1);
  CHECK(eval(lay.segs[1].hi, e3) == 3);
  CHECK(eval(lay.segs[2].lo, e3) == 4);
  CHECK(eval(lay.segs[2].hi, e3) == 6);
  CHECK(eval(lay.q_count, e3) == 10);

  // x[0] must be 0 and the top n bits must be 0
  CHECK(eval(h, Env(2, (2u << 1) | (3u << 3), 0)));
  CHECK(!eval(h, Env(2, 1, 0)));
  CHECK(!eval(h, Env(2, 1u << 5, 0)));

  // c0 is not a declared variable; compilation rejects it
  CHECK_THROWS_AS(compile(text), UndeclaredVariable);
}

TEST_CASE("explicit adder spec compiles to the carry/sum amplitude") {
  CompiledSpec cs = compile(kAdder);
  std::uint64_t n = 2;
  for (std::uint64_t a = 0; a < 4; ++a)
    for (std::uint64_t b = 0; b < 4; ++b) {
      std::uint64_t x = (a << 1) | (b << 3);
      std::uint64_t s = a + b;
      std::uint64_t y = (s >> n) | (a << 1) | (b << 3) | ((s % 4) << 5);
      CHECK(eval(cs.hypothesis, Env(n, x, y)));
      CHECK(std::abs(eval_entry(cs.alpha, Env(n, x, y)) - 1.0) < 1e-12);
      CHECK(std::abs(eval_entry(cs.alpha, Env(n, x, y ^ 2))) < 1e-12);
    }
}

TEST_CASE("qft spec compiles to the dft amplitude") {
  CompiledSpec cs = compile(kQft);
  for (std::uint64_t n = 0; n <= 2; ++n) {
    std::uint64_t d = 1ull << (n + 1);
    CHECK(eval(cs.alpha.beta, Env(n, 0, 0)) == d);
    for (std::uint64_t x = 0; x < d; ++x)
      for (std::uint64_t y = 0; y < d; ++y) {
        std::complex<double> want =
            std::polar(1.0 / std::sqrt(double(d)),
                       2 * M_PI * double(x * y % d) / double(d));
        CHECK(std::abs(eval_entry(cs.alpha, Env(n, x, y)) - want) < 1e-9);
      }
  }
  // the conjugate convention parses too and flips the phase sign
  CompiledSpec neg = compile(
      "Q : |x[n+1]> -> U_{y in {0,1}^(n+1)} e^{-2pi i * x*y/2^(n+1)} |y>");
  std::complex<double> a = eval_entry(cs.alpha, Env(1, 1, 3));
  std::complex<double> b = eval_entry(neg.alpha, Env(1, 1, 3));
  CHECK(std::abs(a - std::conj(b)) < 1e-12);
}

TEST_CASE("teleport spec: pinned segment halves the summed qubits") {
  CompiledSpec cs = compile(kTeleport);
  for (std::uint64_t n = 1; n <= 3; ++n)
    CHECK(eval(cs.alpha.beta, Env(n, 0, 0)) == (1ull << (2 * n)));

  // n=1: input phi=1, output a=1, b=0, c=1 satisfies phi = b xor c and
  // picks up the (-1)^a phase
  std::uint64_t y = 1u | (0u << 1) | (1u << 2);
  std::complex<double> amp = eval_entry(cs.alpha, Env(1, 1, y));
  CHECK(std::abs(amp - std::complex<double>(-0.5, 0)) < 1e-12);
  // b=1, c=0 also matches, with a=0 and no phase
  CHECK(std::abs(eval_entry(cs.alpha, Env(1, 1, 2)) -
                 std::complex<double>(0.5, 0)) < 1e-12);
  // phi != b xor c gives amplitude 0
  CHECK(std::abs(eval_entry(cs.alpha, Env(1, 1, 0))) < 1e-12);
}

TEST_CASE("inversion spec layout") {
  const char* text =
      "INV_n : |0>|Lam[2]>|0_n>|1>|0_1> -> |0> |Lam> |(2^n) % Lam>_n |(2^n)/Lam>";
  CompiledSpec cs = compile(text);
  Env e(2, 0, 0);
  CHECK(eval(cs.q_count, e) == 7);
  REQUIRE(cs.layout.segs.size() == 5);
  CHECK(cs.layout.segs[1].name == "Lam");
  CHECK(eval(cs.layout.segs[1].lo, e) == 1);
  CHECK(eval(cs.layout.segs[1].hi, e) == 2);
  // the |1> segment shows up in h
  CHECK(eval(cs.hypothesis, Env(2, (3u << 1) | (1u << 5), 0)));
  CHECK(!eval(cs.hypothesis, Env(2, 3u << 1, 0)));
}

TEST_CASE("diagnostics") {
  CHECK_THROWS_AS(parse_spec("|0_n"), SyntaxError);
  CHECK_THROWS_AS(parse_spec("|5> -> |5>"), SyntaxError);
  CHECK_THROWS_AS(parse_spec("|x[n]> ->"), SyntaxError);
  CHECK_THROWS_AS(compile("|x[n]> -> |z>_n"), UndeclaredVariable);
  CHECK_THROWS_AS(compile("|x[n]> -> |x>_n |0>"), LengthMismatch);
  CHECK_THROWS_AS(
      compile("|x[n]> -> U_{y in {0,1}^n} e^{2pi i * x*y/3} |y>"),
      NonPpsaExpressible);
  CHECK_THROWS_AS(compile("|x[n]> -> U_{y in {0,1}^n} e^{2pi * x} |y>"),
                  NonPpsaExpressible);
}

TEST_CASE("duplicate join branches collapse to one term") {
  CompiledSpec cs = compile("G : |0_{n+1}> -> |0_{n+1}> (+) |0_{n+1}>");
  CHECK(cs.alpha.terms.size() == 1);
  CHECK(eval(cs.alpha.beta, Env(0, 0, 0)) == 2);
}

TEST_CASE("compiled specs are unit norm on their hypotheses") {
  for (const char* text : {kGhz, kUniform, kQft, kTeleport, kAdder}) {
    CAPTURE(text);
    CompiledSpec cs = compile(text);
    for (std::uint64_t n = 0; n <= 4; ++n) {
      std::uint64_t q = eval(cs.q_count, Env(n, 0, 0));
      if (q > 8) break;
      for (std::uint64_t x = 0; x < (1ull << q); ++x) {
        if (!eval(cs.hypothesis, Env(n, x, 0))) continue;
        CHECK(std::abs(norm_at(cs, n, x, q) - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("layout segments are disjoint and tile the register") {
  for (const char* text : {kGhz, kUniform, kQft, kTeleport, kAdder}) {
    CAPTURE(text);
    CompiledSpec cs = compile(text);
    for (std::uint64_t n = 0; n <= 16; ++n) {
      Env e(n, 0, 0);
      std::uint64_t q = eval(cs.q_count, e);
      std::uint64_t expect_lo = 0;
      for (const LayoutMap::Seg& seg : cs.layout.segs) {
        std::uint64_t len = eval(seg.len, e);
        if (len == 0) continue;
        CHECK(eval(seg.lo, e) == expect_lo);
        CHECK(eval(seg.hi, e) == expect_lo + len - 1);
        expect_lo += len;
      }
      CHECK(expect_lo == q);
    }
  }
}
