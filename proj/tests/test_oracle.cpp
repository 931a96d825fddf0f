#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>

#include "iqc/families.hpp"
#include "iqc/oracle.hpp"

using namespace iqc;

namespace {

SolverConfig quick() {
  SolverConfig cfg;
  cfg.mode = SolverMode::Bounded;
  cfg.n_max = 5;
  cfg.timeout_ms = 60000;
  return cfg;
}

std::int64_t sx_eval(const SignedExpr& s, const Env& env) {
  return std::int64_t(eval(s.pos, env)) - std::int64_t(eval(s.neg, env));
}

// the Hadamard cascade on wires 1..n, as the tests build it by hand
IsqirPtr sh() {
  return isq_fix(perm_id(), {SqirProgram{}}, isq_const({}),
                 isq_const({op_gate("H", {n_n()})}));
}

}  // namespace

TEST_CASE("affine witness through two points") {
  CHECK(affine_witness(-1, 1) == std::pair<std::int64_t, std::int64_t>{2, -1});
  CHECK(affine_witness(0, 1) == std::pair<std::int64_t, std::int64_t>{1, 0});
  CHECK(affine_witness(1, 0) == std::pair<std::int64_t, std::int64_t>{-1, 1});
  CHECK(affine_witness(3, 3) == std::pair<std::int64_t, std::int64_t>{0, 3});
}

TEST_CASE("sum abstraction matches the concrete sum on every truth table") {
  // g(z) = delta(z = e0) for e0 in {0, 1}, the shape the checker emits
  for (std::uint64_t e0 : {0ull, 1ull}) {
    SymbolicSum ss;
    ss.g.g0 = {ndelta(beq(nconst(e0), nconst(0))), nconst(0)};
    ss.g.g1 = {ndelta(beq(nconst(e0), nconst(1))), nconst(0)};
    AffineSum ab = sum_abstraction(ss);
    for (std::uint64_t n = 0; n <= 3; ++n) {
      std::uint64_t pts = 1ull << n;
      for (std::uint64_t f = 0; f < (1ull << pts); ++f) {
        std::int64_t direct = 0;
        for (std::uint64_t i = 0; i < pts; ++i) {
          std::uint64_t fi = (f >> i) & 1;
          direct += (fi == e0) ? 1 : 0;
        }
        Env env;
        env.vars = {{"n", n}, {"s", std::uint64_t(std::popcount(f))}};
        std::int64_t lifted =
            sx_eval(ab.a, env) * std::popcount(f) + sx_eval(ab.b, env) * pts;
        CHECK(direct == lifted);
      }
    }
  }
}

TEST_CASE("oracle amplitude matches the dense oracle unitary") {
  HAlpha ha = oracle_halpha(n_n());
  for (std::uint64_t n = 1; n <= 3; ++n) {
    std::uint64_t q = n + 1, dim = 1ull << q;
    for (std::uint64_t f = 0; f < (1ull << (1ull << n)); ++f) {
      Mat u = oracle_program_unitary(isq_oracle("f"), n, q, {}, f);
      for (std::uint64_t x = 0; x < dim; ++x)
        for (std::uint64_t y = 0; y < dim; ++y) {
          Env env(n, x, y);
          env.vars[oracle_table_var()] = f;
          CHECK(std::abs(eval_entry(ha.alpha, env) - u[y][x]) < 1e-12);
        }
    }
  }
}

TEST_CASE("oracle amplitude witness covers the nonzero entries") {
  HAlpha ha = oracle_halpha(n_n());
  REQUIRE(ha.alpha.witness.has_value());
  for (std::uint64_t n = 1; n <= 3; ++n) {
    std::uint64_t dim = 1ull << (n + 1);
    for (std::uint64_t f = 0; f < (1ull << (1ull << n)); ++f)
      for (std::uint64_t x = 0; x < dim; ++x)
        for (std::uint64_t y = 0; y < dim; ++y) {
          Env env(n, x, y);
          env.vars[oracle_table_var()] = f;
          if (std::abs(eval_entry(ha.alpha, env)) < 1e-12) continue;
          bool inx = false, iny = false;
          for (const NatPtr& e : ha.alpha.witness->xs)
            inx = inx || eval(e, env) == x;
          for (const NatPtr& e : ha.alpha.witness->ys)
            iny = iny || eval(e, env) == y;
          CHECK(inx);
          CHECK(iny);
        }
  }
}

TEST_CASE("deutsch-jozsa dense behavior over every oracle, n <= 3") {
  IsqirPtr prog = dj_program();
  CHECK(equal(prog, families::dj().program));
  for (std::uint64_t n = 1; n <= 3; ++n) {
    std::uint64_t pts = 1ull << n;
    for (std::uint64_t f = 0; f < (1ull << pts); ++f) {
      Mat u = oracle_program_unitary(prog, n, n + 1, {}, f);
      std::int64_t s = std::popcount(f);
      // measured entry: input |0...0>, outcome q0 = 1, result register 0
      Amp amp = u[1][0];
      double expect = (double(pts) - 2.0 * double(s)) / double(pts);
      CHECK(std::abs(amp - Amp(expect)) < 1e-12);
      if (s == 0) CHECK(std::abs(amp - Amp(1.0)) < 1e-12);
      if (s == std::int64_t(pts)) CHECK(std::abs(amp - Amp(-1.0)) < 1e-12);
      if (2 * s == std::int64_t(pts)) CHECK(std::abs(amp) < 1e-12);
    }
  }
}

TEST_CASE("textbook deutsch-jozsa is accepted against its promise spec") {
  OracleReport r = check_oracle_judgement(dj_spec(), dj_program(), {},
                                          nadd(n_n(), nconst(1)), quick());
  INFO(r.detail);
  CHECK(r.verdict == OracleVerdict::Accept);
}

TEST_CASE("wrong preparation is rejected, not guessed") {
  // Z instead of X leaves q0 in |+>: the outcome amplitude is 1/sqrt2 for
  // every oracle, so the balanced tuple is falsified
  IsqirPtr prep =
      isq_const({op_gate("Z", {nconst(0)}), op_gate("H", {nconst(0)})});
  IsqirPtr close = isq_const({op_gate("H", {nconst(0)})});
  IsqirPtr bad = isq_seq(
      prep, isq_seq(sh(), isq_seq(isq_oracle("f"), isq_seq(sh(), close))));
  OracleReport r = check_oracle_judgement(dj_spec(), bad, {},
                                          nadd(n_n(), nconst(1)), quick());
  INFO(r.detail);
  CHECK(r.verdict == OracleVerdict::Reject);
}

TEST_CASE("shapes outside the supported class return unsupported") {
  NatPtr q = nadd(n_n(), nconst(1));
  SolverConfig cfg = quick();

  // no oracle at all
  OracleReport r1 = check_oracle_judgement(dj_spec(), isq_const({}), {}, q, cfg);
  CHECK(r1.verdict == OracleVerdict::Unsupported);

  // two oracle calls
  IsqirPtr two = isq_seq(
      isq_seq(sh(), isq_oracle("f")),
      isq_seq(isq_oracle("f"), sh()));
  OracleReport r2 = check_oracle_judgement(dj_spec(), two, {}, q, cfg);
  CHECK(r2.verdict == OracleVerdict::Unsupported);

  // oracle not sandwiched between fix layers
  IsqirPtr flat = isq_seq(isq_const({op_gate("H", {nconst(0)})}),
                          isq_seq(isq_oracle("f"), sh()));
  OracleReport r3 = check_oracle_judgement(dj_spec(), flat, {}, q, cfg);
  CHECK(r3.verdict == OracleVerdict::Unsupported);

  // inner layer that is a fix but not the Hadamard cascade
  IsqirPtr odd_fix = isq_fix(perm_id(), {SqirProgram{}}, isq_const({}),
                             isq_const({op_gate("X", {n_n()})}));
  IsqirPtr wrong_layer =
      isq_seq(isq_const({op_gate("X", {nconst(0)}), op_gate("H", {nconst(0)})}),
              isq_seq(odd_fix, isq_seq(isq_oracle("f"), sh())));
  OracleReport r4 = check_oracle_judgement(dj_spec(), wrong_layer, {}, q, cfg);
  CHECK(r4.verdict == OracleVerdict::Unsupported);

  // wrong register shape
  OracleReport r5 = check_oracle_judgement(dj_spec(), dj_program(), {},
                                           nadd(n_n(), nconst(2)), cfg);
  CHECK(r5.verdict == OracleVerdict::Unsupported);
}

TEST_CASE("spec with an unpinned hypothesis is unsupported") {
  OracleSpec spec = dj_spec();
  spec.tuples[0].h = beq(n_x(), nconst(0));  // y left free
  OracleReport r = check_oracle_judgement(spec, dj_program(), {},
                                          nadd(n_n(), nconst(1)), quick());
  CHECK(r.verdict == OracleVerdict::Unsupported);
}

TEST_CASE("a falsifiable promise tuple is rejected with a counterexample") {
  OracleSpec spec = dj_spec();
  // claim the balanced amplitude is also +-1/sqrt2
  spec.tuples[1].alpha.terms.push_back({btrue(), phase_zero()});
  spec.tuples[1].up_to_sign = true;
  OracleReport r = check_oracle_judgement(spec, dj_program(), {},
                                          nadd(n_n(), nconst(1)), quick());
  INFO(r.detail);
  CHECK(r.verdict == OracleVerdict::Reject);
}
