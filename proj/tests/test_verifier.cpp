#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "iqc/families.hpp"
#include "iqc/verifier.hpp"

using namespace iqc;

namespace {

SolverConfig quick() {
  SolverConfig cfg;
  cfg.mode = SolverMode::Bounded;
  cfg.n_max = 6;
  return cfg;
}

NatPtr np1() { return nadd(n_n(), nconst(1)); }

HAlpha ghz_target() {
  HAlpha ha;
  ha.h = beq(n_x(), nconst(0));
  ha.alpha.beta = nconst(2);
  ha.alpha.terms.push_back({beq(n_y(), nconst(0)), phase_zero()});
  ha.alpha.terms.push_back(
      {beq(n_y(), nsub(npow2(np1()), nconst(1))), phase_zero()});
  return ha;
}

}  // namespace

TEST_CASE("derive_halpha matches dense simulation on gate blocks") {
  Registry reg;
  IsqirPtr p = parse_isqir("(const (H 0) (CX 0 1))");
  HAlpha ha = derive_halpha(p, reg);
  CHECK(max_entry_diff(ppsa_to_matrix(ha.alpha, 1, 2),
                       program_unitary(p, 1, 2, reg)) < 1e-12);

  // empty block is the identity
  HAlpha id = derive_halpha(parse_isqir("(const)"), reg);
  CHECK(max_entry_diff(ppsa_to_matrix(id.alpha, 2, 3), identity_matrix(8)) ==
        0);

  // relabeling moves the gate
  IsqirPtr r = parse_isqir("(relabel (swap 0 2) (const (H 0)))");
  HAlpha rh = derive_halpha(r, reg);
  CHECK(max_entry_diff(ppsa_to_matrix(rh.alpha, 2, 3),
                       program_unitary(parse_isqir("(const (H 2))"), 2, 3,
                                       reg)) < 1e-12);

  CHECK_THROWS_AS(derive_halpha(families::ghz().program, reg), IllTypedError);
  CHECK_THROWS_AS(derive_halpha(parse_isqir("(oracle f)"), reg),
                  IllTypedError);
}

TEST_CASE("check_equiv is reflexive and symmetric") {
  Verifier v({}, quick());
  Ppsa zn = families::zn().halpha->alpha;
  Ppsa wn = families::wn().halpha->alpha;
  CHECK(v.check_equiv(btrue(), zn, zn, btrue(), np1()).valid());
  SolverResult ab = v.check_equiv(btrue(), zn, wn, btrue(), np1());
  SolverResult ba = v.check_equiv(btrue(), wn, zn, btrue(), np1());
  CHECK(ab.invalid());
  CHECK(ba.invalid());
}

TEST_CASE("ghz amplitude differs from the identity under x=0") {
  Verifier v({}, quick());
  Registry reg;
  Ppsa id = derive_halpha(parse_isqir("(const)"), reg).alpha;
  SolverResult r = v.check_equiv(beq(n_x(), nconst(0)), ghz_target().alpha, id,
                                 btrue(), np1());
  REQUIRE(r.invalid());
  // a concrete disagreement point, e.g. (n=0, x=0, y=1)
  Env cex = *r.counterexample;
  CHECK(eval(beq(n_x(), nconst(0)), cex));
}

TEST_CASE("x gate judgement on a full hypothesis") {
  Verifier v({}, quick());
  HAlpha t;
  t.h = btrue();
  t.alpha.beta = nconst(1);
  t.alpha.terms.push_back({beq(n_y(), nxor(n_x(), nconst(1))), phase_zero()});
  ProofTrace tr = v.check_judgement(t, parse_isqir("(const (X 0))"), np1());
  CHECK(tr.accepted);
  // and rejected against the wrong gate
  CHECK(!v.check_judgement(t, parse_isqir("(const (H 0))"), np1()).accepted);
}

TEST_CASE("ghz program is accepted by induction") {
  Verifier v({}, quick());
  ProofTrace tr =
      v.check_judgement(ghz_target(), families::ghz().program, np1());
  CHECK(tr.accepted);
  REQUIRE(tr.steps.size() == 3);
  CHECK(tr.steps[0].obligation.kind == Obligation::Kind::BaseCase);
  CHECK(tr.steps[1].obligation.kind == Obligation::Kind::Subset);
  CHECK(tr.steps[2].obligation.kind == Obligation::Kind::Equiv);

  std::string json = trace_to_json(tr);
  CHECK(json.find("\"accepted\": true") != std::string::npos);
  CHECK(json.find("base-case") != std::string::npos);
}

TEST_CASE("mutated ghz candidates are rejected") {
  Verifier v({}, quick());
  HAlpha t = ghz_target();
  // wrong recursion arm
  IsqirPtr wrong_sr =
      parse_isqir("(fix 1 id (base (H 0)) (const) (const (CX 0 1)))");
  ProofTrace a = v.check_judgement(t, wrong_sr, np1());
  CHECK(!a.accepted);
  // wrong base
  IsqirPtr wrong_base =
      parse_isqir("(fix 1 id (base (X 0)) (const) (const (CX (- n 1) n)))");
  ProofTrace b = v.check_judgement(t, wrong_base, np1());
  CHECK(!b.accepted);
  CHECK(b.steps.at(0).verdict == SolverResult::Verdict::Invalid);
  // base-only identity program
  CHECK(!v.check_judgement(t, parse_isqir("(const)"), np1()).accepted);
}

TEST_CASE("registered cascade components verify against their amplitudes") {
  Verifier v({}, quick());
  for (families::Family f :
       {families::zn(), families::wn(), families::rot(), families::rotinv()}) {
    CAPTURE(f.name);
    ProofTrace tr = v.check_judgement(*f.halpha, f.program, f.qubits);
    CHECK(tr.accepted);
  }
}

TEST_CASE("arithmetic families verify against their amplitudes") {
  Verifier v({}, quick());
  for (families::Family f : {families::adder(), families::subtractor()}) {
    CAPTURE(f.name);
    ProofTrace tr = v.check_judgement(*f.halpha, f.program, f.qubits);
    CHECK(tr.accepted);
  }
}

TEST_CASE("accepted judgements agree with simulation at desk scale") {
  Verifier v({}, quick());
  families::Family f = families::zn();
  REQUIRE(v.check_judgement(*f.halpha, f.program, f.qubits).accepted);
  for (std::uint64_t n = 0; n <= 3; ++n) {
    Mat u = program_unitary(f.program, n, n + 1, v.registry());
    Mat m = ppsa_to_matrix(f.halpha->alpha, n, n + 1);
    CHECK(max_diff_on_hypothesis(f.halpha->h, m, u, n) < 1e-9);
  }
}
