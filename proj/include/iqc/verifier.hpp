#pragma once
// Judgement checking: does h |> S <-> alpha hold. Fix-free programs get
// their amplitude derived bottom-up (gate templates, compose, relabel)
// and compared against the target. A fix node at the root is checked by
// induction: each base case by bounded evaluation, the step by an
// equivalence obligation under n >= k discharged through the SMT
// backend. A solver Unknown is always treated as Reject.

#include "iqc/sim.hpp"
#include "iqc/smt.hpp"

namespace iqc {

struct Obligation {
  enum class Kind { BaseCase, Equiv, Subset };
  Kind kind;
  std::string rule;    // which logic rule produced it
  std::string where;   // position in the candidate
  BoolPtr formula;     // null for numerically discharged base cases
  std::uint64_t base_i = 0;
};

struct ObligationResult {
  Obligation obligation;
  SolverResult::Verdict verdict;
  std::optional<Env> counterexample;
  std::string note;
};

struct ProofTrace {
  bool accepted = false;
  std::vector<ObligationResult> steps;
  std::string failure;  // first diagnostic when rejected
};

// CONST / SEQ / RELABEL fragment only. Throws IllTypedError on fix or
// oracle nodes, GateError for unknown gates, ComposeError when a
// composition step has no usable sparsity witness.
HAlpha derive_halpha(const IsqirPtr& s, const Registry& reg);

// the three-conjunct equivalence formula under h and an n-constraint:
// beta agreement, fired-term counts, and delta-weighted phase numerators
// at a common denominator (congruent mod 2^W)
BoolPtr equiv_formula(const BoolPtr& h, const Ppsa& a1, const Ppsa& a2,
                      const BoolPtr& n_constraint);

class Verifier {
 public:
  explicit Verifier(Registry reg = {}, SolverConfig cfg = {});

  // qubits is the wire-count expression in n; it doubles as the variable
  // width in bounded solving
  ProofTrace check_judgement(const HAlpha& target, const IsqirPtr& s,
                             const NatPtr& qubits);

  SolverResult check_equiv(const BoolPtr& h, const Ppsa& a1, const Ppsa& a2,
                           const BoolPtr& n_constraint, const NatPtr& qubits);

  const Registry& registry() const { return reg_; }
  Registry& registry() { return reg_; }

 private:
  ProofTrace check_fix(const IsqirPtr& s, const HAlpha& target,
                       const NatPtr& qubits);
  SmtSolver& solver_for(const NatPtr& qubits);

  Registry reg_;
  SolverConfig cfg_;
  std::map<std::string, std::unique_ptr<SmtSolver>> solvers_;
};

// --explain output: rules, obligations (s-expression and SMT-LIB2 text),
// verdicts, counterexamples
std::string trace_to_json(const ProofTrace& t);

}  // namespace iqc
