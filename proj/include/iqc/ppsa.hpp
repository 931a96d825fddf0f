#pragma once
// Parameterized path-sum amplitudes: alpha(n,x,y) = (1/sqrt(beta(n))) *
// sum_i delta(B_i) * e^{2 pi i * P_i / 2^{W_i}}, with pairwise-disjoint
// guards in well-formed terms. Hypotheses are boolean predicates over
// (n,x,y). A sparsity witness lists candidate expressions covering all
// nonzero entries of a column (xs, in n,y) and of a row (ys, in n,x).

#include <complex>
#include <optional>
#include <vector>

#include "iqc/expr.hpp"
#include "iqc/perm.hpp"

namespace iqc {

// e^{+2 pi i * num / 2^logden}; (num, logden) and (2*num, logden+1) denote
// the same phase. logden may depend on n only.
struct PhaseExpr {
  NatPtr num;
  NatPtr logden;
};

PhaseExpr phase_zero();
// canonicalization-invariant comparison helpers
NatPtr common_logden(const NatPtr& w1, const NatPtr& w2);
// numerator of ph rescaled to logden W (W must dominate ph.logden)
NatPtr scale_num(const PhaseExpr& ph, const NatPtr& W);

struct PpsaTerm {
  BoolPtr guard;
  PhaseExpr phase;
};

struct SparsityWitness {
  std::vector<NatPtr> xs;  // exprs over n,y: candidate x with alpha != 0
  std::vector<NatPtr> ys;  // exprs over n,x: candidate y with alpha != 0
};

struct Ppsa {
  NatPtr beta;  // expr over n only; magnitude is 1/sqrt(beta)
  std::vector<PpsaTerm> terms;
  std::optional<SparsityWitness> witness;
};

struct HAlpha {
  BoolPtr h;
  Ppsa alpha;
};

struct ComposeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// numeric value of one amplitude entry; fired terms are summed
std::complex<double> eval_entry(const Ppsa& p, const Env& env);
// exact phase fraction of a single term: (num mod 2^W) / 2^W
double eval_phase_frac(const PhaseExpr& ph, const Env& env);

// syntactic well-formedness: variable scoping of beta, guards, phases,
// witness entries. Returns a diagnostic or empty string if fine.
std::string wellformed(const Ppsa& p);

// bounded disjointness check: over all n <= n_max, x,y < 2^Q(n), at most
// one guard fires. Q is the qubit-count expr in n. Returns a violating env.
std::optional<Env> check_disjoint(const Ppsa& p, std::uint64_t n_max, const NatPtr& Q);

// bounded witness soundness: alpha(n,x,y) != 0 implies x in xs(n,y) and
// y in ys(n,x). Returns a violating env if any.
std::optional<Env> validate_witness(const HAlpha& ha, std::uint64_t n_max, const NatPtr& Q);

// (pi . alpha): amplitude of the relabeled program, alpha'(n,x,y) =
// alpha(n, Vinv(x), Vinv(y)); hypothesis and witness transform alike.
HAlpha relabel(const HAlpha& ha, const PermPtr& p);

// alpha'(n,x,y) = alpha(n-1,x,y); drops the witness (callers re-derive)
HAlpha pred(const HAlpha& ha);

// sequential composition, program order a1 then a2:
// (a1 * a2)(n,x,y) = sum_z a1(n,x,z) * a2(n,z,y).
// The finite z-candidate list comes from a2's xs (preferred) or a1's ys;
// throws ComposeError if neither side is witnessed.
HAlpha compose(const HAlpha& a1, const HAlpha& a2);

// hypothesis strengthening (WEAKEN): h' = h and extra
HAlpha restrict_hypothesis(const HAlpha& ha, const BoolPtr& extra);

// substitute n throughout
HAlpha halpha_substitute_n(const HAlpha& ha, const NatPtr& repl);

Ppsa ppsa_simplify(const Ppsa& p);
HAlpha halpha_simplify(const HAlpha& ha);

// JSON round trip (schema: {"h": sexpr, "beta": sexpr, "terms":
// [{"guard":..., "num":..., "logden":...}], "witness": {"xs": [...],
// "ys": [...]}} )
std::string halpha_to_json(const HAlpha& ha);
HAlpha halpha_from_json(const std::string& json_text);

}  // namespace iqc
