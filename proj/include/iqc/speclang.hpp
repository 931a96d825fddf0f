#pragma once
// Surface specification language: `name : INPUT -> OUTPUT` where the
// input is a tensor of constant and variable kets and the output is a
// tensor of value kets, phased kets, a binary superposition join `(+)`,
// or a big-join binder `U_{z in {0,1}^L} delta(B) * e^{...} |z>`.
// Compilation assigns qubit segments low-to-high in appearance order,
// turns constant input segments into hypothesis conjuncts, and lowers
// the output to a path-sum amplitude.

#include <optional>
#include <string>
#include <vector>

#include "iqc/ppsa.hpp"

namespace iqc {

struct SyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UndeclaredVariable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LengthMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonPpsaExpressible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpecAst {
  enum class InKind { ConstKet, VarKet };
  struct InFactor {
    InKind kind;
    NatPtr value;      // ConstKet: closed over n
    std::string var;   // VarKet
    NatPtr len;
  };

  enum class OutKind { KetExpr, SumSuperpose };
  struct OutFactor {
    OutKind kind;
    // KetExpr: value over input vars (and sum-bound vars of the branch)
    NatPtr expr;
    std::optional<NatPtr> len;  // explicit width, if written
    // SumSuperpose
    std::string bound;
    NatPtr bound_len;
    BoolPtr guard;                   // delta(...) conjuncts, btrue if none
    std::optional<PhaseExpr> phase;  // over bound/input vars
  };

  // one alternative of the `(+)` join; PhasedKet factors fold into phases
  struct OutBranch {
    std::vector<OutFactor> factors;
    std::vector<PhaseExpr> phases;
  };

  std::string name;
  std::vector<InFactor> input;
  std::vector<OutBranch> branches;
};

struct LayoutMap {
  struct Seg {
    std::string name;  // empty for constant segments
    NatPtr lo, hi, len;
  };
  std::vector<Seg> segs;             // appearance order, low-to-high
  NatPtr q_count;                    // Q(n)
  std::vector<BoolPtr> const_eqs;    // one conjunct per constant segment
};

struct CompiledSpec {
  std::string name;
  NatPtr q_count;
  BoolPtr hypothesis;  // const conjuncts, then x < 2^Q and y < 2^Q
  Ppsa alpha;
  LayoutMap layout;

  HAlpha target() const { return HAlpha{hypothesis, alpha}; }
};

SpecAst parse_spec(const std::string& text);

// layout and hypothesis from the input side only
std::pair<LayoutMap, BoolPtr> derive_layout(const SpecAst& ast);

// amplitude from the output side. beta = 2^k with k = (qubits bound by
// summations, less segments pinned by equality guards) + (join count).
Ppsa compile_output(const SpecAst& ast, const LayoutMap& layout);

CompiledSpec compile(const std::string& text);

}  // namespace iqc
