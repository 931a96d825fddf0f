#pragma once
// Qubit-relabeling permutations over wire indices: identity, transposition
// (e1 e2), cyclic shift of the window [e1, e2) by a small constant m, and
// composition (left operand applied first). Wire-index expressions may
// mention n. apply to values moves bit q to bit pi(q).

#include "iqc/expr.hpp"

namespace iqc {

struct PermExpr;
using PermPtr = std::shared_ptr<const PermExpr>;

enum class PermOp { Id, Swap, Shift, Comp };

struct PermExpr {
  PermOp op;
  NatPtr a, b;          // Swap: the two wires; Shift: window [a, b)
  std::uint64_t m = 0;  // Shift amount, 0..3
  PermPtr p1, p2;       // Comp: p1 first, then p2
};

PermPtr perm_id();
PermPtr perm_swap(NatPtr a, NatPtr b);
PermPtr perm_shift(NatPtr a, NatPtr b, std::uint64_t m);
PermPtr perm_comp(PermPtr p1, PermPtr p2);

// wire-level application: where does wire q go / come from
std::uint64_t perm_wire(const PermPtr& p, const Env& env, std::uint64_t q);
std::uint64_t perm_wire_inv(const PermPtr& p, const Env& env, std::uint64_t q);

// value-level application on a basis index: bit q of x becomes bit
// perm_wire(q) of the result
std::uint64_t apply_perm_bits(const PermPtr& p, const Env& env, std::uint64_t x);
std::uint64_t apply_perm_bits_inv(const PermPtr& p, const Env& env, std::uint64_t x);

// closed-form symbolic value maps. Valid whenever every shift window in p
// has width >= its shift amount (or width 1); all shipped families satisfy
// this for n in the verified range.
NatPtr perm_value(const PermPtr& p, const NatPtr& x);
NatPtr perm_value_inv(const PermPtr& p, const NatPtr& x);

PermPtr perm_substitute(const PermPtr& p, const std::string& var, const NatPtr& repl);
bool equal(const PermPtr& a, const PermPtr& b);

std::string to_string(const PermPtr& p);
PermPtr parse_perm(const std::string& s);

// number of Swap/Shift/Comp constructors (Id = 0), for search bounds
std::size_t perm_depth(const PermPtr& p);

}  // namespace iqc
