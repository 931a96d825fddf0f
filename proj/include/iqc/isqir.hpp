#pragma once
// Inductive circuit programs: constant blocks, sequencing, relabeling,
// and a single recursion former
//   [[fix_k pi P0..Pk-1 SL SR]](n) = P_n                     for n < k,
//   [[SL]](n) ; map_qb(pi(n), [[fix..]](n-1)) ; [[SR]](n)    otherwise.
// At most one fix on any root-to-leaf path.

#include "iqc/gates.hpp"

namespace iqc {

enum class IsqirKind { Const, Seq, Relabel, Fix, Oracle };

struct IsqirNode {
  IsqirKind kind;
  SqirProgram block;                // Const
  IsqirPtr s1, s2;                  // Seq
  PermPtr perm;                     // Relabel / Fix
  std::vector<SqirProgram> bases;   // Fix (k = bases.size(), 1..3)
  IsqirPtr left, right;             // Fix
  std::string oracle_name;          // Oracle
};

IsqirPtr isq_const(SqirProgram block);
IsqirPtr isq_seq(IsqirPtr a, IsqirPtr b);
IsqirPtr isq_relabel(PermPtr p, IsqirPtr s);
IsqirPtr isq_fix(PermPtr p, std::vector<SqirProgram> bases, IsqirPtr left, IsqirPtr right);
IsqirPtr isq_oracle(std::string name);

struct IllTypedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// flattened circuit at a concrete n
struct ConcreteOp {
  std::string name;
  std::vector<std::uint64_t> qubits;    // all touched wires
  std::uint64_t param = 0;              // CP log-denominator
  const CompositeGate* comp = nullptr;  // set for registered composites
};

// oracle ops are rejected here (they have no circuit); throws IllTypedError
// on malformed structure (bad fix arity, nested fix on a path)
std::vector<ConcreteOp> instantiate(const IsqirPtr& s, std::uint64_t n, const Registry& reg);

// structural checks plus per-gate distinctness of wires at every
// 0 <= n <= n_max; empty string when fine
std::string validate_well_typed(const IsqirPtr& s, std::uint64_t n_max, const Registry& reg);

// true if no path contains more than one Fix and fix arities are in 1..3
bool single_fix_per_path(const IsqirPtr& s);

bool contains_oracle(const IsqirPtr& s);

// node-count size metric: each gate op, base block gate, and each
// Seq/Relabel/Fix constructor counts 1
std::size_t program_size(const IsqirPtr& s);

std::string to_string(const IsqirPtr& s);
IsqirPtr parse_isqir(const std::string& text);

bool equal(const IsqirPtr& a, const IsqirPtr& b);

}  // namespace iqc
