#pragma once
// Natural-number and boolean expressions over the spec variables n, x, y
// (plus auxiliary names). Values are unbounded naturals; we evaluate in
// uint64_t and throw on overflow rather than wrap. Subtraction saturates
// at 0, bit order is low-to-high (6[0] = 0, 6[2:1] = 3).

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace iqc {

struct NatExpr;
struct BoolExpr;
using NatPtr = std::shared_ptr<const NatExpr>;
using BoolPtr = std::shared_ptr<const BoolExpr>;

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Variable environment. n/x/y are just conventional names.
struct Env {
  std::map<std::string, std::uint64_t> vars;
  Env() = default;
  Env(std::uint64_t n, std::uint64_t x, std::uint64_t y) {
    vars = {{"n", n}, {"x", x}, {"y", y}};
  }
  std::uint64_t get(const std::string& name) const {
    auto it = vars.find(name);
    if (it == vars.end()) throw EvalError("unbound variable: " + name);
    return it->second;
  }
  Env with(const std::string& name, std::uint64_t v) const {
    Env e = *this;
    e.vars[name] = v;
    return e;
  }
};

enum class NatOp {
  Var, Const,
  Add, Sub, Mul, Div, Mod,
  BitAnd, BitOr, BitXor, Shl, Shr,
  Bit,      // a[b], single bit select
  Slice,    // a[b:c], bits c..b inclusive, b >= c
  Delta,    // 1 if cond else 0
  Pow2,     // 2^a
  Neg,      // 0 - a (saturating, so delta(a = 0))
  BitNot,   // ~a at width w
  RedAnd, RedOr, RedXor,  // reductions over the low w bits of a
};

struct NatExpr {
  NatOp op;
  std::uint64_t k = 0;        // Const
  std::string name;           // Var
  NatPtr a, b, c;             // operands (Slice uses all three)
  NatPtr w;                   // width annotation (BitNot, reductions)
  BoolPtr cond;               // Delta
};

enum class BoolOp {
  True, False,
  And, Or, Not,
  Eq, Ne, Lt, Le, Gt, Ge,
};

struct BoolExpr {
  BoolOp op;
  BoolPtr l, r;   // And/Or/Not (Not uses l)
  NatPtr u, v;    // comparisons
};

// ---- constructors ----
NatPtr nvar(std::string name);
NatPtr nconst(std::uint64_t k);
NatPtr nbin(NatOp op, NatPtr a, NatPtr b);
NatPtr nadd(NatPtr a, NatPtr b);
NatPtr nsub(NatPtr a, NatPtr b);
NatPtr nmul(NatPtr a, NatPtr b);
NatPtr ndiv(NatPtr a, NatPtr b);
NatPtr nmod(NatPtr a, NatPtr b);
NatPtr nand_(NatPtr a, NatPtr b);
NatPtr nor_(NatPtr a, NatPtr b);
NatPtr nxor(NatPtr a, NatPtr b);
NatPtr nshl(NatPtr a, NatPtr b);
NatPtr nshr(NatPtr a, NatPtr b);
NatPtr nbit(NatPtr a, NatPtr idx);
NatPtr nslice(NatPtr a, NatPtr hi, NatPtr lo);
NatPtr ndelta(BoolPtr cond);
NatPtr npow2(NatPtr e);
NatPtr nneg(NatPtr a);
NatPtr nbitnot(NatPtr width, NatPtr a);
NatPtr nred(NatOp op, NatPtr width, NatPtr a);

BoolPtr btrue();
BoolPtr bfalse();
BoolPtr band(BoolPtr l, BoolPtr r);
BoolPtr bor(BoolPtr l, BoolPtr r);
BoolPtr bnot(BoolPtr l);
BoolPtr bcmp(BoolOp op, NatPtr u, NatPtr v);
BoolPtr beq(NatPtr u, NatPtr v);
BoolPtr bne(NatPtr u, NatPtr v);
BoolPtr blt(NatPtr u, NatPtr v);
BoolPtr ble(NatPtr u, NatPtr v);
BoolPtr bgt(NatPtr u, NatPtr v);
BoolPtr bge(NatPtr u, NatPtr v);

inline NatPtr n_n() { return nvar("n"); }
inline NatPtr n_x() { return nvar("x"); }
inline NatPtr n_y() { return nvar("y"); }

// big conjunction/disjunction; empty list gives the unit
BoolPtr ball(const std::vector<BoolPtr>& cs);
BoolPtr bany(const std::vector<BoolPtr>& cs);

// ---- evaluation ----
std::uint64_t eval(const NatPtr& e, const Env& env);
bool eval(const BoolPtr& e, const Env& env);

// ---- substitution (capture-free: no binders in this language) ----
NatPtr substitute(const NatPtr& e, const std::string& var, const NatPtr& repl);
BoolPtr substitute(const BoolPtr& e, const std::string& var, const NatPtr& repl);
NatPtr substitute_all(const NatPtr& e, const std::map<std::string, NatPtr>& sub);
BoolPtr substitute_all(const BoolPtr& e, const std::map<std::string, NatPtr>& sub);

// ---- queries ----
void free_vars(const NatPtr& e, std::vector<std::string>& out);
void free_vars(const BoolPtr& e, std::vector<std::string>& out);
bool depends_only_on(const NatPtr& e, const std::vector<std::string>& allowed);
bool depends_only_on(const BoolPtr& e, const std::vector<std::string>& allowed);
// structural equality
bool equal(const NatPtr& a, const NatPtr& b);
bool equal(const BoolPtr& a, const BoolPtr& b);

// ---- simplifier ----
// Semantics-preserving rewriting: constant folding, units/annihilators,
// delta(true/false), pow2 of constants, (2^e)\2^j -> 2^(e-j) when e >= j
// can be shown by a crude lower-bound analysis.
NatPtr simplify(const NatPtr& e);
BoolPtr simplify(const BoolPtr& e);

// conservative lower bound on the value of e over all environments
std::uint64_t lower_bound(const NatPtr& e);

// ---- canonical s-expression text ----
std::string to_string(const NatPtr& e);
std::string to_string(const BoolPtr& e);
NatPtr parse_nat(const std::string& s);
BoolPtr parse_bool(const std::string& s);

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace iqc
