#include "iqc/expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace iqc {

namespace {
NatPtr mk(NatExpr e) { return std::make_shared<const NatExpr>(std::move(e)); }
BoolPtr mk(BoolExpr e) { return std::make_shared<const BoolExpr>(std::move(e)); }
}  // namespace

NatPtr nvar(std::string name) {
  NatExpr e;
  e.op = NatOp::Var;
  e.name = std::move(name);
  return mk(std::move(e));
}
NatPtr nconst(std::uint64_t k) {
  NatExpr e;
  e.op = NatOp::Const;
  e.k = k;
  return mk(std::move(e));
}
NatPtr nbin(NatOp op, NatPtr a, NatPtr b) {
  NatExpr e;
  e.op = op;
  e.a = std::move(a);
  e.b = std::move(b);
  return mk(std::move(e));
}
NatPtr nadd(NatPtr a, NatPtr b) { return nbin(NatOp::Add, std::move(a), std::move(b)); }
NatPtr nsub(NatPtr a, NatPtr b) { return nbin(NatOp::Sub, std::move(a), std::move(b)); }
NatPtr nmul(NatPtr a, NatPtr b) { return nbin(NatOp::Mul, std::move(a), std::move(b)); }
NatPtr ndiv(NatPtr a, NatPtr b) { return nbin(NatOp::Div, std::move(a), std::move(b)); }
NatPtr nmod(NatPtr a, NatPtr b) { return nbin(NatOp::Mod, std::move(a), std::move(b)); }
NatPtr nand_(NatPtr a, NatPtr b) { return nbin(NatOp::BitAnd, std::move(a), std::move(b)); }
NatPtr nor_(NatPtr a, NatPtr b) { return nbin(NatOp::BitOr, std::move(a), std::move(b)); }
NatPtr nxor(NatPtr a, NatPtr b) { return nbin(NatOp::BitXor, std::move(a), std::move(b)); }
NatPtr nshl(NatPtr a, NatPtr b) { return nbin(NatOp::Shl, std::move(a), std::move(b)); }
NatPtr nshr(NatPtr a, NatPtr b) { return nbin(NatOp::Shr, std::move(a), std::move(b)); }
NatPtr nbit(NatPtr a, NatPtr idx) { return nbin(NatOp::Bit, std::move(a), std::move(idx)); }
NatPtr nslice(NatPtr a, NatPtr hi, NatPtr lo) {
  NatExpr e;
  e.op = NatOp::Slice;
  e.a = std::move(a);
  e.b = std::move(hi);
  e.c = std::move(lo);
  return mk(std::move(e));
}
NatPtr ndelta(BoolPtr cond) {
  NatExpr e;
  e.op = NatOp::Delta;
  e.cond = std::move(cond);
  return mk(std::move(e));
}
NatPtr npow2(NatPtr a) {
  NatExpr e;
  e.op = NatOp::Pow2;
  e.a = std::move(a);
  return mk(std::move(e));
}
NatPtr nneg(NatPtr a) {
  NatExpr e;
  e.op = NatOp::Neg;
  e.a = std::move(a);
  return mk(std::move(e));
}
NatPtr nbitnot(NatPtr width, NatPtr a) {
  NatExpr e;
  e.op = NatOp::BitNot;
  e.w = std::move(width);
  e.a = std::move(a);
  return mk(std::move(e));
}
NatPtr nred(NatOp op, NatPtr width, NatPtr a) {
  if (op != NatOp::RedAnd && op != NatOp::RedOr && op != NatOp::RedXor)
    throw std::logic_error("nred: not a reduction op");
  NatExpr e;
  e.op = op;
  e.w = std::move(width);
  e.a = std::move(a);
  return mk(std::move(e));
}

BoolPtr btrue() {
  BoolExpr e;
  e.op = BoolOp::True;
  return mk(std::move(e));
}
BoolPtr bfalse() {
  BoolExpr e;
  e.op = BoolOp::False;
  return mk(std::move(e));
}
BoolPtr band(BoolPtr l, BoolPtr r) {
  BoolExpr e;
  e.op = BoolOp::And;
  e.l = std::move(l);
  e.r = std::move(r);
  return mk(std::move(e));
}
BoolPtr bor(BoolPtr l, BoolPtr r) {
  BoolExpr e;
  e.op = BoolOp::Or;
  e.l = std::move(l);
  e.r = std::move(r);
  return mk(std::move(e));
}
BoolPtr bnot(BoolPtr l) {
  BoolExpr e;
  e.op = BoolOp::Not;
  e.l = std::move(l);
  return mk(std::move(e));
}
BoolPtr bcmp(BoolOp op, NatPtr u, NatPtr v) {
  BoolExpr e;
  e.op = op;
  e.u = std::move(u);
  e.v = std::move(v);
  return mk(std::move(e));
}
BoolPtr beq(NatPtr u, NatPtr v) { return bcmp(BoolOp::Eq, std::move(u), std::move(v)); }
BoolPtr bne(NatPtr u, NatPtr v) { return bcmp(BoolOp::Ne, std::move(u), std::move(v)); }
BoolPtr blt(NatPtr u, NatPtr v) { return bcmp(BoolOp::Lt, std::move(u), std::move(v)); }
BoolPtr ble(NatPtr u, NatPtr v) { return bcmp(BoolOp::Le, std::move(u), std::move(v)); }
BoolPtr bgt(NatPtr u, NatPtr v) { return bcmp(BoolOp::Gt, std::move(u), std::move(v)); }
BoolPtr bge(NatPtr u, NatPtr v) { return bcmp(BoolOp::Ge, std::move(u), std::move(v)); }

BoolPtr ball(const std::vector<BoolPtr>& cs) {
  if (cs.empty()) return btrue();
  BoolPtr acc = cs[0];
  for (size_t i = 1; i < cs.size(); ++i) acc = band(acc, cs[i]);
  return acc;
}
BoolPtr bany(const std::vector<BoolPtr>& cs) {
  if (cs.empty()) return bfalse();
  BoolPtr acc = cs[0];
  for (size_t i = 1; i < cs.size(); ++i) acc = bor(acc, cs[i]);
  return acc;
}

// ---- evaluation ----

namespace {
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw EvalError("overflow in +");
  return r;
}
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw EvalError("overflow in *");
  return r;
}
std::uint64_t checked_shl(std::uint64_t a, std::uint64_t s) {
  if (a == 0 || s == 0) return a;
  if (s >= 64 || (a >> (64 - s)) != 0) throw EvalError("overflow in <<");
  return a << s;
}
std::uint64_t mask_bits(std::uint64_t w) {
  if (w >= 64) throw EvalError("width >= 64");
  return (w == 0) ? 0 : ((std::uint64_t{1} << w) - 1);
}
}  // namespace

namespace {
// Evaluation memo, alive for one top-level eval call (the environment is
// fixed throughout the recursion). Keeps shared-subdag formulas, as built
// by substitution and composition, linear-time to evaluate.
struct EvalCache {
  std::map<const NatExpr*, std::uint64_t> nat;
  std::map<const BoolExpr*, bool> bl;
};
thread_local EvalCache* eval_cache = nullptr;

struct EvalScope {
  EvalCache local;
  bool root;
  EvalScope() : root(eval_cache == nullptr) {
    if (root) eval_cache = &local;
  }
  ~EvalScope() {
    if (root) eval_cache = nullptr;
  }
};

std::uint64_t eval_node(const NatPtr& e, const Env& env);
bool eval_node(const BoolPtr& e, const Env& env);
}  // namespace

std::uint64_t eval(const NatPtr& e, const Env& env) {
  EvalScope scope;
  auto& c = eval_cache->nat;
  auto it = c.find(e.get());
  if (it != c.end()) return it->second;
  std::uint64_t v = eval_node(e, env);
  c.emplace(e.get(), v);
  return v;
}

bool eval(const BoolPtr& e, const Env& env) {
  EvalScope scope;
  auto& c = eval_cache->bl;
  auto it = c.find(e.get());
  if (it != c.end()) return it->second;
  bool v = eval_node(e, env);
  c.emplace(e.get(), v);
  return v;
}

namespace {
std::uint64_t eval_node(const NatPtr& e, const Env& env) {
  switch (e->op) {
    case NatOp::Var: return env.get(e->name);
    case NatOp::Const: return e->k;
    case NatOp::Add: return checked_add(eval(e->a, env), eval(e->b, env));
    case NatOp::Sub: {
      std::uint64_t a = eval(e->a, env), b = eval(e->b, env);
      return a > b ? a - b : 0;
    }
    case NatOp::Mul: return checked_mul(eval(e->a, env), eval(e->b, env));
    case NatOp::Div: {
      std::uint64_t b = eval(e->b, env);
      if (b == 0) throw EvalError("division by zero");
      return eval(e->a, env) / b;
    }
    case NatOp::Mod: {
      std::uint64_t b = eval(e->b, env);
      if (b == 0) throw EvalError("mod by zero");
      return eval(e->a, env) % b;
    }
    case NatOp::BitAnd: return eval(e->a, env) & eval(e->b, env);
    case NatOp::BitOr: return eval(e->a, env) | eval(e->b, env);
    case NatOp::BitXor: return eval(e->a, env) ^ eval(e->b, env);
    case NatOp::Shl: return checked_shl(eval(e->a, env), eval(e->b, env));
    case NatOp::Shr: {
      std::uint64_t s = eval(e->b, env);
      return s >= 64 ? 0 : eval(e->a, env) >> s;
    }
    case NatOp::Bit: {
      std::uint64_t i = eval(e->b, env);
      return i >= 64 ? 0 : (eval(e->a, env) >> i) & 1;
    }
    case NatOp::Slice: {
      std::uint64_t hi = eval(e->b, env), lo = eval(e->c, env);
      if (hi < lo) throw EvalError("slice with hi < lo");
      std::uint64_t v = eval(e->a, env);
      if (lo >= 64) return 0;
      v >>= lo;
      std::uint64_t w = hi - lo + 1;
      return w >= 64 ? v : v & mask_bits(w);
    }
    case NatOp::Delta: return eval(e->cond, env) ? 1 : 0;
    case NatOp::Pow2: {
      std::uint64_t p = eval(e->a, env);
      if (p >= 64) throw EvalError("overflow in pow2");
      return std::uint64_t{1} << p;
    }
    case NatOp::Neg: {
      // 0 - a with saturation
      (void)eval(e->a, env);
      return 0;
    }
    case NatOp::BitNot: {
      std::uint64_t m = mask_bits(eval(e->w, env));
      return m ^ (eval(e->a, env) & m);
    }
    case NatOp::RedAnd: {
      std::uint64_t m = mask_bits(eval(e->w, env));
      return (eval(e->a, env) & m) == m ? 1 : 0;
    }
    case NatOp::RedOr: {
      std::uint64_t m = mask_bits(eval(e->w, env));
      return (eval(e->a, env) & m) != 0 ? 1 : 0;
    }
    case NatOp::RedXor: {
      std::uint64_t m = mask_bits(eval(e->w, env));
      return std::uint64_t(__builtin_parityll(eval(e->a, env) & m));
    }
  }
  throw std::logic_error("eval: bad NatOp");
}

bool eval_node(const BoolPtr& e, const Env& env) {
  switch (e->op) {
    case BoolOp::True: return true;
    case BoolOp::False: return false;
    case BoolOp::And: return eval(e->l, env) && eval(e->r, env);
    case BoolOp::Or: return eval(e->l, env) || eval(e->r, env);
    case BoolOp::Not: return !eval(e->l, env);
    case BoolOp::Eq: return eval(e->u, env) == eval(e->v, env);
    case BoolOp::Ne: return eval(e->u, env) != eval(e->v, env);
    case BoolOp::Lt: return eval(e->u, env) < eval(e->v, env);
    case BoolOp::Le: return eval(e->u, env) <= eval(e->v, env);
    case BoolOp::Gt: return eval(e->u, env) > eval(e->v, env);
    case BoolOp::Ge: return eval(e->u, env) >= eval(e->v, env);
  }
  throw std::logic_error("eval: bad BoolOp");
}
}  // namespace

// ---- substitution ----

namespace {
// per-call memo so shared subdags stay shared in the output
struct SubCache {
  const std::map<std::string, NatPtr>& sub;
  std::map<const NatExpr*, NatPtr> nat;
  std::map<const BoolExpr*, BoolPtr> bl;
};

BoolPtr sub_bool(const BoolPtr& e, SubCache& c);

NatPtr sub_nat(const NatPtr& e, SubCache& c) {
  switch (e->op) {
    case NatOp::Var: {
      auto it = c.sub.find(e->name);
      return it == c.sub.end() ? e : it->second;
    }
    case NatOp::Const: return e;
    default: break;
  }
  auto hit = c.nat.find(e.get());
  if (hit != c.nat.end()) return hit->second;
  NatExpr out = *e;
  if (e->a) out.a = sub_nat(e->a, c);
  if (e->b) out.b = sub_nat(e->b, c);
  if (e->c) out.c = sub_nat(e->c, c);
  if (e->w) out.w = sub_nat(e->w, c);
  if (e->cond) out.cond = sub_bool(e->cond, c);
  NatPtr r = std::make_shared<const NatExpr>(std::move(out));
  c.nat.emplace(e.get(), r);
  return r;
}

BoolPtr sub_bool(const BoolPtr& e, SubCache& c) {
  auto hit = c.bl.find(e.get());
  if (hit != c.bl.end()) return hit->second;
  BoolExpr out = *e;
  if (e->l) out.l = sub_bool(e->l, c);
  if (e->r) out.r = sub_bool(e->r, c);
  if (e->u) out.u = sub_nat(e->u, c);
  if (e->v) out.v = sub_nat(e->v, c);
  BoolPtr r = std::make_shared<const BoolExpr>(std::move(out));
  c.bl.emplace(e.get(), r);
  return r;
}
}  // namespace

NatPtr substitute_all(const NatPtr& e, const std::map<std::string, NatPtr>& sub) {
  SubCache c{sub, {}, {}};
  return sub_nat(e, c);
}

BoolPtr substitute_all(const BoolPtr& e, const std::map<std::string, NatPtr>& sub) {
  SubCache c{sub, {}, {}};
  return sub_bool(e, c);
}

NatPtr substitute(const NatPtr& e, const std::string& var, const NatPtr& repl) {
  return substitute_all(e, {{var, repl}});
}
BoolPtr substitute(const BoolPtr& e, const std::string& var, const NatPtr& repl) {
  return substitute_all(e, {{var, repl}});
}

// ---- queries ----

void free_vars(const NatPtr& e, std::vector<std::string>& out) {
  if (e->op == NatOp::Var) {
    if (std::find(out.begin(), out.end(), e->name) == out.end()) out.push_back(e->name);
    return;
  }
  if (e->a) free_vars(e->a, out);
  if (e->b) free_vars(e->b, out);
  if (e->c) free_vars(e->c, out);
  if (e->w) free_vars(e->w, out);
  if (e->cond) free_vars(e->cond, out);
}
void free_vars(const BoolPtr& e, std::vector<std::string>& out) {
  if (e->l) free_vars(e->l, out);
  if (e->r) free_vars(e->r, out);
  if (e->u) free_vars(e->u, out);
  if (e->v) free_vars(e->v, out);
}

namespace {
template <typename P>
bool depends_impl(const P& e, const std::vector<std::string>& allowed) {
  std::vector<std::string> fv;
  free_vars(e, fv);
  for (auto& v : fv)
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) return false;
  return true;
}
}  // namespace

bool depends_only_on(const NatPtr& e, const std::vector<std::string>& allowed) {
  return depends_impl(e, allowed);
}
bool depends_only_on(const BoolPtr& e, const std::vector<std::string>& allowed) {
  return depends_impl(e, allowed);
}

bool equal(const NatPtr& a, const NatPtr& b) {
  if (a == b) return true;
  if (a->op != b->op) return false;
  switch (a->op) {
    case NatOp::Var: return a->name == b->name;
    case NatOp::Const: return a->k == b->k;
    default: break;
  }
  if (!!a->a != !!b->a || !!a->b != !!b->b || !!a->c != !!b->c ||
      !!a->w != !!b->w || !!a->cond != !!b->cond)
    return false;
  if (a->a && !equal(a->a, b->a)) return false;
  if (a->b && !equal(a->b, b->b)) return false;
  if (a->c && !equal(a->c, b->c)) return false;
  if (a->w && !equal(a->w, b->w)) return false;
  if (a->cond && !equal(a->cond, b->cond)) return false;
  return true;
}

bool equal(const BoolPtr& a, const BoolPtr& b) {
  if (a == b) return true;
  if (a->op != b->op) return false;
  if (!!a->l != !!b->l || !!a->r != !!b->r || !!a->u != !!b->u || !!a->v != !!b->v)
    return false;
  if (a->l && !equal(a->l, b->l)) return false;
  if (a->r && !equal(a->r, b->r)) return false;
  if (a->u && !equal(a->u, b->u)) return false;
  if (a->v && !equal(a->v, b->v)) return false;
  return true;
}

// ---- lower bound ----

std::uint64_t lower_bound(const NatPtr& e) {
  constexpr std::uint64_t cap = std::uint64_t{1} << 62;
  switch (e->op) {
    case NatOp::Const: return e->k;
    case NatOp::Add: {
      std::uint64_t a = lower_bound(e->a), b = lower_bound(e->b);
      return a > cap - b ? cap : a + b;
    }
    case NatOp::Mul: {
      std::uint64_t a = lower_bound(e->a), b = lower_bound(e->b);
      if (a == 0 || b == 0) return 0;
      return a > cap / b ? cap : a * b;
    }
    case NatOp::Shl: {
      std::uint64_t a = lower_bound(e->a), s = lower_bound(e->b);
      if (a == 0) return 0;
      return s >= 62 ? cap : std::min(cap, a << std::min<std::uint64_t>(s, 62));
    }
    case NatOp::Pow2: {
      std::uint64_t p = lower_bound(e->a);
      return p >= 62 ? cap : std::uint64_t{1} << p;
    }
    default: return 0;
  }
}

// ---- simplifier ----

namespace {
bool is_const(const NatPtr& e, std::uint64_t k) {
  return e->op == NatOp::Const && e->k == k;
}
bool is_pow2_const(const NatPtr& e, std::uint64_t& j) {
  if (e->op != NatOp::Const || e->k == 0 || (e->k & (e->k - 1)) != 0) return false;
  j = std::uint64_t(__builtin_ctzll(e->k));
  return true;
}
}  // namespace

namespace {
// Rewriting is memoized per top-level call: expressions built by
// substitution share subdags heavily, and an uncached rewrite of a shared
// node would copy it once per reference. Cached keys are kept alive for
// the duration of the scope so pointer identity stays meaningful.
struct SimpCache {
  std::map<const NatExpr*, NatPtr> nat;
  std::map<const BoolExpr*, BoolPtr> bl;
  std::vector<std::shared_ptr<const void>> keep;
};
thread_local SimpCache* simp_cache = nullptr;

struct SimpScope {
  SimpCache local;
  bool root;
  SimpScope() : root(simp_cache == nullptr) {
    if (root) simp_cache = &local;
  }
  ~SimpScope() {
    if (root) simp_cache = nullptr;
  }
};

NatPtr simplify_node(const NatPtr& e);
BoolPtr simplify_node(const BoolPtr& e);
}  // namespace

NatPtr simplify(const NatPtr& e) {
  SimpScope scope;
  auto& c = *simp_cache;
  auto it = c.nat.find(e.get());
  if (it != c.nat.end()) return it->second;
  NatPtr r = simplify_node(e);
  c.keep.push_back(e);
  c.nat.emplace(e.get(), r);
  return r;
}

BoolPtr simplify(const BoolPtr& e) {
  SimpScope scope;
  auto& c = *simp_cache;
  auto it = c.bl.find(e.get());
  if (it != c.bl.end()) return it->second;
  BoolPtr r = simplify_node(e);
  c.keep.push_back(e);
  c.bl.emplace(e.get(), r);
  return r;
}

namespace {
NatPtr simplify_node(const NatPtr& e) {
  NatExpr s = *e;
  if (e->a) s.a = simplify(e->a);
  if (e->b) s.b = simplify(e->b);
  if (e->c) s.c = simplify(e->c);
  if (e->w) s.w = simplify(e->w);
  if (e->cond) s.cond = simplify(e->cond);
  NatPtr r = std::make_shared<const NatExpr>(s);

  auto cfold = [&]() -> NatPtr {
    // all operands constant: evaluate (guard against eval errors, e.g. div 0)
    try {
      Env empty;
      return nconst(eval(r, empty));
    } catch (const EvalError&) {
      return nullptr;
    }
  };

  switch (s.op) {
    case NatOp::Var:
    case NatOp::Const:
      return r;
    case NatOp::Add:
      if (is_const(s.a, 0)) return s.b;
      if (is_const(s.b, 0)) return s.a;
      break;
    case NatOp::Sub:
      if (is_const(s.b, 0)) return s.a;
      // (a + c1) - c2 with c1 >= c2
      if (s.b->op == NatOp::Const && s.a->op == NatOp::Add &&
          s.a->b->op == NatOp::Const && s.a->b->k >= s.b->k)
        return simplify(nadd(s.a->a, nconst(s.a->b->k - s.b->k)));
      break;
    case NatOp::Mul:
      if (is_const(s.a, 0) || is_const(s.b, 0)) return nconst(0);
      if (is_const(s.a, 1)) return s.b;
      if (is_const(s.b, 1)) return s.a;
      if (s.a->op == NatOp::Pow2 && s.b->op == NatOp::Pow2)
        return simplify(npow2(nadd(s.a->a, s.b->a)));
      break;
    case NatOp::Div: {
      if (is_const(s.b, 1)) return s.a;
      std::uint64_t j;
      if (s.a->op == NatOp::Pow2 &&
          ((is_pow2_const(s.b, j)) ||
           (s.b->op == NatOp::Pow2 && s.b->a->op == NatOp::Const && (j = s.b->a->k, true)))) {
        if (lower_bound(s.a->a) >= j)
          return simplify(npow2(nsub(s.a->a, nconst(j))));
      }
      break;
    }
    case NatOp::Mod:
      if (is_const(s.b, 1)) return nconst(0);
      break;
    case NatOp::BitAnd:
      if (is_const(s.a, 0) || is_const(s.b, 0)) return nconst(0);
      break;
    case NatOp::BitOr:
    case NatOp::BitXor:
      if (is_const(s.a, 0)) return s.b;
      if (is_const(s.b, 0)) return s.a;
      break;
    case NatOp::Shl:
    case NatOp::Shr:
      if (is_const(s.b, 0)) return s.a;
      if (is_const(s.a, 0)) return nconst(0);
      break;
    case NatOp::Delta:
      if (s.cond->op == BoolOp::True) return nconst(1);
      if (s.cond->op == BoolOp::False) return nconst(0);
      return r;
    case NatOp::Neg:
      return nconst(0);
    default:
      break;
  }

  // constant fold when every nat operand is constant and there is no cond
  bool allconst = !s.cond;
  for (const NatPtr* p : {&s.a, &s.b, &s.c, &s.w})
    if (*p && (*p)->op != NatOp::Const) allconst = false;
  if (allconst && (s.a || s.b)) {
    if (NatPtr f = cfold()) return f;
  }
  return r;
}

BoolPtr simplify_node(const BoolPtr& e) {
  BoolExpr s = *e;
  if (e->l) s.l = simplify(e->l);
  if (e->r) s.r = simplify(e->r);
  if (e->u) s.u = simplify(e->u);
  if (e->v) s.v = simplify(e->v);
  BoolPtr r = std::make_shared<const BoolExpr>(s);
  switch (s.op) {
    case BoolOp::And:
      if (s.l->op == BoolOp::False || s.r->op == BoolOp::False) return bfalse();
      if (s.l->op == BoolOp::True) return s.r;
      if (s.r->op == BoolOp::True) return s.l;
      break;
    case BoolOp::Or:
      if (s.l->op == BoolOp::True || s.r->op == BoolOp::True) return btrue();
      if (s.l->op == BoolOp::False) return s.r;
      if (s.r->op == BoolOp::False) return s.l;
      break;
    case BoolOp::Not:
      if (s.l->op == BoolOp::True) return bfalse();
      if (s.l->op == BoolOp::False) return btrue();
      if (s.l->op == BoolOp::Not) return s.l->l;
      break;
    default:
      if (s.u && s.u->op == NatOp::Const && s.v && s.v->op == NatOp::Const) {
        Env empty;
        return eval(r, empty) ? btrue() : bfalse();
      }
      if (s.u && (s.op == BoolOp::Eq || s.op == BoolOp::Le || s.op == BoolOp::Ge) &&
          equal(s.u, s.v))
        return btrue();
      break;
  }
  return r;
}
}  // namespace

// ---- printing ----

namespace {
const char* nat_op_name(NatOp op) {
  switch (op) {
    case NatOp::Add: return "+";
    case NatOp::Sub: return "-";
    case NatOp::Mul: return "*";
    case NatOp::Div: return "div";
    case NatOp::Mod: return "mod";
    case NatOp::BitAnd: return "&";
    case NatOp::BitOr: return "|";
    case NatOp::BitXor: return "^";
    case NatOp::Shl: return "<<";
    case NatOp::Shr: return ">>";
    case NatOp::Bit: return "bit";
    case NatOp::Slice: return "slice";
    case NatOp::Delta: return "delta";
    case NatOp::Pow2: return "pow2";
    case NatOp::Neg: return "neg";
    case NatOp::BitNot: return "bitnot";
    case NatOp::RedAnd: return "redand";
    case NatOp::RedOr: return "redor";
    case NatOp::RedXor: return "redxor";
    default: return "?";
  }
}
const char* bool_op_name(BoolOp op) {
  switch (op) {
    case BoolOp::And: return "and";
    case BoolOp::Or: return "or";
    case BoolOp::Not: return "not";
    case BoolOp::Eq: return "=";
    case BoolOp::Ne: return "!=";
    case BoolOp::Lt: return "<";
    case BoolOp::Le: return "<=";
    case BoolOp::Gt: return ">";
    case BoolOp::Ge: return ">=";
    default: return "?";
  }
}
}  // namespace

std::string to_string(const NatPtr& e) {
  switch (e->op) {
    case NatOp::Var: return e->name;
    case NatOp::Const: return std::to_string(e->k);
    case NatOp::Delta: return "(delta " + to_string(e->cond) + ")";
    case NatOp::Pow2: return "(pow2 " + to_string(e->a) + ")";
    case NatOp::Neg: return "(neg " + to_string(e->a) + ")";
    case NatOp::Slice:
      return "(slice " + to_string(e->a) + " " + to_string(e->b) + " " + to_string(e->c) + ")";
    case NatOp::BitNot:
    case NatOp::RedAnd:
    case NatOp::RedOr:
    case NatOp::RedXor:
      return std::string("(") + nat_op_name(e->op) + " " + to_string(e->w) + " " +
             to_string(e->a) + ")";
    default:
      return std::string("(") + nat_op_name(e->op) + " " + to_string(e->a) + " " +
             to_string(e->b) + ")";
  }
}

std::string to_string(const BoolPtr& e) {
  switch (e->op) {
    case BoolOp::True: return "true";
    case BoolOp::False: return "false";
    case BoolOp::Not: return "(not " + to_string(e->l) + ")";
    case BoolOp::And:
    case BoolOp::Or:
      return std::string("(") + bool_op_name(e->op) + " " + to_string(e->l) + " " +
             to_string(e->r) + ")";
    default:
      return std::string("(") + bool_op_name(e->op) + " " + to_string(e->u) + " " +
             to_string(e->v) + ")";
  }
}

// ---- parsing ----

namespace {
struct Sexp {
  std::string atom;              // nonempty for atoms
  std::vector<Sexp> items;       // for lists
  bool is_atom() const { return !atom.empty(); }
};

struct Tokenizer {
  const std::string& s;
  size_t i = 0;
  explicit Tokenizer(const std::string& str) : s(str) {}
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  std::string next() {
    skip_ws();
    if (i >= s.size()) throw ParseError("unexpected end of input");
    char c = s[i];
    if (c == '(' || c == ')') {
      ++i;
      return std::string(1, c);
    }
    size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) &&
           s[i] != '(' && s[i] != ')')
      ++i;
    return s.substr(start, i - start);
  }
};

Sexp parse_sexp(Tokenizer& tz) {
  std::string t = tz.next();
  if (t == ")") throw ParseError("unexpected ')'");
  if (t != "(") {
    Sexp a;
    a.atom = t;
    return a;
  }
  Sexp list;
  for (;;) {
    tz.skip_ws();
    if (tz.i >= tz.s.size()) throw ParseError("missing ')'");
    if (tz.s[tz.i] == ')') {
      ++tz.i;
      return list;
    }
    list.items.push_back(parse_sexp(tz));
  }
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

NatPtr nat_of(const Sexp& sx);
BoolPtr bool_of(const Sexp& sx);

NatPtr nat_of(const Sexp& sx) {
  if (sx.is_atom()) {
    if (all_digits(sx.atom)) return nconst(std::stoull(sx.atom));
    return nvar(sx.atom);
  }
  if (sx.items.empty() || !sx.items[0].is_atom())
    throw ParseError("expected operator at list head");
  const std::string& op = sx.items[0].atom;
  auto arity = [&](size_t n) {
    if (sx.items.size() != n + 1)
      throw ParseError("operator " + op + ": expected " + std::to_string(n) + " args");
  };
  static const std::map<std::string, NatOp> binops = {
      {"+", NatOp::Add}, {"-", NatOp::Sub}, {"*", NatOp::Mul},
      {"div", NatOp::Div}, {"mod", NatOp::Mod}, {"&", NatOp::BitAnd},
      {"|", NatOp::BitOr}, {"^", NatOp::BitXor}, {"<<", NatOp::Shl},
      {">>", NatOp::Shr}, {"bit", NatOp::Bit}};
  if (auto it = binops.find(op); it != binops.end()) {
    // + and * accept n-ary form, folded left
    if ((op == "+" || op == "*") && sx.items.size() > 3) {
      NatPtr acc = nat_of(sx.items[1]);
      for (size_t i = 2; i < sx.items.size(); ++i)
        acc = nbin(it->second, acc, nat_of(sx.items[i]));
      return acc;
    }
    arity(2);
    return nbin(it->second, nat_of(sx.items[1]), nat_of(sx.items[2]));
  }
  if (op == "slice") {
    arity(3);
    return nslice(nat_of(sx.items[1]), nat_of(sx.items[2]), nat_of(sx.items[3]));
  }
  if (op == "delta") {
    arity(1);
    return ndelta(bool_of(sx.items[1]));
  }
  if (op == "pow2") {
    arity(1);
    return npow2(nat_of(sx.items[1]));
  }
  if (op == "neg") {
    arity(1);
    return nneg(nat_of(sx.items[1]));
  }
  if (op == "bitnot") {
    arity(2);
    return nbitnot(nat_of(sx.items[1]), nat_of(sx.items[2]));
  }
  static const std::map<std::string, NatOp> reds = {
      {"redand", NatOp::RedAnd}, {"redor", NatOp::RedOr}, {"redxor", NatOp::RedXor}};
  if (auto it = reds.find(op); it != reds.end()) {
    arity(2);
    return nred(it->second, nat_of(sx.items[1]), nat_of(sx.items[2]));
  }
  throw ParseError("unknown nat operator: " + op);
}

BoolPtr bool_of(const Sexp& sx) {
  if (sx.is_atom()) {
    if (sx.atom == "true") return btrue();
    if (sx.atom == "false") return bfalse();
    throw ParseError("expected boolean, got atom: " + sx.atom);
  }
  if (sx.items.empty() || !sx.items[0].is_atom())
    throw ParseError("expected operator at list head");
  const std::string& op = sx.items[0].atom;
  if (op == "and" || op == "or") {
    if (sx.items.size() < 3) throw ParseError(op + ": expected >= 2 args");
    BoolPtr acc = bool_of(sx.items[1]);
    for (size_t i = 2; i < sx.items.size(); ++i) {
      BoolPtr rhs = bool_of(sx.items[i]);
      acc = (op == "and") ? band(acc, rhs) : bor(acc, rhs);
    }
    return acc;
  }
  if (op == "not") {
    if (sx.items.size() != 2) throw ParseError("not: expected 1 arg");
    return bnot(bool_of(sx.items[1]));
  }
  static const std::map<std::string, BoolOp> cmps = {
      {"=", BoolOp::Eq}, {"!=", BoolOp::Ne}, {"<", BoolOp::Lt},
      {"<=", BoolOp::Le}, {">", BoolOp::Gt}, {">=", BoolOp::Ge}};
  if (auto it = cmps.find(op); it != cmps.end()) {
    if (sx.items.size() != 3) throw ParseError(op + ": expected 2 args");
    return bcmp(it->second, nat_of(sx.items[1]), nat_of(sx.items[2]));
  }
  throw ParseError("unknown bool operator: " + op);
}
}  // namespace

NatPtr parse_nat(const std::string& s) {
  Tokenizer tz(s);
  Sexp sx = parse_sexp(tz);
  if (!tz.done()) throw ParseError("trailing input after expression");
  return nat_of(sx);
}

BoolPtr parse_bool(const std::string& s) {
  Tokenizer tz(s);
  Sexp sx = parse_sexp(tz);
  if (!tz.done()) throw ParseError("trailing input after expression");
  return bool_of(sx);
}

}  // namespace iqc
