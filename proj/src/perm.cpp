#include "iqc/perm.hpp"

namespace iqc {

namespace {
PermPtr mk(PermExpr e) { return std::make_shared<const PermExpr>(std::move(e)); }
}

PermPtr perm_id() {
  PermExpr e;
  e.op = PermOp::Id;
  return mk(std::move(e));
}
PermPtr perm_swap(NatPtr a, NatPtr b) {
  PermExpr e;
  e.op = PermOp::Swap;
  e.a = std::move(a);
  e.b = std::move(b);
  return mk(std::move(e));
}
PermPtr perm_shift(NatPtr a, NatPtr b, std::uint64_t m) {
  if (m > 3) throw std::invalid_argument("shift amount must be in [0,3]");
  PermExpr e;
  e.op = PermOp::Shift;
  e.a = std::move(a);
  e.b = std::move(b);
  e.m = m;
  return mk(std::move(e));
}
PermPtr perm_comp(PermPtr p1, PermPtr p2) {
  PermExpr e;
  e.op = PermOp::Comp;
  e.p1 = std::move(p1);
  e.p2 = std::move(p2);
  return mk(std::move(e));
}

std::uint64_t perm_wire(const PermPtr& p, const Env& env, std::uint64_t q) {
  switch (p->op) {
    case PermOp::Id: return q;
    case PermOp::Swap: {
      std::uint64_t a = eval(p->a, env), b = eval(p->b, env);
      return q == a ? b : q == b ? a : q;
    }
    case PermOp::Shift: {
      std::uint64_t a = eval(p->a, env), b = eval(p->b, env);
      if (b <= a || q < a || q >= b) return q;
      std::uint64_t w = b - a;
      return (q - a + p->m) % w + a;
    }
    case PermOp::Comp: return perm_wire(p->p2, env, perm_wire(p->p1, env, q));
  }
  throw std::logic_error("perm_wire: bad op");
}

std::uint64_t perm_wire_inv(const PermPtr& p, const Env& env, std::uint64_t q) {
  switch (p->op) {
    case PermOp::Id: return q;
    case PermOp::Swap: return perm_wire(p, env, q);
    case PermOp::Shift: {
      std::uint64_t a = eval(p->a, env), b = eval(p->b, env);
      if (b <= a || q < a || q >= b) return q;
      std::uint64_t w = b - a;
      return (q - a + w - p->m % w) % w + a;
    }
    case PermOp::Comp: return perm_wire_inv(p->p1, env, perm_wire_inv(p->p2, env, q));
  }
  throw std::logic_error("perm_wire_inv: bad op");
}

std::uint64_t apply_perm_bits(const PermPtr& p, const Env& env, std::uint64_t x) {
  std::uint64_t out = 0;
  for (std::uint64_t q = 0; q < 64; ++q) {
    if ((x >> q) & 1) {
      std::uint64_t t = perm_wire(p, env, q);
      if (t >= 64) throw EvalError("permuted bit out of range");
      out |= std::uint64_t{1} << t;
    }
  }
  return out;
}

std::uint64_t apply_perm_bits_inv(const PermPtr& p, const Env& env, std::uint64_t x) {
  std::uint64_t out = 0;
  for (std::uint64_t q = 0; q < 64; ++q) {
    if ((x >> q) & 1) {
      std::uint64_t t = perm_wire_inv(p, env, q);
      if (t >= 64) throw EvalError("permuted bit out of range");
      out |= std::uint64_t{1} << t;
    }
  }
  return out;
}

namespace {
// rotate the field x[b-1:a] left by m (towards higher bits), reassemble
NatPtr shift_value(const NatPtr& a, const NatPtr& b, std::uint64_t m, const NatPtr& x,
                   bool invert) {
  NatPtr w = nsub(b, a);
  NatPtr f = nmod(nshr(x, a), npow2(w));
  NatPtr fr;
  if (!invert) {
    // ((f << m) | (f >> (w - m))) mod 2^w
    fr = nadd(nmod(nmul(f, nconst(std::uint64_t{1} << m)), npow2(w)),
              ndiv(f, npow2(nsub(w, nconst(m)))));
  } else {
    // (f >> m) | ((f mod 2^m) << (w - m))
    fr = nadd(ndiv(f, nconst(std::uint64_t{1} << m)),
              nmul(nmod(f, nconst(std::uint64_t{1} << m)), npow2(nsub(w, nconst(m)))));
  }
  // x with the field replaced: low part + field + high part
  NatPtr low = nmod(x, npow2(a));
  NatPtr high = ndiv(x, npow2(b));
  return nadd(nadd(low, nmul(fr, npow2(a))), nmul(high, npow2(b)));
}
}  // namespace

NatPtr perm_value(const PermPtr& p, const NatPtr& x) {
  switch (p->op) {
    case PermOp::Id: return x;
    case PermOp::Swap: {
      NatPtr t = nxor(nbit(x, p->a), nbit(x, p->b));
      return nxor(nxor(x, nshl(t, p->a)), nshl(t, p->b));
    }
    case PermOp::Shift:
      if (p->m == 0) return x;
      return shift_value(p->a, p->b, p->m, x, false);
    case PermOp::Comp: return perm_value(p->p2, perm_value(p->p1, x));
  }
  throw std::logic_error("perm_value: bad op");
}

NatPtr perm_value_inv(const PermPtr& p, const NatPtr& x) {
  switch (p->op) {
    case PermOp::Id: return x;
    case PermOp::Swap: return perm_value(p, x);
    case PermOp::Shift:
      if (p->m == 0) return x;
      return shift_value(p->a, p->b, p->m, x, true);
    case PermOp::Comp: return perm_value_inv(p->p1, perm_value_inv(p->p2, x));
  }
  throw std::logic_error("perm_value_inv: bad op");
}

PermPtr perm_substitute(const PermPtr& p, const std::string& var, const NatPtr& repl) {
  switch (p->op) {
    case PermOp::Id: return p;
    case PermOp::Swap:
      return perm_swap(substitute(p->a, var, repl), substitute(p->b, var, repl));
    case PermOp::Shift:
      return perm_shift(substitute(p->a, var, repl), substitute(p->b, var, repl), p->m);
    case PermOp::Comp:
      return perm_comp(perm_substitute(p->p1, var, repl),
                       perm_substitute(p->p2, var, repl));
  }
  throw std::logic_error("perm_substitute: bad op");
}

bool equal(const PermPtr& a, const PermPtr& b) {
  if (a == b) return true;
  if (a->op != b->op) return false;
  switch (a->op) {
    case PermOp::Id: return true;
    case PermOp::Swap: return equal(a->a, b->a) && equal(a->b, b->b);
    case PermOp::Shift:
      return a->m == b->m && equal(a->a, b->a) && equal(a->b, b->b);
    case PermOp::Comp: return equal(a->p1, b->p1) && equal(a->p2, b->p2);
  }
  return false;
}

std::string to_string(const PermPtr& p) {
  switch (p->op) {
    case PermOp::Id: return "id";
    case PermOp::Swap: return "(swap " + to_string(p->a) + " " + to_string(p->b) + ")";
    case PermOp::Shift:
      return "(shift " + to_string(p->a) + " " + to_string(p->b) + " " +
             std::to_string(p->m) + ")";
    case PermOp::Comp: return "(comp " + to_string(p->p1) + " " + to_string(p->p2) + ")";
  }
  throw std::logic_error("to_string: bad perm op");
}

namespace {
PermPtr parse_perm_at(const std::string& s, size_t& pos);

void skip_ws(const std::string& s, size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

std::string read_token(const std::string& s, size_t& pos) {
  skip_ws(s, pos);
  if (pos >= s.size()) throw ParseError("unexpected end of permutation");
  if (s[pos] == '(' || s[pos] == ')') return std::string(1, s[pos++]);
  size_t start = pos;
  while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
         s[pos] != '(' && s[pos] != ')')
    ++pos;
  return s.substr(start, pos - start);
}

// read a balanced s-expression (or atom) as raw text
std::string read_balanced(const std::string& s, size_t& pos) {
  skip_ws(s, pos);
  if (pos >= s.size()) throw ParseError("unexpected end of permutation");
  size_t start = pos;
  if (s[pos] != '(') {
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
           s[pos] != '(' && s[pos] != ')')
      ++pos;
    return s.substr(start, pos - start);
  }
  int depth = 0;
  do {
    if (s[pos] == '(') ++depth;
    if (s[pos] == ')') --depth;
    ++pos;
    if (pos > s.size()) throw ParseError("unbalanced parens in permutation");
  } while (depth > 0);
  return s.substr(start, pos - start);
}

PermPtr parse_perm_at(const std::string& s, size_t& pos) {
  skip_ws(s, pos);
  if (pos < s.size() && s[pos] != '(') {
    std::string t = read_token(s, pos);
    if (t == "id") return perm_id();
    throw ParseError("unknown permutation atom: " + t);
  }
  std::string open = read_token(s, pos);
  if (open != "(") throw ParseError("expected '(' in permutation");
  std::string head = read_token(s, pos);
  PermPtr result;
  if (head == "swap") {
    NatPtr a = parse_nat(read_balanced(s, pos));
    NatPtr b = parse_nat(read_balanced(s, pos));
    result = perm_swap(a, b);
  } else if (head == "shift") {
    NatPtr a = parse_nat(read_balanced(s, pos));
    NatPtr b = parse_nat(read_balanced(s, pos));
    NatPtr m = parse_nat(read_balanced(s, pos));
    if (m->op != NatOp::Const) throw ParseError("shift amount must be a constant");
    result = perm_shift(a, b, m->k);
  } else if (head == "comp") {
    PermPtr p1 = parse_perm_at(s, pos);
    PermPtr p2 = parse_perm_at(s, pos);
    result = perm_comp(p1, p2);
  } else {
    throw ParseError("unknown permutation operator: " + head);
  }
  if (read_token(s, pos) != ")") throw ParseError("expected ')' in permutation");
  return result;
}
}  // namespace

PermPtr parse_perm(const std::string& s) {
  size_t pos = 0;
  PermPtr p = parse_perm_at(s, pos);
  skip_ws(s, pos);
  if (pos != s.size()) throw ParseError("trailing input after permutation");
  return p;
}

std::size_t perm_depth(const PermPtr& p) {
  switch (p->op) {
    case PermOp::Id: return 0;
    case PermOp::Swap:
    case PermOp::Shift: return 1;
    case PermOp::Comp: return 1 + perm_depth(p->p1) + perm_depth(p->p2);
  }
  return 0;
}

}  // namespace iqc
