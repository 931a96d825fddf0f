#include "iqc/speclang.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace iqc {
namespace {

// ---------------------------------------------------------------- lexing

struct Cursor {
  const std::string& s;
  std::size_t i = 0;

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    ws();
    return i >= s.size();
  }
  char peek() {
    ws();
    return i < s.size() ? s[i] : '\0';
  }
  bool at(const std::string& t) {
    ws();
    return s.compare(i, t.size(), t) == 0;
  }
  bool lit(const std::string& t) {
    if (!at(t)) return false;
    i += t.size();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) {
    std::size_t line = 1, col = 1;
    for (std::size_t j = 0; j < i && j < s.size(); ++j) {
      if (s[j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(msg + " at line " + std::to_string(line) + ", column " +
                      std::to_string(col));
  }
  void expect(const std::string& t) {
    if (!lit(t)) fail("expected '" + t + "'");
  }
  // keyword with a word boundary after it
  bool word(const std::string& w) {
    ws();
    if (s.compare(i, w.size(), w) != 0) return false;
    std::size_t e = i + w.size();
    if (e < s.size() &&
        (std::isalnum(static_cast<unsigned char>(s[e])) || s[e] == '_'))
      return false;
    i = e;
    return true;
  }
  std::optional<std::uint64_t> number() {
    ws();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      return std::nullopt;
    std::uint64_t v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      std::uint64_t d = static_cast<std::uint64_t>(s[i] - '0');
      if (v > (UINT64_MAX - d) / 10) fail("integer literal too large");
      v = v * 10 + d;
      ++i;
    }
    return v;
  }
  std::optional<std::string> name() {
    ws();
    if (i >= s.size()) return std::nullopt;
    char c0 = s[i];
    if (!std::isalpha(static_cast<unsigned char>(c0)) && c0 != '_')
      return std::nullopt;
    std::size_t j = i;
    while (j < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
      ++j;
    std::string out = s.substr(i, j - i);
    i = j;
    return out;
  }
};

// ------------------------------------------------------------ expressions

NatPtr parse_expr(Cursor& c);
BoolPtr parse_bexpr(Cursor& c);

NatPtr parse_atom(Cursor& c) {
  if (auto v = c.number()) return nconst(*v);
  if (c.lit("(")) {
    NatPtr e = parse_expr(c);
    c.expect(")");
    return e;
  }
  std::size_t pos = c.i;
  if (auto nm = c.name()) {
    static const std::map<std::string, NatOp> reds = {
        {"redxor", NatOp::RedXor},
        {"redand", NatOp::RedAnd},
        {"redor", NatOp::RedOr}};
    if (auto it = reds.find(*nm); it != reds.end()) {
      c.expect("(");
      NatPtr w = parse_expr(c);
      c.expect(",");
      NatPtr a = parse_expr(c);
      c.expect(")");
      return nred(it->second, w, a);
    }
    if (*nm == "xor") {
      c.expect("(");
      NatPtr a = parse_expr(c);
      c.expect(",");
      NatPtr b = parse_expr(c);
      c.expect(")");
      return nxor(a, b);
    }
    return nvar(*nm);
  }
  c.i = pos;
  c.fail("expected an expression");
}

NatPtr parse_postfix(Cursor& c) {
  NatPtr e = parse_atom(c);
  while (c.at("[")) {
    c.expect("[");
    NatPtr a = parse_expr(c);
    if (c.lit(":")) {
      NatPtr b = parse_expr(c);
      c.expect("]");
      e = nslice(e, a, b);
    } else {
      c.expect("]");
      e = nbit(e, a);
    }
  }
  return e;
}

NatPtr parse_pow(Cursor& c) {
  NatPtr b = parse_postfix(c);
  if (c.at("^")) {
    c.expect("^");
    NatPtr e = parse_pow(c);
    if (b->op == NatOp::Const && b->k == 2) return npow2(e);
    if (b->op == NatOp::Const && e->op == NatOp::Const) {
      std::uint64_t v = 1;
      for (std::uint64_t j = 0; j < e->k; ++j) {
        if (b->k != 0 && v > UINT64_MAX / b->k)
          c.fail("constant power overflows");
        v *= b->k;
      }
      return nconst(v);
    }
    c.fail("only powers of two and constant powers are supported");
  }
  return b;
}

NatPtr parse_term(Cursor& c) {
  NatPtr e = parse_pow(c);
  for (;;) {
    if (c.at("*") && !c.at("**")) {
      c.expect("*");
      e = nmul(e, parse_pow(c));
    } else if (c.at("/")) {
      c.expect("/");
      e = ndiv(e, parse_pow(c));
    } else if (c.at("%")) {
      c.expect("%");
      e = nmod(e, parse_pow(c));
    } else {
      break;
    }
  }
  return e;
}

NatPtr parse_expr(Cursor& c) {
  NatPtr e = parse_term(c);
  for (;;) {
    if (c.at("+") && !c.at("(+)")) {
      c.expect("+");
      e = nadd(e, parse_term(c));
    } else if (c.at("-") && !c.at("->")) {
      c.expect("-");
      e = nsub(e, parse_term(c));
    } else if (c.word("xor")) {
      e = nxor(e, parse_term(c));
    } else {
      break;
    }
  }
  return e;
}

BoolPtr parse_brel(Cursor& c) {
  std::size_t save = c.i;
  try {
    NatPtr u = parse_expr(c);
    BoolOp op;
    if (c.lit("==")) op = BoolOp::Eq;
    else if (c.lit("!=")) op = BoolOp::Ne;
    else if (c.lit("<=")) op = BoolOp::Le;
    else if (c.lit(">=")) op = BoolOp::Ge;
    else if (c.lit("<")) op = BoolOp::Lt;
    else if (c.lit(">")) op = BoolOp::Gt;
    else c.fail("expected a relation");
    return bcmp(op, u, parse_expr(c));
  } catch (const SyntaxError&) {
    c.i = save;
    c.expect("(");
    BoolPtr b = parse_bexpr(c);
    c.expect(")");
    return b;
  }
}

BoolPtr parse_band(Cursor& c) {
  BoolPtr b = parse_brel(c);
  while (c.lit("&&") || c.word("and")) b = band(b, parse_brel(c));
  return b;
}

BoolPtr parse_bexpr(Cursor& c) {
  BoolPtr b = parse_band(c);
  while (c.lit("||") || c.word("or")) b = bor(b, parse_band(c));
  return b;
}

// ----------------------------------------------------------------- phases

// content of e^{...}: an optional sign and a product/quotient chain that
// must contain exactly one i and one pi; denominators must be powers of
// two. The result is the ppsa phase e^{2 pi i * num / 2^logden}.
struct PhaseAcc {
  NatPtr num = nconst(1);
  NatPtr logden = nconst(0);
  int pi_pow = 0;
  int i_pow = 0;
};

void phase_div(PhaseAcc& m, const NatPtr& d, Cursor& c) {
  if (d->op == NatOp::Pow2) {
    m.logden = nadd(m.logden, d->a);
    return;
  }
  if (d->op == NatOp::Const && d->k > 0 && (d->k & (d->k - 1)) == 0) {
    std::uint64_t j = 0, v = d->k;
    while (v > 1) {
      v >>= 1;
      ++j;
    }
    m.logden = nadd(m.logden, nconst(j));
    return;
  }
  (void)c;
  throw NonPpsaExpressible("phase denominator is not a power of two: " +
                           to_string(d));
}

void phase_mul(PhaseAcc& m, const NatPtr& f, Cursor& c) {
  if (f->op == NatOp::Div) {
    phase_mul(m, f->a, c);
    phase_div(m, f->b, c);
    return;
  }
  m.num = nmul(m.num, f);
}

PhaseExpr parse_phase(Cursor& c) {
  PhaseAcc m;
  bool neg = c.lit("-");
  for (;;) {
    if (c.peek() == '}' || c.eof()) break;
    if (c.lit("/")) {
      phase_div(m, parse_pow(c), c);
      continue;
    }
    c.lit("*");
    if (c.peek() == '}') break;
    if (c.word("pi")) {
      ++m.pi_pow;
      continue;
    }
    if (c.word("i")) {
      ++m.i_pow;
      continue;
    }
    phase_mul(m, parse_pow(c), c);
  }
  if (m.pi_pow != 1 || m.i_pow != 1)
    throw NonPpsaExpressible(
        "phase exponent must be i * pi times a dyadic rational");
  PhaseExpr ph;
  ph.logden = simplify(nadd(m.logden, nconst(1)));  // e^{i pi t} = e^{2 pi i t/2}
  NatPtr num = simplify(m.num);
  if (neg) {
    NatPtr full = npow2(ph.logden);
    num = nsub(full, nmod(num, full));
  }
  ph.num = simplify(num);
  return ph;
}

// ------------------------------------------------------------------- kets

NatPtr parse_len_atom(Cursor& c) {
  if (c.lit("{")) {
    NatPtr e = parse_expr(c);
    c.expect("}");
    return e;
  }
  if (c.lit("(")) {
    NatPtr e = parse_expr(c);
    c.expect(")");
    return e;
  }
  if (auto v = c.number()) return nconst(*v);
  if (auto nm = c.name()) return nvar(*nm);
  c.fail("expected a length");
}

SpecAst::InFactor parse_in_factor(Cursor& c) {
  c.expect("|");
  SpecAst::InFactor f;
  c.ws();
  char ch = c.peek();
  if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
    std::string nm = *c.name();
    if (!c.lit("[")) c.fail("input variable ket needs a width, |" + nm + "[l]>");
    f.kind = SpecAst::InKind::VarKet;
    f.var = nm;
    f.len = parse_expr(c);
    c.expect("]");
    c.expect(">");
    return f;
  }
  f.kind = SpecAst::InKind::ConstKet;
  f.value = parse_expr(c);
  if (c.lit("_")) {
    f.len = parse_len_atom(c);
  } else if (f.value->op == NatOp::Const && f.value->k <= 1) {
    f.len = nconst(1);  // |0>, |1> may omit the subscript
  } else {
    c.fail("constant ket needs a length subscript");
  }
  c.expect(">");
  return f;
}

SpecAst::OutBranch parse_out_branch(Cursor& c) {
  SpecAst::OutBranch br;
  for (;;) {
    if (c.eof() || c.at("(+)")) break;
    if (c.lit("(x)")) continue;
    if (c.at("U_{")) {
      c.lit("U_{");
      SpecAst::OutFactor f;
      f.kind = SpecAst::OutKind::SumSuperpose;
      auto nm = c.name();
      if (!nm) c.fail("expected a bound variable");
      f.bound = *nm;
      if (!c.word("in")) c.fail("expected 'in'");
      c.expect("{");
      c.expect("0");
      c.expect(",");
      c.expect("1");
      c.expect("}");
      c.expect("^");
      f.bound_len = parse_len_atom(c);
      c.expect("}");
      BoolPtr g = btrue();
      for (;;) {
        if (c.word("delta")) {
          c.expect("(");
          g = band(g, parse_bexpr(c));
          c.expect(")");
          c.lit("*");
          continue;
        }
        if (c.lit("e^{")) {
          if (f.phase) c.fail("at most one phase factor per summation");
          f.phase = parse_phase(c);
          c.expect("}");
          c.lit("*");
          continue;
        }
        break;
      }
      c.expect("|");
      auto body = c.name();
      if (!body || *body != f.bound)
        c.fail("summation body must be |" + f.bound + ">");
      c.expect(">");
      f.guard = simplify(g);
      br.factors.push_back(std::move(f));
      continue;
    }
    if (c.lit("e^{")) {
      br.phases.push_back(parse_phase(c));
      c.expect("}");
      c.lit("*");
      continue;
    }
    if (c.peek() == '|') {
      c.expect("|");
      SpecAst::OutFactor f;
      f.kind = SpecAst::OutKind::KetExpr;
      f.expr = parse_expr(c);
      if (c.lit("_")) f.len = parse_len_atom(c);
      c.expect(">");
      if (!f.len && c.lit("_")) f.len = parse_len_atom(c);
      br.factors.push_back(std::move(f));
      continue;
    }
    break;
  }
  if (br.factors.empty()) c.fail("empty output branch");
  return br;
}

// -------------------------------------------------------------- layout aid

NatPtr seg_of(const NatPtr& whole, const NatPtr& lo, const NatPtr& len) {
  // (whole >> lo) mod 2^len; robust for zero-width segments
  return nmod(nshr(whole, lo), npow2(len));
}

// width of a bound-variable slice appearing in an equality conjunct; an
// xor chain is bijective in each operand, so either side may pin the bits
std::optional<NatPtr> pinned_width(const NatPtr& e, const std::string& bound,
                                   const NatPtr& blen) {
  if (e->op == NatOp::Var && e->name == bound) return blen;
  if (e->op == NatOp::Bit && e->a->op == NatOp::Var && e->a->name == bound)
    return nconst(1);
  if (e->op == NatOp::Slice && e->a->op == NatOp::Var && e->a->name == bound)
    return simplify(nadd(nsub(e->b, e->c), nconst(1)));
  if (e->op == NatOp::BitXor) {
    if (auto w = pinned_width(e->a, bound, blen)) return w;
    return pinned_width(e->b, bound, blen);
  }
  return std::nullopt;
}

void conjuncts_of(const BoolPtr& b, std::vector<BoolPtr>& out) {
  if (b->op == BoolOp::And) {
    conjuncts_of(b->l, out);
    conjuncts_of(b->r, out);
    return;
  }
  out.push_back(b);
}

void check_declared(const std::vector<std::string>& vars,
                    const std::set<std::string>& declared) {
  for (const std::string& v : vars)
    if (v != "n" && !declared.count(v))
      throw UndeclaredVariable("undeclared variable: " + v);
}

bool phase_equal(const PhaseExpr& a, const PhaseExpr& b) {
  return equal(a.num, b.num) && equal(a.logden, b.logden);
}

PhaseExpr phase_add(const PhaseExpr& a, const PhaseExpr& b) {
  NatPtr w = common_logden(a.logden, b.logden);
  NatPtr full = npow2(w);
  NatPtr num = nmod(nadd(scale_num(a, w), scale_num(b, w)), full);
  return {simplify(num), simplify(w)};
}

}  // namespace

// --------------------------------------------------------------- frontend

SpecAst parse_spec(const std::string& text) {
  Cursor c{text};
  SpecAst ast;
  if (c.peek() != '|') {
    auto nm = c.name();
    if (!nm) c.fail("expected a spec name or '|'");
    ast.name = *nm;
    c.expect(":");
  }
  for (;;) {
    c.lit("(x)");
    if (c.peek() != '|') break;
    ast.input.push_back(parse_in_factor(c));
  }
  if (ast.input.empty()) c.fail("expected at least one input ket");
  c.expect("->");
  for (;;) {
    ast.branches.push_back(parse_out_branch(c));
    if (!c.lit("(+)")) break;
  }
  if (!c.eof()) c.fail("trailing input after the spec");
  return ast;
}

std::pair<LayoutMap, BoolPtr> derive_layout(const SpecAst& ast) {
  LayoutMap lm;
  NatPtr lo = nconst(0);
  std::set<std::string> seen;
  for (const SpecAst::InFactor& f : ast.input) {
    if (!depends_only_on(f.len, {"n"}))
      throw LengthMismatch("segment width must use only n and constants: " +
                           to_string(f.len));
    LayoutMap::Seg seg;
    seg.lo = lo;
    seg.len = simplify(f.len);
    seg.hi = simplify(nsub(nadd(lo, f.len), nconst(1)));
    if (f.kind == SpecAst::InKind::ConstKet) {
      if (!depends_only_on(f.value, {"n"}))
        throw UndeclaredVariable("constant ket value must be closed over n: " +
                                 to_string(f.value));
      NatPtr full = npow2(seg.len);
      lm.const_eqs.push_back(
          simplify(beq(seg_of(n_x(), seg.lo, seg.len), nmod(f.value, full))));
    } else {
      if (!seen.insert(f.var).second)
        throw SyntaxError("variable declared twice: " + f.var);
      seg.name = f.var;
    }
    lm.segs.push_back(seg);
    lo = simplify(nadd(lo, f.len));
  }
  lm.q_count = lo;
  std::vector<BoolPtr> hs = lm.const_eqs;
  hs.push_back(blt(n_x(), npow2(lm.q_count)));
  hs.push_back(blt(n_y(), npow2(lm.q_count)));
  return {lm, simplify(ball(hs))};
}

Ppsa compile_output(const SpecAst& ast, const LayoutMap& layout) {
  std::map<std::string, NatPtr> xsub;
  std::set<std::string> declared;
  for (const LayoutMap::Seg& seg : layout.segs)
    if (!seg.name.empty()) {
      xsub[seg.name] = seg_of(n_x(), seg.lo, seg.len);
      declared.insert(seg.name);
    }

  Ppsa out;
  NatPtr k_sum;  // summed qubits less pinned segments, from the first branch
  for (const SpecAst::OutBranch& br : ast.branches) {
    std::set<std::string> scope = declared;
    for (const SpecAst::OutFactor& f : br.factors)
      if (f.kind == SpecAst::OutKind::SumSuperpose) scope.insert(f.bound);

    // declaration checks on the surface expressions
    for (const SpecAst::OutFactor& f : br.factors) {
      std::vector<std::string> vs;
      if (f.kind == SpecAst::OutKind::KetExpr) {
        free_vars(f.expr, vs);
        if (f.len) free_vars(*f.len, vs);
      } else {
        free_vars(f.guard, vs);
        free_vars(f.bound_len, vs);
        if (f.phase) free_vars(f.phase->num, vs);
      }
      check_declared(vs, scope);
    }
    for (const PhaseExpr& p : br.phases) {
      std::vector<std::string> vs;
      free_vars(p.num, vs);
      check_declared(vs, scope);
    }

    // widths; at most one factor may leave its width to be inferred
    std::vector<NatPtr> lens(br.factors.size());
    int open = -1;
    NatPtr known = nconst(0);
    for (std::size_t j = 0; j < br.factors.size(); ++j) {
      const SpecAst::OutFactor& f = br.factors[j];
      if (f.kind == SpecAst::OutKind::SumSuperpose) {
        lens[j] = f.bound_len;
      } else if (f.len) {
        lens[j] = *f.len;
      } else if (f.expr->op == NatOp::Var && xsub.count(f.expr->name)) {
        for (const LayoutMap::Seg& seg : layout.segs)
          if (seg.name == f.expr->name) lens[j] = seg.len;
      } else if (f.expr->op == NatOp::Const && f.expr->k <= 1) {
        lens[j] = nconst(1);
      }
      if (lens[j]) {
        known = nadd(known, lens[j]);
      } else if (open < 0) {
        open = static_cast<int>(j);
      } else {
        throw LengthMismatch("cannot infer more than one output width");
      }
    }
    if (open >= 0) lens[open] = simplify(nsub(layout.q_count, known));

    // widths must tile Q(n)
    for (std::uint64_t n = 0; n <= 16; ++n) {
      try {
        Env env(n, 0, 0);
        std::uint64_t tot = 0;
        for (const NatPtr& l : lens) tot += eval(l, env);
        if (tot != eval(layout.q_count, env))
          throw LengthMismatch("output widths cover " + std::to_string(tot) +
                               " of " + std::to_string(eval(layout.q_count, env)) +
                               " qubits at n=" + std::to_string(n));
      } catch (const EvalError&) {
        // widths not evaluable at this n (e.g. oversized shifts): skip
      }
    }

    // y-substitutions for bound variables, then guard and phase assembly
    std::map<std::string, NatPtr> sub = xsub;
    NatPtr off = nconst(0);
    for (std::size_t j = 0; j < br.factors.size(); ++j) {
      const SpecAst::OutFactor& f = br.factors[j];
      if (f.kind == SpecAst::OutKind::SumSuperpose)
        sub[f.bound] = seg_of(n_y(), off, lens[j]);
      off = simplify(nadd(off, lens[j]));
    }

    std::vector<BoolPtr> conj;
    PhaseExpr phase = phase_zero();
    for (const PhaseExpr& p : br.phases)
      phase = phase_add(phase, {substitute_all(p.num, sub), p.logden});
    NatPtr k_branch = nconst(0);
    off = nconst(0);
    for (std::size_t j = 0; j < br.factors.size(); ++j) {
      const SpecAst::OutFactor& f = br.factors[j];
      if (f.kind == SpecAst::OutKind::KetExpr) {
        NatPtr full = npow2(lens[j]);
        conj.push_back(beq(seg_of(n_y(), off, lens[j]),
                           nmod(substitute_all(f.expr, sub), full)));
      } else {
        if (f.guard->op != BoolOp::True)
          conj.push_back(substitute_all(f.guard, sub));
        if (f.phase)
          phase = phase_add(phase,
                            {substitute_all(f.phase->num, sub), f.phase->logden});
        NatPtr free_bits = f.bound_len;
        std::vector<BoolPtr> cs;
        conjuncts_of(f.guard, cs);
        for (const BoolPtr& g : cs) {
          if (g->op != BoolOp::Eq) continue;
          auto w = pinned_width(g->u, f.bound, f.bound_len);
          if (!w) w = pinned_width(g->v, f.bound, f.bound_len);
          if (w) free_bits = nsub(free_bits, *w);
        }
        k_branch = nadd(k_branch, free_bits);
      }
      off = simplify(nadd(off, lens[j]));
    }
    if (!k_sum) {
      k_sum = simplify(k_branch);
    } else if (!equal(k_sum, simplify(k_branch))) {
      throw LengthMismatch("branches bind different numbers of qubits");
    }

    PpsaTerm term{simplify(ball(conj)), phase};
    bool dup = false;
    for (const PpsaTerm& t : out.terms)
      dup = dup || (equal(t.guard, term.guard) && phase_equal(t.phase, term.phase));
    if (!dup) out.terms.push_back(std::move(term));
  }

  NatPtr joins = nconst(ast.branches.size() - 1);
  out.beta = simplify(npow2(nadd(joins, k_sum)));
  return out;
}

CompiledSpec compile(const std::string& text) {
  SpecAst ast = parse_spec(text);
  auto [layout, h] = derive_layout(ast);
  CompiledSpec cs;
  cs.name = ast.name;
  cs.layout = layout;
  cs.q_count = layout.q_count;
  cs.hypothesis = h;
  cs.alpha = compile_output(ast, layout);
  std::string diag = wellformed(cs.alpha);
  if (!diag.empty()) throw NonPpsaExpressible(diag);
  return cs;
}

}  // namespace iqc
