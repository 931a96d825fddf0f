#include "iqc/oracle.hpp"

#include <sstream>

namespace iqc {

namespace {

// thrown internally; surfaces as OracleVerdict::Unsupported
struct Unsup {
  std::string why;
};

SignedExpr sx_zero_expr() { return {nconst(0), nconst(0)}; }

SignedExpr sx_add(const SignedExpr& a, const SignedExpr& b) {
  return {nadd(a.pos, b.pos), nadd(a.neg, b.neg)};
}

SignedExpr sx_mul(const SignedExpr& a, const SignedExpr& b) {
  return {nadd(nmul(a.pos, b.pos), nmul(a.neg, b.neg)),
          nadd(nmul(a.pos, b.neg), nmul(a.neg, b.pos))};
}

SignedExpr sx_simplify(const SignedExpr& a) {
  return {simplify(a.pos), simplify(a.neg)};
}

bool sx_is_zero(const SignedExpr& a) {
  return equal(simplify(a.pos), simplify(a.neg));
}

// a * S_f + b * 2^n with S_f as the free variable "s"
SignedExpr affine_value(const AffineSum& ab) {
  SignedExpr s{nvar("s"), nconst(0)};
  SignedExpr p2{npow2(n_n()), nconst(0)};
  return sx_add(sx_mul(ab.a, s), sx_mul(ab.b, p2));
}

// Hadamard cascade on wires 1..n of an (n+1)-wire register:
//   (1/sqrt(2^n)) delta(x[0]=y[0]) (-1)^{(x>>1).(y>>1)}
Ppsa sh_alpha() {
  Ppsa p;
  p.beta = npow2(n_n());
  PpsaTerm t;
  t.guard = beq(nbit(n_x(), nconst(0)), nbit(n_y(), nconst(0)));
  t.phase.num =
      nred(NatOp::RedXor, n_n(), nand_(nshr(n_x(), nconst(1)), nshr(n_y(), nconst(1))));
  t.phase.logden = nconst(1);
  p.terms.push_back(t);
  return p;
}

IsqirPtr sh_program() {
  return isq_fix(perm_id(), {SqirProgram{}}, isq_const({}),
                 isq_const({op_gate("H", {n_n()})}));
}

void conjuncts(const BoolPtr& b, std::vector<BoolPtr>& out) {
  if (b->op == BoolOp::And) {
    conjuncts(b->l, out);
    conjuncts(b->r, out);
  } else if (b->op != BoolOp::True) {
    out.push_back(b);
  }
}

bool is_var(const NatPtr& e, const char* name) {
  return e->op == NatOp::Var && e->name == name;
}

// signed value of alpha(n, xe, ye) * sqrt(beta); phases must be real, so
// every term's log-denominator has to close to a constant 0 or 1
SignedExpr signed_entry(const Ppsa& p, const BoolPtr& h, const NatPtr& xe,
                        const NatPtr& ye) {
  std::map<std::string, NatPtr> sub{{"x", xe}, {"y", ye}};
  SignedExpr out = sx_zero_expr();
  for (const PpsaTerm& t : p.terms) {
    BoolPtr g = simplify(substitute_all(band(h, t.guard), sub));
    if (g->op == BoolOp::False) continue;
    NatPtr ld = simplify(substitute_all(t.phase.logden, sub));
    if (ld->op != NatOp::Const || ld->k > 1)
      throw Unsup{"term phase is not provably real (logden " + to_string(ld) + ")"};
    if (ld->k == 0) {
      out.pos = nadd(out.pos, ndelta(g));
    } else {
      NatPtr parity = nbit(substitute_all(t.phase.num, sub), nconst(0));
      out.pos = nadd(out.pos, ndelta(band(g, beq(parity, nconst(0)))));
      out.neg = nadd(out.neg, ndelta(band(g, beq(parity, nconst(1)))));
    }
  }
  return sx_simplify(out);
}

// log2 of a magnitude expression known to be a power of two
NatPtr pow2_log(const NatPtr& beta) {
  NatPtr s = simplify(beta);
  if (s->op == NatOp::Const) {
    std::uint64_t k = s->k;
    if (k == 0 || (k & (k - 1)) != 0)
      throw Unsup{"beta " + to_string(s) + " is not a power of two"};
    std::uint64_t lg = 0;
    while ((1ull << lg) != k) ++lg;
    return nconst(lg);
  }
  if (s->op == NatOp::Pow2) return s->a;
  if (s->op == NatOp::Mul) return nadd(pow2_log(s->a), pow2_log(s->b));
  throw Unsup{"beta " + to_string(s) + " is not a recognizable power of two"};
}

void flatten(const IsqirPtr& s, std::vector<IsqirPtr>& out) {
  if (s->kind == IsqirKind::Seq) {
    flatten(s->s1, out);
    flatten(s->s2, out);
  } else {
    out.push_back(s);
  }
}

std::string env_str(const Env& e) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : e.vars) {
    if (!first) os << ", ";
    os << k << " = " << v;
    first = false;
  }
  return os.str();
}

}  // namespace

std::pair<std::int64_t, std::int64_t> affine_witness(std::int64_t g0,
                                                     std::int64_t g1) {
  // g(z) = a z + b through the two points (0, g0), (1, g1)
  return {g1 - g0, g0};
}

AffineSum sum_abstraction(const SymbolicSum& s) {
  AffineSum r;
  r.a = sx_simplify({nadd(s.g.g1.pos, s.g.g0.neg), nadd(s.g.g1.neg, s.g.g0.pos)});
  r.b = sx_simplify(s.g.g0);
  return r;
}

HAlpha oracle_halpha(const NatPtr& n_in) {
  NatPtr q = nslice(n_x(), n_in, nconst(1));  // the queried register
  HAlpha ha;
  ha.h = btrue();
  ha.alpha.beta = nconst(1);
  PpsaTerm t;
  t.guard = band(beq(nshr(n_x(), nconst(1)), nshr(n_y(), nconst(1))),
                 beq(nbit(n_y(), nconst(0)),
                     nxor(nbit(nvar(oracle_table_var()), q), nbit(n_x(), nconst(0)))));
  t.phase = phase_zero();
  ha.alpha.terms.push_back(t);
  ha.alpha.witness =
      SparsityWitness{{n_y(), nxor(n_y(), nconst(1))}, {n_x(), nxor(n_x(), nconst(1))}};
  return ha;
}

OracleReport check_oracle_judgement(const OracleSpec& spec, const IsqirPtr& s,
                                    const Registry& reg, const NatPtr& qubits,
                                    const SolverConfig& cfg) {
  try {
    if (!equal(simplify(qubits), simplify(nadd(n_n(), nconst(1)))))
      throw Unsup{"register is not n+1 wires"};

    std::vector<IsqirPtr> leaves;
    flatten(s, leaves);
    std::size_t oi = leaves.size();
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (leaves[i]->kind == IsqirKind::Oracle) {
        if (oi != leaves.size()) throw Unsup{"more than one oracle call"};
        oi = i;
      }
    }
    if (oi == leaves.size()) throw Unsup{"no oracle call in the program"};
    if (oi == 0 || oi + 1 >= leaves.size() ||
        leaves[oi - 1]->kind != IsqirKind::Fix ||
        leaves[oi + 1]->kind != IsqirKind::Fix)
      throw Unsup{"oracle is not sandwiched between two fix layers"};
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (i == oi || i == oi - 1 || i == oi + 1) continue;
      if (leaves[i]->kind != IsqirKind::Const)
        throw Unsup{"outer parts of the chain are not plain blocks"};
    }
    if (contains_oracle(leaves[oi - 1]) || contains_oracle(leaves[oi + 1]))
      throw Unsup{"nested oracle"};

    // the two inner layers must realize the Hadamard cascade; prove it,
    // do not pattern-match it
    HAlpha sh_target{btrue(), sh_alpha()};
    Verifier v(reg, cfg);
    ProofTrace t1 = v.check_judgement(sh_target, leaves[oi - 1], qubits);
    if (!t1.accepted)
      throw Unsup{"layer before the oracle is not the Hadamard cascade: " + t1.failure};
    if (!equal(leaves[oi - 1], leaves[oi + 1])) {
      ProofTrace t2 = v.check_judgement(sh_target, leaves[oi + 1], qubits);
      if (!t2.accepted)
        throw Unsup{"layer after the oracle is not the Hadamard cascade: " + t2.failure};
    }

    auto derive_chain = [&](std::size_t lo, std::size_t hi) {
      IsqirPtr p = isq_const({});
      for (std::size_t i = lo; i < hi; ++i) p = isq_seq(p, leaves[i]);
      try {
        return derive_halpha(p, reg);
      } catch (const std::runtime_error& e) {
        throw Unsup{std::string("outer block has no derivable amplitude: ") + e.what()};
      }
    };
    HAlpha pre = derive_chain(0, oi - 1);
    HAlpha post = derive_chain(oi + 2, leaves.size());
    if (!pre.alpha.witness || !post.alpha.witness)
      throw Unsup{"outer block amplitude carries no sparsity witness"};
    NatPtr scale_pre = pow2_log(pre.alpha.beta);
    NatPtr scale_post = pow2_log(post.alpha.beta);

    SolverConfig scfg = cfg;
    scfg.width_of = nadd(n_n(), nconst(2));
    scfg.var_bound["s"] = nadd(npow2(n_n()), nconst(1));  // S_f <= 2^n
    SmtSolver solver(scfg);

    for (std::size_t ti = 0; ti < spec.tuples.size(); ++ti) {
      const OracleTuple& tup = spec.tuples[ti];
      std::string tag = "tuple " + std::to_string(ti) + ": ";

      // the hypothesis must pin x and y; the rest may constrain n only
      NatPtr xi, upsilon;
      std::vector<BoolPtr> cs, rest;
      conjuncts(tup.h, cs);
      for (const BoolPtr& c : cs) {
        NatPtr pin;
        const char* which = nullptr;
        if (c->op == BoolOp::Eq) {
          if (is_var(c->u, "x") && depends_only_on(c->v, {"n"})) {
            which = "x"; pin = c->v;
          } else if (is_var(c->v, "x") && depends_only_on(c->u, {"n"})) {
            which = "x"; pin = c->u;
          } else if (is_var(c->u, "y") && depends_only_on(c->v, {"n"})) {
            which = "y"; pin = c->v;
          } else if (is_var(c->v, "y") && depends_only_on(c->u, {"n"})) {
            which = "y"; pin = c->u;
          }
        }
        if (which && std::string(which) == "x" && !xi) xi = pin;
        else if (which && std::string(which) == "y" && !upsilon) upsilon = pin;
        else rest.push_back(c);
      }
      if (!xi || !upsilon) throw Unsup{tag + "hypothesis does not pin x and y"};
      BoolPtr n_cond = ball(rest);
      if (!depends_only_on(n_cond, {"n"}))
        throw Unsup{tag + "hypothesis constrains more than n besides the pins"};

      // entry-point and exit-point candidates at the oracle sandwich
      auto gather = [&](const std::vector<NatPtr>& ws, const char* var,
                        const NatPtr& pin) {
        std::vector<NatPtr> out;
        for (const NatPtr& e : ws) {
          NatPtr c = simplify(substitute(e, var, pin));
          if (!depends_only_on(c, {"n"}))
            throw Unsup{tag + "sandwich entry candidate depends on more than n"};
          bool dup = false;
          for (const NatPtr& o : out) dup = dup || equal(o, c);
          if (!dup) out.push_back(c);
        }
        return out;
      };
      std::vector<NatPtr> us = gather(pre.alpha.witness->ys, "x", xi);
      std::vector<NatPtr> ws = gather(post.alpha.witness->xs, "y", upsilon);

      // distinctness: structural dedup is not enough, prove it
      auto distinct = [&](const std::vector<NatPtr>& es) {
        for (std::size_t i = 0; i < es.size(); ++i)
          for (std::size_t j = i + 1; j < es.size(); ++j) {
            BoolPtr f = bor(bnot(n_cond), bne(es[i], es[j]));
            if (simplify(f)->op == BoolOp::True) continue;
            if (!solver.check_valid(f).valid())
              throw Unsup{tag + "sandwich candidates not provably distinct"};
          }
      };
      distinct(us);
      distinct(ws);

      std::vector<SignedExpr> cu, dw;
      for (const NatPtr& u : us)
        cu.push_back(signed_entry(pre.alpha, pre.h, xi, u));
      for (const NatPtr& w : ws)
        dw.push_back(signed_entry(post.alpha, post.h, w, upsilon));

      // middle factor for (u, w): (1/2^n) sum_i (-1)^{i.D} delta(w[0] =
      // u[0] xor f(i)) with D = (u>>1) xor (w>>1); only D = 0 stays affine
      SignedExpr total = sx_zero_expr();
      for (std::size_t j = 0; j < us.size(); ++j) {
        if (sx_is_zero(cu[j])) continue;
        for (std::size_t m = 0; m < ws.size(); ++m) {
          if (sx_is_zero(dw[m])) continue;
          NatPtr hu = simplify(nshr(us[j], nconst(1)));
          NatPtr hw = simplify(nshr(ws[m], nconst(1)));
          if (!equal(hu, hw)) {
            BoolPtr f = bor(bnot(n_cond), beq(hu, hw));
            if (!solver.check_valid(f).valid())
              throw Unsup{tag + "oracle register is re-queried at a shifted point"};
          }
          NatPtr e0 = simplify(nxor(nbit(us[j], nconst(0)), nbit(ws[m], nconst(0))));
          SymbolicSum ss;
          ss.g.g0 = {ndelta(beq(e0, nconst(0))), nconst(0)};
          ss.g.g1 = {ndelta(beq(e0, nconst(1))), nconst(0)};
          SignedExpr term = affine_value(sum_abstraction(ss));
          total = sx_add(total, sx_mul(sx_mul(cu[j], dw[m]), term));
        }
      }
      total = sx_simplify(total);

      // scales: amplitude = total / (2^n * sqrt(2^F)), target = rhs / sqrt(2^E)
      SignedExpr rhs = signed_entry(tup.alpha, btrue(), xi, upsilon);
      NatPtr E = sx_is_zero(rhs) ? nadd(scale_pre, scale_post)
                                 : pow2_log(tup.alpha.beta);
      NatPtr F = nadd(scale_pre, scale_post);
      NatPtr Es = simplify(E), Fs = simplify(F);
      if (Es->op != NatOp::Const || Fs->op != NatOp::Const)
        throw Unsup{tag + "magnitude scales do not close to constants"};
      std::int64_t dd = std::int64_t(Es->k) - std::int64_t(Fs->k);
      if (dd % 2 != 0)
        throw Unsup{tag + "magnitude scales differ by an odd power of sqrt 2"};
      SignedExpr L = total;
      SignedExpr R = sx_mul(rhs, {npow2(n_n()), nconst(0)});
      if (dd > 0)
        L = sx_mul(L, {nconst(1ull << (dd / 2)), nconst(0)});
      else if (dd < 0)
        R = sx_mul(R, {nconst(1ull << (-dd / 2)), nconst(0)});
      L = sx_simplify(L);
      R = sx_simplify(R);

      BoolPtr eqf = beq(nadd(L.pos, R.neg), nadd(R.pos, L.neg));
      if (tup.up_to_sign)
        eqf = bor(eqf, beq(nadd(L.pos, R.pos), nadd(L.neg, R.neg)));
      std::vector<BoolPtr> prem{n_cond, ble(nvar("s"), npow2(n_n()))};
      std::vector<BoolPtr> alts;
      for (const NatPtr& se : tup.promise.sums) alts.push_back(beq(nvar("s"), se));
      if (alts.empty()) throw Unsup{tag + "empty promise"};
      prem.push_back(bany(alts));
      BoolPtr formula = bor(bnot(ball(prem)), eqf);
      if (!depends_only_on(formula, {"n", "s"}))
        throw Unsup{tag + "obligation mentions variables beyond n and S_f"};

      SolverResult res = solver.check_valid(formula);
      if (res.invalid()) {
        std::string d = tag + "amplitude obligation falsified";
        if (res.counterexample) d += " at " + env_str(*res.counterexample);
        return {OracleVerdict::Reject, d};
      }
      if (res.unknown())
        return {OracleVerdict::Reject, tag + "solver gave no verdict: " + res.detail};
    }
    return {OracleVerdict::Accept, ""};
  } catch (const Unsup& u) {
    return {OracleVerdict::Unsupported, u.why};
  }
}

Mat oracle_program_unitary(const IsqirPtr& s, std::uint64_t n,
                           std::uint64_t qubits, const Registry& reg,
                           std::uint64_t f_bits) {
  if (!contains_oracle(s)) return program_unitary(s, n, qubits, reg);
  if (s->kind == IsqirKind::Seq) {
    return matmul(oracle_program_unitary(s->s2, n, qubits, reg, f_bits),
                  oracle_program_unitary(s->s1, n, qubits, reg, f_bits));
  }
  if (s->kind == IsqirKind::Oracle) {
    if (n > 6 || qubits < n + 1 || qubits > 12)
      throw IllTypedError("oracle instantiation out of range");
    std::size_t dim = std::size_t(1) << qubits;
    std::uint64_t mask = (std::uint64_t(1) << n) - 1;
    Mat m = zero_matrix(dim);
    for (std::uint64_t x = 0; x < dim; ++x) {
      std::uint64_t i = (x >> 1) & mask;
      std::uint64_t y = x ^ ((f_bits >> i) & 1);
      m[y][x] = 1.0;
    }
    return m;
  }
  throw IllTypedError("oracle call under a non-sequential constructor");
}

OracleSpec dj_spec() {
  BoolPtr pins = band(beq(n_x(), nconst(0)), beq(n_y(), nconst(1)));
  OracleSpec spec;

  OracleTuple constant;
  constant.promise.sums = {nconst(0), npow2(n_n())};
  constant.h = pins;
  constant.alpha.beta = nconst(1);
  constant.alpha.terms.push_back({btrue(), phase_zero()});
  constant.up_to_sign = true;  // +1 for f = 0, -1 for f = 1
  spec.tuples.push_back(constant);

  OracleTuple balanced;
  balanced.promise.sums = {npow2(nsub(n_n(), nconst(1)))};
  balanced.h = band(pins, bge(n_n(), nconst(1)));
  balanced.alpha.beta = nconst(1);
  // no terms: the amplitude vanishes
  spec.tuples.push_back(balanced);

  return spec;
}

IsqirPtr dj_program() {
  IsqirPtr prep =
      isq_const({op_gate("X", {nconst(0)}), op_gate("H", {nconst(0)})});
  IsqirPtr sh = sh_program();
  IsqirPtr close = isq_const({op_gate("H", {nconst(0)})});
  return isq_seq(prep,
                 isq_seq(sh, isq_seq(isq_oracle("f"), isq_seq(sh, close))));
}

}  // namespace iqc
