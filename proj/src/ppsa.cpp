#include "iqc/ppsa.hpp"

#include <cmath>

#include "json.hpp"

namespace iqc {

PhaseExpr phase_zero() { return PhaseExpr{nconst(0), nconst(0)}; }

NatPtr common_logden(const NatPtr& w1, const NatPtr& w2) {
  if (equal(w1, w2)) return w1;
  if (w1->op == NatOp::Const && w2->op == NatOp::Const)
    return nconst(std::max(w1->k, w2->k));
  // sound over-approximation for symbolic widths
  return simplify(nadd(w1, w2));
}

NatPtr scale_num(const PhaseExpr& ph, const NatPtr& W) {
  if (equal(ph.logden, W)) return ph.num;
  return simplify(nmul(ph.num, npow2(nsub(W, ph.logden))));
}

double eval_phase_frac(const PhaseExpr& ph, const Env& env) {
  std::uint64_t w = eval(ph.logden, env);
  if (w >= 63) throw EvalError("phase denominator too wide for numeric eval");
  std::uint64_t den = std::uint64_t{1} << w;
  return double(eval(ph.num, env) % den) / double(den);
}

std::complex<double> eval_entry(const Ppsa& p, const Env& env) {
  std::complex<double> acc = 0;
  for (const auto& t : p.terms) {
    if (!eval(t.guard, env)) continue;
    double frac = eval_phase_frac(t.phase, env);
    acc += std::polar(1.0, 2.0 * M_PI * frac);
  }
  if (acc == std::complex<double>(0, 0)) return acc;
  double b = double(eval(p.beta, env));
  if (b <= 0) throw EvalError("beta must be positive");
  return acc / std::sqrt(b);
}

std::string wellformed(const Ppsa& p) {
  if (!depends_only_on(p.beta, {"n"})) return "beta depends on more than n";
  const std::vector<std::string> nxy = {"n", "x", "y"};
  for (const auto& t : p.terms) {
    if (!depends_only_on(t.guard, nxy)) return "guard with out-of-scope variable";
    if (!depends_only_on(t.phase.num, nxy)) return "phase numerator with out-of-scope variable";
    if (!depends_only_on(t.phase.logden, {"n"})) return "phase denominator depends on more than n";
  }
  if (p.witness) {
    for (const auto& e : p.witness->xs)
      if (!depends_only_on(e, {"n", "y"})) return "witness xs entry must depend on n,y only";
    for (const auto& e : p.witness->ys)
      if (!depends_only_on(e, {"n", "x"})) return "witness ys entry must depend on n,x only";
  }
  return "";
}

std::optional<Env> check_disjoint(const Ppsa& p, std::uint64_t n_max, const NatPtr& Q) {
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    Env base(n, 0, 0);
    std::uint64_t q = eval(Q, base);
    if (q > 12) break;
    std::uint64_t dim = std::uint64_t{1} << q;
    for (std::uint64_t x = 0; x < dim; ++x)
      for (std::uint64_t y = 0; y < dim; ++y) {
        Env env(n, x, y);
        int fired = 0;
        for (const auto& t : p.terms)
          if (eval(t.guard, env)) ++fired;
        if (fired > 1) return env;
      }
  }
  return std::nullopt;
}

std::optional<Env> validate_witness(const HAlpha& ha, std::uint64_t n_max, const NatPtr& Q) {
  if (!ha.alpha.witness) return Env();  // vacuously invalid: nothing to validate against
  const auto& w = *ha.alpha.witness;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    Env base(n, 0, 0);
    std::uint64_t q = eval(Q, base);
    if (q > 12) break;
    std::uint64_t dim = std::uint64_t{1} << q;
    for (std::uint64_t x = 0; x < dim; ++x)
      for (std::uint64_t y = 0; y < dim; ++y) {
        Env env(n, x, y);
        if (std::abs(eval_entry(ha.alpha, env)) < 1e-12) continue;
        bool found_x = false;
        for (const auto& e : w.xs)
          if (eval(e, env) == x) { found_x = true; break; }
        if (!found_x) return env;
        bool found_y = false;
        for (const auto& e : w.ys)
          if (eval(e, env) == y) { found_y = true; break; }
        if (!found_y) return env;
      }
  }
  return std::nullopt;
}

HAlpha relabel(const HAlpha& ha, const PermPtr& p) {
  if (p->op == PermOp::Id) return ha;
  NatPtr vx = perm_value_inv(p, n_x());
  NatPtr vy = perm_value_inv(p, n_y());
  std::map<std::string, NatPtr> sub = {{"x", vx}, {"y", vy}};
  HAlpha out;
  out.h = simplify(substitute_all(ha.h, sub));
  out.alpha.beta = ha.alpha.beta;
  for (const auto& t : ha.alpha.terms) {
    PpsaTerm nt;
    nt.guard = simplify(substitute_all(t.guard, sub));
    nt.phase.num = simplify(substitute_all(t.phase.num, sub));
    nt.phase.logden = t.phase.logden;
    out.alpha.terms.push_back(std::move(nt));
  }
  if (ha.alpha.witness) {
    SparsityWitness w;
    for (const auto& e : ha.alpha.witness->xs)
      w.xs.push_back(simplify(perm_value(p, substitute(e, "y", vy))));
    for (const auto& e : ha.alpha.witness->ys)
      w.ys.push_back(simplify(perm_value(p, substitute(e, "x", vx))));
    out.alpha.witness = std::move(w);
  }
  return out;
}

HAlpha halpha_substitute_n(const HAlpha& ha, const NatPtr& repl) {
  HAlpha out;
  out.h = substitute(ha.h, "n", repl);
  out.alpha.beta = substitute(ha.alpha.beta, "n", repl);
  for (const auto& t : ha.alpha.terms) {
    PpsaTerm nt;
    nt.guard = substitute(t.guard, "n", repl);
    nt.phase.num = substitute(t.phase.num, "n", repl);
    nt.phase.logden = substitute(t.phase.logden, "n", repl);
    out.alpha.terms.push_back(std::move(nt));
  }
  if (ha.alpha.witness) {
    SparsityWitness w;
    for (const auto& e : ha.alpha.witness->xs) w.xs.push_back(substitute(e, "n", repl));
    for (const auto& e : ha.alpha.witness->ys) w.ys.push_back(substitute(e, "n", repl));
    out.alpha.witness = std::move(w);
  }
  return out;
}

HAlpha pred(const HAlpha& ha) {
  return halpha_substitute_n(ha, nsub(n_n(), nconst(1)));
}

namespace {
bool is_full(const BoolPtr& h) { return h->op == BoolOp::True; }

// does alpha possibly fire at this substituted point: disjunction of guards
BoolPtr fire(const Ppsa& a, const std::string& var, const NatPtr& repl) {
  std::vector<BoolPtr> gs;
  for (const auto& t : a.terms) gs.push_back(substitute(t.guard, var, repl));
  return simplify(bany(gs));
}

// hypothesis of the composition per the three-disjunct forall-z definition,
// discharged through the finite witness of whichever side is sparse
BoolPtr comp_hypothesis(const HAlpha& a1, const HAlpha& a2) {
  bool f1 = is_full(a1.h), f2 = is_full(a2.h);
  if (f1 && f2) return btrue();
  if (f1) {
    // forall z: h2(n,z,y) or alpha1(n,x,z) = 0; alpha1 nonzero only at its ys
    if (!a1.alpha.witness || a1.alpha.witness->ys.empty())
      throw ComposeError("comp_hypothesis: left side not witnessed");
    std::vector<BoolPtr> cs;
    for (const auto& e : a1.alpha.witness->ys)
      cs.push_back(bor(bnot(fire(a1.alpha, "y", e)), substitute(a2.h, "x", e)));
    return simplify(ball(cs));
  }
  if (f2) {
    if (!a2.alpha.witness || a2.alpha.witness->xs.empty())
      throw ComposeError("comp_hypothesis: right side not witnessed");
    std::vector<BoolPtr> cs;
    for (const auto& e : a2.alpha.witness->xs)
      cs.push_back(bor(bnot(fire(a2.alpha, "x", e)), substitute(a1.h, "y", e)));
    return simplify(ball(cs));
  }
  throw ComposeError("comp_hypothesis: both hypotheses restricted");
}
}  // namespace

HAlpha compose(const HAlpha& a1, const HAlpha& a2) {
  // candidate middle values
  std::vector<NatPtr> zs;
  bool from_a2;
  if (a2.alpha.witness && !a2.alpha.witness->xs.empty()) {
    zs = a2.alpha.witness->xs;  // exprs in (n, y)
    from_a2 = true;
  } else if (a1.alpha.witness && !a1.alpha.witness->ys.empty()) {
    zs = a1.alpha.witness->ys;  // exprs in (n, x)
    from_a2 = false;
  } else {
    throw ComposeError("compose: neither operand carries a sparsity witness");
  }
  (void)from_a2;

  HAlpha out;
  out.h = comp_hypothesis(a1, a2);
  out.alpha.beta = simplify(nmul(a1.alpha.beta, a2.alpha.beta));
  for (std::size_t j = 0; j < zs.size(); ++j) {
    // count each middle value once even if candidate exprs collide
    std::vector<BoolPtr> dedup;
    for (std::size_t j2 = 0; j2 < j; ++j2) dedup.push_back(bne(zs[j], zs[j2]));
    BoolPtr dj = ball(dedup);
    for (const auto& t1 : a1.alpha.terms)
      for (const auto& t2 : a2.alpha.terms) {
        PpsaTerm nt;
        BoolPtr g1 = substitute(t1.guard, "y", zs[j]);
        BoolPtr g2 = substitute(t2.guard, "x", zs[j]);
        nt.guard = simplify(band(band(dj, g1), g2));
        if (nt.guard->op == BoolOp::False) continue;
        PhaseExpr p1{substitute(t1.phase.num, "y", zs[j]), t1.phase.logden};
        PhaseExpr p2{substitute(t2.phase.num, "x", zs[j]), t2.phase.logden};
        NatPtr W = common_logden(p1.logden, p2.logden);
        nt.phase.num = simplify(nadd(scale_num(p1, W), scale_num(p2, W)));
        nt.phase.logden = W;
        out.alpha.terms.push_back(std::move(nt));
      }
  }
  if (a1.alpha.witness && a2.alpha.witness && !a1.alpha.witness->xs.empty() &&
      !a2.alpha.witness->xs.empty()) {
    SparsityWitness w;
    for (const auto& e2 : a2.alpha.witness->xs)
      for (const auto& e1 : a1.alpha.witness->xs)
        w.xs.push_back(simplify(substitute(e1, "y", e2)));
    for (const auto& e1 : a1.alpha.witness->ys)
      for (const auto& e2 : a2.alpha.witness->ys)
        w.ys.push_back(simplify(substitute(e2, "x", e1)));
    out.alpha.witness = std::move(w);
  }
  return out;
}

HAlpha restrict_hypothesis(const HAlpha& ha, const BoolPtr& extra) {
  HAlpha out = ha;
  out.h = simplify(band(ha.h, extra));
  return out;
}

Ppsa ppsa_simplify(const Ppsa& p) {
  Ppsa out;
  out.beta = simplify(p.beta);
  for (const auto& t : p.terms) {
    PpsaTerm nt;
    nt.guard = simplify(t.guard);
    if (nt.guard->op == BoolOp::False) continue;
    nt.phase.num = simplify(t.phase.num);
    nt.phase.logden = simplify(t.phase.logden);
    out.terms.push_back(std::move(nt));
  }
  if (p.witness) {
    SparsityWitness w;
    for (const auto& e : p.witness->xs) w.xs.push_back(simplify(e));
    for (const auto& e : p.witness->ys) w.ys.push_back(simplify(e));
    out.witness = std::move(w);
  }
  return out;
}

HAlpha halpha_simplify(const HAlpha& ha) {
  return HAlpha{simplify(ha.h), ppsa_simplify(ha.alpha)};
}

std::string halpha_to_json(const HAlpha& ha) {
  nlohmann::json j;
  j["h"] = to_string(ha.h);
  j["beta"] = to_string(ha.alpha.beta);
  j["terms"] = nlohmann::json::array();
  for (const auto& t : ha.alpha.terms) {
    j["terms"].push_back({{"guard", to_string(t.guard)},
                          {"num", to_string(t.phase.num)},
                          {"logden", to_string(t.phase.logden)}});
  }
  if (ha.alpha.witness) {
    nlohmann::json w;
    w["xs"] = nlohmann::json::array();
    for (const auto& e : ha.alpha.witness->xs) w["xs"].push_back(to_string(e));
    w["ys"] = nlohmann::json::array();
    for (const auto& e : ha.alpha.witness->ys) w["ys"].push_back(to_string(e));
    j["witness"] = w;
  }
  return j.dump(2);
}

HAlpha halpha_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  HAlpha ha;
  ha.h = parse_bool(j.at("h").get<std::string>());
  ha.alpha.beta = parse_nat(j.at("beta").get<std::string>());
  for (const auto& t : j.at("terms")) {
    PpsaTerm nt;
    nt.guard = parse_bool(t.at("guard").get<std::string>());
    nt.phase.num = parse_nat(t.at("num").get<std::string>());
    nt.phase.logden = parse_nat(t.at("logden").get<std::string>());
    ha.alpha.terms.push_back(std::move(nt));
  }
  if (j.contains("witness")) {
    SparsityWitness w;
    for (const auto& e : j["witness"].at("xs")) w.xs.push_back(parse_nat(e.get<std::string>()));
    for (const auto& e : j["witness"].at("ys")) w.ys.push_back(parse_nat(e.get<std::string>()));
    ha.alpha.witness = std::move(w);
  }
  return ha;
}

}  // namespace iqc
