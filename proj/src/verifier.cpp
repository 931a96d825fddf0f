#include "iqc/verifier.hpp"

#include <cmath>

#include "json.hpp"

namespace iqc {

namespace {

HAlpha identity_halpha() {
  HAlpha ha;
  ha.h = btrue();
  ha.alpha.beta = nconst(1);
  ha.alpha.terms.push_back(PpsaTerm{beq(n_y(), n_x()), phase_zero()});
  ha.alpha.witness = SparsityWitness{{n_y()}, {n_x()}};
  return ha;
}

bool contains_fix(const IsqirPtr& s) {
  switch (s->kind) {
    case IsqirKind::Fix: return true;
    case IsqirKind::Seq: return contains_fix(s->s1) || contains_fix(s->s2);
    case IsqirKind::Relabel: return contains_fix(s->s1);
    default: return false;
  }
}

// delta-weighted sum of phase numerators, all lifted to logden W
NatPtr phase_sum(const Ppsa& a, const NatPtr& W) {
  NatPtr acc = nconst(0);
  for (const auto& t : a.terms)
    acc = nadd(acc, nmul(ndelta(t.guard), nmod(scale_num(t.phase, W), npow2(W))));
  return acc;
}

NatPtr count_sum(const Ppsa& a) {
  NatPtr acc = nconst(0);
  for (const auto& t : a.terms) acc = nadd(acc, ndelta(t.guard));
  return acc;
}

// expanded-tree print size, saturating; the s-expression printer expands
// shared subdags, so big formulas only get the let-encoded SMT text
std::uint64_t tree_size(const NatPtr& e, std::map<const void*, std::uint64_t>& memo);
std::uint64_t tree_size(const BoolPtr& e, std::map<const void*, std::uint64_t>& memo);

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t cap = 1u << 30;
  return a > cap - std::min(cap, b) ? cap : a + b;
}

std::uint64_t tree_size(const NatPtr& e, std::map<const void*, std::uint64_t>& memo) {
  auto it = memo.find(e.get());
  if (it != memo.end()) return it->second;
  std::uint64_t s = 1;
  if (e->a) s = sat_add(s, tree_size(e->a, memo));
  if (e->b) s = sat_add(s, tree_size(e->b, memo));
  if (e->c) s = sat_add(s, tree_size(e->c, memo));
  if (e->w) s = sat_add(s, tree_size(e->w, memo));
  if (e->cond) s = sat_add(s, tree_size(e->cond, memo));
  memo[e.get()] = s;
  return s;
}
std::uint64_t tree_size(const BoolPtr& e, std::map<const void*, std::uint64_t>& memo) {
  auto it = memo.find(e.get());
  if (it != memo.end()) return it->second;
  std::uint64_t s = 1;
  if (e->l) s = sat_add(s, tree_size(e->l, memo));
  if (e->r) s = sat_add(s, tree_size(e->r, memo));
  if (e->u) s = sat_add(s, tree_size(e->u, memo));
  if (e->v) s = sat_add(s, tree_size(e->v, memo));
  memo[e.get()] = s;
  return s;
}

const char* verdict_name(SolverResult::Verdict v) {
  switch (v) {
    case SolverResult::Verdict::Valid: return "valid";
    case SolverResult::Verdict::Invalid: return "invalid";
    default: return "unknown";
  }
}

}  // namespace

HAlpha derive_halpha(const IsqirPtr& s, const Registry& reg) {
  switch (s->kind) {
    case IsqirKind::Const: {
      HAlpha acc = identity_halpha();
      for (const SqirOp& op : s->block)
        acc = halpha_simplify(compose(acc, op_halpha(op, reg)));
      return acc;
    }
    case IsqirKind::Seq:
      return halpha_simplify(
          compose(derive_halpha(s->s1, reg), derive_halpha(s->s2, reg)));
    case IsqirKind::Relabel:
      return halpha_simplify(relabel(derive_halpha(s->s1, reg), s->perm));
    case IsqirKind::Fix:
      throw IllTypedError("derive_halpha: fix node has no derived amplitude");
    case IsqirKind::Oracle:
      throw IllTypedError("derive_halpha: oracle nodes need an oracle judgement");
  }
  throw std::logic_error("derive_halpha: bad node");
}

BoolPtr equiv_formula(const BoolPtr& h, const Ppsa& a1, const Ppsa& a2,
                      const BoolPtr& n_constraint) {
  NatPtr W = nconst(0);
  for (const auto& t : a1.terms) W = common_logden(W, t.phase.logden);
  for (const auto& t : a2.terms) W = common_logden(W, t.phase.logden);
  std::vector<BoolPtr> conj = {
      beq(a1.beta, a2.beta),
      beq(count_sum(a1), count_sum(a2)),
      beq(nmod(phase_sum(a1, W), npow2(W)), nmod(phase_sum(a2, W), npow2(W))),
  };
  return simplify(bor(bnot(band(n_constraint, h)), ball(conj)));
}

Verifier::Verifier(Registry reg, SolverConfig cfg)
    : reg_(std::move(reg)), cfg_(std::move(cfg)) {}

SmtSolver& Verifier::solver_for(const NatPtr& qubits) {
  std::string key = qubits ? to_string(qubits) : "-";
  auto it = solvers_.find(key);
  if (it != solvers_.end()) return *it->second;
  SolverConfig cfg = cfg_;
  if (cfg.mode == SolverMode::Bounded && qubits) {
    cfg.width_of = qubits;
    // stay inside the 24-bit instantiation limit
    while (cfg.n_max > 0) {
      try {
        if (eval(qubits, Env(cfg.n_max, 0, 0)) <= 24) break;
      } catch (const EvalError&) {
      }
      --cfg.n_max;
    }
  }
  return *(solvers_[key] = std::make_unique<SmtSolver>(std::move(cfg)));
}

SolverResult Verifier::check_equiv(const BoolPtr& h, const Ppsa& a1,
                                   const Ppsa& a2, const BoolPtr& n_constraint,
                                   const NatPtr& qubits) {
  return solver_for(qubits).check_valid(equiv_formula(h, a1, a2, n_constraint));
}

ProofTrace Verifier::check_fix(const IsqirPtr& s, const HAlpha& target,
                               const NatPtr& qubits) {
  using V = SolverResult::Verdict;
  ProofTrace tr;
  tr.accepted = true;
  std::uint64_t k = s->bases.size();

  for (std::uint64_t i = 0; i < k; ++i) {
    Obligation ob{Obligation::Kind::BaseCase, "fix-base",
                  "base[" + std::to_string(i) + "]", nullptr, i};
    ObligationResult res{ob, V::Unknown, std::nullopt, ""};
    try {
      HAlpha base = derive_halpha(isq_const(s->bases[i]), reg_);
      HAlpha ti = halpha_simplify(halpha_substitute_n(target, nconst(i)));
      HAlpha bi = halpha_simplify(halpha_substitute_n(base, nconst(i)));
      std::uint64_t q = eval(qubits, Env(i, 0, 0));
      if (q <= 12) {
        std::uint64_t dim = std::uint64_t{1} << q;
        res.verdict = V::Valid;
        res.note = "bounded evaluation";
        for (std::uint64_t x = 0; x < dim && res.verdict == V::Valid; ++x)
          for (std::uint64_t y = 0; y < dim; ++y) {
            Env env(i, x, y);
            if (!eval(ti.h, env)) continue;
            if (std::abs(eval_entry(ti.alpha, env) - eval_entry(bi.alpha, env)) >
                1e-9) {
              res.verdict = V::Invalid;
              res.counterexample = env;
              break;
            }
          }
      } else {
        res.obligation.formula =
            equiv_formula(ti.h, ti.alpha, bi.alpha, btrue());
        SolverResult r =
            check_equiv(ti.h, ti.alpha, bi.alpha, btrue(), qubits);
        res.verdict = r.verdict;
        res.counterexample = r.counterexample;
        res.note = r.detail;
      }
    } catch (const std::exception& e) {
      res.verdict = V::Unknown;
      res.note = e.what();
    }
    if (res.verdict != V::Valid) {
      tr.accepted = false;
      if (tr.failure.empty())
        tr.failure = "base case " + std::to_string(i) + " failed";
    }
    tr.steps.push_back(std::move(res));
    if (!tr.accepted) return tr;
  }

  // inductive step
  if (contains_fix(s->left) || contains_fix(s->right))
    throw ComposeError("check_fix: recursion arm contains fix (no witness)");
  HAlpha aL = derive_halpha(s->left, reg_);
  HAlpha aR = derive_halpha(s->right, reg_);
  HAlpha rec = pred(target);
  // the size-(n-1) instance sits inside the full register as U (x) I:
  // its judgement extends to every coordinate pair whose low Q(n-1) bits
  // satisfy the hypothesis, with the high bits passed through unchanged
  NatPtr qprev = simplify(substitute(qubits, "n", nsub(n_n(), nconst(1))));
  NatPtr dim = npow2(qprev);
  std::map<std::string, NatPtr> low = {{"x", nmod(n_x(), dim)},
                                       {"y", nmod(n_y(), dim)}};
  BoolPtr hi_eq = beq(ndiv(n_x(), dim), ndiv(n_y(), dim));
  rec.h = substitute_all(rec.h, low);
  for (PpsaTerm& t : rec.alpha.terms) {
    t.guard = band(substitute_all(t.guard, low), hi_eq);
    t.phase.num = substitute_all(t.phase.num, low);
  }
  rec = relabel(rec, s->perm);
  HAlpha comp = halpha_simplify(compose(compose(aL, rec), aR));
  BoolPtr step = bge(n_n(), nconst(k));

  {
    // the recursive call is only specified on its own hypothesis
    Obligation ob{Obligation::Kind::Subset, "fix-step", "hypothesis",
                  simplify(bor(bnot(band(step, target.h)), comp.h)), 0};
    ObligationResult res{ob, V::Unknown, std::nullopt, ""};
    SolverResult r = solver_for(qubits).check_valid(ob.formula);
    res.verdict = r.verdict;
    res.counterexample = r.counterexample;
    res.note = r.detail;
    if (!r.valid()) {
      tr.accepted = false;
      tr.failure = "inductive hypothesis coverage failed";
    }
    tr.steps.push_back(std::move(res));
    if (!tr.accepted) return tr;
  }

  Obligation ob{Obligation::Kind::Equiv, "fix-step", "amplitude",
                equiv_formula(target.h, target.alpha, comp.alpha, step), 0};
  ObligationResult res{ob, V::Unknown, std::nullopt, ""};
  SolverResult r = solver_for(qubits).check_valid(ob.formula);
  res.verdict = r.verdict;
  res.counterexample = r.counterexample;
  res.note = r.detail;
  if (!r.valid()) {
    tr.accepted = false;
    tr.failure = "inductive amplitude equivalence failed";
  }
  tr.steps.push_back(std::move(res));
  return tr;
}

ProofTrace Verifier::check_judgement(const HAlpha& target, const IsqirPtr& s,
                                     const NatPtr& qubits) {
  ProofTrace tr;
  std::string wf = wellformed(target.alpha);
  if (!wf.empty()) {
    tr.failure = "target amplitude not well-formed: " + wf;
    return tr;
  }
  if (!single_fix_per_path(s)) {
    tr.failure = "candidate violates the single-fix structure";
    return tr;
  }
  try {
    if (s->kind == IsqirKind::Fix) {
      tr = check_fix(s, target, qubits);
    } else if (contains_fix(s)) {
      tr.failure = "fix below the root is not supported";
      return tr;
    } else {
      HAlpha derived = derive_halpha(s, reg_);
      Obligation ob{Obligation::Kind::Equiv, "replace",
                    "root", equiv_formula(target.h, target.alpha,
                                          derived.alpha, btrue()), 0};
      SolverResult r = solver_for(qubits).check_valid(ob.formula);
      tr.steps.push_back({ob, r.verdict, r.counterexample, r.detail});
      tr.accepted = r.valid();
      if (!tr.accepted) tr.failure = "amplitude equivalence failed";
    }
  } catch (const std::exception& e) {
    tr.accepted = false;
    tr.failure = e.what();
    return tr;
  }

  if (!tr.accepted) return tr;

  // numeric pre-screen: the accepted judgement must agree with dense
  // simulation at small sizes (extra conservatism, never a substitute for
  // the obligations above)
  for (std::uint64_t n = 0; n <= 4; ++n) {
    std::uint64_t q;
    try {
      q = eval(qubits, Env(n, 0, 0));
    } catch (const EvalError&) {
      break;
    }
    if (q > 7) break;
    try {
      Mat u = program_unitary(s, n, q, reg_);
      Mat m = ppsa_to_matrix(target.alpha, n, q);
      if (max_diff_on_hypothesis(target.h, m, u, n) > 1e-7) {
        tr.accepted = false;
        tr.failure = "simulation disagrees at n=" + std::to_string(n);
        return tr;
      }
    } catch (const EvalError& e) {
      tr.accepted = false;
      tr.failure = std::string("amplitude not evaluable: ") + e.what();
      return tr;
    }
  }
  return tr;
}

std::string trace_to_json(const ProofTrace& t) {
  nlohmann::json j;
  j["accepted"] = t.accepted;
  j["failure"] = t.failure;
  j["steps"] = nlohmann::json::array();
  for (const auto& s : t.steps) {
    nlohmann::json step;
    switch (s.obligation.kind) {
      case Obligation::Kind::BaseCase: step["kind"] = "base-case"; break;
      case Obligation::Kind::Equiv: step["kind"] = "equiv"; break;
      case Obligation::Kind::Subset: step["kind"] = "subset"; break;
    }
    step["rule"] = s.obligation.rule;
    step["where"] = s.obligation.where;
    if (s.obligation.formula) {
      std::map<const void*, std::uint64_t> memo;
      if (tree_size(s.obligation.formula, memo) <= 20000)
        step["formula"] = to_string(s.obligation.formula);
      step["smtlib"] = encode_bv(s.obligation.formula);
    }
    step["verdict"] = verdict_name(s.verdict);
    if (!s.note.empty()) step["note"] = s.note;
    if (s.counterexample) {
      nlohmann::json cex;
      for (const auto& [k, v] : s.counterexample->vars) cex[k] = v;
      step["counterexample"] = cex;
    }
    j["steps"].push_back(std::move(step));
  }
  return j.dump(2);
}

}  // namespace iqc
