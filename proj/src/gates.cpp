#include "iqc/gates.hpp"

namespace iqc {

SqirOp op_gate(std::string name, std::vector<NatPtr> args, NatPtr param) {
  SqirOp op;
  op.kind = SqirOp::Kind::Gate;
  op.gate.name = std::move(name);
  op.gate.args = std::move(args);
  op.gate.param = std::move(param);
  return op;
}

SqirOp op_call(std::string name, NatPtr size) {
  SqirOp op;
  op.kind = SqirOp::Kind::Call;
  op.call.name = std::move(name);
  op.call.size = std::move(size);
  return op;
}

namespace {
const PrimitiveGate kPrimitives[] = {
    {"ID", 1, false}, {"H", 1, false},  {"X", 1, false},  {"Y", 1, false},
    {"Z", 1, false},  {"S", 1, false},  {"T", 1, false},  {"CX", 2, false},
    {"CZ", 2, false}, {"CS", 2, false}, {"CT", 2, false}, {"SWAP", 2, false},
    {"CP", 2, true},  {"CCX", 3, false}, {"MAJ", 3, false}, {"UMA", 3, false},
};
}  // namespace

const PrimitiveGate* find_primitive(const std::string& name) {
  for (const auto& p : kPrimitives)
    if (p.name == name) return &p;
  return nullptr;
}

std::vector<std::string> primitive_names() {
  std::vector<std::string> out;
  for (const auto& p : kPrimitives) out.push_back(p.name);
  return out;
}

namespace {
HAlpha one_term(BoolPtr guard, PhaseExpr ph, NatPtr beta, SparsityWitness w) {
  HAlpha ha;
  ha.h = btrue();
  ha.alpha.beta = std::move(beta);
  ha.alpha.terms.push_back(PpsaTerm{std::move(guard), std::move(ph)});
  ha.alpha.witness = std::move(w);
  return ha;
}

// value with bit q cleared
NatPtr clear_bit(const NatPtr& v, const NatPtr& q) {
  return nxor(v, nshl(nbit(v, q), q));
}
// x and y agree away from bit q
BoolPtr rest_equal(const NatPtr& q) {
  return beq(clear_bit(n_x(), q), clear_bit(n_y(), q));
}
// value with bit q flipped
NatPtr flip_bit(const NatPtr& v, const NatPtr& q) { return nxor(v, npow2(q)); }

// diagonal gate: y = x, given phase
HAlpha diagonal(NatPtr num, NatPtr logden) {
  return one_term(beq(n_x(), n_y()), PhaseExpr{std::move(num), std::move(logden)},
                  nconst(1), SparsityWitness{{n_y()}, {n_x()}});
}

// classical gate: y = f(x) with f an involution given as exprs
HAlpha involution(NatPtr f_of_x, NatPtr finv_of_y) {
  BoolPtr guard = beq(n_y(), f_of_x);
  return one_term(std::move(guard), PhaseExpr{nconst(0), nconst(0)}, nconst(1),
                  SparsityWitness{{std::move(finv_of_y)}, {std::move(f_of_x)}});
}
}  // namespace

HAlpha gate_halpha(const SqirGate& g) {
  const PrimitiveGate* p = find_primitive(g.name);
  if (!p) throw GateError("unknown gate: " + g.name);
  if ((int)g.args.size() != p->arity) throw GateError(g.name + ": bad arity");
  if (p->has_param != (g.param != nullptr)) throw GateError(g.name + ": parameter mismatch");
  const NatPtr x = n_x(), y = n_y();

  if (g.name == "ID")
    return one_term(beq(x, y), phase_zero(), nconst(1),
                    SparsityWitness{{y}, {x}});
  if (g.name == "H") {
    const NatPtr& q = g.args[0];
    return one_term(rest_equal(q),
                    PhaseExpr{nmul(nbit(x, q), nbit(y, q)), nconst(1)}, nconst(2),
                    SparsityWitness{{y, flip_bit(y, q)}, {x, flip_bit(x, q)}});
  }
  if (g.name == "X") {
    const NatPtr& q = g.args[0];
    return involution(flip_bit(x, q), flip_bit(y, q));
  }
  if (g.name == "Y") {
    // Y = i X Z up to the global i: phase (1 + 2 x_q)/4 turns
    const NatPtr& q = g.args[0];
    return one_term(beq(y, flip_bit(x, q)),
                    PhaseExpr{nadd(nconst(1), nmul(nconst(2), nbit(x, q))), nconst(2)},
                    nconst(1), SparsityWitness{{flip_bit(y, q)}, {flip_bit(x, q)}});
  }
  if (g.name == "Z") return diagonal(nbit(x, g.args[0]), nconst(1));
  if (g.name == "S") return diagonal(nbit(x, g.args[0]), nconst(2));
  if (g.name == "T") return diagonal(nbit(x, g.args[0]), nconst(3));
  if (g.name == "CZ") return diagonal(nmul(nbit(x, g.args[0]), nbit(x, g.args[1])), nconst(1));
  if (g.name == "CS") return diagonal(nmul(nbit(x, g.args[0]), nbit(x, g.args[1])), nconst(2));
  if (g.name == "CT") return diagonal(nmul(nbit(x, g.args[0]), nbit(x, g.args[1])), nconst(3));
  if (g.name == "CP")
    return diagonal(nmul(nbit(x, g.args[0]), nbit(x, g.args[1])), g.param);
  if (g.name == "CX") {
    const NatPtr &c = g.args[0], &t = g.args[1];
    auto f = [&](const NatPtr& v) { return nxor(v, nshl(nbit(v, c), t)); };
    return involution(f(x), f(y));
  }
  if (g.name == "CCX") {
    const NatPtr &a = g.args[0], &b = g.args[1], &t = g.args[2];
    auto f = [&](const NatPtr& v) {
      return nxor(v, nshl(nmul(nbit(v, a), nbit(v, b)), t));
    };
    return involution(f(x), f(y));
  }
  if (g.name == "SWAP") {
    const NatPtr &a = g.args[0], &b = g.args[1];
    auto f = [&](const NatPtr& v) {
      NatPtr t = nxor(nbit(v, a), nbit(v, b));
      return nxor(nxor(v, nshl(t, a)), nshl(t, b));
    };
    return involution(f(x), f(y));
  }
  if (g.name == "MAJ" || g.name == "UMA") {
    // ripple-carry building blocks, args (carry, b, a)
    const NatPtr &c = g.args[0], &b = g.args[1], &a = g.args[2];
    SqirGate cx_ab{"CX", {a, b}, nullptr};
    SqirGate cx_ac{"CX", {a, c}, nullptr};
    SqirGate ccx{"CCX", {c, b, a}, nullptr};
    SqirGate cx_cb{"CX", {c, b}, nullptr};
    if (g.name == "MAJ") {
      HAlpha h1 = compose(gate_halpha(cx_ab), gate_halpha(cx_ac));
      return halpha_simplify(compose(h1, gate_halpha(ccx)));
    }
    HAlpha h1 = compose(gate_halpha(ccx), gate_halpha(cx_ac));
    return halpha_simplify(compose(h1, gate_halpha(cx_cb)));
  }
  throw GateError("gate without template: " + g.name);
}

HAlpha op_halpha(const SqirOp& op, const Registry& reg) {
  if (op.kind == SqirOp::Kind::Gate) return gate_halpha(op.gate);
  auto it = reg.components.find(op.call.name);
  if (it == reg.components.end())
    throw GateError("unregistered component: " + op.call.name);
  return halpha_substitute_n(it->second.halpha, op.call.size);
}

bool equal(const SqirGate& a, const SqirGate& b) {
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal(a.args[i], b.args[i])) return false;
  if (!!a.param != !!b.param) return false;
  if (a.param && !equal(a.param, b.param)) return false;
  return true;
}

bool equal(const SqirOp& a, const SqirOp& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == SqirOp::Kind::Gate) return equal(a.gate, b.gate);
  return a.call.name == b.call.name && equal(a.call.size, b.call.size);
}

std::string to_string(const SqirOp& op) {
  if (op.kind == SqirOp::Kind::Call)
    return "(call " + op.call.name + " " + to_string(op.call.size) + ")";
  std::string s = "(" + op.gate.name;
  for (const auto& a : op.gate.args) s += " " + to_string(a);
  if (op.gate.param) s += " " + to_string(op.gate.param);
  return s + ")";
}

SqirOp parse_sqir_op(const std::string& s) {
  // (NAME arg...) or (call NAME size)
  size_t open = s.find('(');
  if (open == std::string::npos) throw ParseError("expected '(' in gate");
  size_t pos = open + 1;
  auto read_tok = [&]() {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    size_t start = pos;
    while (pos < s.size() && !std::isspace((unsigned char)s[pos]) && s[pos] != '(' &&
           s[pos] != ')')
      ++pos;
    return s.substr(start, pos - start);
  };
  auto read_expr = [&]() {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    size_t start = pos;
    if (pos < s.size() && s[pos] == '(') {
      int depth = 0;
      do {
        if (s[pos] == '(') ++depth;
        if (s[pos] == ')') --depth;
        ++pos;
        if (pos > s.size()) throw ParseError("unbalanced parens in gate args");
      } while (depth > 0);
    } else {
      while (pos < s.size() && !std::isspace((unsigned char)s[pos]) && s[pos] != ')') ++pos;
    }
    return parse_nat(s.substr(start, pos - start));
  };
  std::string name = read_tok();
  if (name == "call") {
    std::string cname = read_tok();
    NatPtr size = read_expr();
    return op_call(cname, size);
  }
  const PrimitiveGate* p = find_primitive(name);
  if (!p) throw ParseError("unknown gate name: " + name);
  std::vector<NatPtr> args;
  for (int i = 0; i < p->arity; ++i) args.push_back(read_expr());
  NatPtr param;
  if (p->has_param) param = read_expr();
  return op_gate(name, std::move(args), std::move(param));
}

}  // namespace iqc
