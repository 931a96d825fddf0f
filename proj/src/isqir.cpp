#include "iqc/isqir.hpp"

#include <sstream>

namespace iqc {

namespace {
IsqirPtr mk(IsqirNode n) { return std::make_shared<const IsqirNode>(std::move(n)); }
}

IsqirPtr isq_const(SqirProgram block) {
  IsqirNode n;
  n.kind = IsqirKind::Const;
  n.block = std::move(block);
  return mk(std::move(n));
}
IsqirPtr isq_seq(IsqirPtr a, IsqirPtr b) {
  IsqirNode n;
  n.kind = IsqirKind::Seq;
  n.s1 = std::move(a);
  n.s2 = std::move(b);
  return mk(std::move(n));
}
IsqirPtr isq_relabel(PermPtr p, IsqirPtr s) {
  IsqirNode n;
  n.kind = IsqirKind::Relabel;
  n.perm = std::move(p);
  n.s1 = std::move(s);
  return mk(std::move(n));
}
IsqirPtr isq_fix(PermPtr p, std::vector<SqirProgram> bases, IsqirPtr left, IsqirPtr right) {
  if (bases.empty() || bases.size() > 3)
    throw IllTypedError("fix arity must be 1..3");
  IsqirNode n;
  n.kind = IsqirKind::Fix;
  n.perm = std::move(p);
  n.bases = std::move(bases);
  n.left = std::move(left);
  n.right = std::move(right);
  return mk(std::move(n));
}
IsqirPtr isq_oracle(std::string name) {
  IsqirNode n;
  n.kind = IsqirKind::Oracle;
  n.oracle_name = std::move(name);
  return mk(std::move(n));
}

namespace {
void remap(std::vector<ConcreteOp>& ops, const PermPtr& p, const Env& env) {
  for (auto& op : ops)
    for (auto& q : op.qubits) q = perm_wire(p, env, q);
}

void emit_block(const SqirProgram& block, const Env& env, const Registry& reg,
                std::vector<ConcreteOp>& out);

void emit_program(const IsqirPtr& s, std::uint64_t n, const Registry& reg,
                  std::vector<ConcreteOp>& out) {
  Env env(n, 0, 0);
  switch (s->kind) {
    case IsqirKind::Const:
      emit_block(s->block, env, reg, out);
      return;
    case IsqirKind::Seq:
      emit_program(s->s1, n, reg, out);
      emit_program(s->s2, n, reg, out);
      return;
    case IsqirKind::Relabel: {
      std::vector<ConcreteOp> inner;
      emit_program(s->s1, n, reg, inner);
      remap(inner, s->perm, env);
      out.insert(out.end(), inner.begin(), inner.end());
      return;
    }
    case IsqirKind::Fix: {
      if (n < s->bases.size()) {
        emit_block(s->bases[n], env, reg, out);
        return;
      }
      emit_program(s->left, n, reg, out);
      std::vector<ConcreteOp> rec;
      emit_program(s, n - 1, reg, rec);
      remap(rec, s->perm, env);
      out.insert(out.end(), rec.begin(), rec.end());
      emit_program(s->right, n, reg, out);
      return;
    }
    case IsqirKind::Oracle:
      throw IllTypedError("oracle node has no concrete circuit");
  }
}

void emit_block(const SqirProgram& block, const Env& env, const Registry& reg,
                std::vector<ConcreteOp>& out) {
  for (const auto& op : block) {
    if (op.kind == SqirOp::Kind::Call) {
      auto it = reg.components.find(op.call.name);
      if (it == reg.components.end())
        throw IllTypedError("unregistered component: " + op.call.name);
      emit_program(it->second.program, eval(op.call.size, env), reg, out);
      continue;
    }
    const SqirGate& g = op.gate;
    ConcreteOp c;
    c.name = g.name;
    if (const PrimitiveGate* p = find_primitive(g.name)) {
      (void)p;
      for (const auto& a : g.args) c.qubits.push_back(eval(a, env));
      if (g.param) c.param = eval(g.param, env);
    } else if (auto it = reg.composites.find(g.name); it != reg.composites.end()) {
      const CompositeGate& cg = it->second;
      if ((int)g.args.size() != cg.nargs)
        throw IllTypedError(g.name + ": bad composite arity");
      std::vector<std::uint64_t> starts;
      for (const auto& a : g.args) starts.push_back(eval(a, env));
      for (const auto& [argi, off] : cg.wires) c.qubits.push_back(starts[argi] + off);
      c.comp = &cg;
    } else {
      throw IllTypedError("unknown gate: " + g.name);
    }
    out.push_back(std::move(c));
  }
}
}  // namespace

std::vector<ConcreteOp> instantiate(const IsqirPtr& s, std::uint64_t n, const Registry& reg) {
  std::vector<ConcreteOp> out;
  emit_program(s, n, reg, out);
  return out;
}

std::string validate_well_typed(const IsqirPtr& s, std::uint64_t n_max, const Registry& reg) {
  if (!single_fix_per_path(s)) return "more than one fix on a path";
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    std::vector<ConcreteOp> ops;
    try {
      ops = instantiate(s, n, reg);
    } catch (const std::exception& e) {
      return std::string("instantiate failed at n=") + std::to_string(n) + ": " + e.what();
    }
    for (const auto& op : ops) {
      for (std::size_t i = 0; i < op.qubits.size(); ++i)
        for (std::size_t j = i + 1; j < op.qubits.size(); ++j)
          if (op.qubits[i] == op.qubits[j])
            return op.name + " with repeated wire at n=" + std::to_string(n);
    }
  }
  return "";
}

namespace {
bool sfpp(const IsqirPtr& s, bool seen_fix) {
  switch (s->kind) {
    case IsqirKind::Const:
    case IsqirKind::Oracle:
      return true;
    case IsqirKind::Seq:
      return sfpp(s->s1, seen_fix) && sfpp(s->s2, seen_fix);
    case IsqirKind::Relabel:
      return sfpp(s->s1, seen_fix);
    case IsqirKind::Fix:
      if (seen_fix) return false;
      if (s->bases.empty() || s->bases.size() > 3) return false;
      return sfpp(s->left, true) && sfpp(s->right, true);
  }
  return false;
}
}  // namespace

bool single_fix_per_path(const IsqirPtr& s) { return sfpp(s, false); }

bool contains_oracle(const IsqirPtr& s) {
  switch (s->kind) {
    case IsqirKind::Oracle: return true;
    case IsqirKind::Const: return false;
    case IsqirKind::Seq: return contains_oracle(s->s1) || contains_oracle(s->s2);
    case IsqirKind::Relabel: return contains_oracle(s->s1);
    case IsqirKind::Fix: return contains_oracle(s->left) || contains_oracle(s->right);
  }
  return false;
}

std::size_t program_size(const IsqirPtr& s) {
  switch (s->kind) {
    case IsqirKind::Const: return s->block.size();
    case IsqirKind::Oracle: return 1;
    case IsqirKind::Seq: return 1 + program_size(s->s1) + program_size(s->s2);
    case IsqirKind::Relabel: return 1 + program_size(s->s1);
    case IsqirKind::Fix: {
      std::size_t sz = 1 + program_size(s->left) + program_size(s->right);
      for (const auto& b : s->bases) sz += b.size();
      return sz;
    }
  }
  return 0;
}

std::string to_string(const IsqirPtr& s) {
  switch (s->kind) {
    case IsqirKind::Const: {
      std::string out = "(const";
      for (const auto& op : s->block) out += " " + to_string(op);
      return out + ")";
    }
    case IsqirKind::Seq:
      return "(seq " + to_string(s->s1) + " " + to_string(s->s2) + ")";
    case IsqirKind::Relabel:
      return "(relabel " + to_string(s->perm) + " " + to_string(s->s1) + ")";
    case IsqirKind::Fix: {
      std::string out = "(fix " + std::to_string(s->bases.size()) + " " + to_string(s->perm);
      for (const auto& b : s->bases) {
        out += " (base";
        for (const auto& op : b) out += " " + to_string(op);
        out += ")";
      }
      return out + " " + to_string(s->left) + " " + to_string(s->right) + ")";
    }
    case IsqirKind::Oracle:
      return "(oracle " + s->oracle_name + ")";
  }
  throw std::logic_error("to_string: bad isqir kind");
}

namespace {
struct Cursor {
  const std::string& s;
  std::size_t pos = 0;
  explicit Cursor(const std::string& str) : s(str) {}
  void ws() {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
  }
  char peek() {
    ws();
    if (pos >= s.size()) throw ParseError("unexpected end of program");
    return s[pos];
  }
  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'");
    ++pos;
  }
  std::string token() {
    ws();
    std::size_t start = pos;
    while (pos < s.size() && !std::isspace((unsigned char)s[pos]) && s[pos] != '(' &&
           s[pos] != ')')
      ++pos;
    if (start == pos) throw ParseError("expected token");
    return s.substr(start, pos - start);
  }
  std::string balanced() {
    ws();
    std::size_t start = pos;
    if (s[pos] != '(') return token();
    int depth = 0;
    do {
      if (s[pos] == '(') ++depth;
      if (s[pos] == ')') --depth;
      ++pos;
      if (pos > s.size()) throw ParseError("unbalanced parens");
    } while (depth > 0);
    return s.substr(start, pos - start);
  }
};

SqirProgram parse_block_items(Cursor& c) {
  SqirProgram block;
  while (c.peek() != ')') block.push_back(parse_sqir_op(c.balanced()));
  c.expect(')');
  return block;
}

IsqirPtr parse_node(Cursor& c) {
  c.expect('(');
  std::string head = c.token();
  if (head == "const") {
    return isq_const(parse_block_items(c));
  }
  if (head == "seq") {
    IsqirPtr a = parse_node(c);
    IsqirPtr b = parse_node(c);
    c.expect(')');
    return isq_seq(a, b);
  }
  if (head == "relabel") {
    PermPtr p = parse_perm(c.balanced());
    IsqirPtr body = parse_node(c);
    c.expect(')');
    return isq_relabel(p, body);
  }
  if (head == "fix") {
    std::size_t k = std::stoull(c.token());
    PermPtr p = parse_perm(c.balanced());
    std::vector<SqirProgram> bases;
    for (std::size_t i = 0; i < k; ++i) {
      c.expect('(');
      if (c.token() != "base") throw ParseError("expected (base ...)");
      bases.push_back(parse_block_items(c));
    }
    IsqirPtr l = parse_node(c);
    IsqirPtr r = parse_node(c);
    c.expect(')');
    return isq_fix(p, std::move(bases), l, r);
  }
  if (head == "oracle") {
    std::string name = c.token();
    c.expect(')');
    return isq_oracle(name);
  }
  throw ParseError("unknown program form: " + head);
}
}  // namespace

IsqirPtr parse_isqir(const std::string& text) {
  Cursor c(text);
  IsqirPtr p = parse_node(c);
  c.ws();
  if (c.pos != text.size()) throw ParseError("trailing input after program");
  return p;
}

bool equal(const IsqirPtr& a, const IsqirPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case IsqirKind::Const: {
      if (a->block.size() != b->block.size()) return false;
      for (std::size_t i = 0; i < a->block.size(); ++i)
        if (!equal(a->block[i], b->block[i])) return false;
      return true;
    }
    case IsqirKind::Seq: return equal(a->s1, b->s1) && equal(a->s2, b->s2);
    case IsqirKind::Relabel: return equal(a->perm, b->perm) && equal(a->s1, b->s1);
    case IsqirKind::Fix: {
      if (!equal(a->perm, b->perm) || a->bases.size() != b->bases.size()) return false;
      for (std::size_t i = 0; i < a->bases.size(); ++i) {
        if (a->bases[i].size() != b->bases[i].size()) return false;
        for (std::size_t j = 0; j < a->bases[i].size(); ++j)
          if (!equal(a->bases[i][j], b->bases[i][j])) return false;
      }
      return equal(a->left, b->left) && equal(a->right, b->right);
    }
    case IsqirKind::Oracle: return a->oracle_name == b->oracle_name;
  }
  return false;
}

}  // namespace iqc
