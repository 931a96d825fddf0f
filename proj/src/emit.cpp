#include "iqc/emit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "iqc/families.hpp"
#include "json.hpp"

namespace iqc {

namespace {

// MAJ/UMA at (c, b, a), expanded exactly as the simulator applies them
std::vector<ConcreteOp> expand_op(const ConcreteOp& op) {
  if (op.name != "MAJ" && op.name != "UMA") return {op};
  std::uint64_t c = op.qubits[0], b = op.qubits[1], a = op.qubits[2];
  ConcreteOp cx_ab{"CX", {a, b}, 0, nullptr};
  ConcreteOp cx_ac{"CX", {a, c}, 0, nullptr};
  ConcreteOp ccx{"CCX", {c, b, a}, 0, nullptr};
  ConcreteOp cx_cb{"CX", {c, b}, 0, nullptr};
  if (op.name == "MAJ") return {cx_ab, cx_ac, ccx};
  return {ccx, cx_ac, cx_cb};
}

std::string angle_of(std::uint64_t w) {
  if (w == 0) return "0";
  if (w == 1) return "pi";
  return "pi/" + std::to_string(std::uint64_t(1) << (w - 1));
}

std::uint64_t angle_to_logden(const std::string& a) {
  if (a == "0") return 0;
  if (a == "pi") return 1;
  if (a.rfind("pi/", 0) == 0) {
    std::uint64_t den = std::stoull(a.substr(3));
    if (den == 0 || (den & (den - 1)) != 0)
      throw ParseError("qasm: phase denominator is not a power of two: " + a);
    std::uint64_t w = 1;
    while ((std::uint64_t(1) << (w - 1)) != den) ++w;
    return w;
  }
  throw ParseError("qasm: unreadable phase angle: " + a);
}

const std::pair<const char*, const char*> kQasmNames[] = {
    {"ID", "id"}, {"H", "h"},   {"X", "x"},     {"Y", "y"},
    {"Z", "z"},   {"S", "s"},   {"T", "t"},     {"CX", "cx"},
    {"CZ", "cz"}, {"SWAP", "swap"}, {"CCX", "ccx"},
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

EmitTarget parse_emit_target(const std::string& text) {
  if (text == "isqir") return {EmitTarget::Kind::IsqirText, 0};
  if (text == "halpha") return {EmitTarget::Kind::HAlphaJson, 0};
  if (text == "trace") return {EmitTarget::Kind::ProofTraceJson, 0};
  if (text.rfind("qasm:", 0) == 0)
    return {EmitTarget::Kind::OpenQasm, std::stoull(text.substr(5))};
  throw ParseError("unknown emit target: " + text +
                   " (expected isqir | qasm:N | halpha | trace)");
}

std::string emit_qasm(const IsqirPtr& s, std::uint64_t n, const Registry& reg) {
  std::vector<ConcreteOp> ops;
  for (const ConcreteOp& raw : instantiate(s, n, reg))
    for (const ConcreteOp& op : expand_op(raw)) ops.push_back(op);

  std::uint64_t width = 1;
  for (const ConcreteOp& op : ops) {
    if (op.comp)
      throw GateError("composite " + op.name + " has no gate-list expansion");
    for (std::uint64_t q : op.qubits) width = std::max(width, q + 1);
  }
  if (width > 24) throw DimensionTooLarge("qasm register of " +
                                          std::to_string(width) + " qubits");

  std::ostringstream out;
  out << "OPENQASM 3.0;\n";
  out << "include \"stdgates.inc\";\n";
  out << "qubit[" << width << "] q;\n";
  for (const ConcreteOp& op : ops) {
    std::string name;
    for (const auto& [ours, theirs] : kQasmNames)
      if (op.name == ours) name = theirs;
    if (op.name == "CP")
      name = "cp(" + angle_of(op.param) + ")";
    else if (op.name == "CS")
      name = "cp(" + angle_of(2) + ")";
    else if (op.name == "CT")
      name = "cp(" + angle_of(3) + ")";
    if (name.empty()) throw GateError("no qasm form for gate " + op.name);
    out << name << " ";
    for (std::size_t i = 0; i < op.qubits.size(); ++i)
      out << (i ? ", " : "") << "q[" << op.qubits[i] << "]";
    out << ";\n";
  }
  return out.str();
}

ParsedQasm parse_qasm(const std::string& text) {
  ParsedQasm pq;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace((unsigned char)line.back()))
      line.pop_back();
    if (line.empty() || line.rfind("OPENQASM", 0) == 0 ||
        line.rfind("include", 0) == 0)
      continue;
    if (line.rfind("qubit[", 0) == 0) {
      pq.qubits = std::stoull(line.substr(6));
      continue;
    }
    if (line.back() != ';') throw ParseError("qasm: missing semicolon: " + line);
    line.pop_back();
    std::size_t sp = line.find(' ');
    if (sp == std::string::npos) throw ParseError("qasm: bad line: " + line);
    std::string head = line.substr(0, sp);
    ConcreteOp op;
    std::size_t par = head.find('(');
    if (par != std::string::npos) {
      if (head.substr(0, par) != "cp")
        throw ParseError("qasm: unknown parameterized gate: " + head);
      op.name = "CP";
      op.param = angle_to_logden(head.substr(par + 1, head.size() - par - 2));
    } else {
      for (const auto& [ours, theirs] : kQasmNames)
        if (head == theirs) op.name = ours;
      if (op.name.empty()) throw ParseError("qasm: unknown gate: " + head);
    }
    std::string rest = line.substr(sp + 1);
    for (std::size_t pos = 0; (pos = rest.find("q[", pos)) != std::string::npos;) {
      pos += 2;
      op.qubits.push_back(std::stoull(rest.substr(pos)));
    }
    if (op.qubits.empty()) throw ParseError("qasm: gate without operands: " + line);
    pq.ops.push_back(op);
  }
  if (pq.qubits == 0) throw ParseError("qasm: no qubit declaration");
  return pq;
}

std::string emit(const EmitInput& in, const EmitTarget& t, const Registry& reg) {
  switch (t.kind) {
    case EmitTarget::Kind::IsqirText:
      return to_string(in.program) + "\n";
    case EmitTarget::Kind::OpenQasm:
      return emit_qasm(in.program, t.n, reg);
    case EmitTarget::Kind::HAlphaJson:
      if (!in.halpha) throw std::runtime_error("no amplitude to emit");
      return halpha_to_json(*in.halpha);
    case EmitTarget::Kind::ProofTraceJson:
      if (!in.trace) throw std::runtime_error("no proof trace to emit");
      return trace_to_json(*in.trace);
  }
  throw std::runtime_error("unreachable emit target");
}

std::string registry_to_json(const Registry& reg) {
  nlohmann::json j;
  j["components"] = nlohmann::json::object();
  for (const auto& [name, comp] : reg.components) {
    nlohmann::json c;
    c["program"] = to_string(comp.program);
    c["halpha"] = nlohmann::json::parse(halpha_to_json(comp.halpha));
    c["qubits"] = to_string(comp.qubits);
    j["components"][name] = c;
  }
  return j.dump(2) + "\n";
}

void registry_merge_from_json(Registry& reg, const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  for (const auto& [name, c] : j.at("components").items()) {
    Component comp;
    comp.program = parse_isqir(c.at("program").get<std::string>());
    comp.halpha = halpha_from_json(c.at("halpha").dump());
    comp.qubits = parse_nat(c.at("qubits").get<std::string>());
    reg.components[name] = std::move(comp);
  }
}

namespace {

struct SolverFlags {
  std::string mode = "bounded";
  std::uint64_t n_bound = 8;
  int timeout_ms = 120000;
  std::string dump_smt;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "solver mode: bounded | symbolic")
        ->check(CLI::IsMember({"bounded", "symbolic"}));
    cmd->add_option("--n-bound", n_bound, "bounded mode: check n = 0..N");
    cmd->add_option("--timeout-ms", timeout_ms, "per-query solver timeout");
    cmd->add_option("--dump-smt", dump_smt, "write each query as .smt2 here");
  }
  SolverConfig config() const {
    SolverConfig cfg;
    cfg.mode = mode == "symbolic" ? SolverMode::Symbolic : SolverMode::Bounded;
    cfg.n_max = n_bound;
    cfg.timeout_ms = timeout_ms;
    cfg.dump_dir = dump_smt;
    return cfg;
  }
};

struct RegistryFlags {
  std::string file;
  bool standard = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--registry", file, "component registry JSON to load");
    cmd->add_flag("--standard-components", standard,
                  "preload ZN, WN, ROT, ROTINV");
  }
  Registry load() const {
    Registry reg = standard ? families::standard_registry() : Registry{};
    if (!file.empty()) registry_merge_from_json(reg, read_file(file));
    return reg;
  }
};

void print_state(const std::vector<Amp>& state, std::uint64_t width,
                 std::ostream& out) {
  char buf[64];
  for (std::uint64_t v = 0; v < state.size(); ++v) {
    if (std::abs(state[v]) < 1e-9) continue;
    std::string bits;
    for (std::uint64_t i = width; i-- > 0;) bits += char('0' + ((v >> i) & 1));
    std::snprintf(buf, sizeof buf, "%.4f%+.4fi", state[v].real(),
                  state[v].imag());
    out << "|" << bits << "> " << buf << "\n";
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"synthesis and verification of inductive quantum circuit families"};
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json", json_errors, "machine-readable errors on stderr");

  auto* synth = app.add_subcommand("synth", "synthesize a program from a spec");
  std::string spec_file, gates_csv, emit_str = "isqir";
  bool explain = false;
  SearchBounds bounds;
  double wall_clock = 0;
  SolverFlags synth_solver;
  RegistryFlags synth_reg;
  synth->add_option("--spec", spec_file, "specification file")->required();
  synth->add_option("--gates", gates_csv, "comma-separated gate set")->required();
  synth->add_option("--max-length", bounds.max_program_length, "size cap");
  synth->add_option("--fix-k", bounds.fix_k_choices, "fix arities to try")
      ->delimiter(',');
  synth->add_option("--perm-depth", bounds.perm_derivation_depth,
                    "permutation derivation depth");
  synth->add_option("--const-min", bounds.const_min, "smallest wire literal");
  synth->add_option("--const-max", bounds.const_max, "largest wire literal");
  synth->add_option("--wall-clock", wall_clock, "search budget in seconds");
  synth->add_option("--emit", emit_str, "isqir | qasm:N | halpha | trace");
  synth->add_flag("--explain", explain, "print the proof trace to stderr");
  synth_solver.attach(synth);
  synth_reg.attach(synth);

  auto* verify = app.add_subcommand("verify", "check a program against an amplitude");
  std::string v_prog, v_halpha, v_qubits = "(+ n 1)";
  bool v_explain = false;
  SolverFlags v_solver;
  RegistryFlags v_reg;
  verify->add_option("--program", v_prog, "ISQIR program file")->required();
  verify->add_option("--halpha", v_halpha, "hypothesis-amplitude JSON file")->required();
  verify->add_option("--qubits", v_qubits, "wire-count expression in n");
  verify->add_flag("--explain", v_explain, "print the proof trace to stderr");
  v_solver.attach(verify);
  v_reg.attach(verify);

  auto* simulate = app.add_subcommand("simulate", "print the state at a concrete n");
  std::string s_prog;
  std::uint64_t s_n = 0, s_input = 0;
  RegistryFlags s_reg;
  simulate->add_option("--program", s_prog, "ISQIR program file")->required();
  simulate->add_option("--n", s_n, "instantiation point")->required();
  simulate->add_option("--input", s_input, "basis-state input, default 0");
  s_reg.attach(simulate);

  auto* regcmd = app.add_subcommand("register", "verify and store a component");
  std::string r_name, r_prog, r_halpha, r_qubits, r_out;
  SolverFlags r_solver;
  RegistryFlags r_reg;
  regcmd->add_option("--name", r_name, "component name")->required();
  regcmd->add_option("--program", r_prog, "ISQIR program file")->required();
  regcmd->add_option("--halpha", r_halpha, "hypothesis-amplitude JSON file")->required();
  regcmd->add_option("--qubits", r_qubits, "wire-count expression in n")->required();
  regcmd->add_option("--out", r_out, "write the updated registry JSON here");
  r_solver.attach(regcmd);
  r_reg.attach(regcmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto fail = [&](int code, const std::string& msg) {
    if (json_errors)
      std::cerr << nlohmann::json{{"error", msg}}.dump() << "\n";
    else
      std::cerr << "error: " << msg << "\n";
    return code;
  };

  try {
    if (synth->parsed()) {
      Registry reg = synth_reg.load();
      CompiledSpec spec = compile(read_file(spec_file));
      GateSet gs{split_list(gates_csv)};
      if (wall_clock > 0) bounds.wall_clock_seconds = wall_clock;
      SearchResult r = synthesize(spec, gs, bounds, reg, synth_solver.config());
      if (!r.success) return fail(1, "synthesis failed: " + r.report.failure);
      if (explain) std::cerr << trace_to_json(r.trace) << "\n";
      EmitInput in{r.program, spec.target(), r.trace};
      std::cout << emit(in, parse_emit_target(emit_str), reg);
      return 0;
    }
    if (verify->parsed()) {
      Registry reg = v_reg.load();
      IsqirPtr p = parse_isqir(read_file(v_prog));
      HAlpha ha = halpha_from_json(read_file(v_halpha));
      Verifier v(reg, v_solver.config());
      ProofTrace t = v.check_judgement(ha, p, parse_nat(v_qubits));
      if (v_explain) std::cerr << trace_to_json(t) << "\n";
      if (!t.accepted) return fail(1, "rejected: " + t.failure);
      std::cout << "accepted\n";
      return 0;
    }
    if (simulate->parsed()) {
      Registry reg = s_reg.load();
      IsqirPtr p = parse_isqir(read_file(s_prog));
      std::vector<ConcreteOp> ops = instantiate(p, s_n, reg);
      std::uint64_t width = 1;
      for (const ConcreteOp& op : ops)
        for (std::uint64_t q : op.qubits) width = std::max(width, q + 1);
      if (width > 12) return fail(2, "register too wide to simulate");
      std::vector<Amp> state(std::size_t(1) << width, 0.0);
      if (s_input >= state.size()) return fail(2, "input outside the register");
      state[s_input] = 1.0;
      for (const ConcreteOp& op : ops) apply_op(op, state, width);
      print_state(state, width, std::cout);
      return 0;
    }
    if (regcmd->parsed()) {
      Registry reg = r_reg.load();
      register_component(reg, r_name, parse_isqir(read_file(r_prog)),
                         halpha_from_json(read_file(r_halpha)),
                         parse_nat(r_qubits), r_solver.config());
      if (!r_out.empty()) {
        std::ofstream out(r_out, std::ios::binary);
        out << registry_to_json(reg);
      }
      std::cout << "registered " << r_name << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    return fail(2, e.what());
  } catch (const ParseError& e) {
    return fail(2, e.what());
  } catch (const SyntaxError& e) {
    return fail(2, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  return 2;
}

}  // namespace iqc
