#include "iqc/smt.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace iqc {

namespace {

// ---- encoding ----
//
// Shared subterms are named with let bindings (.t0, .t1, ...), so the
// output stays linear in the dag size of the expression.

std::string bvlit(std::uint64_t k) {
  return "(_ bv" + std::to_string(k) + " 64)";
}

// syntactically 0/1-valued, safe for arithmetic encodings of &,|,^
bool is_bitlike(const NatPtr& e) {
  switch (e->op) {
    case NatOp::Const: return e->k <= 1;
    case NatOp::Bit:
    case NatOp::Delta:
    case NatOp::RedAnd:
    case NatOp::RedOr:
    case NatOp::RedXor:
      return true;
    case NatOp::Mul:
    case NatOp::BitAnd:
    case NatOp::BitOr:
    case NatOp::BitXor:
      return is_bitlike(e->a) && is_bitlike(e->b);
    case NatOp::Mod:
      return e->b->op == NatOp::Const && e->b->k <= 2;
    default: return false;
  }
}

class Enc {
 public:
  explicit Enc(bool bv) : bv_(bv) {}

  std::string nat(const NatPtr& e) {
    auto it = memo_n_.find(e.get());
    if (it != memo_n_.end()) return it->second;
    std::string r = bv_ ? nat_bv(e) : nat_int(e);
    memo_n_.emplace(e.get(), r);
    return r;
  }

  std::string boolean(const BoolPtr& e) {
    auto it = memo_b_.find(e.get());
    if (it != memo_b_.end()) return it->second;
    std::string r = bool_any(e);
    memo_b_.emplace(e.get(), r);
    return r;
  }

  // nest the collected lets around `body`
  std::string wrap(std::string body) const {
    for (auto d = defs_.rbegin(); d != defs_.rend(); ++d)
      body = "(let ((" + d->first + " " + d->second + ")) " + body + ")";
    return body;
  }

 private:
  std::string def(std::string text) {
    std::string name = ".t" + std::to_string(defs_.size());
    defs_.emplace_back(name, std::move(text));
    return name;
  }

  std::string nat_int(const NatPtr& e) {
    auto A = [&] { return nat(e->a); };
    auto B = [&] { return nat(e->b); };
    switch (e->op) {
      case NatOp::Var: return e->name;
      case NatOp::Const: return std::to_string(e->k);
      case NatOp::Add: return def("(+ " + A() + " " + B() + ")");
      case NatOp::Sub: {
        std::string a = A(), b = B();
        return def("(ite (>= " + a + " " + b + ") (- " + a + " " + b + ") 0)");
      }
      case NatOp::Mul: return def("(* " + A() + " " + B() + ")");
      case NatOp::Div: return def("(div " + A() + " " + B() + ")");
      case NatOp::Mod: return def("(mod " + A() + " " + B() + ")");
      case NatOp::Shl: return def("(* " + A() + " (pow2 " + B() + "))");
      case NatOp::Shr: return def("(div " + A() + " (pow2 " + B() + "))");
      case NatOp::Bit:
        return def("(mod (div " + A() + " (pow2 " + B() + ")) 2)");
      case NatOp::Slice: {
        std::string hi = nat(e->b), lo = nat(e->c);
        return def("(mod (div " + A() + " (pow2 " + lo + ")) (pow2 (+ (- " +
                   hi + " " + lo + ") 1)))");
      }
      case NatOp::Delta: return def("(ite " + boolean(e->cond) + " 1 0)");
      case NatOp::Pow2: return def("(pow2 " + A() + ")");
      case NatOp::Neg: return "0";
      case NatOp::BitNot: {
        std::string w = nat(e->w);
        return def("(- (- (pow2 " + w + ") 1) (mod " + A() + " (pow2 " + w +
                   ")))");
      }
      case NatOp::BitAnd:
      case NatOp::BitOr:
      case NatOp::BitXor: {
        if (!is_bitlike(e->a) || !is_bitlike(e->b))
          throw UnsupportedConstruct(
              "bitwise op on non-bit operands in symbolic mode");
        std::string a = A(), b = B();
        std::string ab = "(* " + a + " " + b + ")";
        if (e->op == NatOp::BitAnd) return def(ab);
        if (e->op == NatOp::BitOr)
          return def("(- (+ " + a + " " + b + ") " + ab + ")");
        return def("(- (+ " + a + " " + b + ") (* 2 " + ab + "))");
      }
      case NatOp::RedAnd:
      case NatOp::RedOr:
      case NatOp::RedXor: {
        if (e->w->op != NatOp::Const)
          throw UnsupportedConstruct(
              "reduction with non-constant width in symbolic mode");
        // unroll to a fold over single bits
        NatPtr acc = nconst(e->op == NatOp::RedAnd ? 1 : 0);
        NatOp fold = e->op == NatOp::RedAnd  ? NatOp::BitAnd
                     : e->op == NatOp::RedOr ? NatOp::BitOr
                                             : NatOp::BitXor;
        for (std::uint64_t i = 0; i < e->w->k; ++i)
          acc = nbin(fold, acc, nbit(e->a, nconst(i)));
        return nat(acc);
      }
    }
    throw std::logic_error("encode: bad NatOp");
  }

  std::string nat_bv(const NatPtr& e) {
    auto A = [&] { return nat(e->a); };
    auto B = [&] { return nat(e->b); };
    auto bin = [&](const char* op) {
      return def("(" + std::string(op) + " " + A() + " " + B() + ")");
    };
    switch (e->op) {
      case NatOp::Var: return e->name;
      case NatOp::Const: return bvlit(e->k);
      case NatOp::Add: return bin("bvadd");
      case NatOp::Sub: {
        std::string a = A(), b = B();
        return def("(ite (bvule " + b + " " + a + ") (bvsub " + a + " " + b +
                   ") " + bvlit(0) + ")");
      }
      case NatOp::Mul: return bin("bvmul");
      case NatOp::Div: return bin("bvudiv");
      case NatOp::Mod: return bin("bvurem");
      case NatOp::BitAnd: return bin("bvand");
      case NatOp::BitOr: return bin("bvor");
      case NatOp::BitXor: return bin("bvxor");
      case NatOp::Shl: return bin("bvshl");
      case NatOp::Shr: return bin("bvlshr");
      case NatOp::Bit:
        return def("(bvand (bvlshr " + A() + " " + B() + ") " + bvlit(1) +
                   ")");
      case NatOp::Slice: {
        std::string s = def("(bvlshr " + A() + " " + nat(e->c) + ")");
        std::string w = def("(bvadd (bvsub " + nat(e->b) + " " + nat(e->c) +
                            ") " + bvlit(1) + ")");
        std::string m = def("(ite (bvuge " + w + " " + bvlit(64) +
                            ") (bvnot " + bvlit(0) + ") (bvsub (bvshl " +
                            bvlit(1) + " " + w + ") " + bvlit(1) + "))");
        return def("(bvand " + s + " " + m + ")");
      }
      case NatOp::Delta:
        return def("(ite " + boolean(e->cond) + " " + bvlit(1) + " " +
                   bvlit(0) + ")");
      case NatOp::Pow2: return def("(bvshl " + bvlit(1) + " " + A() + ")");
      case NatOp::Neg: return bvlit(0);
      case NatOp::BitNot: {
        std::string m = mask(nat(e->w));
        return def("(bvxor " + m + " (bvand " + A() + " " + m + "))");
      }
      case NatOp::RedAnd: {
        std::string m = mask(nat(e->w));
        return def("(ite (= (bvand " + A() + " " + m + ") " + m + ") " +
                   bvlit(1) + " " + bvlit(0) + ")");
      }
      case NatOp::RedOr: {
        std::string m = mask(nat(e->w));
        return def("(ite (= (bvand " + A() + " " + m + ") " + bvlit(0) +
                   ") " + bvlit(0) + " " + bvlit(1) + ")");
      }
      case NatOp::RedXor: {
        std::string v = def("(bvand " + A() + " " + mask(nat(e->w)) + ")");
        for (std::uint64_t s = 32; s >= 1; s /= 2)
          v = def("(bvxor " + v + " (bvlshr " + v + " " + bvlit(s) + "))");
        return def("(bvand " + v + " " + bvlit(1) + ")");
      }
    }
    throw std::logic_error("encode: bad NatOp");
  }

  std::string mask(const std::string& w) {
    return def("(bvsub (bvshl " + bvlit(1) + " " + w + ") " + bvlit(1) + ")");
  }

  std::string bool_any(const BoolPtr& e) {
    switch (e->op) {
      case BoolOp::True: return "true";
      case BoolOp::False: return "false";
      case BoolOp::And:
        return def("(and " + boolean(e->l) + " " + boolean(e->r) + ")");
      case BoolOp::Or:
        return def("(or " + boolean(e->l) + " " + boolean(e->r) + ")");
      case BoolOp::Not: return def("(not " + boolean(e->l) + ")");
      default: break;
    }
    std::string u = nat(e->u), v = nat(e->v);
    const char* op = nullptr;
    switch (e->op) {
      case BoolOp::Eq: op = "="; break;
      case BoolOp::Ne: return def("(not (= " + u + " " + v + "))");
      case BoolOp::Lt: op = bv_ ? "bvult" : "<"; break;
      case BoolOp::Le: op = bv_ ? "bvule" : "<="; break;
      case BoolOp::Gt: op = bv_ ? "bvugt" : ">"; break;
      case BoolOp::Ge: op = bv_ ? "bvuge" : ">="; break;
      default: throw std::logic_error("encode: bad BoolOp");
    }
    return def("(" + std::string(op) + " " + u + " " + v + ")");
  }

  bool bv_;
  std::vector<std::pair<std::string, std::string>> defs_;
  std::map<const NatExpr*, std::string> memo_n_;
  std::map<const BoolExpr*, std::string> memo_b_;
};

std::vector<std::string> sorted_free_vars(const BoolPtr& f) {
  std::vector<std::string> vs;
  free_vars(f, vs);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

// ---- response parsing ----

// tiny s-expression reader for (get-value ...) output
struct Sexp {
  std::string atom;
  std::vector<Sexp> kids;
  bool is_atom() const { return kids.empty() && !atom.empty(); }
};

bool read_sexp(const std::string& s, std::size_t& i, Sexp& out) {
  while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  if (i >= s.size()) return false;
  if (s[i] == '(') {
    ++i;
    out = Sexp{};
    for (;;) {
      while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
      if (i >= s.size()) return false;
      if (s[i] == ')') {
        ++i;
        return true;
      }
      Sexp kid;
      if (!read_sexp(s, i, kid)) return false;
      out.kids.push_back(std::move(kid));
    }
  }
  std::size_t start = i;
  while (i < s.size() && !std::isspace((unsigned char)s[i]) && s[i] != '(' &&
         s[i] != ')')
    ++i;
  out = Sexp{s.substr(start, i - start), {}};
  return !out.atom.empty();
}

std::optional<std::uint64_t> value_of(const Sexp& v) {
  try {
    if (v.is_atom()) {
      const std::string& a = v.atom;
      if (a.size() > 2 && a[0] == '#' && a[1] == 'x')
        return std::stoull(a.substr(2), nullptr, 16);
      if (a.size() > 2 && a[0] == '#' && a[1] == 'b')
        return std::stoull(a.substr(2), nullptr, 2);
      if (std::isdigit((unsigned char)a[0])) return std::stoull(a);
      return std::nullopt;
    }
    // (_ bvN 64)
    if (v.kids.size() == 3 && v.kids[0].atom == "_" &&
        v.kids[1].atom.rfind("bv", 0) == 0)
      return std::stoull(v.kids[1].atom.substr(2));
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

// extract (name value) pairs from the text following a `sat` line
std::map<std::string, std::uint64_t> parse_model(const std::string& text) {
  std::map<std::string, std::uint64_t> model;
  std::size_t i = 0;
  Sexp top;
  while (read_sexp(text, i, top)) {
    if (top.is_atom()) continue;
    for (const Sexp& pair : top.kids) {
      if (pair.kids.size() != 2 || !pair.kids[0].is_atom()) continue;
      if (auto v = value_of(pair.kids[1]))
        model[pair.kids[0].atom] = *v;
    }
  }
  return model;
}

enum class Answer { Sat, Unsat, Unknown };

Answer scan_answer(const std::string& response, std::string& after) {
  std::istringstream in(response);
  std::string line;
  std::size_t consumed = 0;
  while (std::getline(in, line)) {
    consumed += line.size() + 1;
    std::string t = line;
    while (!t.empty() && std::isspace((unsigned char)t.back())) t.pop_back();
    std::size_t b = t.find_first_not_of(" \t");
    if (b != std::string::npos) t = t.substr(b);
    if (t == "sat") {
      after = response.substr(std::min(consumed, response.size()));
      return Answer::Sat;
    }
    if (t == "unsat") return Answer::Unsat;
    if (t == "unknown" || t == "timeout") return Answer::Unknown;
  }
  return Answer::Unknown;
}

}  // namespace

std::string encode_symbolic(const NatPtr& e) {
  Enc enc(false);
  return enc.wrap(enc.nat(e));
}
std::string encode_symbolic(const BoolPtr& e) {
  Enc enc(false);
  return enc.wrap(enc.boolean(e));
}
std::string encode_bv(const NatPtr& e) {
  Enc enc(true);
  return enc.wrap(enc.nat(e));
}
std::string encode_bv(const BoolPtr& e) {
  Enc enc(true);
  return enc.wrap(enc.boolean(e));
}

std::string solver_command(const SolverConfig& cfg) {
  if (!cfg.command.empty()) return cfg.command;
  if (const char* c = std::getenv("IQC_SOLVER_CMD")) return c;
  std::string dir = "tools/z3wasm";
  if (const char* d = std::getenv("IQC_SOLVER_DIR")) dir = d;
  return "node " + dir + "/z3cli.js --server";
}

// ---- solver process ----

struct SmtSolver::Impl {
  std::string command;
  pid_t pid = -1;
  int wr = -1, rd = -1;
  std::string buf;
  int dumped = 0;

  ~Impl() { stop(); }

  void stop() {
    if (wr >= 0) close(wr);
    if (rd >= 0) close(rd);
    wr = rd = -1;
    if (pid > 0) {
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
    }
    pid = -1;
    buf.clear();
  }

  bool start() {
    signal(SIGPIPE, SIG_IGN);
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0) return false;
    if (pipe(out_pipe) != 0) {
      close(in_pipe[0]);
      close(in_pipe[1]);
      return false;
    }
    pid = fork();
    if (pid < 0) return false;
    if (pid == 0) {
      dup2(in_pipe[0], 0);
      dup2(out_pipe[1], 1);
      close(in_pipe[0]);
      close(in_pipe[1]);
      close(out_pipe[0]);
      close(out_pipe[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
      _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    wr = in_pipe[1];
    rd = out_pipe[0];
    return true;
  }

  // send one script, wait for the response terminator
  std::optional<std::string> query(const std::string& script, int timeout_ms) {
    if (pid < 0 && !start()) return std::nullopt;
    std::string msg = script + "\n;; --query-end--\n";
    std::size_t off = 0;
    while (off < msg.size()) {
      ssize_t k = write(wr, msg.data() + off, msg.size() - off);
      if (k <= 0) {
        stop();
        return std::nullopt;
      }
      off += std::size_t(k);
    }
    // solver-side timeout plus generous startup/teardown grace
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::milliseconds(timeout_ms + 15000);
    const std::string endmark = ";; --response-end--";
    for (;;) {
      std::size_t at = buf.find(endmark);
      if (at != std::string::npos) {
        std::string resp = buf.substr(0, at);
        std::size_t nl = buf.find('\n', at);
        buf.erase(0, nl == std::string::npos ? buf.size() : nl + 1);
        return resp;
      }
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                      deadline - std::chrono::steady_clock::now())
                      .count();
      if (left <= 0) {
        stop();  // hung solver; next query restarts it
        return std::nullopt;
      }
      pollfd pfd{rd, POLLIN, 0};
      int pr = poll(&pfd, 1, int(std::min<long long>(left, 1000)));
      if (pr < 0 && errno != EINTR) {
        stop();
        return std::nullopt;
      }
      if (pr <= 0) continue;
      char chunk[4096];
      ssize_t k = read(rd, chunk, sizeof chunk);
      if (k <= 0) {
        stop();
        return std::nullopt;
      }
      buf.append(chunk, std::size_t(k));
    }
  }
};

SmtSolver::SmtSolver(SolverConfig cfg)
    : cfg_(std::move(cfg)), impl_(std::make_unique<Impl>()) {
  impl_->command = solver_command(cfg_);
}
SmtSolver::~SmtSolver() = default;
SmtSolver::SmtSolver(SmtSolver&&) noexcept = default;
SmtSolver& SmtSolver::operator=(SmtSolver&&) noexcept = default;

namespace {

std::string header(const char* logic, int timeout_ms) {
  std::string s = "(set-option :timeout " + std::to_string(timeout_ms) + ")\n";
  s += "(set-logic " + std::string(logic) + ")\n";
  return s;
}

void maybe_dump(const std::string& dir, int& counter,
                const std::string& script) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  char name[32];
  std::snprintf(name, sizeof name, "query-%04d.smt2", counter++);
  std::ofstream(std::filesystem::path(dir) / name) << script;
}

// an Invalid verdict must survive replay through eval
bool falsifies(const BoolPtr& f, const Env& env) {
  try {
    return !eval(f, env);
  } catch (const EvalError&) {
    return false;
  }
}

}  // namespace

SolverResult SmtSolver::check_valid(const BoolPtr& f) {
  using V = SolverResult::Verdict;
  std::vector<std::string> vars = sorted_free_vars(f);

  if (cfg_.mode == SolverMode::Symbolic) {
    std::string body;
    try {
      body = encode_symbolic(f);
    } catch (const UnsupportedConstruct& e) {
      return {V::Unknown, std::nullopt, e.what()};
    }
    std::string script = header("UFNIA", cfg_.timeout_ms);
    // the quantified axioms rule out finite models, so only bring in pow2
    // when the formula uses it; pure-arithmetic queries keep sat answers
    if (body.find("pow2") != std::string::npos)
      script +=
          "(declare-fun pow2 (Int) Int)\n"
          "(assert (= (pow2 0) 1))\n"
          "(assert (forall ((m Int)) (=> (>= m 0)"
          " (= (pow2 (+ m 1)) (* 2 (pow2 m))))))\n"
          "(assert (forall ((m Int)) (=> (>= m 0) (>= (pow2 m) 1))))\n";
    for (const std::string& v : vars) {
      script += "(declare-const " + v + " Int)\n";
      script += "(assert (>= " + v + " 0))\n";
    }
    script += "(assert (not " + body + "))\n(check-sat)\n";
    if (!vars.empty()) {
      script += "(get-value (";
      for (std::size_t i = 0; i < vars.size(); ++i)
        script += (i ? " " : "") + vars[i];
      script += "))\n";
    }
    maybe_dump(cfg_.dump_dir, impl_->dumped, script);
    auto resp = impl_->query(script, cfg_.timeout_ms);
    if (!resp) return {V::Unknown, std::nullopt, "solver crash or timeout"};
    std::string after;
    switch (scan_answer(*resp, after)) {
      case Answer::Unsat: return {V::Valid, std::nullopt, ""};
      case Answer::Unknown: return {V::Unknown, std::nullopt, *resp};
      case Answer::Sat: break;
    }
    Env env;
    env.vars = parse_model(after);
    for (const std::string& v : vars)
      if (!env.vars.count(v)) env.vars[v] = 0;
    if (falsifies(f, env)) return {V::Invalid, env, ""};
    return {V::Unknown, std::nullopt, "counterexample failed eval replay"};
  }

  // Bounded: one QF_BV instance per n
  bool saw_unknown = false;
  std::string why;
  for (std::uint64_t n = 0; n <= cfg_.n_max; ++n) {
    Env at_n;
    at_n.vars["n"] = n;
    std::uint64_t width = 24;
    if (cfg_.width_of) {
      width = eval(cfg_.width_of, at_n);
      if (width > 24)
        throw std::invalid_argument("bounded mode requires width_of(n) <= 24");
    }
    BoolPtr g = simplify(substitute(f, "n", nconst(n)));
    if (g->op == BoolOp::True) continue;
    std::vector<std::string> gv = sorted_free_vars(g);
    std::string script = header("QF_BV", cfg_.timeout_ms);
    for (const std::string& v : gv) {
      std::uint64_t bound = std::uint64_t{1} << width;
      auto it = cfg_.var_bound.find(v);
      if (it != cfg_.var_bound.end()) bound = eval(it->second, at_n);
      script += "(declare-const " + v + " (_ BitVec 64))\n";
      script += "(assert (bvult " + v + " " + bvlit(bound) + "))\n";
    }
    script += "(assert (not " + encode_bv(g) + "))\n(check-sat)\n";
    if (!gv.empty()) {
      script += "(get-value (";
      for (std::size_t i = 0; i < gv.size(); ++i)
        script += (i ? " " : "") + gv[i];
      script += "))\n";
    }
    maybe_dump(cfg_.dump_dir, impl_->dumped, script);
    auto resp = impl_->query(script, cfg_.timeout_ms);
    if (!resp) {
      saw_unknown = true;
      why = "solver crash or timeout at n=" + std::to_string(n);
      continue;
    }
    std::string after;
    switch (scan_answer(*resp, after)) {
      case Answer::Unsat: continue;
      case Answer::Unknown:
        saw_unknown = true;
        why = "unknown at n=" + std::to_string(n);
        continue;
      case Answer::Sat: break;
    }
    Env env;
    env.vars = parse_model(after);
    env.vars["n"] = n;
    for (const std::string& v : gv)
      if (!env.vars.count(v)) env.vars[v] = 0;
    if (falsifies(f, env)) return {V::Invalid, env, ""};
    saw_unknown = true;
    why = "counterexample failed eval replay at n=" + std::to_string(n);
  }
  if (saw_unknown) return {V::Unknown, std::nullopt, why};
  return {V::Valid, std::nullopt, ""};
}

std::optional<std::uint64_t> SmtSolver::eval_ground(const NatPtr& e,
                                                    const Env& env) {
  return eval_ground_many({{e, env}}).at(0);
}

std::vector<std::optional<std::uint64_t>> SmtSolver::eval_ground_many(
    const std::vector<std::pair<NatPtr, Env>>& terms) {
  std::vector<std::optional<std::uint64_t>> out(terms.size());
  if (terms.empty()) return out;
  std::string script = header("QF_BV", cfg_.timeout_ms);
  std::string names;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::map<std::string, NatPtr> sub;
    for (const auto& [k, v] : terms[i].second.vars) sub[k] = nconst(v);
    NatPtr g = substitute_all(terms[i].first, sub);
    std::string r = ".r" + std::to_string(i);
    script += "(declare-const " + r + " (_ BitVec 64))\n";
    script += "(assert (= " + r + " " + encode_bv(g) + "))\n";
    names += (i ? " " : "") + r;
  }
  script += "(check-sat)\n(get-value (" + names + "))\n";
  maybe_dump(cfg_.dump_dir, impl_->dumped, script);
  auto resp = impl_->query(script, cfg_.timeout_ms);
  if (!resp) return out;
  std::string after;
  if (scan_answer(*resp, after) != Answer::Sat) return out;
  auto model = parse_model(after);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    auto it = model.find(".r" + std::to_string(i));
    if (it != model.end()) out[i] = it->second;
  }
  return out;
}

}  // namespace iqc
