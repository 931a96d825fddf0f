#pragma once
// SMT-LIB2 backend. Obligations are boolean formulas over free natural
// variables, implicitly universally quantified. Two modes:
//
//   Symbolic  nonlinear integers (UFNIA) with pow2 uninterpreted and
//             axiomatized; reductions and bitwise ops on non-bit operands
//             are not expressible and raise UnsupportedConstruct.
//   Bounded   per-n instantiation over fixed 64-bit bit-vectors (QF_BV);
//             x and y range over width_of(n) bits, n = 0..n_max. Decidable,
//             and the default.
//
// The solver is an external process speaking SMT-LIB2 over pipes with a
// tiny framing protocol: each query ends with a line ";; --query-end--",
// each response with ";; --response-end--". The vendored wrapper in
// tools/z3wasm implements it (run with --server). Override the launch
// command with IQC_SOLVER_CMD, or point IQC_SOLVER_DIR at a directory
// containing z3cli.js.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iqc/expr.hpp"

namespace iqc {

enum class SolverMode { Symbolic, Bounded };

struct SolverConfig {
  SolverMode mode = SolverMode::Bounded;
  std::uint64_t n_max = 8;  // Bounded: check n = 0 .. n_max inclusive
  NatPtr width_of;          // Bounded: bit width of x/y, expr in n; <= 24
  // extra free variables can get their own strict upper bound (expr in n);
  // anything unlisted defaults to 2^width_of
  std::map<std::string, NatPtr> var_bound;
  int timeout_ms = 10000;   // per solver query
  std::string command;      // override launch command (server protocol)
  std::string dump_dir;     // when set, write each query as a .smt2 file
};

struct SolverResult {
  enum class Verdict { Valid, Invalid, Unknown };
  Verdict verdict = Verdict::Unknown;
  // Invalid only: an assignment that falsifies the formula. Always
  // replayed through eval before being reported.
  std::optional<Env> counterexample;
  std::string detail;  // solver output or reason for Unknown

  bool valid() const { return verdict == Verdict::Valid; }
  bool invalid() const { return verdict == Verdict::Invalid; }
  bool unknown() const { return verdict == Verdict::Unknown; }
};

struct UnsupportedConstruct : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pure-text encoders, exposed for tests and --dump-smt tooling. Both
// produce a closed term over the expression's free variables (Int sort
// for symbolic, (_ BitVec 64) for bv).
std::string encode_symbolic(const NatPtr& e);
std::string encode_symbolic(const BoolPtr& e);
std::string encode_bv(const NatPtr& e);
std::string encode_bv(const BoolPtr& e);

// One solver process per SmtSolver instance; instances are not shared
// between threads. The process is started lazily and restarted after a
// crash or a hard timeout kill.
class SmtSolver {
 public:
  explicit SmtSolver(SolverConfig cfg = {});
  ~SmtSolver();
  SmtSolver(SmtSolver&&) noexcept;
  SmtSolver& operator=(SmtSolver&&) noexcept;

  const SolverConfig& config() const { return cfg_; }

  // decide (forall free vars >= 0) f, per cfg.mode
  SolverResult check_valid(const BoolPtr& f);

  // evaluate a ground term through the solver's bv encoding; nullopt on
  // solver failure. Used by the encoding-faithfulness checks.
  std::optional<std::uint64_t> eval_ground(const NatPtr& e, const Env& env);

  // batched form: one solver round trip for the whole vector
  std::vector<std::optional<std::uint64_t>> eval_ground_many(
      const std::vector<std::pair<NatPtr, Env>>& terms);

 private:
  struct Impl;
  SolverConfig cfg_;
  std::unique_ptr<Impl> impl_;
};

// launch command resolution: cfg.command, else $IQC_SOLVER_CMD, else
// "node $IQC_SOLVER_DIR/z3cli.js --server", else the tools/z3wasm copy
std::string solver_command(const SolverConfig& cfg);

}  // namespace iqc
