#include "iqc/sim.hpp"

#include <cmath>

namespace iqc {

Mat identity_matrix(std::size_t dim) {
  Mat m(dim, std::vector<Amp>(dim, 0));
  for (std::size_t i = 0; i < dim; ++i) m[i][i] = 1;
  return m;
}

Mat zero_matrix(std::size_t dim) { return Mat(dim, std::vector<Amp>(dim, 0)); }

Mat matmul(const Mat& a, const Mat& b) {
  std::size_t dim = a.size();
  Mat out = zero_matrix(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k) {
      if (a[i][k] == Amp(0)) continue;
      for (std::size_t j = 0; j < dim; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

double max_entry_diff(const Mat& a, const Mat& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  return worst;
}

bool is_unitary(const Mat& a, double tol) {
  std::size_t dim = a.size();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      Amp dot = 0;
      for (std::size_t k = 0; k < dim; ++k) dot += std::conj(a[k][i]) * a[k][j];
      if (std::abs(dot - (i == j ? Amp(1) : Amp(0))) > tol) return false;
    }
  return true;
}

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;

// apply a k-qubit unitary u (dim 2^k, u[r][c]) on the given wires
void apply_small(const std::vector<std::vector<Amp>>& u,
                 const std::vector<std::uint64_t>& ws, std::vector<Amp>& state) {
  std::size_t k = ws.size();
  std::size_t sub = std::size_t{1} << k;
  std::uint64_t mask = 0;
  for (auto w : ws) mask |= std::uint64_t{1} << w;
  std::size_t dim = state.size();
  std::vector<Amp> tmp(sub);
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & mask) continue;  // visit each coset once, at its wire-zero rep
    for (std::size_t r = 0; r < sub; ++r) {
      std::uint64_t idx = base;
      for (std::size_t b = 0; b < k; ++b)
        if ((r >> b) & 1) idx |= std::uint64_t{1} << ws[b];
      tmp[r] = state[idx];
    }
    for (std::size_t r = 0; r < sub; ++r) {
      Amp acc = 0;
      for (std::size_t c = 0; c < sub; ++c) acc += u[r][c] * tmp[c];
      std::uint64_t idx = base;
      for (std::size_t b = 0; b < k; ++b)
        if ((r >> b) & 1) idx |= std::uint64_t{1} << ws[b];
      state[idx] = acc;
    }
  }
}

std::vector<std::vector<Amp>> u1(const std::string& name) {
  if (name == "ID") return {{1, 0}, {0, 1}};
  if (name == "H") return {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
  if (name == "X") return {{0, 1}, {1, 0}};
  if (name == "Y") return {{0, Amp(0, -1)}, {Amp(0, 1), 0}};
  if (name == "Z") return {{1, 0}, {0, -1}};
  if (name == "S") return {{1, 0}, {0, Amp(0, 1)}};
  if (name == "T") return {{1, 0}, {0, std::polar(1.0, M_PI / 4)}};
  throw IllTypedError("no single-qubit unitary for " + name);
}

std::vector<std::vector<Amp>> controlled_phase(double turns) {
  Amp ph = std::polar(1.0, 2 * M_PI * turns);
  return {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, ph}};
}
}  // namespace

void apply_op(const ConcreteOp& op, std::vector<Amp>& state, std::size_t qubits) {
  for (std::size_t i = 0; i < op.qubits.size(); ++i) {
    if (op.qubits[i] >= qubits) throw IllTypedError(op.name + ": wire out of range");
    for (std::size_t j = i + 1; j < op.qubits.size(); ++j)
      if (op.qubits[i] == op.qubits[j]) throw IllTypedError(op.name + ": repeated wire");
  }
  const auto& q = op.qubits;
  if (op.comp) {
    apply_small(op.comp->unitary, q, state);
    return;
  }
  if (op.name == "CX") {
    apply_small({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}, {q[1], q[0]}, state);
    return;
  }
  if (op.name == "CZ") { apply_small(controlled_phase(0.5), q, state); return; }
  if (op.name == "CS") { apply_small(controlled_phase(0.25), q, state); return; }
  if (op.name == "CT") { apply_small(controlled_phase(0.125), q, state); return; }
  if (op.name == "CP") {
    if (op.param >= 62) throw IllTypedError("CP denominator too wide");
    apply_small(controlled_phase(1.0 / double(std::uint64_t{1} << op.param)), q, state);
    return;
  }
  if (op.name == "SWAP") {
    apply_small({{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}, q, state);
    return;
  }
  if (op.name == "CCX") {
    std::vector<std::vector<Amp>> u(8, std::vector<Amp>(8, 0));
    for (int i = 0; i < 8; ++i) u[i][i] = 1;
    // wires listed (a, b, t): flip t when a and b set; wire order below is
    // (t, a, b) so control bits are 1 and 2
    u[0b111][0b111] = 0;
    u[0b110][0b110] = 0;
    u[0b111][0b110] = 1;
    u[0b110][0b111] = 1;
    apply_small(u, {q[2], q[0], q[1]}, state);
    return;
  }
  if (op.name == "MAJ" || op.name == "UMA") {
    // args (c, b, a)
    ConcreteOp cx_ab{"CX", {q[2], q[1]}, 0, nullptr};
    ConcreteOp cx_ac{"CX", {q[2], q[0]}, 0, nullptr};
    ConcreteOp ccx{"CCX", {q[0], q[1], q[2]}, 0, nullptr};
    ConcreteOp cx_cb{"CX", {q[0], q[1]}, 0, nullptr};
    if (op.name == "MAJ") {
      apply_op(cx_ab, state, qubits);
      apply_op(cx_ac, state, qubits);
      apply_op(ccx, state, qubits);
    } else {
      apply_op(ccx, state, qubits);
      apply_op(cx_ac, state, qubits);
      apply_op(cx_cb, state, qubits);
    }
    return;
  }
  apply_small(u1(op.name), q, state);
}

Mat ops_unitary(const std::vector<ConcreteOp>& ops, std::uint64_t qubits) {
  std::size_t dim = std::size_t{1} << qubits;
  Mat out(dim, std::vector<Amp>(dim));
  for (std::size_t x = 0; x < dim; ++x) {
    std::vector<Amp> state(dim, 0);
    state[x] = 1;
    for (const auto& op : ops) apply_op(op, state, qubits);
    for (std::size_t y = 0; y < dim; ++y) out[y][x] = state[y];
  }
  return out;
}

Mat program_unitary(const IsqirPtr& s, std::uint64_t n, std::uint64_t qubits,
                    const Registry& reg) {
  try {
    return ops_unitary(instantiate(s, n, reg), qubits);
  } catch (const IllTypedError&) {
    return zero_matrix(std::size_t{1} << qubits);
  }
}

Mat ppsa_to_matrix(const Ppsa& p, std::uint64_t n, std::uint64_t qubits) {
  std::size_t dim = std::size_t{1} << qubits;
  Mat out(dim, std::vector<Amp>(dim));
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t y = 0; y < dim; ++y) out[y][x] = eval_entry(p, Env(n, x, y));
  return out;
}

double max_diff_on_hypothesis(const BoolPtr& h, const Mat& a, const Mat& b, std::uint64_t n) {
  double worst = 0;
  std::size_t dim = a.size();
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t y = 0; y < dim; ++y) {
      if (!eval(h, Env(n, x, y))) continue;
      worst = std::max(worst, std::abs(a[y][x] - b[y][x]));
    }
  return worst;
}

}  // namespace iqc
