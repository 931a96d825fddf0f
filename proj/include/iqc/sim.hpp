#pragma once
// Dense simulation oracle: exact (up to double rounding) unitaries of
// instantiated programs, numeric matrices of amplitude formulas, and
// entrywise comparison. Kept deliberately simple; dimensions stay <= 4096.

#include "iqc/isqir.hpp"

namespace iqc {

using Amp = std::complex<double>;
using Mat = std::vector<std::vector<Amp>>;  // Mat[y][x] = <y|U|x>

Mat identity_matrix(std::size_t dim);
Mat zero_matrix(std::size_t dim);
Mat matmul(const Mat& a, const Mat& b);
double max_entry_diff(const Mat& a, const Mat& b);
bool is_unitary(const Mat& a, double tol);

// one gate applied to a statevector
void apply_op(const ConcreteOp& op, std::vector<Amp>& state, std::size_t qubits);

// full unitary of the instantiated program on `qubits` wires; a program
// that is ill-typed at this n (repeated or out-of-range wires, bad
// structure) denotes the zero matrix
Mat program_unitary(const IsqirPtr& s, std::uint64_t n, std::uint64_t qubits,
                    const Registry& reg);
Mat ops_unitary(const std::vector<ConcreteOp>& ops, std::uint64_t qubits);

Mat ppsa_to_matrix(const Ppsa& p, std::uint64_t n, std::uint64_t qubits);

// max |A - B| over entries (x,y) satisfying h at this n
double max_diff_on_hypothesis(const BoolPtr& h, const Mat& a, const Mat& b, std::uint64_t n);

}  // namespace iqc
