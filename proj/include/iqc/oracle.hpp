#pragma once
// Oracle extension: promise-style specifications for programs containing a
// classical oracle call, and the affine-sum abstraction that reduces
// Deutsch-Jozsa-class obligations to integer arithmetic over the single
// residue S_f = sum_i f(i). The uninterpreted oracle is encoded as a
// truth-table variable ("fT", bit i = f(i)) in expressions, and is always
// eliminated before anything reaches the SMT backend.

#include "iqc/verifier.hpp"

namespace iqc {

struct NotAffine : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// p - m over naturals; keeps SMT encodings subtraction-free
struct SignedExpr {
  NatPtr pos, neg;
};

// pointwise term over one boolean oracle value: g(f(i)) with the two
// closures g(0), g(1) as expressions (no i dependence allowed)
struct Pointwise {
  SignedExpr g0, g1;
};

// sum_{i in {0,1}^n} g(f(i))
struct SymbolicSum {
  Pointwise g;
};

// a * S_f + b * 2^n
struct AffineSum {
  SignedExpr a, b;
};

// two-point solve of g(z) = a*z + b over z in {0,1}; total on this domain,
// so NotAffine is unreachable (kept for interface totality)
std::pair<std::int64_t, std::int64_t> affine_witness(std::int64_t g0,
                                                     std::int64_t g1);
AffineSum sum_abstraction(const SymbolicSum& s);

// promise: S_f equals one of the listed expressions (disjunction)
struct OraclePromise {
  std::vector<NatPtr> sums;
};

struct OracleTuple {
  OraclePromise promise;
  BoolPtr h;
  Ppsa alpha;
  bool up_to_sign = false;  // accept alpha or -alpha
};

struct OracleSpec {
  std::vector<OracleTuple> tuples;
};

// name of the truth-table variable closing the oracle in expressions
inline const char* oracle_table_var() { return "fT"; }

// judgement of the oracle call itself: the target bit picks up f of the
// query register, everything else passes through
//   alpha_f(n,x,y) = delta(x >> 1 = y >> 1  and  y[0] = f(x >> 1) xor x[0])
HAlpha oracle_halpha(const NatPtr& n_in);

enum class OracleVerdict { Accept, Reject, Unsupported };

struct OracleReport {
  OracleVerdict verdict = OracleVerdict::Unsupported;
  std::string detail;
};

// checks every tuple of the spec against the program. The program must be
// a sequential chain  sparse ; S_H ; (oracle f) ; S_H ; sparse  where the
// two S_H layers are the Hadamard-cascade fix (verified here against its
// closed form, not assumed) and the sparse parts are fix-free. Each
// tuple's hypothesis must pin x and y. Shapes outside this class return
// Unsupported, never a guess.
OracleReport check_oracle_judgement(const OracleSpec& spec, const IsqirPtr& s,
                                    const Registry& reg, const NatPtr& qubits,
                                    const SolverConfig& cfg);

// dense unitary of the program with the oracle instantiated by a concrete
// truth table (bit i of f_bits = f(i)); n <= 6
Mat oracle_program_unitary(const IsqirPtr& s, std::uint64_t n,
                           std::uint64_t qubits, const Registry& reg,
                           std::uint64_t f_bits);

// the textbook Deutsch-Jozsa instance
OracleSpec dj_spec();
IsqirPtr dj_program();

}  // namespace iqc
