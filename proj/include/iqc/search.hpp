#pragma once
// Syntax-guided enumeration of candidate programs, smallest first, with
// static pruning (well-typedness at small n, canonical-form dedup) and a
// dense-simulation fingerprint against the target before any SMT work.
// synthesize() returns the first candidate the verifier accepts.

#include "iqc/speclang.hpp"
#include "iqc/verifier.hpp"

namespace iqc {

struct SearchBounds {
  std::size_t max_program_length = 10;
  std::vector<std::uint64_t> fix_k_choices = {1, 2, 3};
  std::size_t perm_derivation_depth = 4;
  std::uint64_t const_min = 0, const_max = 3;  // range of literal m
  std::optional<double> wall_clock_seconds;
};

// gate names, resolved against the primitive table and the registry's
// components (callable as pseudo-gates)
struct GateSet {
  std::vector<std::string> gates;
};

struct SearchReport {
  std::uint64_t generated = 0;   // candidates materialized
  std::uint64_t verified = 0;    // candidates sent to the verifier
  std::map<std::string, std::uint64_t> rejections;
  double elapsed_seconds = 0;
  std::string failure;  // empty on success
};

struct SearchResult {
  bool success = false;
  IsqirPtr program;
  ProofTrace trace;
  SearchReport report;
};

// ordered stream: nondecreasing program size; within a size, const blocks
// before fix forms; at most one fix per candidate; skips candidates that
// are ill-typed at small n or repeat an earlier canonical form
class CandidateStream {
 public:
  CandidateStream(GateSet gs, SearchBounds b, const Registry& reg);
  ~CandidateStream();
  IsqirPtr next();  // nullptr once exhausted

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<IsqirPtr> enumerate_candidates(const GateSet& gs,
                                           const SearchBounds& b,
                                           const Registry& reg,
                                           std::size_t limit);

SearchResult synthesize(const HAlpha& target, const NatPtr& qubits,
                        const GateSet& gs, const SearchBounds& b,
                        const Registry& reg, const SolverConfig& cfg);
SearchResult synthesize(const CompiledSpec& spec, const GateSet& gs,
                        const SearchBounds& b, const Registry& reg,
                        const SolverConfig& cfg);

struct VerificationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WitnessInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// verify then insert a reusable component; the amplitude must carry a
// sound sparsity witness and a hypothesis covering the whole register.
// Re-registering a name replaces it after re-verification.
void register_component(Registry& reg, const std::string& name,
                        const IsqirPtr& program, const HAlpha& ha,
                        const NatPtr& qubits, const SolverConfig& cfg);

}  // namespace iqc
