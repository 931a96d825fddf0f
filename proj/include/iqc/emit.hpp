#pragma once
// Output side of the pipeline: recursive programs as ISQIR text, concrete
// per-n circuits as OpenQASM 3, amplitudes and proof traces as JSON. The
// QASM emitter is paired with a parser for the subset it produces, so
// emitted circuits can be re-simulated without the original AST.

#include "iqc/search.hpp"

namespace iqc {

struct DimensionTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmitTarget {
  enum class Kind { IsqirText, OpenQasm, HAlphaJson, ProofTraceJson };
  Kind kind = Kind::IsqirText;
  std::uint64_t n = 0;  // OpenQasm: instantiation point
};

// "isqir" | "qasm:N" | "halpha" | "trace"
EmitTarget parse_emit_target(const std::string& text);

struct EmitInput {
  IsqirPtr program;
  std::optional<HAlpha> halpha;
  std::optional<ProofTrace> trace;
};

// deterministic text for the chosen target; HAlphaJson/ProofTraceJson
// need the corresponding optional filled in
std::string emit(const EmitInput& in, const EmitTarget& t, const Registry& reg);

// flat OpenQASM 3 circuit of the program instantiated at n; MAJ/UMA are
// expanded into their defining cx/ccx lists, component calls are inlined.
// Register width is the highest touched wire plus one, capped at 24.
std::string emit_qasm(const IsqirPtr& s, std::uint64_t n, const Registry& reg);

struct ParsedQasm {
  std::uint64_t qubits = 0;
  std::vector<ConcreteOp> ops;
};

// parses the emit_qasm subset (header, one gate application per line)
ParsedQasm parse_qasm(const std::string& text);

// registry persistence for the CLI: components only, as
// {"components": {name: {"program":..., "halpha":..., "qubits":...}}}
std::string registry_to_json(const Registry& reg);
void registry_merge_from_json(Registry& reg, const std::string& text);

int run_cli(int argc, char** argv);

}  // namespace iqc
