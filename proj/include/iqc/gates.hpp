#pragma once
// Gate database: primitive gates with closed-form amplitude templates at
// symbolic qubit arguments, plus registered parameterized components
// (verified programs reusable as pseudo-gates) and registered concrete
// composites (fixed-size circuits placed by register start positions).

#include <functional>
#include <map>

#include "iqc/ppsa.hpp"

namespace iqc {

struct IsqirNode;
using IsqirPtr = std::shared_ptr<const IsqirNode>;

// One primitive occurrence inside a const block. CP carries an extra
// log-denominator parameter: CP a b w applies phase e^{2 pi i/2^w} when
// both qubits are 1.
struct SqirGate {
  std::string name;
  std::vector<NatPtr> args;
  NatPtr param;  // CP only
};

// Call of a registered parameterized component at the given size expr
// (the component's own n), placed at wire 0.
struct ComponentCall {
  std::string name;
  NatPtr size;
};

struct SqirOp {
  enum class Kind { Gate, Call } kind;
  SqirGate gate;
  ComponentCall call;
};
using SqirProgram = std::vector<SqirOp>;

SqirOp op_gate(std::string name, std::vector<NatPtr> args, NatPtr param = nullptr);
SqirOp op_call(std::string name, NatPtr size);

struct GateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// primitive metadata
struct PrimitiveGate {
  std::string name;
  int arity;            // qubit args
  bool has_param;       // CP
};
const PrimitiveGate* find_primitive(const std::string& name);
std::vector<std::string> primitive_names();

// registered parameterized component: a verified program together with
// its hypothesis-amplitude pair (witness mandatory)
struct Component {
  IsqirPtr program;
  HAlpha halpha;   // over the component's own n; h must be full
  NatPtr qubits;   // wire count expr in n
};

// registered concrete composite: fixed circuit placed by register starts;
// wire i of the circuit lands at args[wires[i].first] + wires[i].second
struct CompositeGate {
  std::string name;
  int nargs;
  std::vector<std::pair<int, int>> wires;
  std::vector<std::vector<std::complex<double>>> unitary;  // dim 2^wires.size()
};

struct Registry {
  std::map<std::string, Component> components;
  std::map<std::string, CompositeGate> composites;
};

// closed-form hypothesis-amplitude template for a primitive at its
// (symbolic) argument exprs; h is full, witness included
HAlpha gate_halpha(const SqirGate& g);

// halpha of any const-block op, resolving component calls through the
// registry (call size substituted for the component's n)
HAlpha op_halpha(const SqirOp& op, const Registry& reg);

bool equal(const SqirGate& a, const SqirGate& b);
bool equal(const SqirOp& a, const SqirOp& b);

std::string to_string(const SqirOp& op);
SqirOp parse_sqir_op(const std::string& s);

}  // namespace iqc
