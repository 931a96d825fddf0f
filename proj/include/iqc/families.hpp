#pragma once
// Known inductive circuit families used by the CLI examples and the test
// suite. Each family is a program plus its qubit-count expression in n.
// Families whose amplitude has a closed PPSA form also carry it, so they
// can be registered as reusable components.

#include "iqc/isqir.hpp"
#include "iqc/sim.hpp"

namespace iqc::families {

struct Family {
  std::string name;
  IsqirPtr program;
  NatPtr qubits;                 // expression in n
  std::optional<HAlpha> halpha;  // closed form, when known
};

// state preparation
Family ghz();      // n+1 qubits, |0..0> -> GHZ
Family uniform();  // n+1 qubits, uniform superposition

// rotation-cascade building blocks
Family zn();      // H then controlled phases, phase x*y[n]/2^(n+1)
Family wn();      // controlled phases then H
Family rot();     // cyclic wire rotation, content moves down one wire
Family rotinv();  // inverse rotation
Family rev();     // bit reversal, built from ROT calls
Family qft();     // exact DFT, built from ROTINV/WN calls

// arithmetic
Family adder();       // 2n+2 qubits: carry-in, A, B, carry-out wire
Family subtractor();  // 2n+1 qubits: borrow wire, A, B

// protocols
Family teleport();  // 3n qubits
Family dj();        // n+1 qubits, contains (oracle f)

// registry with ZN, WN, ROT, ROTINV pre-registered (programs + amplitudes)
Registry standard_registry();

}  // namespace iqc::families
