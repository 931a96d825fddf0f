#include "iqc/families.hpp"

namespace iqc::families {

namespace {
NatPtr np1() { return nadd(n_n(), nconst(1)); }

// register of `w` bits starting at wire `lo`, as a value; safe for w = 0
NatPtr field(const NatPtr& v, const NatPtr& lo, const NatPtr& w) {
  return nmod(nshr(v, lo), npow2(w));
}

// bits of v at wire `q` and above cleared below, i.e. v with the low
// `cut` bits removed
NatPtr high_part(const NatPtr& v, const NatPtr& cut) {
  return nsub(v, nmod(v, npow2(cut)));
}

HAlpha permutation_halpha(NatPtr f_of_x, NatPtr g_of_y) {
  HAlpha ha;
  ha.h = btrue();
  ha.alpha.beta = nconst(1);
  ha.alpha.terms.push_back(PpsaTerm{beq(n_y(), f_of_x), phase_zero()});
  ha.alpha.witness = SparsityWitness{{std::move(g_of_y)}, {std::move(f_of_x)}};
  return ha;
}

Family make(std::string name, const std::string& text, NatPtr qubits,
            std::optional<HAlpha> halpha = std::nullopt) {
  return Family{std::move(name), parse_isqir(text), std::move(qubits), std::move(halpha)};
}

// phase-cascade amplitude: guard fixes everything but bit n
HAlpha cascade_halpha(NatPtr num) {
  const NatPtr n = n_n(), x = n_x(), y = n_y();
  NatPtr off = nshl(nbit(y, n), n);
  HAlpha ha;
  ha.h = btrue();
  ha.alpha.beta = nconst(2);
  ha.alpha.terms.push_back(
      PpsaTerm{beq(nxor(x, nshl(nbit(x, n), n)), nxor(y, off)),
               PhaseExpr{std::move(num), np1()}});
  ha.alpha.witness = SparsityWitness{{y, nxor(y, npow2(n))}, {x, nxor(x, npow2(n))}};
  return ha;
}
}  // namespace

Family ghz() {
  return make("ghz", "(fix 1 id (base (H 0)) (const) (const (CX (- n 1) n)))", np1());
}

Family uniform() {
  return make("uniform", "(fix 1 id (base (H 0)) (const) (const (H n)))", np1());
}

Family zn() {
  // phase x * y[n] / 2^(n+1)
  const NatPtr n = n_n();
  NatPtr num = nmul(nmod(n_x(), npow2(np1())), nbit(n_y(), n));
  return make("zn",
              "(fix 1 (shift 0 (+ n 1) 1) (base (H 0)) (const) "
              "(const (CP 0 n (+ n 1))))",
              np1(), cascade_halpha(std::move(num)));
}

Family wn() {
  // phase ((x mod 2^n) * x[n] + x[n] * y[n] * 2^n) / 2^(n+1)
  const NatPtr n = n_n(), x = n_x(), y = n_y();
  NatPtr num = nadd(nmul(nmod(x, npow2(n)), nbit(x, n)),
                    nmul(nmul(nbit(x, n), nbit(y, n)), npow2(n)));
  return make("wn",
              "(fix 1 (shift 0 (+ n 1) 1) (base (H 0)) "
              "(const (CP 0 n (+ n 1))) (const))",
              np1(), cascade_halpha(std::move(num)));
}

namespace {
// content moves down one wire: bit i of the output is bit i+1 of the
// input, bit n is bit 0; wires above n untouched
NatPtr rotate_down(const NatPtr& v) {
  const NatPtr n = n_n();
  NatPtr low = nmod(v, npow2(np1()));
  return nadd(nadd(ndiv(low, nconst(2)), nshl(nbit(v, nconst(0)), n)),
              high_part(v, np1()));
}
NatPtr rotate_up(const NatPtr& v) {
  const NatPtr n = n_n();
  return nadd(nadd(nmod(nmul(v, nconst(2)), npow2(np1())), nbit(v, n)),
              high_part(v, np1()));
}
}  // namespace

Family rot() {
  return make("rot", "(fix 1 id (base) (const) (const (SWAP (- n 1) n)))", np1(),
              permutation_halpha(rotate_down(n_x()), rotate_up(n_y())));
}

Family rotinv() {
  return make("rotinv", "(fix 1 id (base) (const (SWAP (- n 1) n)) (const))", np1(),
              permutation_halpha(rotate_up(n_x()), rotate_down(n_y())));
}

Family rev() {
  return make("rev", "(fix 1 id (base) (const) (const (call ROTINV n)))", np1());
}

Family qft() {
  return make("qft",
              "(fix 1 id (base (H 0)) (const (call ROT n)) (const (call WN n)))",
              np1());
}

Family adder() {
  // carry-in 0, A 1..n, B n+1..2n, carry-out wire 2n+1; the base block
  // copies the deepest ripple carry onto the carry-out wire
  const NatPtr n = n_n(), x = n_x(), y = n_y();
  NatPtr c = nbit(x, nconst(0));
  NatPtr a = field(x, nconst(1), n);
  NatPtr b = field(x, np1(), n);
  NatPtr total = nadd(nadd(a, b), c);
  NatPtr sum = nmod(total, npow2(n));
  NatPtr carry = ndiv(total, npow2(n));
  NatPtr top = nadd(nmul(nconst(2), n), nconst(1));
  NatPtr f = nadd(nadd(nadd(nadd(c, nmul(nconst(2), a)), nmul(sum, npow2(np1()))),
                       nshl(nxor(nbit(x, top), carry), top)),
                  high_part(x, nadd(top, nconst(1))));

  NatPtr yc = nbit(y, nconst(0));
  NatPtr ya = field(y, nconst(1), n);
  NatPtr ys = field(y, np1(), n);
  NatPtr yb = nmod(nsub(nsub(nadd(ys, npow2(np1())), ya), yc), npow2(n));
  NatPtr ycarry = ndiv(nadd(nadd(ya, yb), yc), npow2(n));
  NatPtr g = nadd(nadd(nadd(nadd(yc, nmul(nconst(2), ya)), nmul(yb, npow2(np1()))),
                       nshl(nxor(nbit(y, top), ycarry), top)),
                  high_part(y, nadd(top, nconst(1))));

  return make("adder",
              "(fix 1 (comp (shift n (+ (* 2 n) 2) 2) (shift 0 (+ n 1) 1)) "
              "(base (CX 0 1)) "
              "(const (MAJ 0 (+ n 1) 1)) (const (UMA 0 (+ n 1) 1)))",
              nadd(nmul(nconst(2), n_n()), nconst(2)),
              permutation_halpha(std::move(f), std::move(g)));
}

Family subtractor() {
  // borrow-in 0, A 1..n, B n+1..2n; B <- B - A - borrow
  const NatPtr n = n_n(), x = n_x(), y = n_y();
  NatPtr c = nbit(x, nconst(0));
  NatPtr a = field(x, nconst(1), n);
  NatPtr b = field(x, np1(), n);
  NatPtr diff = nmod(nsub(nsub(nadd(b, npow2(np1())), a), c), npow2(n));
  NatPtr f = nadd(nadd(nadd(c, nmul(nconst(2), a)), nmul(diff, npow2(np1()))),
                  high_part(x, nadd(nmul(nconst(2), n), nconst(1))));

  NatPtr yc = nbit(y, nconst(0));
  NatPtr ya = field(y, nconst(1), n);
  NatPtr yd = field(y, np1(), n);
  NatPtr yb = nmod(nadd(nadd(yd, ya), yc), npow2(n));
  NatPtr g = nadd(nadd(nadd(yc, nmul(nconst(2), ya)), nmul(yb, npow2(np1()))),
                  high_part(y, nadd(nmul(nconst(2), n), nconst(1))));

  // B - A = NOT(NOT B + A): the ripple adder conjugated by X on each B wire
  return make("subtractor",
              "(fix 1 (comp (shift n (+ (* 2 n) 1) 2) (shift 0 (+ n 1) 1)) "
              "(base) "
              "(const (X (+ n 1)) (MAJ 0 (+ n 1) 1)) "
              "(const (UMA 0 (+ n 1) 1) (X (+ n 1))))",
              nadd(nmul(nconst(2), n_n()), nconst(1)),
              permutation_halpha(std::move(f), std::move(g)));
}

Family teleport() {
  return make("teleport",
              "(fix 1 (comp (shift (- (* 2 n) 2) (- (* 3 n) 1) 2) "
              "(shift (- n 1) (* 2 n) 1)) "
              "(base) "
              "(const (H (- (* 2 n) 1)) (CX (- (* 2 n) 1) (- (* 3 n) 1)) "
              "(CX (- n 1) (- (* 2 n) 1)) (H (- n 1))) (const))",
              nmul(nconst(3), n_n()));
}

Family dj() {
  // target wire 0, oracle inputs 1..n
  std::string sh = "(fix 1 id (base) (const) (const (H n)))";
  return make("dj",
              "(seq (const (X 0) (H 0)) (seq " + sh + " (seq (oracle f) (seq " + sh +
                  " (const (H 0))))))",
              np1());
}

Registry standard_registry() {
  Registry reg;
  for (auto [key, fam] : {std::pair{"ZN", zn()}, {"WN", wn()}, {"ROT", rot()},
                          {"ROTINV", rotinv()}}) {
    Component comp;
    comp.program = fam.program;
    comp.halpha = *fam.halpha;
    comp.qubits = fam.qubits;
    reg.components[key] = std::move(comp);
  }
  return reg;
}

}  // namespace iqc::families
