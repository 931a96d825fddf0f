#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "iqc/families.hpp"

using namespace iqc;

namespace {
const Registry kEmpty;

Mat family_unitary(const families::Family& f, std::uint64_t n, const Registry& reg = kEmpty) {
  std::uint64_t q = eval(f.qubits, Env(n, 0, 0));
  return program_unitary(f.program, n, q, reg);
}

// permutation matrix for y = f(x)
Mat perm_matrix(std::uint64_t dim, const std::function<std::uint64_t(std::uint64_t)>& f) {
  Mat m(dim, std::vector<Amp>(dim, 0));
  for (std::uint64_t x = 0; x < dim; ++x) m[f(x)][x] = 1;
  return m;
}
}  // namespace

TEST_CASE("ghz program prepares the GHZ state") {
  families::Family f = families::ghz();
  double s = 1.0 / std::sqrt(2.0);
  for (std::uint64_t n = 0; n <= 4; ++n) {
    Mat u = family_unitary(f, n);
    std::uint64_t dim = std::uint64_t{1} << (n + 1);
    for (std::uint64_t y = 0; y < dim; ++y) {
      double expect = (y == 0 || y == dim - 1) ? s : 0.0;
      CHECK(std::abs(u[y][0] - Amp(expect)) < 1e-9);
    }
  }
}

TEST_CASE("uniform program prepares the uniform state") {
  families::Family f = families::uniform();
  for (std::uint64_t n = 0; n <= 4; ++n) {
    Mat u = family_unitary(f, n);
    std::uint64_t dim = std::uint64_t{1} << (n + 1);
    double s = 1.0 / std::sqrt(double(dim));
    for (std::uint64_t y = 0; y < dim; ++y) CHECK(std::abs(u[y][0] - Amp(s)) < 1e-9);
  }
}

TEST_CASE("rot and rotinv are the cyclic wire rotations") {
  families::Family r = families::rot(), ri = families::rotinv();
  for (std::uint64_t n = 0; n <= 3; ++n) {
    std::uint64_t dim = std::uint64_t{1} << (n + 1);
    // rot moves content down one wire: output bit i = input bit i+1
    Mat down = perm_matrix(dim, [&](std::uint64_t x) {
      return (x >> 1) | ((x & 1) << n);
    });
    CHECK(max_entry_diff(family_unitary(r, n), down) == 0);
    Mat up = perm_matrix(dim, [&](std::uint64_t x) {
      return ((x << 1) & (dim - 1)) | (x >> n);
    });
    CHECK(max_entry_diff(family_unitary(ri, n), up) == 0);
    // closed forms agree
    CHECK(max_entry_diff(ppsa_to_matrix(r.halpha->alpha, n, n + 1), down) == 0);
    CHECK(max_entry_diff(ppsa_to_matrix(ri.halpha->alpha, n, n + 1), up) == 0);
  }
}

TEST_CASE("zn and wn match their closed amplitudes") {
  for (families::Family f : {families::zn(), families::wn()}) {
    for (std::uint64_t n = 0; n <= 3; ++n) {
      Mat u = family_unitary(f, n);
      CHECK(is_unitary(u, 1e-9));
      CHECK(max_entry_diff(u, ppsa_to_matrix(f.halpha->alpha, n, n + 1)) < 1e-9);
    }
    CHECK(wellformed(f.halpha->alpha).empty());
    CHECK(!validate_witness(*f.halpha, 3, nadd(n_n(), nconst(1))).has_value());
    CHECK(!check_disjoint(f.halpha->alpha, 3, nadd(n_n(), nconst(1))).has_value());
  }
}

TEST_CASE("rev reverses the qubit order") {
  Registry reg = families::standard_registry();
  families::Family f = families::rev();
  for (std::uint64_t n = 0; n <= 3; ++n) {
    std::uint64_t dim = std::uint64_t{1} << (n + 1);
    Mat expect = perm_matrix(dim, [&](std::uint64_t x) {
      std::uint64_t y = 0;
      for (std::uint64_t i = 0; i <= n; ++i) y |= ((x >> i) & 1) << (n - i);
      return y;
    });
    CHECK(max_entry_diff(family_unitary(f, n, reg), expect) == 0);
  }
}

TEST_CASE("qft program realizes the exact DFT matrix") {
  Registry reg = families::standard_registry();
  families::Family f = families::qft();
  for (std::uint64_t n = 0; n <= 3; ++n) {
    std::uint64_t dim = std::uint64_t{1} << (n + 1);
    Mat u = family_unitary(f, n, reg);
    double s = 1.0 / std::sqrt(double(dim));
    for (std::uint64_t x = 0; x < dim; ++x)
      for (std::uint64_t y = 0; y < dim; ++y) {
        Amp expect = std::polar(s, 2 * M_PI * double(x * y % dim) / double(dim));
        CHECK(std::abs(u[y][x] - expect) < 1e-9);
      }
  }
}

TEST_CASE("adder computes sum and carry-out") {
  families::Family f = families::adder();
  for (std::uint64_t n = 0; n <= 2; ++n) {
    Mat u = family_unitary(f, n);
    CHECK(max_entry_diff(u, ppsa_to_matrix(f.halpha->alpha, n, 2 * n + 2)) == 0);
  }
  // spot-check the n = 2 truth table on the specified inputs
  Mat u = family_unitary(f, 2);
  for (std::uint64_t a = 0; a < 4; ++a)
    for (std::uint64_t b = 0; b < 4; ++b) {
      std::uint64_t x = (a << 1) | (b << 3);
      std::uint64_t y = (a << 1) | (((a + b) % 4) << 3) | (((a + b) / 4) << 5);
      CHECK(u[y][x].real() == doctest::Approx(1.0));
    }
  CHECK(!validate_witness(*f.halpha, 2, nadd(nmul(nconst(2), n_n()), nconst(2))).has_value());
}

TEST_CASE("subtractor computes B - A") {
  families::Family f = families::subtractor();
  for (std::uint64_t n = 0; n <= 2; ++n) {
    Mat u = family_unitary(f, n);
    CHECK(max_entry_diff(u, ppsa_to_matrix(f.halpha->alpha, n, 2 * n + 1)) == 0);
  }
  Mat u = family_unitary(f, 2);
  for (std::uint64_t a = 0; a < 4; ++a)
    for (std::uint64_t b = 0; b < 4; ++b) {
      std::uint64_t x = (a << 1) | (b << 3);
      std::uint64_t y = (a << 1) | (((b + 4 - a) % 4) << 3);
      CHECK(u[y][x].real() == doctest::Approx(1.0));
    }
}

TEST_CASE("teleport instantiates to the textbook circuit at n = 1") {
  families::Family f = families::teleport();
  auto g = [](std::string name, std::vector<std::uint64_t> qs) {
    return ConcreteOp{std::move(name), std::move(qs), 0, nullptr};
  };
  Mat expect = ops_unitary(
      {g("H", {1}), g("CX", {1, 2}), g("CX", {0, 1}), g("H", {0})}, 3);
  CHECK(max_entry_diff(family_unitary(f, 1), expect) == 0);
  // n = 0 is the empty circuit on zero qubits
  CHECK(instantiate(f.program, 0, kEmpty).empty());
}

TEST_CASE("structural predicates") {
  Registry reg = families::standard_registry();
  for (families::Family f : {families::ghz(), families::zn(), families::adder(),
                             families::subtractor(), families::teleport(),
                             families::qft(), families::rev()}) {
    CHECK(single_fix_per_path(f.program));
    CHECK(!contains_oracle(f.program));
    CHECK(validate_well_typed(f.program, 3, reg) == "");
  }
  CHECK(contains_oracle(families::dj().program));
  CHECK(program_size(families::ghz().program) == 3);

  // repeated wire at some n is reported
  IsqirPtr bad = parse_isqir("(const (CX 1 (+ n 1)))");
  CHECK(validate_well_typed(bad, 3, reg) != "");
  // nested fix on one path is rejected
  IsqirPtr nested = isq_fix(perm_id(), {{}}, families::ghz().program, isq_const({}));
  CHECK(!single_fix_per_path(nested));
  CHECK(validate_well_typed(nested, 3, reg) != "");
}

TEST_CASE("text round trip") {
  for (families::Family f : {families::ghz(), families::zn(), families::adder(),
                             families::teleport(), families::dj(), families::qft()}) {
    std::string text = to_string(f.program);
    CHECK(equal(parse_isqir(text), f.program));
    CHECK(to_string(parse_isqir(text)) == text);
  }
  CHECK_THROWS_AS(parse_isqir("(fix 4 id (base) (base) (base) (base) (const) (const))"),
                  IllTypedError);
  CHECK_THROWS_AS(parse_isqir("(seq (const))"), ParseError);
  CHECK_THROWS_AS(parse_isqir("(const (H 0)) junk"), ParseError);
}
