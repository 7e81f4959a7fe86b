#include <cmath>
#include <numbers>

#include "doctest.h"
#include "momgraph/builtins.hpp"
#include "momgraph/two_loop.hpp"
#include "support/generators.hpp"

using namespace momgraph;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

// c_e e^{ikx} on every edge, c0 = 1 on the incoming lead.
BoundaryVector scattering_boundary(const MomentumOperator& op, const TransferCoefficients& t, double k) {
  const Complex c[5] = {1.0, t.c1, t.c2, t.c3, t.c4};
  return boundary_values(op, [&](EdgeId e, double x) { return c[index(e)] * std::exp(kI * k * x); });
}

// Direct solve of the four vertex equations for (c1, c2, c3, c4) with c0 = 1.
Eigen::Vector4cd direct_solve(const TwoLoopLengths& l, double k) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex e1 = std::exp(kI * k * l.l1), e2 = std::exp(kI * k * l.l2), e3 = std::exp(kI * k * l.l3);
  Eigen::Matrix4cd m;
  Eigen::Vector4cd rhs;
  // c1 = r (c3 e3 + 1), c2 = r (c3 e3 - 1)
  m << 1, 0, -r * e3, 0,
       0, 1, -r * e3, 0,
       -r * e1, -r * e2, 1, 0,
       -r * e1, r * e2, 0, 1;
  rhs << r, -r, 0, 0;
  return m.partialPivLu().solve(rhs);
}

}  // namespace

TEST_SUITE("two-loop") {
  TEST_CASE("equal arms: c3 vanishes and the line passes straight through") {
    const TwoLoopLengths l{1.3, 1.3, 0.7};
    for (double k : {0.3, 1.1, 2.9, -4.2}) {
      const auto t = transfer_coefficients(l, k);
      CHECK(std::abs(t.c3) < 1e-15);
      CHECK(std::abs(t.c4 - std::exp(kI * k * l.l1)) < 1e-14);
      CHECK(std::abs(t.c1 + t.c2) < 1e-15);
      CHECK(std::abs(t.c1 - 1.0 / std::numbers::sqrt2) < 1e-15);
    }
  }

  TEST_CASE("transfer coefficients solve the vertex conditions") {
    testing::Rng rng(21);
    for (int i = 0; i < 50; ++i) {
      const TwoLoopLengths l{testing::uniform(rng, 0.5, 2), testing::uniform(rng, 0.5, 2),
                             testing::uniform(rng, 0.5, 2)};
      const double k = testing::uniform(rng, -20, 20);
      const auto t = transfer_coefficients(l, k);
      const auto op = two_loop(l);
      CHECK(apply_vertex_conditions(op, scattering_boundary(op, t, k)) < 1e-12);
      const auto d = direct_solve(l, k);
      CHECK(std::abs(d[0] - t.c1) < 1e-10);
      CHECK(std::abs(d[1] - t.c2) < 1e-10);
      CHECK(std::abs(d[2] - t.c3) < 1e-10);
      CHECK(std::abs(d[3] - t.c4) < 1e-10);
      CHECK(std::abs(t.c4) == doctest::Approx(1.0));  // unitarity: all of c0 leaves
    }
  }

  TEST_CASE("transfer refuses embedded eigenvalues") {
    const TwoLoopLengths l{1.0, 1.0, 2.0};
    try {
      transfer_coefficients(l, 2 * kPi / 3.0);
      FAIL("expected AtEmbeddedEigenvalue");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::AtEmbeddedEigenvalue);
    }
    CHECK(std::abs(transfer_denominator(l, 2 * kPi / 3.0)) < 1e-14);
  }

  TEST_CASE("resonances start on the real axis") {
    const auto r = resonances(1.0, 0.0, -3, 3);
    REQUIRE(r.roots.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) {
      CHECK(r.seed_indices[i] == static_cast<int>(i) - 3);
      CHECK(r.roots[i] == Complex(kPi * r.seed_indices[i], 0.0));
    }
  }

  TEST_CASE("n = 0 root is stationary") {
    for (double delta : {1e-3, 0.05, -0.02}) CHECK(continue_resonance(1.3, delta, 0) == Complex(0.0));
  }

  TEST_CASE("continued roots solve the resonance condition") {
    for (int n = 1; n <= 6; ++n) {
      for (double delta : {1e-3, 0.02, 0.05, -0.03}) {
        const Complex k = continue_resonance(1.0, delta, n);
        CHECK(std::abs(resonance_function(1.0, delta, k)) < 1e-12);
        CHECK(std::abs(k - kPi * n) < 0.1 * n);
        // the full two-loop denominator with l1 = l3 = 1, l2 = 1 + delta
        CHECK(std::abs(transfer_denominator({1.0, 1.0 + delta, 1.0}, k)) < 1e-11);
      }
    }
  }

  TEST_CASE("first-order shift is real: dk/ddelta = -pi n / (4 l^2)") {
    for (double ell : {1.0, 0.6}) {
      for (int n = 1; n <= 5; ++n) {
        const double delta = 1e-6;
        const Complex slope = (continue_resonance(ell, delta, n) - kPi * n / ell) / delta;
        const double want = -kPi * n / (4 * ell * ell);
        CHECK(std::abs(slope - want) < 1e-4 * std::abs(want));
      }
    }
  }

  TEST_CASE("imaginary part enters at second order") {
    const double d1 = 1e-3, d2 = 2e-3;
    const double i1 = continue_resonance(1.0, d1, 1).imag(), i2 = continue_resonance(1.0, d2, 1).imag();
    CHECK(i1 != 0.0);
    CHECK(i2 / i1 == doctest::Approx(4.0).epsilon(0.01));
  }

  TEST_CASE("finer continuation agrees") {
    for (int n = 1; n <= 4; ++n) {
      CHECK(std::abs(continue_resonance(1.0, 0.05, n) - continue_resonance(1.0, 0.05, n, 400)) < 1e-12);
    }
    CHECK_THROWS_AS(continue_resonance(0.0, 0.01, 1), Error);
    CHECK_THROWS_AS(continue_resonance(1.0, 0.01, 1, 0), Error);
  }

  TEST_CASE("compact variant: every mode vanishes on an edge") {
    const double l1 = 1.0, l3 = 2.0, l4 = 3.0;
    const auto op = two_loop_compact({l1, l1, l3}, l4);
    const auto sp = compact_two_loop_spectrum(l1, l3, l4, 30.0);
    for (const auto& m : sp.modes) {
      if (m.branch == TwoLoopBranch::Symmetric) {
        CHECK(m.amplitudes[0] == Complex(0.0));
        CHECK(std::remainder(m.k * (l1 + l3), 2 * kPi) == doctest::Approx(0.0).epsilon(1e-9));
      } else {
        CHECK(m.amplitudes[3] == Complex(0.0));
        CHECK(std::remainder(m.k * (l1 + l4), 2 * kPi) == doctest::Approx(0.0).epsilon(1e-9));
      }
      CHECK(apply_vertex_conditions(op, eigenfunction_boundary(op, {m.k, m.amplitudes})) < 1e-12);
      double norm2 = 0.0;
      const double len[4] = {l4, l1, l1, l3};
      for (int e = 0; e < 4; ++e) norm2 += std::norm(m.amplitudes[e]) * len[e];
      CHECK(norm2 == doctest::Approx(1.0));
    }
  }

  TEST_CASE("compact variant agrees with the secular solver") {
    for (double l4 : {3.0, 0.7, std::numbers::sqrt2}) {
      const auto closed = compact_two_loop_spectrum(1.0, 2.0, l4, 25.0);
      const auto solved = real_spectrum(SecularSystem(two_loop_compact({1.0, 1.0, 2.0}, l4)), 25.0);
      REQUIRE(closed.spectrum.points.size() == solved.points.size());
      for (std::size_t i = 0; i < solved.points.size(); ++i) {
        CHECK(std::abs(closed.spectrum.points[i].k - solved.points[i].k) < 1e-9);
        CHECK(closed.spectrum.points[i].multiplicity == solved.points[i].multiplicity);
      }
    }
  }
}
