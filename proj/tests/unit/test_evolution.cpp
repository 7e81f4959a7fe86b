#include <cmath>
#include <numbers>

#include "doctest.h"
#include "momgraph/builtins.hpp"
#include "momgraph/evolution.hpp"
#include "momgraph/spectra.hpp"
#include "support/generators.hpp"

using namespace momgraph;

namespace {

EdgeId E(std::size_t i) { return edge_id(i); }
VertexId V(std::size_t i) { return vertex_id(i); }

// Real line split at one vertex: incoming lead 0, outgoing lead 1.
MomentumOperator line() {
  const MetricGraph g(1, {}, {{E(0), V(0), LeadDirection::Incoming}, {E(1), V(0), LeadDirection::Outgoing}});
  return assemble(g, {default_coupling(g, V(0), ComplexMatrix::Identity(1, 1))});
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

PacketComponent gaussian(EdgeId e, double centre, double width, double half_support) {
  auto f = [=](double x) { return Complex(std::exp(-std::pow((x - centre) / width, 2))); };
  auto df = [=](double x) { return Complex(-2 * (x - centre) / (width * width) * std::exp(-std::pow((x - centre) / width, 2))); };
  return {e, f, {centre - half_support, centre + half_support}, df};
}

}  // namespace

TEST_SUITE("evolution") {
  TEST_CASE("short routes stay on the edge") {
    const auto op = two_loop({1, 1, 1});
    const auto r = routes_to_point(op, {E(2), 0.8}, 0.5);
    REQUIRE(r.size() == 1);
    CHECK(r[0].factor == Complex(1.0));
    CHECK(r[0].route.hops.empty());
    CHECK(r[0].route.start.edge == E(2));
    CHECK(r[0].route.start.coordinate == doctest::Approx(0.3));
  }

  TEST_CASE("star: one route per incoming lead") {
    const auto u = fourier_matrix(3);
    const auto op = star(3, u);
    const auto r = routes_to_point(op, {E(4), 0.7}, 2.0);
    REQUIRE(r.size() == 3);
    for (const auto& rf : r) {
      REQUIRE(rf.route.hops.size() == 1);
      const auto m = index(rf.route.start.edge);
      CHECK(rf.route.start.coordinate == doctest::Approx(-1.3));
      CHECK(std::abs(rf.factor - u(1, static_cast<Eigen::Index>(m))) < 1e-15);
    }
  }

  TEST_CASE("loop-line routes through the loop") {
    testing::Rng rng(31);
    const ComplexMatrix u = testing::random_unitary(2, rng);
    const double ell = 1.0, t = 0.3;
    const auto op = loop_line(ell, u);
    for (int n = 1; n <= 5; ++n) {
      const double a = n * ell + t + 0.45;
      const auto all = routes_to_point(op, {E(2), t}, a);
      // one route stops inside the loop, the rest come in from the lead
      std::vector<RouteFactor> r;
      for (const auto& rf : all)
        if (rf.route.start.edge == E(0)) r.push_back(rf);
      REQUIRE(all.size() == static_cast<std::size_t>(n + 2));
      REQUIRE(r.size() == static_cast<std::size_t>(n + 1));
      for (const auto& rf : r) {
        const auto loops = rf.route.hops.size() - 1;
        const Complex want = loops == 0 ? u(0, 0) : u(0, 1) * std::pow(u(1, 1), static_cast<int>(loops) - 1) * u(1, 0);
        CHECK(std::abs(rf.factor - want) < 1e-14);
        CHECK(rf.route.start.edge == E(0));
        CHECK(rf.route.start.coordinate == doctest::Approx(t - a + static_cast<double>(loops) * ell));
        CHECK(rf.route.hops.front().in_edge == E(0));
        CHECK(rf.route.hops.back().out_edge == E(2));
      }
    }
  }

  TEST_CASE("forward routes mirror backward ones") {
    const auto op = two_loop({1.0, std::sqrt(2.0), std::sqrt(3.0) - 1.0});
    const auto fwd = routes_from_point(op, {E(0), -0.2137}, 2.93);
    for (const auto& rf : fwd) {
      const auto back = routes_to_point(op, rf.route.end, 2.93);
      bool found = false;
      for (const auto& b : back) {
        found = found || (b.route.start.edge == E(0) && std::abs(b.route.start.coordinate + 0.2137) < 1e-12 &&
                          std::abs(b.factor - rf.factor) < 1e-14 && b.route.hops.size() == rf.route.hops.size());
      }
      CHECK(found);
    }
  }

  TEST_CASE("vertex hits and the explosion cap") {
    const auto op = two_loop({1, 1, 1});
    CHECK(kind_of([&] { routes_to_point(op, {E(1), 0.0}, 0.5); }) == ErrorKind::VertexHit);
    CHECK(kind_of([&] { routes_to_point(op, {E(1), 0.4}, 0.4); }) == ErrorKind::VertexHit);
    CHECK(kind_of([&] { routes_to_point(op, {E(1), 0.4}, 1.4); }) == ErrorKind::VertexHit);
    CHECK(kind_of([&] { routes_to_point(op, {E(1), 0.5}, 12.3, 100); }) == ErrorKind::ExplosionCap);
    CHECK(kind_of([&] { routes_to_point(op, {E(1), 0.5}, -1.0); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("shift on the line") {
    const auto op = line();
    const WavePacket psi{{bump(E(0), -2.0, -1.0)}};
    for (double a : {0.0, 0.5, 1.5, 3.0, -0.5}) {
      for (double x : {-2.7, -1.2, -0.3}) {
        const Complex want = evaluate(psi, {E(0), x - a});
        CHECK(std::abs(evolve_at(op, psi, a, {E(0), x}).value - want) < 1e-15);
      }
      for (double x : {0.2, 1.4, 2.1}) {
        const double y = x - a;
        const Complex want = y < 0 ? evaluate(psi, {E(0), y}) : Complex(0.0);
        CHECK(std::abs(evolve_at(op, psi, a, {E(1), x}).value - want) < 1e-15);
      }
    }
  }

  TEST_CASE("star splitting") {
    const auto u = fourier_matrix(3);
    const auto op = star(3, u);
    const WavePacket psi{{bump(E(0), -1.5, -0.5)}};
    const double a = 2.2;
    for (std::size_t j = 0; j < 3; ++j) {
      for (double x = 0.75; x < 1.7; x += 0.1) {
        const Complex want = u(static_cast<Eigen::Index>(j), 0) * evaluate(psi, {E(0), x - a});
        CHECK(std::abs(evolve_at(op, psi, a, {E(3 + j), x}).value - want) < 1e-15);
      }
    }
    // probability after the passage is conserved
    double total = 0.0;
    const auto moved = evolve(op, psi, a);
    for (std::size_t j = 0; j < 3; ++j) {
      WavePacket part;
      for (const auto& c : moved.components)
        if (c.edge == E(3 + j)) part.components.push_back(c);
      total += std::pow(packet_norm(part), 2);
    }
    CHECK(total == doctest::Approx(std::pow(packet_norm(psi), 2)).epsilon(1e-10));
  }

  TEST_CASE("packet norms") {
    const auto unit = normalized({{bump(E(0), -1.0, 1.0)}}, 1024);
    CHECK(packet_norm(unit) == doctest::Approx(1.0).epsilon(1e-8));
    const WavePacket a{{bump(E(0), 0.0, 1.0, 2.0)}}, b{{bump(E(1), 3.0, 5.0, Complex(0, 1))}};
    WavePacket both = a;
    both.components.push_back(b.components[0]);
    CHECK(packet_norm(both) == doctest::Approx(std::hypot(packet_norm(a), packet_norm(b))).epsilon(1e-12));

    // Weyl-type packet sqrt(eps) e^{ikx} phi(eps (x - y)) with ||phi|| = 1
    const auto phi = normalized({{bump(E(0), -1.0, 1.0)}}, 1024).components[0];
    for (double eps : {1.0, 0.25}) {
      const double y = 2.0 / eps, k = 2.5;
      PacketComponent c{E(1),
                        [=](double x) { return std::sqrt(eps) * std::exp(Complex(0, k * x)) * phi.profile(eps * (x - y)); },
                        {y - 1.0 / eps, y + 1.0 / eps},
                        {}};
      CHECK(packet_norm({{c}}, 256) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }

  TEST_CASE("evolution is unitary and invertible") {
    testing::Rng rng(41);
    const auto op = two_loop({1.0, 1.3, 0.8});
    const auto psi = normalized({{bump(E(0), -1.2, -0.3)}});
    for (int i = 0; i < 5; ++i) {
      const double a = testing::uniform(rng, 0.0, 4.0);
      const auto moved = evolve(op, psi, a);
      CHECK(packet_norm(moved) == doctest::Approx(1.0).epsilon(1e-9));
      const auto back = evolve(op, moved, -a);
      // off the lattice of edge-length differences, where the lazy packet is evaluated at a vertex
      for (double x = -1.2479; x < -0.25; x += 0.0513) {
        CHECK(std::abs(evaluate(back, {E(0), x}) - evaluate(psi, {E(0), x})) < 1e-12);
      }
    }
  }

  TEST_CASE("supports stay compact and bounded") {
    const auto op = two_loop({1.0, 1.3, 0.8});
    const auto moved = evolve(op, {{bump(E(0), -1.2, -0.3)}}, 3.7);
    for (const auto& c : moved.components) {
      CHECK(std::isfinite(c.support.lo));
      CHECK(std::isfinite(c.support.hi));
      CHECK(contains(op.graph(), {c.edge, c.support.lo}));
      CHECK(contains(op.graph(), {c.edge, c.support.hi}));
    }
    const auto s = propagate_support(op, E(0), {-1.2, -0.3}, 0.2);
    REQUIRE(s.size() == 1);
    CHECK(s[0].second.lo == doctest::Approx(-1.0));
  }

  TEST_CASE("sampled evolution") {
    const auto op = star(2, hadamard2());
    const auto psi = normalized({{bump(E(0), -1.0, -0.2)}});
    const auto id = evolve_grid(op, psi, 0.0, 400);
    for (double x = -0.95; x < -0.2; x += 0.07) {
      CHECK(std::abs(evaluate(id, {E(0), x}) - evaluate(psi, {E(0), x})) < 1e-4);
    }
    CHECK(packet_norm(evolve_grid(op, psi, 1.7, 2000)) == doctest::Approx(1.0).epsilon(1e-5));
  }

  TEST_CASE("lazy packets evaluate at edge ends") {
    // a support filling a whole finite edge puts grid nodes on both of its vertices
    const auto op = two_loop({1.0, std::sqrt(2.0), std::sqrt(3.0) - 1.0});
    const WavePacket psi{{bump(E(0), -0.9, -0.1)}};
    const auto moved = evolve(op, psi, 2.5);
    for (const auto& c : moved.components) {
      const auto dom = op.graph().domain(c.edge);
      if (c.support.hi == dom.hi) CHECK(std::isfinite(std::abs(c.profile(dom.hi))));
      if (c.support.lo == dom.lo) CHECK(std::isfinite(std::abs(c.profile(dom.lo))));
    }
    CHECK(packet_norm(evolve_grid(op, psi, 2.5, 64)) == doctest::Approx(packet_norm(psi)).epsilon(1e-3));
  }

  TEST_CASE("group law") {
    const auto l = line();
    const WavePacket g{{bump(E(0), -2.0, -1.0)}};
    CHECK(group_law_residual(l, g, 0.7, 1.9, 32) < 1e-15);
    const auto st = star(3, fourier_matrix(3));
    const WavePacket psi{{bump(E(1), -1.0, -0.4)}};
    CHECK(group_law_residual(st, psi, 0.6, 0.937, 64) < 1e-10);
    CHECK(group_law_residual(st, psi, 1.3, 0.0, 64) == 0.0);
  }

  TEST_CASE("generator on the line is -d/dx to first order") {
    const auto op = line();
    const WavePacket psi{{gaussian(E(0), -5.0, 0.5, 4.0)}};
    const double r1 = generator_residual(op, psi, 1e-3, 50);
    const double r2 = generator_residual(op, psi, 5e-4, 50);
    CHECK(r1 < 1e-2);
    CHECK(r2 / r1 == doctest::Approx(0.5).epsilon(0.05));
  }

  TEST_CASE("loop eigenfunctions pick up a phase") {
    const double ls[] = {0.7, 1.1}, as[] = {0.4, -1.3};
    const auto op = loop_operator(ls, as);
    const SecularSystem s(op);
    const auto sp = real_spectrum(s, 6.0);
    REQUIRE(!sp.points.empty());
    const double k = sp.points.back().k;
    const auto ef = eigenfunctions(s, k)[0];
    WavePacket psi;
    for (std::size_t j = 0; j < 2; ++j) {
      const Complex c = ef.amplitudes[static_cast<Eigen::Index>(j)];
      psi.components.push_back({E(j), [=](double x) { return c * std::exp(Complex(0, k * x)); }, {0.0, ls[j]},
                                [=](double x) { return Complex(0, k) * c * std::exp(Complex(0, k * x)); }});
    }
    for (double a : {0.3, 2.5, -1.7}) {
      const auto moved = evolve(op, psi, a);
      for (const auto& x : sample_points(psi, 20)) {
        CHECK(std::abs(evaluate(moved, x) - std::exp(Complex(0, -k * a)) * evaluate(psi, x)) < 1e-12);
      }
    }
    const double h = 1e-4;
    CHECK(generator_residual(op, psi, h, 20) == doctest::Approx(std::abs((std::exp(Complex(0, -k * h)) - 1.0) / h + Complex(0, k)) * std::abs(ef.amplitudes[0])).epsilon(0.05));
  }

  TEST_CASE("generator needs the vertex conditions") {
    const double ls[] = {1.0}, as[] = {0.0};
    const auto op = loop_operator(ls, as);
    const WavePacket bad{{{E(0), [](double x) { return Complex(x); }, {0.0, 1.0}, [](double) { return Complex(1.0); }}}};
    CHECK(kind_of([&] { generator_residual(op, bad, 1e-3, 10); }) == ErrorKind::DomainViolation);
  }
}
