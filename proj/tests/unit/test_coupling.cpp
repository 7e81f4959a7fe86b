#include <algorithm>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "momgraph/builtins.hpp"
#include "momgraph/coupling.hpp"
#include "support/generators.hpp"

using namespace momgraph;

namespace {

EdgeId E(std::size_t i) { return edge_id(i); }
VertexId V(std::size_t i) { return vertex_id(i); }

VertexCoupling bare(ComplexMatrix m) {
  std::vector<EdgeId> out, in;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(E(static_cast<std::size_t>(i)));
  for (Eigen::Index i = 0; i < m.cols(); ++i) in.push_back(E(static_cast<std::size_t>(10 + i)));
  return {V(0), out, in, std::move(m)};
}

ComplexMatrix m2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_SUITE("coupling") {
  TEST_CASE("validate_coupling") {
    CHECK(validate_coupling(bare(m2(0, 1, 1, 0))).ok());
    CHECK(validate_coupling(bare(m2(1, 1, 0, 1))).has("not unitary"));
    const auto r = validate_coupling(bare(ComplexMatrix::Zero(2, 3)));
    REQUIRE(r.has("dimension mismatch"));
    CHECK(r.violations()[0].message.find("graph not balanced at vertex") != std::string::npos);
    ComplexMatrix nan = ComplexMatrix::Identity(2, 2);
    nan(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK(validate_coupling(bare(nan)).has("non-finite"));
  }

  TEST_CASE("unitarity check is stable under adjoint and inverse") {
    testing::Rng rng(1);
    for (int i = 0; i < 20; ++i) {
      ComplexMatrix u = testing::random_unitary(testing::pick(rng, 1, 6), rng);
      if (i % 2) u(0, 0) += 1e-6;  // half of them slightly off
      const bool ok = validate_coupling(bare(u)).ok();
      CHECK(validate_coupling(bare(u.adjoint())).ok() == ok);
      CHECK(validate_coupling(bare(u.inverse())).ok() == ok);
    }
  }

  TEST_CASE("assemble the two-loop operator") {
    const auto op = two_loop({1, 1, 1});
    CHECK(op.out_dim() == 4);
    CHECK(op.in_dim() == 4);
    CHECK(std::abs(op.transition(E(3), E(1)) - 1.0 / std::numbers::sqrt2) < 1e-15);
    CHECK(std::abs(op.transition(E(0), E(2)) + 1.0 / std::numbers::sqrt2) < 1e-15);
    CHECK(op.transition(E(0), E(4)) == Complex(0.0));
    const ComplexMatrix u = op.global_matrix();
    CHECK((u.adjoint() * u - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("assemble refuses unbalanced, missing and invalid couplings") {
    std::vector<Lead> leads{{E(0), V(0), LeadDirection::Incoming}};
    for (std::size_t i = 1; i <= 3; ++i) leads.push_back({E(i), V(0), LeadDirection::Outgoing});
    const MetricGraph unbalanced(1, {}, leads);
    auto kind_of = [](auto&& f) {
      try {
        f();
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::InvalidArgument;
    };
    CHECK(kind_of([&] { assemble(unbalanced, {}); }) == ErrorKind::NotBalanced);
    const MetricGraph loop2(2, {{E(0), V(0), V(1), 1.0}, {E(1), V(1), V(0), 1.0}}, {});
    CHECK(kind_of([&] {
            assemble(loop2, {default_coupling(loop2, V(0), ComplexMatrix::Identity(1, 1))});
          }) == ErrorKind::MissingVertexCoupling);
    CHECK(kind_of([&] {
            assemble(loop2, {default_coupling(loop2, V(0), ComplexMatrix::Identity(1, 1)),
                             default_coupling(loop2, V(1), 2.0 * ComplexMatrix::Identity(1, 1))});
          }) == ErrorKind::InvalidCoupling);
    CHECK(kind_of([&] {
            assemble(loop2, {{V(0), {E(0)}, {E(0)}, ComplexMatrix::Identity(1, 1)},
                             default_coupling(loop2, V(1), ComplexMatrix::Identity(1, 1))});
          }) == ErrorKind::InvalidCoupling);
    const MetricGraph bad(1, {{E(0), V(0), V(0), 0.0}}, {});
    CHECK(kind_of([&] { assemble(bad, {}); }) == ErrorKind::InvalidGraph);
  }

  TEST_CASE("loop couplings carry one phase per vertex") {
    const double lengths[] = {1.0, 2.0, 0.5, 1.5};
    const double alpha[] = {0.1, -0.7, 2.0, 3.0};
    const auto op = loop_operator(lengths, alpha);
    CHECK(op.couplings().size() == 4);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(std::abs(op.coupling(V(j)).matrix(0, 0) - std::polar(1.0, alpha[j])) < 1e-15);
    }
  }

  TEST_CASE("vertex conditions") {
    const auto op = two_loop({1, 2, 3});
    BoundaryVector zero{ComplexVector::Zero(4), ComplexVector::Zero(4)};
    CHECK(apply_vertex_conditions(op, zero) == 0.0);
    BoundaryVector wrong{ComplexVector::Zero(3), ComplexVector::Zero(4)};
    CHECK_THROWS_AS(apply_vertex_conditions(op, wrong), Error);

    // piecewise constant function on a loop with psi(x_j+) = e^{i alpha_j} psi(x_j-)
    const double lengths[] = {1.0, 2.0, 3.0};
    const double alpha[] = {0.3, -1.1, 0.8};
    const auto loop = loop_operator(lengths, alpha);
    Complex c[3];
    c[0] = 1.0;
    c[1] = std::polar(1.0, alpha[1]) * c[0];
    c[2] = std::polar(1.0, alpha[2]) * c[1];
    auto psi = [&](EdgeId e, double) { return c[index(e)]; };
    // closing the loop needs e^{i sum alpha} = 1; otherwise vertex 0 fails
    const double r = apply_vertex_conditions(loop, boundary_values(loop, psi));
    CHECK(r == doctest::Approx(std::abs(std::polar(1.0, alpha[0]) * c[2] - c[0])));
    const double closing[] = {-(alpha[1] + alpha[2]), alpha[1], alpha[2]};
    const auto closed = loop_operator(lengths, closing);
    CHECK(apply_vertex_conditions(closed, boundary_values(closed, psi)) < 1e-15);
  }

  TEST_CASE("irreducible blocks") {
    CHECK(irreducible_blocks(bare(ComplexMatrix::Identity(2, 2))).size() == 2);
    CHECK(irreducible_blocks(bare(hadamard2())).size() == 1);

    testing::Rng rng(2);
    const ComplexMatrix a = testing::random_unitary(2, rng), b = testing::random_unitary(2, rng);
    ComplexMatrix block = ComplexMatrix::Zero(4, 4);
    block.topLeftCorner(2, 2) = a;
    block.bottomRightCorner(2, 2) = b;
    std::vector<int> rows{2, 0, 3, 1}, cols{1, 3, 0, 2};
    ComplexMatrix scrambled(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) scrambled(i, j) = block(rows[i], cols[j]);
    const auto blocks = irreducible_blocks(bare(scrambled));
    REQUIRE(blocks.size() == 2);
    for (const auto& bl : blocks) {
      CHECK(bl.matrix.rows() == 2);
      CHECK(validate_coupling(bl).ok());
    }
  }

  TEST_CASE("block partition is invariant under row and column permutations") {
    testing::Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
      ComplexMatrix u = ComplexMatrix::Zero(5, 5);
      u.topLeftCorner(3, 3) = testing::random_unitary(3, rng);
      u.bottomRightCorner(2, 2) = testing::random_unitary(2, rng);
      std::vector<int> pr(5), pc(5);
      std::iota(pr.begin(), pr.end(), 0);
      std::iota(pc.begin(), pc.end(), 0);
      std::shuffle(pr.begin(), pr.end(), rng);
      std::shuffle(pc.begin(), pc.end(), rng);
      ComplexMatrix p(5, 5);
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) p(i, j) = u(pr[i], pc[j]);
      auto sizes = [](const std::vector<VertexCoupling>& bs) {
        std::vector<Eigen::Index> s;
        for (const auto& b : bs) s.push_back(b.matrix.rows());
        std::sort(s.begin(), s.end());
        return s;
      };
      CHECK(sizes(irreducible_blocks(bare(u))) == sizes(irreducible_blocks(bare(p))));
    }
  }

  TEST_CASE("decomposition of the loop-line operator") {
    const auto split = decompose_operator(loop_line(1.0, ComplexMatrix::Identity(2, 2)));
    REQUIRE(split.size() == 2);
    std::size_t with_leads = 0;
    for (const auto& c : split) {
      if (!c.op.graph().is_compact()) {
        ++with_leads;
        CHECK(c.op.graph().leads().size() == 2);
        CHECK(c.op.graph().finite_edges().empty());
      } else {
        CHECK(c.op.graph().finite_edges().size() == 1);
        CHECK(c.edge_map.size() == 1);
        CHECK(c.edge_map[0] == E(1));
      }
    }
    CHECK(with_leads == 1);
    CHECK(decompose_operator(loop_line(1.0, m2(0, 1, 1, 0))).size() == 1);
    CHECK(decompose_operator(two_loop({1, 1, 1})).size() == 1);
  }

  TEST_CASE("components reproduce vertex residuals") {
    testing::Rng rng(4);
    ComplexMatrix u = ComplexMatrix::Zero(3, 3);
    u(0, 0) = 1.0;
    u.bottomRightCorner(2, 2) = testing::random_unitary(2, rng);
    const MetricGraph g(1, {{E(0), V(0), V(0), 1.0}, {E(1), V(0), V(0), 2.0}, {E(2), V(0), V(0), 3.0}}, {});
    const auto op = assemble(g, {default_coupling(g, V(0), u)});
    const auto parts = decompose_operator(op);
    REQUIRE(parts.size() == 2);
    for (const auto& part : parts) {
      // random boundary data on this component, zero elsewhere
      std::vector<Complex> vals(3, 0.0), ends(3, 0.0);
      for (const auto e : part.edge_map) {
        vals[index(e)] = Complex(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1));
        ends[index(e)] = Complex(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1));
      }
      auto parent = [&](EdgeId e, double x) { return x == 0.0 ? vals[index(e)] : ends[index(e)]; };
      auto child = [&](EdgeId e, double x) { return parent(part.edge_map[index(e)], x); };
      CHECK(apply_vertex_conditions(op, boundary_values(op, parent)) ==
            doctest::Approx(apply_vertex_conditions(part.op, boundary_values(part.op, child))));
    }
  }

  TEST_CASE("reference decoupled operators") {
    const double lengths[] = {1.0, 2.0, 3.0};
    const double alpha[] = {0.4, 0.5, 0.6};
    const auto tri = loop_operator(lengths, alpha);
    const auto ref = reference_decoupled(tri, decompose_free_paths(tri.graph()));
    for (const auto& c : ref.couplings()) CHECK(c.matrix(0, 0) == Complex(1.0));

    testing::Rng rng(8);
    const auto f8 = figure_eight(1.0, 2.0, testing::random_unitary(2, rng));
    const auto d8 = decompose_free_paths(f8.graph());
    CHECK(decompose_operator(reference_decoupled(f8, d8)).size() == d8.paths.size());

    for (int trial = 0; trial < 30; ++trial) {
      const auto g = testing::random_balanced_graph(rng, 6, 12, 0.5, 2.0);
      const auto op = testing::random_operator(g, rng);
      const auto d = decompose_free_paths(g);
      CHECK(decompose_operator(reference_decoupled(op, d)).size() == d.paths.size());
    }

    const auto tl = two_loop({1, 1, 1});
    CHECK_THROWS_AS(reference_decoupled(tl, decompose_free_paths(tl.graph())), Error);
  }
}
