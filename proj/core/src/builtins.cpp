#include <cmath>
#include <numbers>

#include "momgraph/builtins.hpp"

namespace momgraph {

namespace {

VertexCoupling make(VertexId v, std::vector<EdgeId> out, std::vector<EdgeId> in, ComplexMatrix m) {
  return {v, std::move(out), std::move(in), std::move(m)};
}

EdgeId E(std::size_t i) { return edge_id(i); }
VertexId V(std::size_t i) { return vertex_id(i); }

}  // namespace

ComplexMatrix hadamard2() {
  ComplexMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::numbers::sqrt2;
}

ComplexMatrix fourier_matrix(std::size_t n) {
  ComplexMatrix f(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < n; ++m) {
      f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m)) =
          std::polar(1.0 / std::sqrt(static_cast<double>(n)), w * static_cast<double>(j * m));
    }
  }
  return f;
}

MomentumOperator loop_operator(std::span<const double> lengths, std::span<const double> alpha) {
  const std::size_t n = lengths.size();
  if (n == 0 || alpha.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "loop needs one length and one phase per vertex");
  }
  std::vector<FiniteEdge> edges;
  for (std::size_t j = 0; j < n; ++j) edges.push_back({E(j), V(j), V((j + 1) % n), lengths[j]});
  MetricGraph g(n, std::move(edges), {});
  std::vector<VertexCoupling> cs;
  for (std::size_t j = 0; j < n; ++j) {
    ComplexMatrix u(1, 1);
    u(0, 0) = std::polar(1.0, alpha[j]);
    cs.push_back(make(V(j), {E(j)}, {E((j + n - 1) % n)}, u));
  }
  return assemble(std::move(g), std::move(cs));
}

MomentumOperator figure_eight(double l1, double l2, const ComplexMatrix& u) {
  MetricGraph g(1, {{E(0), V(0), V(0), l1}, {E(1), V(0), V(0), l2}}, {});
  return assemble(std::move(g), {make(V(0), {E(0), E(1)}, {E(0), E(1)}, u)});
}

MomentumOperator loop_line(double ell, const ComplexMatrix& u) {
  MetricGraph g(1, {{E(1), V(0), V(0), ell}},
                {{E(0), V(0), LeadDirection::Incoming}, {E(2), V(0), LeadDirection::Outgoing}});
  return assemble(std::move(g), {make(V(0), {E(2), E(1)}, {E(0), E(1)}, u)});
}

MomentumOperator star(std::size_t n, const ComplexMatrix& u) {
  std::vector<Lead> leads;
  std::vector<EdgeId> in, out;
  for (std::size_t j = 0; j < n; ++j) {
    leads.push_back({E(j), V(0), LeadDirection::Incoming});
    in.push_back(E(j));
  }
  for (std::size_t j = 0; j < n; ++j) {
    leads.push_back({E(n + j), V(0), LeadDirection::Outgoing});
    out.push_back(E(n + j));
  }
  MetricGraph g(1, {}, std::move(leads));
  return assemble(std::move(g), {make(V(0), std::move(out), std::move(in), u)});
}

MomentumOperator two_loop(const TwoLoopLengths& l) {
  MetricGraph g(2,
                {{E(1), V(0), V(1), l.l1}, {E(2), V(0), V(1), l.l2}, {E(3), V(1), V(0), l.l3}},
                {{E(0), V(0), LeadDirection::Incoming}, {E(4), V(1), LeadDirection::Outgoing}});
  return assemble(std::move(g), {make(V(0), {E(1), E(2)}, {E(3), E(0)}, hadamard2()),
                                 make(V(1), {E(3), E(4)}, {E(1), E(2)}, hadamard2())});
}

MomentumOperator two_loop_compact(const TwoLoopLengths& l, double l4) {
  MetricGraph g(2,
                {{E(0), V(1), V(0), l4},
                 {E(1), V(0), V(1), l.l1},
                 {E(2), V(0), V(1), l.l2},
                 {E(3), V(1), V(0), l.l3}},
                {});
  return assemble(std::move(g), {make(V(0), {E(1), E(2)}, {E(3), E(0)}, hadamard2()),
                                 make(V(1), {E(3), E(0)}, {E(1), E(2)}, hadamard2())});
}

std::vector<NamedExample> builtin_examples() {
  const double third = 2.0 * std::numbers::pi / 3.0;
  const double lengths[3] = {third, third, third};
  const double alpha[3] = {0.0, 0.0, 0.0};
  std::vector<NamedExample> out;
  out.push_back({"loop", "three-vertex loop of length 2 pi, alpha = 0", loop_operator(lengths, alpha)});
  out.push_back({"figure-eight", "loops of lengths 1 and sqrt 2 at one vertex, Hadamard coupling",
                 figure_eight(1.0, std::numbers::sqrt2, hadamard2())});
  out.push_back({"loop-line", "loop of length 1 on a line, Hadamard coupling", loop_line(1.0, hadamard2())});
  out.push_back({"star", "3 incoming and 3 outgoing leads, Fourier coupling", star(3, fourier_matrix(3))});
  out.push_back({"two-loop", "two-loop graph with leads, l1 = l2 = l3 = 1", two_loop({1.0, 1.0, 1.0})});
  out.push_back({"two-loop-compact", "two-loop graph closed by an edge, l = (1, 1, 2), l4 = 3",
                 two_loop_compact({1.0, 1.0, 2.0}, 3.0)});
  return out;
}

MomentumOperator builtin_example(const std::string& name) {
  for (auto& ex : builtin_examples()) {
    if (ex.name == name) return std::move(ex.op);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown example '" + name + "'");
}

}  // namespace momgraph
