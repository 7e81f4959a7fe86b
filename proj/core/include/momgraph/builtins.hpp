#pragma once

#include <span>
#include <string>
#include <vector>

#include "momgraph/coupling.hpp"
#include "momgraph/two_loop.hpp"

namespace momgraph {

/// (1/sqrt 2)(1 1; 1 -1).
ComplexMatrix hadamard2();
/// n x n discrete Fourier matrix; every entry has modulus 1/sqrt n.
ComplexMatrix fourier_matrix(std::size_t n);

/// Cycle of N = lengths.size() edges; edge j runs from vertex j to j + 1 and
/// vertex j carries the scalar coupling e^{i alpha_j}.
MomentumOperator loop_operator(std::span<const double> lengths, std::span<const double> alpha);

/// Two self-loops (edges 0, 1) at vertex 0 with a 2 x 2 coupling; identity
/// keeps the loops separate.
MomentumOperator figure_eight(double l1, double l2, const ComplexMatrix& u);

/// Incoming lead 0, loop 1 of length ell, outgoing lead 2 at one vertex.
/// Row/column 0 is the line, 1 the loop: u(0, 0) = line -> line,
/// u(0, 1) = loop -> line, u(1, 0) = line -> loop, u(1, 1) = loop -> loop.
MomentumOperator loop_line(double ell, const ComplexMatrix& u);

/// n incoming leads 0..n-1 and n outgoing leads n..2n-1 at one vertex;
/// u(j, m) passes incoming lead m to outgoing lead n + j.
MomentumOperator star(std::size_t n, const ComplexMatrix& u);

MomentumOperator two_loop(const TwoLoopLengths& l);

/// Leads replaced by edge 0 of length l4 from B back to A.
MomentumOperator two_loop_compact(const TwoLoopLengths& l, double l4);

struct NamedExample {
  std::string name;
  std::string description;
  MomentumOperator op;
};

/// loop, figure-eight, loop-line, star, two-loop, two-loop-compact with
/// default parameters.
std::vector<NamedExample> builtin_examples();

/// Throws InvalidArgument for unknown names.
MomentumOperator builtin_example(const std::string& name);

}  // namespace momgraph
