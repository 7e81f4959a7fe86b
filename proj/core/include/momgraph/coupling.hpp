#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "momgraph/graph.hpp"
#include "momgraph/orientation.hpp"

namespace momgraph {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kUnitarityTol = 1e-12;
inline constexpr double kStructuralZeroTol = 1e-14;

/// Vertex condition psi_out = U psi_in. Row i of `matrix` belongs to
/// out_order[i] (value at coordinate 0 of that edge), column m to in_order[m]
/// (value at the edge's upper end).
struct VertexCoupling {
  VertexId vertex;
  std::vector<EdgeId> out_order;
  std::vector<EdgeId> in_order;
  ComplexMatrix matrix;
};

/// Dimension check and max-norm unitarity check ||U*U - I||_max <= tol.
ValidationReport validate_coupling(const VertexCoupling& c, double tol = kUnitarityTol);

/// Coupling at `v` using the graph's default edge-end order (finite edges
/// before leads, ascending ids).
VertexCoupling default_coupling(const MetricGraph& g, VertexId v, ComplexMatrix matrix);

/// Boundary values in the operator's global indexing: vertex-major, each
/// vertex contributing its coupling's out_order / in_order.
struct BoundaryVector {
  ComplexVector out_values;
  ComplexVector in_values;
};

class MomentumOperator;

MomentumOperator assemble(MetricGraph g, std::vector<VertexCoupling> couplings,
                          double tol = kUnitarityTol);

/// -i d/dx on a balanced oriented graph with one unitary coupling per vertex.
class MomentumOperator {
public:
  const MetricGraph& graph() const noexcept { return graph_; }
  std::span<const VertexCoupling> couplings() const noexcept { return couplings_; }
  const VertexCoupling& coupling(VertexId v) const { return couplings_.at(index(v)); }

  std::size_t out_dim() const noexcept { return out_dim_; }
  std::size_t in_dim() const noexcept { return in_dim_; }

  /// Global boundary index of the value at coordinate 0 of `e`.
  std::size_t out_index(EdgeId e) const;
  /// Global boundary index of the value at the upper end of `e`.
  std::size_t in_index(EdgeId e) const;
  /// Row of `e` in the coupling matrix of its start vertex.
  std::size_t out_position(EdgeId e) const;
  /// Column of `e` in the coupling matrix of its end vertex.
  std::size_t in_position(EdgeId e) const;

  /// U_jm for passing from incoming edge `from` to outgoing edge `to`; zero
  /// when they do not meet at a vertex.
  Complex transition(EdgeId from, EdgeId to) const;

  /// Global block-diagonal coupling, rows in out_index order, columns in
  /// in_index order.
  ComplexMatrix global_matrix() const;

private:
  friend MomentumOperator assemble(MetricGraph, std::vector<VertexCoupling>, double);

  MetricGraph graph_;
  std::vector<VertexCoupling> couplings_;
  std::vector<std::size_t> out_pos_, in_pos_;      // per edge; npos if absent
  std::vector<std::size_t> out_offset_, in_offset_;  // per vertex
  std::size_t out_dim_ = 0;
  std::size_t in_dim_ = 0;
};

/// Collects boundary values of `psi(edge, coordinate)` at every edge end.
BoundaryVector boundary_values(const MomentumOperator& op,
                               const std::function<Complex(EdgeId, double)>& psi);

/// max_j ||psi_j^out - U_j psi_j^in||_inf; zero when the vertex conditions hold.
double apply_vertex_conditions(const MomentumOperator& op, const BoundaryVector& b);

/// Splits U_j into the connected components of its nonzero pattern (entries
/// with modulus <= zero_tol count as structural zeros).
std::vector<VertexCoupling> irreducible_blocks(const VertexCoupling& c,
                                               double zero_tol = kStructuralZeroTol);

/// One connected piece of a decomposed operator with maps back to the parent:
/// edge_map[new edge] is the parent edge, vertex_map[new vertex] the parent
/// vertex the block came from.
struct OperatorComponent {
  MomentumOperator op;
  std::vector<EdgeId> edge_map;
  std::vector<VertexId> vertex_map;
};

/// Splits every vertex into its irreducible blocks and returns the connected
/// components of the resulting graph.
std::vector<OperatorComponent> decompose_operator(const MomentumOperator& op,
                                                  double zero_tol = kStructuralZeroTol);

/// Permutation couplings that route each loop of `d` onto itself. Requires a
/// compact graph and a loop-only cover; keeps the edge-end orders of `op`.
MomentumOperator reference_decoupled(const MomentumOperator& op, const PathDecomposition& d);

}  // namespace momgraph
