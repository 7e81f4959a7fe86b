#include "momgraph/coupling.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace momgraph {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

std::string vtx(VertexId v) { return "vertex " + std::to_string(index(v)); }

bool same_multiset(std::vector<EdgeId> a, std::vector<EdgeId> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

// Union-find over a small index range.
class Components {
public:
  explicit Components(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void join(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ValidationReport validate_coupling(const VertexCoupling& c, double tol) {
  ValidationReport report;
  const auto rows = static_cast<std::size_t>(c.matrix.rows());
  const auto cols = static_cast<std::size_t>(c.matrix.cols());
  if (rows != c.out_order.size() || cols != c.in_order.size()) {
    report.add("order mismatch", "matrix shape does not match edge orders at " + vtx(c.vertex));
  }
  if (rows != cols) {
    report.add("dimension mismatch",
               "dimension mismatch (graph not balanced at vertex): " + std::to_string(rows) +
                   "x" + std::to_string(cols) + " at " + vtx(c.vertex));
    return report;
  }
  if (!c.matrix.allFinite()) {
    report.add("non-finite", "non-finite matrix entry at " + vtx(c.vertex));
    return report;
  }
  const ComplexMatrix defect =
      c.matrix.adjoint() * c.matrix - ComplexMatrix::Identity(c.matrix.rows(), c.matrix.cols());
  const double err = defect.size() ? defect.cwiseAbs().maxCoeff() : 0.0;
  if (err > tol) {
    report.add("not unitary", "not unitary at " + vtx(c.vertex) + " (defect " +
                                  std::to_string(err) + ")");
  }
  return report;
}

VertexCoupling default_coupling(const MetricGraph& g, VertexId v, ComplexMatrix matrix) {
  return {v, g.outgoing(v), g.incoming(v), std::move(matrix)};
}

MomentumOperator assemble(MetricGraph g, std::vector<VertexCoupling> couplings, double tol) {
  require_valid(g);
  if (!is_balanced(g)) throw Error(ErrorKind::NotBalanced, "graph is not balanced");

  MomentumOperator op;
  const auto nv = g.vertex_count();
  std::vector<std::optional<VertexCoupling>> slot(nv);
  for (auto& c : couplings) {
    if (index(c.vertex) >= nv) {
      throw Error(ErrorKind::InvalidCoupling, "coupling for unknown " + vtx(c.vertex));
    }
    if (slot[index(c.vertex)]) {
      throw Error(ErrorKind::InvalidCoupling, "two couplings for " + vtx(c.vertex));
    }
    const auto report = validate_coupling(c, tol);
    if (!report.ok()) throw Error(ErrorKind::InvalidCoupling, report.summary());
    if (!same_multiset(c.out_order, g.outgoing(c.vertex)) ||
        !same_multiset(c.in_order, g.incoming(c.vertex))) {
      throw Error(ErrorKind::InvalidCoupling,
                  "edge orders do not match the edges incident to " + vtx(c.vertex));
    }
    slot[index(c.vertex)] = std::move(c);
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (!slot[v]) {
      throw Error(ErrorKind::MissingVertexCoupling, "no coupling for " + vtx(vertex_id(v)));
    }
    op.couplings_.push_back(std::move(*slot[v]));
  }

  op.out_pos_.assign(g.edge_count(), npos);
  op.in_pos_.assign(g.edge_count(), npos);
  op.out_offset_.resize(nv);
  op.in_offset_.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& c = op.couplings_[v];
    op.out_offset_[v] = op.out_dim_;
    op.in_offset_[v] = op.in_dim_;
    for (std::size_t i = 0; i < c.out_order.size(); ++i) op.out_pos_[index(c.out_order[i])] = i;
    for (std::size_t i = 0; i < c.in_order.size(); ++i) op.in_pos_[index(c.in_order[i])] = i;
    op.out_dim_ += c.out_order.size();
    op.in_dim_ += c.in_order.size();
  }
  op.graph_ = std::move(g);
  return op;
}

std::size_t MomentumOperator::out_position(EdgeId e) const {
  if (index(e) >= out_pos_.size() || out_pos_[index(e)] == npos) {
    throw Error(ErrorKind::IndexMismatch, "edge " + std::to_string(index(e)) + " has no start");
  }
  return out_pos_[index(e)];
}

std::size_t MomentumOperator::in_position(EdgeId e) const {
  if (index(e) >= in_pos_.size() || in_pos_[index(e)] == npos) {
    throw Error(ErrorKind::IndexMismatch, "edge " + std::to_string(index(e)) + " has no end");
  }
  return in_pos_[index(e)];
}

std::size_t MomentumOperator::out_index(EdgeId e) const {
  return out_offset_[index(*graph_.start_vertex(e))] + out_position(e);
}

std::size_t MomentumOperator::in_index(EdgeId e) const {
  const auto pos = in_position(e);
  return in_offset_[index(*graph_.end_vertex(e))] + pos;
}

Complex MomentumOperator::transition(EdgeId from, EdgeId to) const {
  const auto v = graph_.end_vertex(from);
  if (!v || graph_.start_vertex(to) != v) return {0.0, 0.0};
  return coupling(*v).matrix(static_cast<Eigen::Index>(out_position(to)),
                             static_cast<Eigen::Index>(in_position(from)));
}

ComplexMatrix MomentumOperator::global_matrix() const {
  ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(out_dim_),
                                        static_cast<Eigen::Index>(in_dim_));
  for (std::size_t v = 0; v < couplings_.size(); ++v) {
    const auto& m = couplings_[v].matrix;
    u.block(static_cast<Eigen::Index>(out_offset_[v]), static_cast<Eigen::Index>(in_offset_[v]),
            m.rows(), m.cols()) = m;
  }
  return u;
}

BoundaryVector boundary_values(const MomentumOperator& op,
                               const std::function<Complex(EdgeId, double)>& psi) {
  BoundaryVector b{ComplexVector::Zero(static_cast<Eigen::Index>(op.out_dim())),
                   ComplexVector::Zero(static_cast<Eigen::Index>(op.in_dim()))};
  const auto& g = op.graph();
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto e = edge_id(i);
    const auto dom = g.domain(e);
    if (g.start_vertex(e)) b.out_values[static_cast<Eigen::Index>(op.out_index(e))] = psi(e, 0.0);
    if (g.end_vertex(e)) {
      const double at = g.kind(e) == EdgeKind::Finite ? dom.hi : 0.0;
      b.in_values[static_cast<Eigen::Index>(op.in_index(e))] = psi(e, at);
    }
  }
  return b;
}

double apply_vertex_conditions(const MomentumOperator& op, const BoundaryVector& b) {
  if (static_cast<std::size_t>(b.out_values.size()) != op.out_dim() ||
      static_cast<std::size_t>(b.in_values.size()) != op.in_dim()) {
    throw Error(ErrorKind::IndexMismatch, "boundary vector does not match operator indexing");
  }
  const ComplexVector r = b.out_values - op.global_matrix() * b.in_values;
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

std::vector<VertexCoupling> irreducible_blocks(const VertexCoupling& c, double zero_tol) {
  const auto rows = static_cast<std::size_t>(c.matrix.rows());
  const auto cols = static_cast<std::size_t>(c.matrix.cols());
  // Nodes 0..rows-1 are outputs, rows..rows+cols-1 inputs.
  Components uf(rows + cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (std::abs(c.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) >
          zero_tol) {
        uf.join(i, rows + j);
      }
    }
  }
  std::map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
  std::vector<std::size_t> order;  // roots by first appearance, outputs first
  auto touch = [&](std::size_t node) {
    const auto root = uf.find(node);
    if (!groups.count(root)) order.push_back(root);
    return root;
  };
  for (std::size_t i = 0; i < rows; ++i) groups[touch(i)].first.push_back(i);
  for (std::size_t j = 0; j < cols; ++j) groups[touch(rows + j)].second.push_back(j);

  std::vector<VertexCoupling> blocks;
  for (const auto root : order) {
    const auto& [r, k] = groups[root];
    VertexCoupling b{c.vertex, {}, {}, ComplexMatrix(static_cast<Eigen::Index>(r.size()),
                                                      static_cast<Eigen::Index>(k.size()))};
    for (std::size_t i = 0; i < r.size(); ++i) {
      b.out_order.push_back(c.out_order[r[i]]);
      for (std::size_t j = 0; j < k.size(); ++j) {
        b.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            c.matrix(static_cast<Eigen::Index>(r[i]), static_cast<Eigen::Index>(k[j]));
      }
    }
    for (const auto j : k) b.in_order.push_back(c.in_order[j]);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

std::vector<OperatorComponent> decompose_operator(const MomentumOperator& op, double zero_tol) {
  const auto& g = op.graph();
  const auto ne = g.edge_count();

  struct Block {
    VertexCoupling coupling;
    std::size_t component = 0;
  };
  std::vector<Block> blocks;
  std::vector<std::size_t> out_block(ne, npos), in_block(ne, npos);
  for (const auto& c : op.couplings()) {
    for (auto& b : irreducible_blocks(c, zero_tol)) {
      for (const auto e : b.out_order) out_block[index(e)] = blocks.size();
      for (const auto e : b.in_order) in_block[index(e)] = blocks.size();
      blocks.push_back({std::move(b), 0});
    }
  }

  // Blocks are joined by the edges running between them.
  Components uf(blocks.size());
  for (std::size_t e = 0; e < ne; ++e) {
    if (out_block[e] != npos && in_block[e] != npos) uf.join(out_block[e], in_block[e]);
  }
  std::map<std::size_t, std::size_t> label;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto root = uf.find(b);
    if (!label.count(root)) label.emplace(root, label.size());
    blocks[b].component = label[root];
  }

  std::vector<OperatorComponent> out;
  for (std::size_t comp = 0; comp < label.size(); ++comp) {
    std::vector<std::size_t> block_ids;
    std::vector<std::size_t> new_vertex(blocks.size(), npos);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].component != comp) continue;
      new_vertex[b] = block_ids.size();
      block_ids.push_back(b);
    }
    std::vector<std::size_t> new_edge(ne, npos);
    OperatorComponent piece;
    for (std::size_t e = 0; e < ne; ++e) {
      const auto b = out_block[e] != npos ? out_block[e] : in_block[e];
      if (blocks[b].component != comp) continue;
      new_edge[e] = piece.edge_map.size();
      piece.edge_map.push_back(edge_id(e));
    }
    for (const auto b : block_ids) piece.vertex_map.push_back(blocks[b].coupling.vertex);

    std::vector<FiniteEdge> fin;
    std::vector<Lead> leads;
    for (const auto& e : g.finite_edges()) {
      if (new_edge[index(e.id)] == npos) continue;
      fin.push_back({edge_id(new_edge[index(e.id)]), vertex_id(new_vertex[out_block[index(e.id)]]),
                     vertex_id(new_vertex[in_block[index(e.id)]]), e.length});
    }
    for (const auto& l : g.leads()) {
      if (new_edge[index(l.id)] == npos) continue;
      const auto b = l.direction == LeadDirection::Outgoing ? out_block[index(l.id)]
                                                            : in_block[index(l.id)];
      leads.push_back({edge_id(new_edge[index(l.id)]), vertex_id(new_vertex[b]), l.direction});
    }
    std::vector<VertexCoupling> couplings;
    for (const auto b : block_ids) {
      VertexCoupling c = blocks[b].coupling;
      c.vertex = vertex_id(new_vertex[b]);
      for (auto& e : c.out_order) e = edge_id(new_edge[index(e)]);
      for (auto& e : c.in_order) e = edge_id(new_edge[index(e)]);
      couplings.push_back(std::move(c));
    }
    // Blocks of a unitary are unitary up to the discarded entries.
    const double tol = std::max(kUnitarityTol, 4.0 * zero_tol * static_cast<double>(ne));
    piece.op = assemble(MetricGraph(block_ids.size(), std::move(fin), std::move(leads)),
                        std::move(couplings), tol);
    out.push_back(std::move(piece));
  }
  return out;
}

MomentumOperator reference_decoupled(const MomentumOperator& op, const PathDecomposition& d) {
  const auto& g = op.graph();
  if (!g.is_compact()) {
    throw Error(ErrorKind::GraphHasLeads, "reference coupling needs a compact graph");
  }
  const auto cover = check_cover(g, d);
  if (!cover.ok()) throw Error(ErrorKind::InvalidArgument, "not a free-path cover: " + cover.summary());

  std::vector<VertexCoupling> couplings(op.couplings().begin(), op.couplings().end());
  for (auto& c : couplings) c.matrix.setZero();
  for (const auto& path : d.paths) {
    if (path.kind != PathKind::Loop) {
      throw Error(ErrorKind::LeadToLeadPath, "reference coupling needs a loop-only cover");
    }
    const auto n = path.steps.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto from = path.steps[i].edge;
      const auto to = path.steps[(i + 1) % n].edge;
      const auto v = *g.end_vertex(from);
      couplings[index(v)].matrix(static_cast<Eigen::Index>(op.out_position(to)),
                                 static_cast<Eigen::Index>(op.in_position(from))) = 1.0;
    }
  }
  return assemble(g, std::move(couplings));
}

}  // namespace momgraph
