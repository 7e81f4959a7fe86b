#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "momgraph/errors.hpp"

namespace momgraph {

/// Dense vertex index, numbered from 0.
enum class VertexId : std::uint32_t {};
/// Dense edge index shared by finite edges and leads, numbered from 0.
enum class EdgeId : std::uint32_t {};

constexpr std::size_t index(VertexId v) noexcept { return static_cast<std::size_t>(v); }
constexpr std::size_t index(EdgeId e) noexcept { return static_cast<std::size_t>(e); }
constexpr VertexId vertex_id(std::size_t i) noexcept { return static_cast<VertexId>(i); }
constexpr EdgeId edge_id(std::size_t i) noexcept { return static_cast<EdgeId>(i); }

/// Oriented segment [0, length]; 0 sits at `start`, `length` at `end`.
struct FiniteEdge {
  EdgeId id;
  VertexId start;
  VertexId end;
  double length;
};

enum class LeadDirection { Outgoing, Incoming };

/// Semi-infinite edge. Outgoing leads are parametrized by [0, inf), incoming
/// ones by (-inf, 0]; coordinate 0 is the anchor vertex in both cases.
struct Lead {
  EdgeId id;
  VertexId anchor;
  LeadDirection direction;
};

enum class EdgeKind { Finite, OutgoingLead, IncomingLead };

struct Interval {
  double lo;
  double hi;

  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

/// A point given in edge-local coordinates.
struct GraphPoint {
  EdgeId edge;
  double coordinate;
};

/// Immutable finite or finite-core oriented metric graph. Multi-edges and
/// self-loops are allowed. Construction never throws; use validate_graph()
/// to inspect admissibility.
class MetricGraph {
public:
  MetricGraph() = default;
  MetricGraph(std::size_t vertex_count, std::vector<FiniteEdge> finite_edges,
              std::vector<Lead> leads);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return finite_.size() + leads_.size(); }
  std::span<const FiniteEdge> finite_edges() const noexcept { return finite_; }
  std::span<const Lead> leads() const noexcept { return leads_; }
  bool is_compact() const noexcept { return leads_.empty(); }
  bool admissible() const noexcept { return admissible_; }

  bool has_edge(EdgeId e) const noexcept;
  EdgeKind kind(EdgeId e) const;
  const FiniteEdge& finite_edge(EdgeId e) const;
  const Lead& lead(EdgeId e) const;

  /// Parametrization interval; leads use +/-infinity for the open end.
  Interval domain(EdgeId e) const;
  /// Vertex at coordinate 0 of a finite edge or outgoing lead.
  std::optional<VertexId> start_vertex(EdgeId e) const;
  /// Vertex at the upper end of a finite edge or incoming lead.
  std::optional<VertexId> end_vertex(EdgeId e) const;

  /// Edges leaving `v` (finite before leads, ascending id within each group).
  std::vector<EdgeId> outgoing(VertexId v) const;
  /// Edges entering `v`, same ordering convention as outgoing().
  std::vector<EdgeId> incoming(VertexId v) const;

  double min_length() const;
  double max_length() const;

private:
  std::size_t vertex_count_ = 0;
  std::vector<FiniteEdge> finite_;
  std::vector<Lead> leads_;
  // edge id -> (kind, position in finite_/leads_); absent ids stay nullopt
  std::vector<std::optional<std::pair<EdgeKind, std::size_t>>> slot_;
  bool admissible_ = true;
};

struct VertexDegree {
  std::size_t fin_in = 0;
  std::size_t fin_out = 0;
  std::size_t inf_in = 0;
  std::size_t inf_out = 0;

  std::size_t in() const noexcept { return fin_in + inf_in; }
  std::size_t out() const noexcept { return fin_out + inf_out; }
  std::size_t total() const noexcept { return in() + out(); }
};

struct DegreeProfile {
  std::vector<VertexDegree> per_vertex;
  std::size_t n_fin = 0;       // finite edges (= sum of fin_out = sum of fin_in)
  std::size_t n_inf_out = 0;   // outgoing leads
  std::size_t n_inf_in = 0;    // incoming leads
};

ValidationReport validate_graph(const MetricGraph& g);

/// Throws Error(InvalidGraph) carrying the report summary.
void require_valid(const MetricGraph& g);

DegreeProfile degree_profile(const MetricGraph& g);

/// True iff every vertex has as many outgoing edge ends as incoming ones.
bool is_balanced(const MetricGraph& g);

/// Sum of finite edge lengths; leads contribute nothing.
double total_length(const MetricGraph& g);

/// Same graph with every finite edge and lead reversed. Edge coordinates are
/// reflected, so a finite edge keeps its length and swaps its endpoints.
MetricGraph reversed(const MetricGraph& g);

/// True when `p` lies in the closed parametrization interval of its edge.
bool contains(const MetricGraph& g, GraphPoint p);

}  // namespace momgraph
