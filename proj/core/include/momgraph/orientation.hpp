#pragma once

#include <cstddef>
#include <vector>

#include "momgraph/graph.hpp"

namespace momgraph {

struct UndirectedEdge {
  EdgeId id;
  VertexId a;
  VertexId b;
  double length;
};

struct UndirectedLead {
  EdgeId id;
  VertexId anchor;
};

struct UndirectedMetricGraph {
  std::size_t vertex_count = 0;
  std::vector<UndirectedEdge> edges;
  std::vector<UndirectedLead> leads;
};

enum class PathKind { Loop, LeadToLead };

/// One traversed edge. `forward` is true when the edge is walked from its
/// stored first endpoint to its second (for oriented graphs: along the
/// orientation). Leads are always recorded as forward.
struct PathStep {
  EdgeId edge;
  bool forward;
};

/// A loop, or a path that enters through an incoming lead and leaves through
/// an outgoing one. total_length is +infinity for lead-to-lead paths.
struct FreePath {
  PathKind kind;
  std::vector<PathStep> steps;
  double total_length;
};

struct PathDecomposition {
  std::vector<FreePath> paths;
};

/// Residual degree of the pivot vertex before and after one path extraction.
struct PivotStep {
  VertexId pivot;
  std::size_t residual_before;
  std::size_t residual_after;
};

struct Orientation {
  MetricGraph graph;
  PathDecomposition decomposition;
  std::vector<PivotStep> trace;
};

/// Undirected degree; a self-loop contributes 2.
std::vector<std::size_t> undirected_degrees(const UndirectedMetricGraph& g);

ValidationReport validate_undirected(const UndirectedMetricGraph& g);

/// Every vertex has even degree. A finite graph with this property
/// automatically has an even number of leads.
bool check_orientable(const UndirectedMetricGraph& g);

/// Orients `g` by repeatedly extracting free paths through the lowest-numbered
/// vertex that still has unused edges, always taking the lowest-numbered
/// unused edge end. Throws OddLeadCount, NotOrientable or InvalidGraph.
Orientation orient(const UndirectedMetricGraph& g);

/// Splits a balanced oriented graph into loops and lead-to-lead paths,
/// following the existing orientation. Throws NotBalanced.
PathDecomposition decompose_free_paths(const MetricGraph& g);

/// Distinct balanced orientations of `g`, at most `cap` of them, in
/// lexicographic order of edge directions. Self-loops have one orientation.
std::vector<MetricGraph> enumerate_orientations(const UndirectedMetricGraph& g, std::size_t cap);

UndirectedMetricGraph forget_orientation(const MetricGraph& g);

/// Checks that `d` is a valid free-path cover of the oriented graph `g`:
/// every edge and lead exactly once, consecutive steps joined head to tail,
/// loops closed, lead-to-lead paths from an incoming to an outgoing lead.
ValidationReport check_cover(const MetricGraph& g, const PathDecomposition& d);

}  // namespace momgraph
