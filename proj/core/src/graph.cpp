#include "momgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace momgraph {

namespace {

ValidationReport check(std::size_t vertex_count, std::span<const FiniteEdge> finite,
                       std::span<const Lead> leads) {
  ValidationReport report;
  const std::size_t edge_count = finite.size() + leads.size();
  std::vector<int> seen(edge_count, 0);
  std::vector<std::size_t> degree(vertex_count, 0);

  auto note_id = [&](EdgeId id) {
    const auto i = index(id);
    if (i >= edge_count) {
      report.add("edge id", "edge id " + std::to_string(i) + " breaks dense numbering");
    } else if (seen[i]++ > 0) {
      report.add("edge id", "duplicate edge id " + std::to_string(i));
    }
  };
  auto note_vertex = [&](VertexId v, EdgeId owner) {
    if (index(v) >= vertex_count) {
      report.add("unknown vertex", "unknown vertex " + std::to_string(index(v)) +
                                       " referenced by edge " + std::to_string(index(owner)));
      return;
    }
    ++degree[index(v)];
  };

  for (const auto& e : finite) {
    note_id(e.id);
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      report.add("non-positive length",
                 "non-positive length on edge " + std::to_string(index(e.id)));
    }
    note_vertex(e.start, e.id);
    note_vertex(e.end, e.id);
  }
  for (const auto& l : leads) {
    note_id(l.id);
    note_vertex(l.anchor, l.id);
  }
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (degree[v] == 0) {
      report.add("isolated vertex", "isolated vertex " + std::to_string(v));
    }
  }
  return report;
}

}  // namespace

MetricGraph::MetricGraph(std::size_t vertex_count, std::vector<FiniteEdge> finite_edges,
                         std::vector<Lead> leads)
    : vertex_count_(vertex_count), finite_(std::move(finite_edges)), leads_(std::move(leads)) {
  slot_.resize(edge_count());
  for (std::size_t i = 0; i < finite_.size(); ++i) {
    const auto id = index(finite_[i].id);
    if (id < slot_.size() && !slot_[id]) slot_[id] = std::pair{EdgeKind::Finite, i};
  }
  for (std::size_t i = 0; i < leads_.size(); ++i) {
    const auto id = index(leads_[i].id);
    const auto kind = leads_[i].direction == LeadDirection::Outgoing ? EdgeKind::OutgoingLead
                                                                      : EdgeKind::IncomingLead;
    if (id < slot_.size() && !slot_[id]) slot_[id] = std::pair{kind, i};
  }
  admissible_ = check(vertex_count_, finite_, leads_).ok();
}

bool MetricGraph::has_edge(EdgeId e) const noexcept {
  return index(e) < slot_.size() && slot_[index(e)].has_value();
}

EdgeKind MetricGraph::kind(EdgeId e) const {
  if (!has_edge(e)) {
    throw Error(ErrorKind::InvalidArgument, "unknown edge " + std::to_string(index(e)));
  }
  return slot_[index(e)]->first;
}

const FiniteEdge& MetricGraph::finite_edge(EdgeId e) const {
  if (kind(e) != EdgeKind::Finite) {
    throw Error(ErrorKind::InvalidArgument, "edge " + std::to_string(index(e)) + " is a lead");
  }
  return finite_[slot_[index(e)]->second];
}

const Lead& MetricGraph::lead(EdgeId e) const {
  if (kind(e) == EdgeKind::Finite) {
    throw Error(ErrorKind::InvalidArgument,
                "edge " + std::to_string(index(e)) + " is a finite edge");
  }
  return leads_[slot_[index(e)]->second];
}

Interval MetricGraph::domain(EdgeId e) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind(e)) {
    case EdgeKind::Finite: return {0.0, finite_edge(e).length};
    case EdgeKind::OutgoingLead: return {0.0, inf};
    case EdgeKind::IncomingLead: return {-inf, 0.0};
  }
  return {0.0, 0.0};
}

std::optional<VertexId> MetricGraph::start_vertex(EdgeId e) const {
  switch (kind(e)) {
    case EdgeKind::Finite: return finite_edge(e).start;
    case EdgeKind::OutgoingLead: return lead(e).anchor;
    case EdgeKind::IncomingLead: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<VertexId> MetricGraph::end_vertex(EdgeId e) const {
  switch (kind(e)) {
    case EdgeKind::Finite: return finite_edge(e).end;
    case EdgeKind::IncomingLead: return lead(e).anchor;
    case EdgeKind::OutgoingLead: return std::nullopt;
  }
  return std::nullopt;
}

std::vector<EdgeId> MetricGraph::outgoing(VertexId v) const {
  std::vector<EdgeId> fin, inf;
  for (const auto& e : finite_) {
    if (e.start == v) fin.push_back(e.id);
  }
  for (const auto& l : leads_) {
    if (l.anchor == v && l.direction == LeadDirection::Outgoing) inf.push_back(l.id);
  }
  std::sort(fin.begin(), fin.end());
  std::sort(inf.begin(), inf.end());
  fin.insert(fin.end(), inf.begin(), inf.end());
  return fin;
}

std::vector<EdgeId> MetricGraph::incoming(VertexId v) const {
  std::vector<EdgeId> fin, inf;
  for (const auto& e : finite_) {
    if (e.end == v) fin.push_back(e.id);
  }
  for (const auto& l : leads_) {
    if (l.anchor == v && l.direction == LeadDirection::Incoming) inf.push_back(l.id);
  }
  std::sort(fin.begin(), fin.end());
  std::sort(inf.begin(), inf.end());
  fin.insert(fin.end(), inf.begin(), inf.end());
  return fin;
}

double MetricGraph::min_length() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : finite_) m = std::min(m, e.length);
  return m;
}

double MetricGraph::max_length() const {
  double m = 0.0;
  for (const auto& e : finite_) m = std::max(m, e.length);
  return m;
}

ValidationReport validate_graph(const MetricGraph& g) {
  return check(g.vertex_count(), g.finite_edges(), g.leads());
}

void require_valid(const MetricGraph& g) {
  if (!g.admissible()) {
    throw Error(ErrorKind::InvalidGraph, "invalid graph: " + validate_graph(g).summary());
  }
}

DegreeProfile degree_profile(const MetricGraph& g) {
  require_valid(g);
  DegreeProfile p;
  p.per_vertex.resize(g.vertex_count());
  for (const auto& e : g.finite_edges()) {
    ++p.per_vertex[index(e.start)].fin_out;
    ++p.per_vertex[index(e.end)].fin_in;
  }
  for (const auto& l : g.leads()) {
    auto& d = p.per_vertex[index(l.anchor)];
    if (l.direction == LeadDirection::Outgoing) {
      ++d.inf_out;
      ++p.n_inf_out;
    } else {
      ++d.inf_in;
      ++p.n_inf_in;
    }
  }
  p.n_fin = g.finite_edges().size();
  return p;
}

bool is_balanced(const MetricGraph& g) {
  const auto p = degree_profile(g);
  return std::all_of(p.per_vertex.begin(), p.per_vertex.end(),
                     [](const VertexDegree& d) { return d.in() == d.out(); });
}

double total_length(const MetricGraph& g) {
  double sum = 0.0;
  for (const auto& e : g.finite_edges()) sum += e.length;
  return sum;
}

MetricGraph reversed(const MetricGraph& g) {
  std::vector<FiniteEdge> fin(g.finite_edges().begin(), g.finite_edges().end());
  std::vector<Lead> leads(g.leads().begin(), g.leads().end());
  for (auto& e : fin) std::swap(e.start, e.end);
  for (auto& l : leads) {
    l.direction = l.direction == LeadDirection::Outgoing ? LeadDirection::Incoming
                                                         : LeadDirection::Outgoing;
  }
  return MetricGraph(g.vertex_count(), std::move(fin), std::move(leads));
}

bool contains(const MetricGraph& g, GraphPoint p) {
  return g.has_edge(p.edge) && g.domain(p.edge).contains(p.coordinate);
}

}  // namespace momgraph
