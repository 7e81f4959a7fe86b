#include "momgraph/orientation.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace momgraph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct End {
  EdgeId edge;
  int side;  // 0: first endpoint / lead anchor, 1: second endpoint
};

struct Step {
  EdgeId edge;
  bool forward;
  std::optional<VertexId> far;  // nullopt when the step runs off along a lead
  double length;
};

// Edge ends grouped by vertex, with per-edge usage and per-vertex residual
// degree. `out_ends` and `in_ends` are the same lists for undirected graphs.
class EndPool {
public:
  explicit EndPool(std::size_t vertex_count)
      : out_ends_(vertex_count), in_ends_(vertex_count), residual_(vertex_count, 0) {}

  void add_finite(EdgeId e, VertexId a, VertexId b, double length, bool directed) {
    grow(e);
    length_[index(e)] = length;
    first_[index(e)] = a;
    second_[index(e)] = b;
    is_lead_[index(e)] = false;
    out_ends_[index(a)].push_back({e, 0});
    in_ends_[index(b)].push_back({e, 1});
    if (!directed) {
      in_ends_[index(a)].push_back({e, 0});
      out_ends_[index(b)].push_back({e, 1});
    }
    ++residual_[index(a)];
    ++residual_[index(b)];
  }

  void add_lead(EdgeId e, VertexId anchor, std::optional<LeadDirection> dir) {
    grow(e);
    length_[index(e)] = kInf;
    first_[index(e)] = anchor;
    second_[index(e)] = anchor;
    is_lead_[index(e)] = true;
    if (!dir || *dir == LeadDirection::Outgoing) out_ends_[index(anchor)].push_back({e, 0});
    if (!dir || *dir == LeadDirection::Incoming) in_ends_[index(anchor)].push_back({e, 0});
    ++residual_[index(anchor)];
  }

  void finalize() {
    auto by_id = [](const End& x, const End& y) {
      return std::pair{x.edge, x.side} < std::pair{y.edge, y.side};
    };
    for (auto& v : out_ends_) std::sort(v.begin(), v.end(), by_id);
    for (auto& v : in_ends_) std::sort(v.begin(), v.end(), by_id);
  }

  std::size_t residual(VertexId v) const { return residual_[index(v)]; }

  std::optional<VertexId> next_pivot() const {
    for (std::size_t v = 0; v < residual_.size(); ++v) {
      if (residual_[v] > 0) return vertex_id(v);
    }
    return std::nullopt;
  }

  // Leave `v` through the lowest unused end.
  Step take_out(VertexId v) {
    const End end = first_unused(out_ends_[index(v)], v);
    consume(end.edge);
    const auto e = index(end.edge);
    if (is_lead_[e]) return {end.edge, true, std::nullopt, kInf};
    const bool forward = end.side == 0;
    return {end.edge, forward, forward ? second_[e] : first_[e], length_[e]};
  }

  // Enter `v` through the lowest unused end; `far` is where that edge starts.
  Step take_in(VertexId v) {
    const End end = first_unused(in_ends_[index(v)], v);
    consume(end.edge);
    const auto e = index(end.edge);
    if (is_lead_[e]) return {end.edge, true, std::nullopt, kInf};
    const bool forward = end.side == 1;
    return {end.edge, forward, forward ? first_[e] : second_[e], length_[e]};
  }

private:
  void grow(EdgeId e) {
    const auto n = std::max(used_.size(), index(e) + 1);
    used_.resize(n, false);
    length_.resize(n, 0.0);
    first_.resize(n, VertexId{});
    second_.resize(n, VertexId{});
    is_lead_.resize(n, false);
  }

  End first_unused(const std::vector<End>& ends, VertexId v) const {
    for (const auto& end : ends) {
      if (!used_[index(end.edge)]) return end;
    }
    throw Error(ErrorKind::NotBalanced,
                "no unused edge end at vertex " + std::to_string(index(v)));
  }

  void consume(EdgeId e) {
    used_[index(e)] = true;
    --residual_[index(first_[index(e)])];
    if (!is_lead_[index(e)]) --residual_[index(second_[index(e)])];
  }

  std::vector<std::vector<End>> out_ends_;
  std::vector<std::vector<End>> in_ends_;
  std::vector<std::size_t> residual_;
  std::vector<bool> used_;
  std::vector<double> length_;
  std::vector<VertexId> first_;
  std::vector<VertexId> second_;
  std::vector<bool> is_lead_;
};

struct RawPath {
  PathKind kind;
  std::vector<Step> steps;
};

// Forward walk from the pivot until it closes there or exits on a lead; in
// the latter case a backward walk from the pivot until it enters via a lead.
std::vector<RawPath> extract_paths(EndPool& pool, std::vector<PivotStep>* trace) {
  std::vector<RawPath> paths;
  while (auto pivot = pool.next_pivot()) {
    const VertexId v = *pivot;
    const std::size_t before = pool.residual(v);

    std::vector<Step> forward;
    forward.push_back(pool.take_out(v));
    while (forward.back().far && *forward.back().far != v) {
      forward.push_back(pool.take_out(*forward.back().far));
    }

    if (forward.back().far) {
      paths.push_back({PathKind::Loop, std::move(forward)});
    } else {
      std::vector<Step> backward;
      backward.push_back(pool.take_in(v));
      while (backward.back().far) backward.push_back(pool.take_in(*backward.back().far));
      std::reverse(backward.begin(), backward.end());
      backward.insert(backward.end(), forward.begin(), forward.end());
      paths.push_back({PathKind::LeadToLead, std::move(backward)});
    }
    if (trace) trace->push_back({v, before, pool.residual(v)});
  }
  return paths;
}

FreePath to_free_path(const RawPath& raw) {
  FreePath p{raw.kind, {}, 0.0};
  for (const auto& s : raw.steps) {
    p.steps.push_back({s.edge, s.forward});
    p.total_length += s.length;
  }
  if (raw.kind == PathKind::LeadToLead) p.total_length = kInf;
  return p;
}

MetricGraph as_directed_placeholder(const UndirectedMetricGraph& g) {
  std::vector<FiniteEdge> fin;
  std::vector<Lead> leads;
  for (const auto& e : g.edges) fin.push_back({e.id, e.a, e.b, e.length});
  for (const auto& l : g.leads) leads.push_back({l.id, l.anchor, LeadDirection::Outgoing});
  return MetricGraph(g.vertex_count, std::move(fin), std::move(leads));
}

}  // namespace

std::vector<std::size_t> undirected_degrees(const UndirectedMetricGraph& g) {
  std::vector<std::size_t> deg(g.vertex_count, 0);
  for (const auto& e : g.edges) {
    if (index(e.a) < deg.size()) ++deg[index(e.a)];
    if (index(e.b) < deg.size()) ++deg[index(e.b)];
  }
  for (const auto& l : g.leads) {
    if (index(l.anchor) < deg.size()) ++deg[index(l.anchor)];
  }
  return deg;
}

ValidationReport validate_undirected(const UndirectedMetricGraph& g) {
  return validate_graph(as_directed_placeholder(g));
}

bool check_orientable(const UndirectedMetricGraph& g) {
  const auto deg = undirected_degrees(g);
  return std::all_of(deg.begin(), deg.end(), [](std::size_t d) { return d % 2 == 0; });
}

Orientation orient(const UndirectedMetricGraph& g) {
  const auto report = validate_undirected(g);
  if (!report.ok()) throw Error(ErrorKind::InvalidGraph, "invalid graph: " + report.summary());
  if (g.leads.size() % 2 != 0) {
    throw Error(ErrorKind::OddLeadCount, "not balanced orientable: odd number of leads");
  }
  if (!check_orientable(g)) {
    const auto deg = undirected_degrees(g);
    const auto odd = std::find_if(deg.begin(), deg.end(), [](auto d) { return d % 2 != 0; });
    throw Error(ErrorKind::NotOrientable,
                "not balanced orientable: vertex " + std::to_string(odd - deg.begin()) +
                    " has odd degree " + std::to_string(*odd));
  }

  EndPool pool(g.vertex_count);
  for (const auto& e : g.edges) pool.add_finite(e.id, e.a, e.b, e.length, false);
  for (const auto& l : g.leads) pool.add_lead(l.id, l.anchor, std::nullopt);
  pool.finalize();

  Orientation result;
  const auto raw = extract_paths(pool, &result.trace);

  std::vector<FiniteEdge> fin;
  std::vector<Lead> leads;
  std::vector<const UndirectedEdge*> by_id(g.edges.size() + g.leads.size(), nullptr);
  for (const auto& e : g.edges) by_id[index(e.id)] = &e;
  std::vector<VertexId> anchor(by_id.size());
  for (const auto& l : g.leads) anchor[index(l.id)] = l.anchor;

  for (const auto& path : raw) {
    for (std::size_t i = 0; i < path.steps.size(); ++i) {
      const auto& s = path.steps[i];
      if (const auto* e = by_id[index(s.edge)]) {
        fin.push_back(s.forward ? FiniteEdge{e->id, e->a, e->b, e->length}
                                : FiniteEdge{e->id, e->b, e->a, e->length});
      } else {
        const bool first = i == 0;
        leads.push_back({s.edge, anchor[index(s.edge)],
                         first ? LeadDirection::Incoming : LeadDirection::Outgoing});
      }
    }
    result.decomposition.paths.push_back(to_free_path(path));
  }
  // The oriented graph lists edges by id, like the input.
  std::sort(fin.begin(), fin.end(), [](auto& x, auto& y) { return x.id < y.id; });
  std::sort(leads.begin(), leads.end(), [](auto& x, auto& y) { return x.id < y.id; });
  result.graph = MetricGraph(g.vertex_count, std::move(fin), std::move(leads));
  // Steps of the oriented graph always follow its orientation.
  for (auto& p : result.decomposition.paths) {
    for (auto& s : p.steps) s.forward = true;
  }
  return result;
}

PathDecomposition decompose_free_paths(const MetricGraph& g) {
  if (!is_balanced(g)) throw Error(ErrorKind::NotBalanced, "graph is not balanced");
  EndPool pool(g.vertex_count());
  for (const auto& e : g.finite_edges()) pool.add_finite(e.id, e.start, e.end, e.length, true);
  for (const auto& l : g.leads()) pool.add_lead(l.id, l.anchor, l.direction);
  pool.finalize();

  PathDecomposition d;
  for (const auto& raw : extract_paths(pool, nullptr)) d.paths.push_back(to_free_path(raw));
  return d;
}

std::vector<MetricGraph> enumerate_orientations(const UndirectedMetricGraph& g,
                                                std::size_t cap) {
  const auto report = validate_undirected(g);
  if (!report.ok()) throw Error(ErrorKind::InvalidGraph, "invalid graph: " + report.summary());
  if (!check_orientable(g)) throw Error(ErrorKind::NotOrientable, "not balanced orientable");

  // Items to orient: non-loop edges and leads. Each vertex keeps
  // balance = out - in over assigned items and a count of unassigned ones.
  struct Item {
    bool lead;
    std::size_t pos;
  };
  std::vector<Item> items;
  std::vector<long> balance(g.vertex_count, 0);
  std::vector<long> open(g.vertex_count, 0);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.a == e.b) continue;
    items.push_back({false, i});
    ++open[index(e.a)];
    ++open[index(e.b)];
  }
  for (std::size_t i = 0; i < g.leads.size(); ++i) {
    items.push_back({true, i});
    ++open[index(g.leads[i].anchor)];
  }
  std::vector<bool> dir(items.size(), true);
  std::vector<MetricGraph> out;

  auto feasible = [&](VertexId v) {
    return std::labs(balance[index(v)]) <= open[index(v)];
  };

  std::function<void(std::size_t)> search = [&](std::size_t k) {
    if (out.size() >= cap) return;
    if (k == items.size()) {
      std::vector<FiniteEdge> fin;
      std::vector<Lead> leads;
      std::size_t item = 0;
      for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        if (e.a == e.b) {
          fin.push_back({e.id, e.a, e.b, e.length});
          continue;
        }
        while (items[item].lead || items[item].pos != i) ++item;
        fin.push_back(dir[item] ? FiniteEdge{e.id, e.a, e.b, e.length}
                                : FiniteEdge{e.id, e.b, e.a, e.length});
      }
      for (std::size_t j = 0; j < items.size(); ++j) {
        if (!items[j].lead) continue;
        const auto& l = g.leads[items[j].pos];
        leads.push_back({l.id, l.anchor,
                         dir[j] ? LeadDirection::Outgoing : LeadDirection::Incoming});
      }
      out.emplace_back(g.vertex_count, std::move(fin), std::move(leads));
      return;
    }
    for (bool forward : {true, false}) {
      dir[k] = forward;
      const auto& it = items[k];
      if (it.lead) {
        const auto v = g.leads[it.pos].anchor;
        balance[index(v)] += forward ? 1 : -1;
        --open[index(v)];
        if (feasible(v)) search(k + 1);
        ++open[index(v)];
        balance[index(v)] -= forward ? 1 : -1;
      } else {
        const auto& e = g.edges[it.pos];
        const auto from = forward ? e.a : e.b;
        const auto to = forward ? e.b : e.a;
        ++balance[index(from)];
        --balance[index(to)];
        --open[index(from)];
        --open[index(to)];
        if (feasible(from) && feasible(to)) search(k + 1);
        ++open[index(from)];
        ++open[index(to)];
        --balance[index(from)];
        ++balance[index(to)];
      }
    }
  };
  search(0);
  return out;
}

UndirectedMetricGraph forget_orientation(const MetricGraph& g) {
  UndirectedMetricGraph u;
  u.vertex_count = g.vertex_count();
  for (const auto& e : g.finite_edges()) u.edges.push_back({e.id, e.start, e.end, e.length});
  for (const auto& l : g.leads()) u.leads.push_back({l.id, l.anchor});
  return u;
}

ValidationReport check_cover(const MetricGraph& g, const PathDecomposition& d) {
  ValidationReport report;
  std::vector<int> count(g.edge_count(), 0);
  for (std::size_t p = 0; p < d.paths.size(); ++p) {
    const auto& path = d.paths[p];
    const auto where = "path " + std::to_string(p);
    if (path.steps.empty()) {
      report.add("empty path", where + " is empty");
      continue;
    }
    std::optional<VertexId> head;  // vertex reached after the previous step
    for (std::size_t i = 0; i < path.steps.size(); ++i) {
      const auto e = path.steps[i].edge;
      if (!g.has_edge(e)) {
        report.add("unknown edge", where + " uses unknown edge");
        return report;
      }
      ++count[index(e)];
      const auto kind = g.kind(e);
      if (kind == EdgeKind::IncomingLead && i != 0) {
        report.add("lead position", where + " has an incoming lead after its start");
      }
      if (kind == EdgeKind::OutgoingLead && i + 1 != path.steps.size()) {
        report.add("lead position", where + " has an outgoing lead before its end");
      }
      if (i > 0 && head != g.start_vertex(e)) {
        report.add("broken path", where + " is not connected head to tail at step " +
                                      std::to_string(i));
      }
      head = g.end_vertex(e);
    }
    const auto first = path.steps.front().edge;
    const auto last = path.steps.back().edge;
    if (path.kind == PathKind::Loop) {
      if (g.kind(first) != EdgeKind::Finite || g.end_vertex(last) != g.start_vertex(first)) {
        report.add("open loop", where + " does not close");
      }
    } else if (g.kind(first) != EdgeKind::IncomingLead ||
               g.kind(last) != EdgeKind::OutgoingLead) {
      report.add("lead path", where + " does not run from an incoming to an outgoing lead");
    }
  }
  for (std::size_t e = 0; e < count.size(); ++e) {
    if (count[e] != 1) {
      report.add("cover", "edge " + std::to_string(e) + " covered " + std::to_string(count[e]) +
                              " times");
    }
  }
  return report;
}

}  // namespace momgraph
