#include <algorithm>
#include <cmath>
#include <memory>

#include "momgraph/evolution.hpp"

namespace momgraph {

namespace {

double length_scale(const MetricGraph& g) {
  const double m = g.min_length();
  return std::isfinite(m) ? m : 1.0;
}

// Depth-first walk along (forward) or against (backward) the orientation.
class Walker {
public:
  Walker(const MomentumOperator& op, bool forward, std::size_t cap)
      : op_(op), g_(op.graph()), forward_(forward), cap_(cap), tol_(length_scale(g_) * 1e-11) {
    for (std::size_t v = 0; v < g_.vertex_count(); ++v) {
      next_.push_back(forward ? g_.outgoing(vertex_id(v)) : g_.incoming(vertex_id(v)));
    }
  }

  template <class Visit>
  void run(GraphPoint x, double a, Visit&& visit) {
    if (!g_.has_edge(x.edge)) throw Error(ErrorKind::InvalidArgument, "point on unknown edge");
    const auto dom = g_.domain(x.edge);
    if (!(x.coordinate >= dom.lo && x.coordinate <= dom.hi)) {
      throw Error(ErrorKind::InvalidArgument, "point outside its edge");
    }
    if (x.coordinate - dom.lo <= tol_ || dom.hi - x.coordinate <= tol_) {
      throw Error(ErrorKind::VertexHit, "evaluation point is a vertex");
    }
    step(x.edge, x.coordinate, a, Complex(1.0), visit);
  }

  const std::vector<Hop>& hops() const noexcept { return hops_; }

private:
  template <class Visit>
  void step(EdgeId e, double t, double rest, Complex factor, Visit& visit) {
    const auto dom = g_.domain(e);
    const double room = forward_ ? dom.hi - t : t - dom.lo;
    if (rest < room - tol_) {
      if (++emitted_ > cap_) throw Error(ErrorKind::ExplosionCap, "route count exceeds cap");
      visit(GraphPoint{e, forward_ ? t + rest : t - rest}, factor);
      return;
    }
    if (rest <= room + tol_) throw Error(ErrorKind::VertexHit, "route endpoint is a vertex");
    const VertexId v = forward_ ? *g_.end_vertex(e) : *g_.start_vertex(e);
    for (const EdgeId n : next_[index(v)]) {
      const Complex u = forward_ ? op_.transition(e, n) : op_.transition(n, e);
      if (std::abs(u) <= kStructuralZeroTol) continue;
      hops_.push_back(forward_ ? Hop{v, e, n} : Hop{v, n, e});
      const auto nd = g_.domain(n);
      step(n, forward_ ? nd.lo : nd.hi, rest - room, factor * u, visit);
      hops_.pop_back();
    }
  }

  const MomentumOperator& op_;
  const MetricGraph& g_;
  bool forward_;
  std::size_t cap_;
  double tol_;
  std::size_t emitted_ = 0;
  std::vector<std::vector<EdgeId>> next_;
  std::vector<Hop> hops_;
};

struct Piece {
  EdgeId edge;
  double lo, hi;
};

void coalesce(std::vector<Piece>& ps) {
  std::sort(ps.begin(), ps.end(), [](const Piece& a, const Piece& b) {
    return a.edge != b.edge ? a.edge < b.edge : a.lo < b.lo;
  });
  std::vector<Piece> out;
  for (const auto& p : ps) {
    if (!out.empty() && out.back().edge == p.edge && p.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, p.hi);
    } else {
      out.push_back(p);
    }
  }
  ps = std::move(out);
}

Complex evolve_robust(const MomentumOperator& op, const WavePacket& psi, double a, GraphPoint x,
                      std::size_t cap) {
  const double jitter = length_scale(op.graph()) * 1e-9;
  const auto dom = op.graph().domain(x.edge);
  // at an edge end only the inward shift stays on the edge (one-sided limit)
  for (const double shift : {0.0, jitter, -jitter}) {
    const double t = x.coordinate + shift;
    if (shift != 0.0 && (t <= dom.lo || t >= dom.hi)) continue;
    try {
      return evolve_at(op, psi, a, {x.edge, t}, cap).value;
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::VertexHit || shift < 0.0) throw;
    }
  }
  throw Error(ErrorKind::VertexHit, "no admissible shift off the excluded set");
}

WavePacket joined(const WavePacket& a, const WavePacket& b) {
  WavePacket out = a;
  out.components.insert(out.components.end(), b.components.begin(), b.components.end());
  return out;
}

}  // namespace

std::vector<RouteFactor> routes_to_point(const MomentumOperator& op, GraphPoint x, double a,
                                         std::size_t cap) {
  if (!(a >= 0.0)) throw Error(ErrorKind::InvalidArgument, "route length must be non-negative");
  std::vector<RouteFactor> out;
  Walker w(op, false, cap);
  w.run(x, a, [&](GraphPoint start, Complex f) {
    std::vector<Hop> hops(w.hops().rbegin(), w.hops().rend());
    out.push_back({{x, std::move(hops), start, a}, f});
  });
  return out;
}

std::vector<RouteFactor> routes_from_point(const MomentumOperator& op, GraphPoint x, double a,
                                           std::size_t cap) {
  if (!(a >= 0.0)) throw Error(ErrorKind::InvalidArgument, "route length must be non-negative");
  std::vector<RouteFactor> out;
  Walker w(op, true, cap);
  w.run(x, a, [&](GraphPoint end, Complex f) { out.push_back({{end, w.hops(), x, a}, f}); });
  return out;
}

EvolvedValue evolve_at(const MomentumOperator& op, const WavePacket& psi, double a, GraphPoint x,
                       std::size_t cap) {
  Complex sum = 0.0;
  if (a >= 0.0) {
    Walker(op, false, cap).run(x, a, [&](GraphPoint s, Complex f) { sum += f * evaluate(psi, s); });
  } else {
    Walker(op, true, cap).run(x, -a, [&](GraphPoint s, Complex f) {
      sum += std::conj(f) * evaluate(psi, s);
    });
  }
  return {x, sum};
}

std::vector<std::pair<EdgeId, Interval>> propagate_support(const MomentumOperator& op, EdgeId e,
                                                           Interval support, double a) {
  const auto& g = op.graph();
  const bool forward = a >= 0.0;
  std::vector<Piece> kept, work{{e, support.lo + a, support.hi + a}};
  while (!work.empty()) {
    std::vector<Piece> next;
    for (const auto& p : work) {
      const auto dom = g.domain(p.edge);
      const double lo = std::max(p.lo, dom.lo), hi = std::min(p.hi, dom.hi);
      if (hi > lo) kept.push_back({p.edge, lo, hi});
      if (forward && p.hi > dom.hi) {
        const double over_lo = std::max(p.lo, dom.hi) - dom.hi, over_hi = p.hi - dom.hi;
        const VertexId v = *g.end_vertex(p.edge);
        for (const EdgeId n : g.outgoing(v)) {
          if (std::abs(op.transition(p.edge, n)) <= kStructuralZeroTol) continue;
          const double base = g.domain(n).lo;
          next.push_back({n, base + over_lo, base + over_hi});
        }
      }
      if (!forward && p.lo < dom.lo) {
        const double under_lo = p.lo - dom.lo, under_hi = std::min(p.hi, dom.lo) - dom.lo;
        const VertexId v = *g.start_vertex(p.edge);
        for (const EdgeId n : g.incoming(v)) {
          if (std::abs(op.transition(n, p.edge)) <= kStructuralZeroTol) continue;
          const double base = g.domain(n).hi;
          next.push_back({n, base + under_lo, base + under_hi});
        }
      }
    }
    coalesce(next);
    work = std::move(next);
  }
  coalesce(kept);
  std::vector<std::pair<EdgeId, Interval>> out;
  for (const auto& p : kept) out.push_back({p.edge, {p.lo, p.hi}});
  return out;
}

WavePacket evolve(const MomentumOperator& op, const WavePacket& psi, double a, std::size_t cap) {
  std::vector<Piece> pieces;
  for (const auto& c : psi.components) {
    for (const auto& [e, iv] : propagate_support(op, c.edge, c.support, a)) {
      pieces.push_back({e, iv.lo, iv.hi});
    }
  }
  coalesce(pieces);
  auto shared_op = std::make_shared<const MomentumOperator>(op);
  auto shared_psi = std::make_shared<const WavePacket>(psi);
  WavePacket out;
  for (const auto& p : pieces) {
    const EdgeId e = p.edge;
    out.components.push_back(
        {e,
         [shared_op, shared_psi, a, e, cap](double x) {
           return evolve_robust(*shared_op, *shared_psi, a, {e, x}, cap);
         },
         {p.lo, p.hi},
         {}});
  }
  return out;
}

WavePacket evolve_grid(const MomentumOperator& op, const WavePacket& psi, double a,
                       double samples_per_unit) {
  if (!(samples_per_unit > 0.0)) throw Error(ErrorKind::InvalidArgument, "samples_per_unit must be positive");
  const WavePacket lazy = evolve(op, psi, a);
  WavePacket out;
  for (const auto& c : lazy.components) {
    const auto n = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(c.support.width() * samples_per_unit)) + 1);
    const double lo = c.support.lo, w = c.support.width() / static_cast<double>(n - 1);
    std::vector<Complex> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = c.profile(i + 1 == n ? c.support.hi : lo + static_cast<double>(i) * w);
    out.components.push_back({c.edge,
                              [values = std::move(values), lo, w](double x) {
                                const double s = std::clamp((x - lo) / w, 0.0,
                                                            static_cast<double>(values.size() - 1));
                                const auto i = std::min(static_cast<std::size_t>(s), values.size() - 2);
                                const double t = s - static_cast<double>(i);
                                return (1.0 - t) * values[i] + t * values[i + 1];
                              },
                              c.support,
                              {}});
  }
  return out;
}

double group_law_residual(const MomentumOperator& op, const WavePacket& psi, double a,
                          double a_prime, double samples_per_unit) {
  const WavePacket twice = evolve(op, evolve(op, psi, a_prime), a);
  const WavePacket once = evolve(op, psi, a + a_prime);
  double worst = 0.0;
  for (const auto& x : sample_points(joined(twice, once), samples_per_unit)) {
    worst = std::max(worst, std::abs(evaluate(twice, x) - evaluate(once, x)));
  }
  return worst;
}

double generator_residual(const MomentumOperator& op, const WavePacket& psi, double h,
                          double samples_per_unit, double domain_tol) {
  if (h == 0.0) throw Error(ErrorKind::InvalidArgument, "step h must be nonzero");
  for (const auto& c : psi.components) {
    if (!c.derivative) throw Error(ErrorKind::InvalidArgument, "packet component has no derivative");
  }
  const auto b = boundary_values(op, [&](EdgeId e, double x) { return evaluate(psi, {e, x}); });
  if (apply_vertex_conditions(op, b) > domain_tol) {
    throw Error(ErrorKind::DomainViolation, "packet violates the vertex conditions");
  }
  const WavePacket shifted = evolve(op, psi, h);
  double worst = 0.0;
  for (const auto& x : sample_points(joined(psi, shifted), samples_per_unit)) {
    const Complex r = (evaluate(shifted, x) - evaluate(psi, x)) / h + evaluate_derivative(psi, x);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace momgraph
