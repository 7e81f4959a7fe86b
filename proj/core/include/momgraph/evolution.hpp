#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "momgraph/coupling.hpp"

namespace momgraph {

inline constexpr std::size_t kRouteCap = 1'000'000;

using Profile = std::function<Complex(double)>;

/// Edge-local profile that vanishes outside `support`. `derivative` is
/// optional and only needed by generator_residual().
struct PacketComponent {
  EdgeId edge;
  Profile profile;
  Interval support;
  Profile derivative;
};

/// Sum of its components; several components may share an edge.
struct WavePacket {
  std::vector<PacketComponent> components;
};

Complex evaluate(const WavePacket& psi, GraphPoint x);
/// Throws InvalidArgument when a component that covers x has no derivative.
Complex evaluate_derivative(const WavePacket& psi, GraphPoint x);

/// Supports of all components on `e`, merged and sorted.
std::vector<Interval> support_on(const WavePacket& psi, EdgeId e);

/// amplitude * exp(1 - 1 / (1 - s^2)) with s mapping [lo, hi] onto [-1, 1].
PacketComponent bump(EdgeId e, double lo, double hi, Complex amplitude = 1.0);

/// Every profile (and derivative) multiplied by `factor`.
WavePacket scaled(WavePacket psi, Complex factor);

/// L2 norm by composite 10-point Gauss-Legendre over the merged supports,
/// with ceil(width * panels_per_unit) panels per interval.
double packet_norm(const WavePacket& psi, double panels_per_unit = 64.0);

/// psi / ||psi||.
WavePacket normalized(const WavePacket& psi, double panels_per_unit = 256.0);

/// Vertex passage: arrived through `in_edge`, left through `out_edge`.
struct Hop {
  VertexId vertex;
  EdgeId in_edge;
  EdgeId out_edge;
};

/// Orientation-respecting journey from `start` to `end`; hops in travel order.
struct Route {
  GraphPoint end;
  std::vector<Hop> hops;
  GraphPoint start;
  double length;
};

/// `factor` is the product of the coupling entries met at the hops.
struct RouteFactor {
  Route route;
  Complex factor;
};

/// Routes of length a >= 0 ending at x, zero factors pruned. Throws VertexHit
/// when x or a route start sits on a vertex and ExplosionCap past `cap` routes.
std::vector<RouteFactor> routes_to_point(const MomentumOperator& op, GraphPoint x, double a,
                                         std::size_t cap = kRouteCap);

/// Routes of length a >= 0 starting at x; same conventions.
std::vector<RouteFactor> routes_from_point(const MomentumOperator& op, GraphPoint x, double a,
                                           std::size_t cap = kRouteCap);

struct EvolvedValue {
  GraphPoint point;
  Complex value;
};

/// (U(a) psi)(x). For a < 0 the routes run forward from x with conjugated
/// factors, since U(-a) is the adjoint of U(a).
EvolvedValue evolve_at(const MomentumOperator& op, const WavePacket& psi, double a, GraphPoint x,
                       std::size_t cap = kRouteCap);

/// U(a) psi as a lazy packet: one component per interval of the propagated
/// support, each evaluating evolve_at() on demand. Points hitting the excluded
/// set are shifted by l_min * 1e-9.
WavePacket evolve(const MomentumOperator& op, const WavePacket& psi, double a,
                  std::size_t cap = kRouteCap);

/// U(a) psi sampled uniformly on its support, linearly interpolated.
WavePacket evolve_grid(const MomentumOperator& op, const WavePacket& psi, double a,
                       double samples_per_unit);

/// Points of edge e reachable from `support` by routes of signed length a.
std::vector<std::pair<EdgeId, Interval>> propagate_support(const MomentumOperator& op, EdgeId e,
                                                           Interval support, double a);

/// Sampled sup |U(a) U(a') psi - U(a + a') psi|.
double group_law_residual(const MomentumOperator& op, const WavePacket& psi, double a,
                          double a_prime, double samples_per_unit);

/// Sampled sup |(U(h) psi - psi) / h + psi'|, i.e. the defect of
/// U(a) = exp(-i a P) at step h. Throws DomainViolation if psi misses the
/// vertex conditions by more than `domain_tol`.
double generator_residual(const MomentumOperator& op, const WavePacket& psi, double h,
                          double samples_per_unit, double domain_tol = 1e-9);

/// Uniform sample points on each merged support interval of `psi`, with
/// `samples_per_unit` points per unit length (at least two per interval).
std::vector<GraphPoint> sample_points(const WavePacket& psi, double samples_per_unit);

}  // namespace momgraph
