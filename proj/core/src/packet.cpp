#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/quadrature/gauss.hpp>

#include "momgraph/evolution.hpp"

namespace momgraph {

namespace {

std::map<std::size_t, std::vector<Interval>> merged_supports(const WavePacket& psi) {
  std::map<std::size_t, std::vector<Interval>> by_edge;
  for (const auto& c : psi.components) by_edge[index(c.edge)].push_back(c.support);
  for (auto& [e, iv] : by_edge) {
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& i : iv) {
      if (!out.empty() && i.lo <= out.back().hi) {
        out.back().hi = std::max(out.back().hi, i.hi);
      } else {
        out.push_back(i);
      }
    }
    iv = std::move(out);
  }
  return by_edge;
}

}  // namespace

Complex evaluate(const WavePacket& psi, GraphPoint x) {
  Complex sum = 0.0;
  for (const auto& c : psi.components) {
    if (c.edge == x.edge && c.support.contains(x.coordinate)) sum += c.profile(x.coordinate);
  }
  return sum;
}

Complex evaluate_derivative(const WavePacket& psi, GraphPoint x) {
  Complex sum = 0.0;
  for (const auto& c : psi.components) {
    if (c.edge != x.edge || !c.support.contains(x.coordinate)) continue;
    if (!c.derivative) throw Error(ErrorKind::InvalidArgument, "packet component has no derivative");
    sum += c.derivative(x.coordinate);
  }
  return sum;
}

std::vector<Interval> support_on(const WavePacket& psi, EdgeId e) {
  auto all = merged_supports(psi);
  auto it = all.find(index(e));
  return it == all.end() ? std::vector<Interval>{} : it->second;
}

PacketComponent bump(EdgeId e, double lo, double hi, Complex amplitude) {
  if (!(hi > lo)) throw Error(ErrorKind::InvalidArgument, "bump needs lo < hi");
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  auto f = [=](double x) -> Complex {
    const double s = (x - mid) / half;
    if (std::abs(s) >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
  };
  auto df = [=](double x) -> Complex {
    const double s = (x - mid) / half;
    if (std::abs(s) >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    return amplitude * std::exp(1.0 - 1.0 / q) * (-2.0 * s / (q * q)) / half;
  };
  return {e, f, {lo, hi}, df};
}

WavePacket scaled(WavePacket psi, Complex factor) {
  for (auto& c : psi.components) {
    c.profile = [p = std::move(c.profile), factor](double x) { return factor * p(x); };
    if (c.derivative) {
      c.derivative = [d = std::move(c.derivative), factor](double x) { return factor * d(x); };
    }
  }
  return psi;
}

double packet_norm(const WavePacket& psi, double panels_per_unit) {
  using Rule = boost::math::quadrature::gauss<double, 10>;
  double total = 0.0;
  for (const auto& [e, ivs] : merged_supports(psi)) {
    const auto edge = edge_id(e);
    for (const auto& iv : ivs) {
      const auto panels = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(iv.width() * panels_per_unit)));
      const double w = iv.width() / static_cast<double>(panels);
      for (std::size_t p = 0; p < panels; ++p) {
        const double a = iv.lo + static_cast<double>(p) * w;
        total += Rule::integrate(
            [&](double x) { return std::norm(evaluate(psi, {edge, x})); }, a, a + w);
      }
    }
  }
  return std::sqrt(total);
}

WavePacket normalized(const WavePacket& psi, double panels_per_unit) {
  const double n = packet_norm(psi, panels_per_unit);
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "cannot normalize a zero packet");
  return scaled(psi, 1.0 / n);
}

std::vector<GraphPoint> sample_points(const WavePacket& psi, double samples_per_unit) {
  std::vector<GraphPoint> pts;
  for (const auto& [e, ivs] : merged_supports(psi)) {
    for (const auto& iv : ivs) {
      const auto n = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(iv.width() * samples_per_unit)));
      const double w = iv.width() / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({edge_id(e), iv.lo + (static_cast<double>(i) + 0.5) * w});
      }
    }
  }
  return pts;
}

}  // namespace momgraph
