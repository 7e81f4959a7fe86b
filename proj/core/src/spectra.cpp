#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "momgraph/spectra.hpp"

namespace momgraph {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Sorted arithmetic progression {(2 pi n - shift) / period} inside (-lambda, lambda).
void progression(double period, double shift, double lambda, std::vector<double>& out) {
  const double step = kTwoPi / period;
  const double offset = -shift / period;
  const auto n_lo = static_cast<long>(std::floor((-lambda - offset) / step)) - 1;
  const auto n_hi = static_cast<long>(std::ceil((lambda - offset) / step)) + 1;
  for (long n = n_lo; n <= n_hi; ++n) {
    const double k = offset + step * static_cast<double>(n);
    if (k > -lambda && k < lambda) out.push_back(k);
  }
}

std::vector<SpectralPoint> merge(std::vector<double> ks) {
  std::sort(ks.begin(), ks.end());
  std::vector<SpectralPoint> points;
  for (const double k : ks) {
    if (!points.empty() && std::abs(points.back().k - k) <= 1e-9 * std::max(1.0, std::abs(k))) {
      ++points.back().multiplicity;
    } else {
      points.push_back({k, 1});
    }
  }
  return points;
}

}  // namespace

SpectrumResult loop_graph_spectrum(double total_length, std::span<const double> alpha,
                                   double lambda) {
  if (!(total_length > 0.0)) throw Error(ErrorKind::InvalidArgument, "loop length must be positive");
  const double shift = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  std::vector<double> ks;
  progression(total_length, shift, lambda, ks);
  return {merge(std::move(ks)), {-lambda, lambda}};
}

SpectrumResult decoupled_spectrum(const PathDecomposition& d, double lambda) {
  std::vector<double> ks;
  for (const auto& p : d.paths) {
    if (p.kind != PathKind::Loop) {
      throw Error(ErrorKind::LeadToLeadPath, "decoupled spectrum needs a loop-only cover");
    }
    progression(p.total_length, 0.0, lambda, ks);
  }
  return {merge(std::move(ks)), {-lambda, lambda}};
}

}  // namespace momgraph
