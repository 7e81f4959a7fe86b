#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "momgraph/spectra.hpp"

namespace momgraph {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Eigenphases closer than this to 0 are treated as exactly 0 when wrapping.
constexpr double kSnap = 1e-12;

using Index = Eigen::Index;

// Eigenvalues of the unitary A(k) and their wrapped phase sum.
struct PhaseSample {
  double k;
  double wrapped_sum;  // sum of phases wrapped to [0, 2 pi), near-zero snapped
  std::vector<double> phases;  // (-pi, pi]
};

PhaseSample sample(const SecularSystem& s, double k) {
  PhaseSample out{k, 0.0, {}};
  const ComplexMatrix a = secular_matrix(s, k);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, false);
  const auto& ev = solver.eigenvalues();
  out.phases.reserve(static_cast<std::size_t>(ev.size()));
  for (Index i = 0; i < ev.size(); ++i) {
    const double th = std::arg(ev[i]);
    out.phases.push_back(th);
    if (std::abs(th) >= kSnap) out.wrapped_sum += th < 0.0 ? th + kTwoPi : th;
  }
  return out;
}

// Eigenphase crossings of 0 in (a.k, b.k]. Each lifted phase is increasing
// and their sum is k L + arg det U, so the wrapped sums fix the count.
std::size_t crossings(const SecularSystem& s, const PhaseSample& a, const PhaseSample& b) {
  const double x = (s.total_length() * (b.k - a.k) - b.wrapped_sum + a.wrapped_sum) / kTwoPi;
  const double n = std::round(x);
  if (std::abs(x - n) > 1e-6 || n < 0.0) {
    throw Error(ErrorKind::ToleranceFailure,
                "eigenphase crossing count is not integral near k = " + std::to_string(b.k));
  }
  return static_cast<std::size_t>(n);
}

std::size_t near_zero(const PhaseSample& p, double tol) {
  return static_cast<std::size_t>(
      std::count_if(p.phases.begin(), p.phases.end(), [&](double th) { return std::abs(th) < tol; }));
}

// Eigenphase nearest 0 and its k-derivative v* diag(l) v.
std::pair<double, double> nearest_phase(const SecularSystem& s, double k) {
  const ComplexMatrix a = secular_matrix(s, k);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, true);
  const auto& ev = solver.eigenvalues();
  Index best = 0;
  for (Index i = 1; i < ev.size(); ++i) {
    if (std::abs(std::arg(ev[i])) < std::abs(std::arg(ev[best]))) best = i;
  }
  const ComplexVector v = solver.eigenvectors().col(best).normalized();
  double slope = 0.0;
  const auto lengths = s.lengths();
  for (Index i = 0; i < v.size(); ++i) slope += std::norm(v[i]) * lengths[static_cast<std::size_t>(i)];
  slope = std::clamp(slope, s.min_length(), s.max_length());
  return {std::arg(ev[best]), slope};
}

class RootFinder {
public:
  RootFinder(const SecularSystem& s, double phase_tol)
      : s_(s), phase_tol_(phase_tol), eta_(0.1 * phase_tol / s.max_length()) {}

  void isolate(const PhaseSample& lo, const PhaseSample& hi, std::size_t n) {
    if (n == 0) return;
    if (n == 1) {
      emit(polish(lo, hi), 1);
      return;
    }
    const double width = hi.k - lo.k;
    if (width < 1e-6) {
      const double r = polish_cluster(lo, hi);
      if (r - eta_ > lo.k && r + eta_ <= hi.k &&
          crossings(s_, lo, sample(s_, r - eta_)) == 0 &&
          crossings(s_, sample(s_, r + eta_), hi) == 0) {
        emit(r, n);
        return;
      }
      if (width < 4.0 * eta_) {
        emit(0.5 * (lo.k + hi.k), n);
        return;
      }
    }
    const PhaseSample mid = sample(s_, 0.5 * (lo.k + hi.k));
    const std::size_t left = crossings(s_, lo, mid);
    isolate(lo, mid, left);
    isolate(mid, hi, n - left);
  }

  std::vector<SpectralPoint> take() { return std::move(points_); }

private:
  void emit(double r, std::size_t n) {
    const std::size_t by_phase = near_zero(sample(s_, r), phase_tol_);
    if (by_phase != n) {
      throw Error(ErrorKind::ToleranceFailure,
                  "root near k = " + std::to_string(r) + ": " + std::to_string(n) +
                      " crossings but " + std::to_string(by_phase) + " unit eigenvalues");
    }
    points_.push_back({r, n});
  }

  // Newton on the eigenphase nearest 0, bracketed by the crossing count.
  double polish(PhaseSample lo, PhaseSample hi) {
    double a = lo.k, b = hi.k;
    double k = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
      const PhaseSample p = sample(s_, k);
      if (crossings(s_, lo, p) >= 1) {
        b = k;
      } else {
        a = k;
        lo = p;
      }
      const auto [theta, slope] = nearest_phase(s_, k);
      if (std::abs(theta) < 1e-15) return k;
      double next = k - theta / slope;
      if (!(next > a && next <= b)) next = 0.5 * (a + b);
      if (std::abs(next - k) <= 1e-15 * std::max(1.0, std::abs(k)) || b - a < 1e-15) {
        return std::clamp(next, a, b);
      }
      k = next;
    }
    return 0.5 * (a + b);
  }

  double polish_cluster(const PhaseSample& lo, const PhaseSample& hi) {
    double k = 0.5 * (lo.k + hi.k);
    for (int it = 0; it < 50; ++it) {
      const auto [theta, slope] = nearest_phase(s_, k);
      const double next = std::clamp(k - theta / slope, lo.k, hi.k);
      if (std::abs(next - k) <= 1e-15 * std::max(1.0, std::abs(k))) return next;
      k = next;
    }
    return k;
  }

  const SecularSystem& s_;
  double phase_tol_;
  double eta_;
  std::vector<SpectralPoint> points_;
};

}  // namespace

SecularSystem::SecularSystem(const MomentumOperator& op) {
  const auto& g = op.graph();
  if (!g.is_compact()) {
    throw Error(ErrorKind::GraphHasLeads, "secular equation needs a compact graph");
  }
  edge_count_ = g.edge_count();
  for (const auto& e : g.finite_edges()) edges_.push_back(e.id);
  std::sort(edges_.begin(), edges_.end());
  const auto n = static_cast<Index>(edges_.size());
  u_ = ComplexMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index m = 0; m < n; ++m) {
      u_(j, m) = op.transition(edges_[static_cast<std::size_t>(m)], edges_[static_cast<std::size_t>(j)]);
    }
  }
  for (const auto e : edges_) lengths_.push_back(g.finite_edge(e).length);
  total_ = momgraph::total_length(g);
  min_ = g.min_length();
  max_ = g.max_length();
}

ComplexMatrix secular_matrix(const SecularSystem& s, Complex k) {
  ComplexMatrix a = s.coupling();
  const auto lengths = s.lengths();
  for (Index m = 0; m < a.cols(); ++m) {
    a.col(m) *= std::exp(Complex(0.0, 1.0) * k * lengths[static_cast<std::size_t>(m)]);
  }
  return a;
}

Complex secular_determinant(const SecularSystem& s, Complex k) {
  const ComplexMatrix a = secular_matrix(s, k);
  return (a - ComplexMatrix::Identity(a.rows(), a.cols())).determinant();
}

std::vector<double> eigenphases(const SecularSystem& s, double k) {
  auto p = sample(s, k).phases;
  std::sort(p.begin(), p.end());
  return p;
}

std::size_t SpectrumResult::total_multiplicity() const {
  std::size_t n = 0;
  for (const auto& p : points) n += p.multiplicity;
  return n;
}

SpectrumResult real_spectrum(const SecularSystem& s, double lambda, double phase_tol) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
  SpectrumResult result{{}, {-lambda, lambda}};
  if (s.dimension() == 0) return result;

  const double max_step = std::numbers::pi / (2.0 * s.max_length());
  const auto cells = static_cast<std::size_t>(std::ceil(2.0 * lambda / max_step));
  const double step = 2.0 * lambda / static_cast<double>(cells);

  RootFinder finder(s, phase_tol);
  PhaseSample prev = sample(s, -lambda);
  for (std::size_t i = 1; i <= cells; ++i) {
    const double k = i == cells ? lambda : -lambda + static_cast<double>(i) * step;
    PhaseSample next = sample(s, k);
    finder.isolate(prev, next, crossings(s, prev, next));
    prev = std::move(next);
  }
  auto points = finder.take();
  // The grid counts (-lambda, lambda]; the window is open.
  const std::size_t at_edge = near_zero(prev, kSnap);
  for (std::size_t dropped = 0; dropped < at_edge && !points.empty();) {
    auto& last = points.back();
    const std::size_t take = std::min(at_edge - dropped, last.multiplicity);
    last.multiplicity -= take;
    dropped += take;
    if (last.multiplicity == 0) points.pop_back();
  }
  result.points = std::move(points);
  return result;
}

std::size_t counting_function(const SecularSystem& s, double lambda) {
  if (!(lambda > 0.0)) return 0;
  if (s.dimension() == 0) return 0;
  const PhaseSample lo = sample(s, -lambda);
  const PhaseSample hi = sample(s, lambda);
  return crossings(s, lo, hi) - near_zero(hi, kSnap);
}

std::vector<EigenfunctionCoefficients> eigenfunctions(const SecularSystem& s, double k,
                                                      double sv_tol) {
  const ComplexMatrix a = secular_matrix(s, k);
  const ComplexMatrix m = a - ComplexMatrix::Identity(a.rows(), a.cols());
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  std::vector<EigenfunctionCoefficients> out;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > sv_tol) continue;
    ComplexVector c = svd.matrixV().col(i);
    // fix the phase: largest amplitude real and positive
    Index big = 0;
    c.cwiseAbs().maxCoeff(&big);
    c *= std::abs(c[big]) / c[big];
    ComplexVector amps = ComplexVector::Zero(static_cast<Index>(s.edge_count()));
    const auto order = s.edge_order();
    for (Index j = 0; j < c.size(); ++j) amps[static_cast<Index>(index(order[static_cast<std::size_t>(j)]))] = c[j];
    out.push_back({Complex(k, 0.0), std::move(amps)});
  }
  return out;
}

int count_zeros(const SecularSystem& s, double re_lo, double re_hi, double im_lo, double im_hi) {
  const Complex corners[] = {{re_lo, im_lo}, {re_hi, im_lo}, {re_hi, im_hi}, {re_lo, im_hi}};
  double winding = 0.0;
  // Adaptive: split a segment until |f1 - f0| < min(|f0|, |f1|) / 2, so the
  // argument moves by less than pi/6 per piece and cannot alias.
  std::function<void(Complex, Complex, Complex, Complex, int)> walk =
      [&](Complex z0, Complex z1, Complex f0, Complex f1, int depth) {
        const double d = std::arg(f1 / f0);
        if (std::abs(f1 - f0) < 0.5 * std::min(std::abs(f0), std::abs(f1)) || depth > 50) {
          winding += d;
          return;
        }
        const Complex zm = 0.5 * (z0 + z1);
        const Complex fm = secular_determinant(s, zm);
        walk(z0, zm, f0, fm, depth + 1);
        walk(zm, z1, fm, f1, depth + 1);
      };
  for (int side = 0; side < 4; ++side) {
    const Complex z0 = corners[side];
    const Complex z1 = corners[(side + 1) % 4];
    const int pieces = std::max(8, static_cast<int>(std::ceil(std::abs(z1 - z0) * 8.0)));
    Complex prev_z = z0;
    Complex prev_f = secular_determinant(s, z0);
    for (int i = 1; i <= pieces; ++i) {
      const Complex z = z0 + (z1 - z0) * (static_cast<double>(i) / pieces);
      const Complex f = secular_determinant(s, z);
      walk(prev_z, z, prev_f, f, 0);
      prev_z = z;
      prev_f = f;
    }
  }
  return static_cast<int>(std::lround(winding / kTwoPi));
}

ComplexScan scan_complex_plane(const SecularSystem& s, double re_max, double im_min,
                               double im_max, std::size_t samples_per_unit) {
  ComplexScan scan{std::numeric_limits<double>::infinity(), {}, 0, 0};
  const auto nre = static_cast<std::size_t>(std::ceil(2.0 * re_max * samples_per_unit));
  const auto nim = static_cast<std::size_t>(
      std::max<double>(1.0, std::ceil((im_max - im_min) * samples_per_unit)));
  for (std::size_t i = 0; i <= nre; ++i) {
    const double x = -re_max + 2.0 * re_max * static_cast<double>(i) / static_cast<double>(nre);
    for (std::size_t j = 0; j <= nim; ++j) {
      const double y = im_min + (im_max - im_min) * static_cast<double>(j) / static_cast<double>(nim);
      for (const double sign : {1.0, -1.0}) {
        const Complex z(x, sign * y);
        const double v = std::abs(secular_determinant(s, z));
        if (v < scan.min_abs_det) {
          scan.min_abs_det = v;
          scan.argmin = z;
        }
      }
    }
  }
  scan.zeros_upper = count_zeros(s, -re_max, re_max, im_min, im_max);
  scan.zeros_lower = count_zeros(s, -re_max, re_max, -im_max, -im_min);
  return scan;
}

}  // namespace momgraph
