#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "momgraph/two_loop.hpp"

namespace momgraph {

namespace {

constexpr Complex kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

Complex phase(Complex k, double l) { return std::exp(kI * k * l); }

Complex d_dk(double ell, double delta, Complex k) {
  const Complex e = phase(k, ell), ed = phase(k, delta);
  return 4.0 * kI * ell * std::cos(k * ell) + kI * ell * e * (ed - 1.0) + kI * delta * e * ed;
}

Complex d_ddelta(double ell, double delta, Complex k) {
  return kI * k * phase(k, ell) * phase(k, delta);
}

std::optional<Complex> newton(double ell, double delta, Complex k, double max_jump) {
  const Complex start = k;
  for (int it = 0; it < 60; ++it) {
    const Complex fk = d_dk(ell, delta, k);
    if (std::abs(fk) == 0.0) return std::nullopt;
    const Complex dk = resonance_function(ell, delta, k) / fk;
    k -= dk;
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag()) || std::abs(k - start) > max_jump) {
      return std::nullopt;
    }
    if (std::abs(dk) <= 1e-15 * std::max(1.0, std::abs(k))) return k;
  }
  return std::nullopt;
}

void check_lengths(const TwoLoopLengths& l) {
  if (!(l.l1 > 0.0 && l.l2 > 0.0 && l.l3 > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "two-loop lengths must be positive");
  }
}

}  // namespace

Complex transfer_denominator(const TwoLoopLengths& l, Complex k) {
  return phase(k, l.l3) * (phase(k, l.l2) + phase(k, l.l1)) - 2.0;
}

TransferCoefficients transfer_coefficients(const TwoLoopLengths& l, double k, double threshold) {
  check_lengths(l);
  const Complex den = transfer_denominator(l, k);
  if (std::abs(den) < threshold) {
    throw Error(ErrorKind::AtEmbeddedEigenvalue, "transfer denominator vanishes at k");
  }
  const Complex e1 = phase(k, l.l1), e2 = phase(k, l.l2), e3 = phase(k, l.l3);
  TransferCoefficients t;
  t.c3 = (e2 - e1) / den;
  t.c1 = kInvSqrt2 * (t.c3 * e3 + 1.0);
  t.c2 = kInvSqrt2 * (t.c3 * e3 - 1.0);
  t.c4 = kInvSqrt2 * (t.c1 * e1 - t.c2 * e2);
  return t;
}

Complex resonance_function(double ell, double delta, Complex k) {
  return 4.0 * kI * std::sin(k * ell) + phase(k, ell) * (phase(k, delta) - 1.0);
}

Complex continue_resonance(double ell, double delta, int n, int steps) {
  if (!(ell > 0.0) || !std::isfinite(delta) || steps < 1) {
    throw Error(ErrorKind::InvalidArgument, "resonance continuation needs ell > 0, finite delta, steps >= 1");
  }
  Complex k = std::numbers::pi * n / ell;
  const double max_jump = std::numbers::pi / (4.0 * ell);
  double d = 0.0;
  double h = delta / steps;
  const double h_min = std::abs(delta) * 1e-9;
  while (d != delta) {
    const double rest = delta - d;
    const bool last = std::abs(rest) <= std::abs(h) * (1.0 + 1e-12);
    const double step = last ? rest : h;
    const Complex predicted = k - d_ddelta(ell, d, k) / d_dk(ell, d, k) * step;
    const auto next = newton(ell, last ? delta : d + step, predicted, max_jump);
    if (!next) {
      h /= 2.0;
      if (std::abs(h) < h_min) {
        throw Error(ErrorKind::ContinuationDiverged, "resonance continuation diverged");
      }
      continue;
    }
    k = *next;
    d = last ? delta : d + step;
  }
  return k;
}

ResonanceResult resonances(double ell, double delta, int n_lo, int n_hi) {
  ResonanceResult r;
  r.parameter = delta;
  for (int n = n_lo; n <= n_hi; ++n) {
    r.roots.push_back(continue_resonance(ell, delta, n));
    r.seed_indices.push_back(n);
  }
  return r;
}

CompactTwoLoopSpectrum compact_two_loop_spectrum(double l1, double l3, double l4, double lambda) {
  if (!(l1 > 0.0 && l3 > 0.0 && l4 > 0.0 && lambda > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "lengths and lambda must be positive");
  }
  CompactTwoLoopSpectrum out;
  out.spectrum.window = {-lambda, lambda};
  const double lengths[4] = {l4, l1, l1, l3};

  auto add_branch = [&](TwoLoopBranch b, double period) {
    const double step = 2.0 * std::numbers::pi / period;
    const auto top = static_cast<long>(std::ceil(lambda / step));
    for (long n = -top; n <= top; ++n) {
      const double k = step * static_cast<double>(n);
      if (!(k > -lambda && k < lambda)) continue;
      ComplexVector c = ComplexVector::Zero(4);
      if (b == TwoLoopBranch::Symmetric) {
        c[3] = 1.0;
        c[1] = c[2] = kInvSqrt2 * phase(k, l3);
      } else {
        c[0] = 1.0;
        c[1] = kInvSqrt2 * phase(k, l4);
        c[2] = -c[1];
      }
      double norm2 = 0.0;
      for (int e = 0; e < 4; ++e) norm2 += std::norm(c[e]) * lengths[e];
      c /= std::sqrt(norm2);
      out.modes.push_back({k, b, std::move(c)});
    }
  };
  add_branch(TwoLoopBranch::Symmetric, l1 + l3);
  add_branch(TwoLoopBranch::Antisymmetric, l1 + l4);
  std::stable_sort(out.modes.begin(), out.modes.end(),
                   [](const CompactMode& a, const CompactMode& b) { return a.k < b.k; });

  for (const auto& m : out.modes) {
    auto& pts = out.spectrum.points;
    if (!pts.empty() && std::abs(pts.back().k - m.k) <= 1e-9 * std::max(1.0, std::abs(m.k))) {
      ++pts.back().multiplicity;
    } else {
      pts.push_back({m.k, 1});
    }
  }
  return out;
}

}  // namespace momgraph
