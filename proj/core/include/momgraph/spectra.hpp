#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "momgraph/coupling.hpp"

namespace momgraph {

/// Phase tolerance for counting unit eigenvalues of A(k) at a root.
inline constexpr double kPhaseTol = 1e-9;
/// Singular-value threshold for kernel and rank tests.
inline constexpr double kRankTol = 1e-10;

/// det(A(k) - I) = 0 with A(k) = U diag(exp(i k l_m)) on a compact graph.
/// Rows and columns follow the finite edges in id order; U(j, m) carries the
/// value at the end of edge m to the start of edge j.
class SecularSystem {
public:
  /// Throws GraphHasLeads for finite-core graphs.
  explicit SecularSystem(const MomentumOperator& op);

  std::size_t dimension() const noexcept { return edges_.size(); }
  std::span<const EdgeId> edge_order() const noexcept { return edges_; }
  std::span<const double> lengths() const noexcept { return lengths_; }
  const ComplexMatrix& coupling() const noexcept { return u_; }
  std::size_t edge_count() const noexcept { return edge_count_; }

  double total_length() const noexcept { return total_; }
  double min_length() const noexcept { return min_; }
  double max_length() const noexcept { return max_; }

private:
  std::vector<EdgeId> edges_;
  std::vector<double> lengths_;
  ComplexMatrix u_;
  std::size_t edge_count_ = 0;
  double total_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

ComplexMatrix secular_matrix(const SecularSystem& s, Complex k);

/// det(A(k) - I).
Complex secular_determinant(const SecularSystem& s, Complex k);

/// Arguments of the eigenvalues of A(k) in (-pi, pi], sorted.
std::vector<double> eigenphases(const SecularSystem& s, double k);

struct SpectralPoint {
  double k;
  std::size_t multiplicity;
};

struct SpectrumResult {
  std::vector<SpectralPoint> points;  // ascending k
  Interval window;                    // open window (-lambda, lambda)

  std::size_t total_multiplicity() const;
};

/// Per-edge amplitudes c_e of an eigenfunction c_e exp(i k x); indexed by
/// edge id, leads included.
struct EigenfunctionCoefficients {
  Complex k;
  ComplexVector amplitudes;
};

/// All eigenvalues in (-lambda, lambda). Crossings of eigenphase 0 are
/// counted on a grid of step <= pi / (2 l_max), isolated by bisection on the
/// crossing count and polished by Newton on the eigenphase nearest 0. Throws
/// ToleranceFailure when the crossing count and the eigenphase count at a
/// root (within `phase_tol`) disagree.
SpectrumResult real_spectrum(const SecularSystem& s, double lambda, double phase_tol = kPhaseTol);

/// N_U(lambda): eigenvalues in (-lambda, lambda) counted with multiplicity.
std::size_t counting_function(const SecularSystem& s, double lambda);

/// Orthonormal basis of ker(A(k) - I), expressed as edge amplitudes.
std::vector<EigenfunctionCoefficients> eigenfunctions(const SecularSystem& s, double k,
                                                      double sv_tol = kRankTol);

/// Closed-form spectrum of a loop of total length L with vertex phases alpha.
SpectrumResult loop_graph_spectrum(double total_length, std::span<const double> alpha,
                                   double lambda);

/// Union of the loop spectra {2 pi m / l_j} of a loop-only cover. Throws
/// LeadToLeadPath if the cover contains an infinite path.
SpectrumResult decoupled_spectrum(const PathDecomposition& d, double lambda);

/// Scan of det(A(k) - I) over the strips im_min <= |Im k| <= im_max,
/// |Re k| <= re_max, plus an argument-principle zero count for each strip.
struct ComplexScan {
  double min_abs_det;
  Complex argmin;
  int zeros_upper;
  int zeros_lower;
};

ComplexScan scan_complex_plane(const SecularSystem& s, double re_max, double im_min,
                               double im_max, std::size_t samples_per_unit);

/// Winding number of det(A(k) - I) around the rectangle, i.e. its zero count.
int count_zeros(const SecularSystem& s, double re_lo, double re_hi, double im_lo, double im_hi);

/// Embedded eigenvalues of a finite-core operator: real k with a nonzero
/// eigenfunction supported on finite edges (lead amplitudes exactly zero).
struct EmbeddedResult {
  SpectrumResult spectrum;
  std::vector<EigenfunctionCoefficients> eigenfunctions;
};

EmbeddedResult embedded_eigenvalues(const MomentumOperator& op, double lambda,
                                    double sv_tol = kRankTol);

/// Smallest singular value of the lead-constrained system at k.
double embedded_defect(const MomentumOperator& op, double k);

/// Boundary values of the edge-wise function c_e exp(i k x), zero on leads
/// whose amplitude is zero.
BoundaryVector eigenfunction_boundary(const MomentumOperator& op,
                                      const EigenfunctionCoefficients& c);

}  // namespace momgraph
