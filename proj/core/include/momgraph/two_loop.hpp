#pragma once

#include <vector>

#include "momgraph/spectra.hpp"

namespace momgraph {

/// Two vertices A, B joined by edges 1, 2 (A -> B) and 3 (B -> A); an
/// incoming lead 0 enters A and an outgoing lead 4 leaves B. Both vertices
/// carry (1/sqrt 2)(1 1; 1 -1), with columns (3, 0) at A and (1, 2) at B.
struct TwoLoopLengths {
  double l1 = 1.0;
  double l2 = 1.0;
  double l3 = 1.0;
};

/// Amplitudes of the scattering solution with c0 = 1.
struct TransferCoefficients {
  Complex c3;
  Complex c4;
  Complex c1;
  Complex c2;
};

/// e^{ikl3}(e^{ikl2} + e^{ikl1}) - 2.
Complex transfer_denominator(const TwoLoopLengths& l, Complex k);

/// Throws AtEmbeddedEigenvalue when |denominator| < threshold.
TransferCoefficients transfer_coefficients(const TwoLoopLengths& l, double k,
                                           double threshold = 1e-12);

/// 4i sin(k l) + e^{ikl}(e^{ik delta} - 1): the denominator for l1 = l3 = l,
/// l2 = l + delta, up to the factor e^{ikl}.
Complex resonance_function(double ell, double delta, Complex k);

struct ResonanceResult {
  std::vector<Complex> roots;
  std::vector<int> seed_indices;
  double parameter = 0.0;
};

/// Roots continued in delta from k = pi n / l at delta = 0, n in [n_lo, n_hi].
/// Throws ContinuationDiverged when Newton fails at the smallest step.
ResonanceResult resonances(double ell, double delta, int n_lo, int n_hi);

/// Root of the branch seeded at pi n / l followed to delta in at least
/// `steps` predictor-corrector steps.
Complex continue_resonance(double ell, double delta, int n, int steps = 32);

enum class TwoLoopBranch { Symmetric, Antisymmetric };

/// Eigenfunction of the compact variant; amplitudes indexed by edge id with
/// edge 0 of length l4 running B -> A. Normalized in L2.
struct CompactMode {
  double k;
  TwoLoopBranch branch;
  ComplexVector amplitudes;
};

struct CompactTwoLoopSpectrum {
  SpectrumResult spectrum;
  std::vector<CompactMode> modes;  // ascending k, symmetric first on ties
};

/// Symmetric modes k = 2 pi n/(l1 + l3) vanish on edge 0, antisymmetric ones
/// k = 2 pi n/(l1 + l4) vanish on edge 3. Assumes l1 = l2.
CompactTwoLoopSpectrum compact_two_loop_spectrum(double l1, double l3, double l4, double lambda);

}  // namespace momgraph
