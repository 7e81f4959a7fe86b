#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/SVD>

#include "momgraph/spectra.hpp"

namespace momgraph {

namespace {

using Index = Eigen::Index;

// [A_ff(k) - I; B(k)]: finite-edge unknowns c, rows for the starts of finite
// edges and then for outgoing leads, with incoming-lead amplitudes fixed to 0.
struct LeadConstrained {
  std::vector<EdgeId> finite;
  std::vector<EdgeId> out_leads;
  std::vector<double> lengths;
  ComplexMatrix u;  // (finite + out_leads) x finite

  explicit LeadConstrained(const MomentumOperator& op) {
    const auto& g = op.graph();
    for (const auto& e : g.finite_edges()) finite.push_back(e.id);
    std::sort(finite.begin(), finite.end());
    for (const auto& l : g.leads()) {
      if (l.direction == LeadDirection::Outgoing) out_leads.push_back(l.id);
    }
    std::sort(out_leads.begin(), out_leads.end());
    const auto nf = static_cast<Index>(finite.size());
    const auto no = static_cast<Index>(out_leads.size());
    u = ComplexMatrix::Zero(nf + no, nf);
    for (Index m = 0; m < nf; ++m) {
      const auto from = finite[static_cast<std::size_t>(m)];
      for (Index j = 0; j < nf; ++j) u(j, m) = op.transition(from, finite[static_cast<std::size_t>(j)]);
      for (Index j = 0; j < no; ++j) u(nf + j, m) = op.transition(from, out_leads[static_cast<std::size_t>(j)]);
    }
    for (const auto e : finite) lengths.push_back(g.finite_edge(e).length);
  }

  ComplexMatrix system(double k) const {
    ComplexMatrix m = u;
    for (Index c = 0; c < m.cols(); ++c) {
      m.col(c) *= std::exp(Complex(0.0, k * lengths[static_cast<std::size_t>(c)]));
    }
    for (Index i = 0; i < m.cols(); ++i) m(i, i) -= 1.0;
    return m;
  }

  double defect(double k) const {
    if (finite.empty()) return 1.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(system(k));
    return svd.singularValues().minCoeff();
  }
};

// Golden-section minimisation of a unimodal function on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 4e-16 * std::max(1.0, std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace

double embedded_defect(const MomentumOperator& op, double k) {
  return LeadConstrained(op).defect(k);
}

BoundaryVector eigenfunction_boundary(const MomentumOperator& op,
                                      const EigenfunctionCoefficients& c) {
  return boundary_values(op, [&](EdgeId e, double x) {
    return c.amplitudes[static_cast<Index>(index(e))] * std::exp(Complex(0.0, 1.0) * c.k * x);
  });
}

EmbeddedResult embedded_eigenvalues(const MomentumOperator& op, double lambda, double sv_tol) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
  EmbeddedResult result{{{}, {-lambda, lambda}}, {}};
  const LeadConstrained sys(op);
  if (sys.finite.empty()) return result;

  const double lmax = op.graph().max_length();
  const double max_step = std::numbers::pi / (8.0 * lmax);
  const auto cells = static_cast<std::size_t>(std::ceil(2.0 * lambda / max_step));
  const double step = 2.0 * lambda / static_cast<double>(cells);
  std::vector<double> ks(cells + 1), d(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    ks[i] = i == cells ? lambda : -lambda + static_cast<double>(i) * step;
    d[i] = sys.defect(ks[i]);
  }

  // |sigma_min'| <= l_max, so a root sits next to a sampled local minimum
  // whose value is at most l_max * step.
  const double candidate = lmax * step;
  std::vector<double> roots;
  for (std::size_t i = 0; i <= cells; ++i) {
    const bool left = i == 0 || d[i] <= d[i - 1];
    const bool right = i == cells || d[i] <= d[i + 1];
    if (!left || !right || d[i] > candidate) continue;
    const double a = i == 0 ? ks[0] : ks[i - 1];
    const double b = i == cells ? ks[cells] : ks[i + 1];
    const double k = golden_min([&](double x) { return sys.defect(x); }, a, b);
    if (!(k > -lambda && k < lambda) || sys.defect(k) > sv_tol) continue;
    if (!roots.empty() && std::abs(roots.back() - k) < 1e-9) continue;
    roots.push_back(k);
  }

  const auto nf = static_cast<Index>(sys.finite.size());
  for (const double k : roots) {
    Eigen::JacobiSVD<ComplexMatrix> svd(sys.system(k), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    std::size_t mult = 0;
    for (Index i = 0; i < sv.size(); ++i) {
      if (sv[i] > sv_tol) continue;
      ComplexVector c = svd.matrixV().col(i);
      Index big = 0;
      c.cwiseAbs().maxCoeff(&big);
      c *= std::abs(c[big]) / c[big];
      ComplexVector amps = ComplexVector::Zero(static_cast<Index>(op.graph().edge_count()));
      for (Index j = 0; j < nf; ++j) amps[static_cast<Index>(index(sys.finite[static_cast<std::size_t>(j)]))] = c[j];
      result.eigenfunctions.push_back({Complex(k, 0.0), std::move(amps)});
      ++mult;
    }
    result.spectrum.points.push_back({k, mult});
  }
  return result;
}

}  // namespace momgraph
