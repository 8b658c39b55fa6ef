#include "qgraph/perron_frobenius.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qgraph/dense_eigen.hpp"
#include "qgraph/random.hpp"

namespace qgraph {

std::string_view to_string(GapMethod method) noexcept {
  switch (method) {
    case GapMethod::dense:
      return "dense";
    case GapMethod::deflated_power:
      return "deflated-power";
  }
  return "unknown";
}

Eigen::SparseMatrix<double, Eigen::RowMajor> PFOperator::sparse() const { return matrix.sparseView(0.0, 0.0); }

double bistochastic_defect(const RealMatrix& f) {
  const double rows = (f.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (f.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

PFOperator build_pf(const PropagationMatrix& bcal) {
  require(bcal.dimension() > 0, "empty propagation matrix");
  require(unitarity_defect(bcal.matrix) < kUnitarityTolerance, "propagation matrix is not unitary");
  PFOperator f{bcal.matrix.cwiseAbs2()};
  const double defect = bistochastic_defect(f.matrix);
  if (defect >= kBistochasticTolerance) {
    std::ostringstream msg;
    msg << "Perron-Frobenius operator not bistochastic (defect " << defect << ")";
    fail(Errc::internal_consistency, msg.str());
  }
  return f;
}

namespace {

double perron_residual(const PFOperator& f) {
  const int n = f.dimension();
  const RealVector u = RealVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  return (f.matrix * u - u).norm();
}

GapReport dense_gap(const PFOperator& f) {
  GapReport report;
  report.method = GapMethod::dense;
  report.perron_residual = perron_residual(f);
  report.eigenvalues = real_eigenvalues(f.matrix);
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), [](Complex a, Complex b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  const auto it = std::min_element(report.eigenvalues.begin(), report.eigenvalues.end(),
                                   [](Complex a, Complex b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
  report.lambda1 = *it;
  report.lambda_sub = 0.0;
  for (auto jt = report.eigenvalues.begin(); jt != report.eigenvalues.end(); ++jt)
    if (jt != it) report.lambda_sub = std::max(report.lambda_sub, std::abs(*jt));
  report.gap = std::clamp(1.0 - report.lambda_sub, 0.0, 1.0);
  return report;
}

// Power iteration on F restricted to the complement of the uniform vector.
// Tracks three consecutive iterates y0, y1 = F y0, y2 = F y1 and fits either
// one real root (y1 = l y0) or a pair of roots (y2 + c1 y1 + c0 y0 = 0),
// which covers complex-conjugate and +/- pairs of equal modulus.
GapReport power_gap(const PFOperator& f, const PowerIterationOptions& options) {
  const int n = f.dimension();
  GapReport report;
  report.method = GapMethod::deflated_power;
  report.perron_residual = perron_residual(f);
  report.lambda1 = 1.0;
  const auto sparse = f.sparse();

  auto deflate = [](RealVector& x) { x.array() -= x.mean(); };

  Rng rng(mix_seed(options.seed));
  RealVector y0(n);
  for (int i = 0; i < n; ++i) y0(i) = uniform01(rng) - 0.5;
  deflate(y0);
  y0.normalize();
  RealVector y1 = sparse * y0;
  deflate(y1);
  RealVector y2 = sparse * y1;
  deflate(y2);

  double estimate = 0.0;
  double previous = -1.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    report.iterations = it;
    const double n1 = y1.norm();
    if (n1 == 0.0) {
      // Every remaining component was annihilated: only zero eigenvalues.
      estimate = 0.0;
      previous = 0.0;
      break;
    }
    const double lambda = y0.dot(y1) / y0.dot(y0);
    const double res1 = (y1 - lambda * y0).norm() / n1;
    bool converged = false;
    if (res1 < options.tolerance) {
      estimate = std::abs(lambda);
      converged = true;
    } else {
      const double g11 = y1.dot(y1), g10 = y1.dot(y0), g00 = y0.dot(y0);
      const double det = g11 * g00 - g10 * g10;
      const double n2 = y2.norm();
      if (det > 1e-14 * g11 * g00 && n2 > 0.0) {
        const double b1 = -y1.dot(y2), b0 = -y0.dot(y2);
        const double c1 = (b1 * g00 - g10 * b0) / det;
        const double c0 = (g11 * b0 - g10 * b1) / det;
        const double res2 = (y2 + c1 * y1 + c0 * y0).norm() / n2;
        // Root moduli from the stable combinations: sqrt(c0) for a complex
        // pair, |c1|/2 for a (possibly defective) double root, where the
        // square root of the discriminant would amplify rounding to sqrt(eps).
        const double disc = c1 * c1 - 4.0 * c0;
        if (disc < -1e-10 * c1 * c1)
          estimate = std::sqrt(std::abs(c0));
        else if (disc <= 1e-10 * c1 * c1)
          estimate = std::abs(c1) / 2.0;
        else
          estimate = (std::abs(c1) + std::sqrt(disc)) / 2.0;
        converged = res2 < options.tolerance;
      } else {
        estimate = std::abs(lambda);
      }
    }
    if (converged && std::abs(estimate - previous) < options.tolerance) break;
    previous = converged ? estimate : -1.0;
    if (it == options.max_iterations) {
      report.lambda_sub = estimate;
      report.gap = std::clamp(1.0 - estimate, 0.0, 1.0);
      throw ConvergenceFailure("deflated power iteration did not converge", report);
    }
    y0 = y1 / n1;
    y1 = y2 / n1;
    y2 = sparse * y1;
    deflate(y2);
  }
  report.lambda_sub = estimate;
  report.gap = std::clamp(1.0 - estimate, 0.0, 1.0);
  return report;
}

}  // namespace

GapReport spectral_gap(const PFOperator& f, GapMethod method, const PowerIterationOptions& options) {
  require(f.dimension() >= 2, "Perron-Frobenius operator needs dimension >= 2");
  require(bistochastic_defect(f.matrix) < kBistochasticTolerance, "operator is not bistochastic");
  GapReport report = method == GapMethod::dense ? dense_gap(f) : power_gap(f, options);
  if (report.perron_residual >= kPerronTolerance || std::abs(report.lambda1 - 1.0) >= kPerronTolerance) {
    std::ostringstream msg;
    msg << "Perron pair check failed (residual " << report.perron_residual << ", lambda1 " << report.lambda1 << ")";
    fail(Errc::spectral_inconsistency, msg.str());
  }
  return report;
}

std::vector<Complex> subleading_eigenvalues(const GapReport& report) {
  require(!report.eigenvalues.empty(), "gap report carries no spectrum");
  std::vector<Complex> out = report.eigenvalues;
  const auto it = std::min_element(out.begin(), out.end(),
                                   [](Complex a, Complex b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
  out.erase(it);
  return out;
}

PFResolvent::PFResolvent(PFOperator f, double gap, double gap_floor) : f_(std::move(f)), gap_(gap) {
  require(f_.dimension() >= 2, "Perron-Frobenius operator needs dimension >= 2");
  require(gap_floor > 0.0, "gap floor must be positive");
  if (!(gap >= gap_floor)) {
    std::ostringstream msg;
    msg << "spectral gap " << gap << " below floor " << gap_floor;
    fail(Errc::ill_conditioned_resolvent, msg.str());
  }
  const int n = f_.dimension();
  const RealMatrix shifted =
      RealMatrix::Identity(n, n) - f_.matrix + RealMatrix::Constant(n, n, 1.0 / static_cast<double>(n));
  lu_.compute(shifted);
}

RealMatrix PFResolvent::projector() const {
  const int n = dimension();
  return RealMatrix::Identity(n, n) - RealMatrix::Constant(n, n, 1.0 / static_cast<double>(n));
}

std::vector<WMatrix> PFResolvent::w_matrices(int max_order) const {
  require(max_order >= 1, "W order must be >= 1");
  std::vector<WMatrix> out;
  out.reserve(max_order);
  RealMatrix x = projector();
  for (int k = 1; k <= max_order; ++k) {
    x = lu_.solve(x);
    // Left projection: subtract column means.
    RealMatrix w = x;
    w.rowwise() -= x.colwise().mean();
    out.push_back({k, std::move(w)});
  }
  return out;
}

WMatrix PFResolvent::w_matrix(int order) const { return w_matrices(order).back(); }

}  // namespace qgraph
