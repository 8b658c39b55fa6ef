#include "qgraph/form_factor.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qgraph/error.hpp"
#include "qgraph/parallel.hpp"
#include "qgraph/random.hpp"

namespace qgraph {

FormFactorCurve form_factor(const PropagationMatrix& bcal, const BondLengths& lengths, int n_max, int samples,
                            std::uint64_t seed, const FormFactorOptions& options) {
  require(samples >= 1, "need at least one sample");
  require(n_max >= 1, "n_max must be positive");
  const int dim = bcal.dimension();
  require(dim >= 1 && bcal.matrix.cols() == dim, "propagation matrix must be square");

  const auto nnz = bcal.sparse().nonZeros();
  const double product_cost = static_cast<double>(n_max) * dim * static_cast<double>(nnz);
  // Weight from the benchmarks: a sparse product step costs about five
  // times a Schur flop per counted operation.
  const double schur_cost = 5.0 * dim * static_cast<double>(dim) * dim;
  const bool use_eigen = options.method == TraceMethod::eigenphases ||
                         (options.method == TraceMethod::automatic && schur_cost < product_cost);

  // powers(s, n - 1) = |Tr U_s^n|^2
  Eigen::MatrixXd powers(samples, n_max);
  std::vector<std::string> failures(static_cast<std::size_t>(samples));
  parallel_for(static_cast<std::size_t>(samples), options.threads, [&](std::size_t s) {
    const MagneticPhases phases = sample_phases(dim, derive_seed(seed, s));
    const QuantumMap map = quantum_map(bcal, lengths, phases, 0.0);
    const auto row = static_cast<Eigen::Index>(s);
    if (use_eigen) {
      Eigen::ComplexEigenSolver<ComplexMatrix> es(map.matrix, false);
      if (es.info() != Eigen::Success) {
        failures[s] = "eigenphase solve failed for sample " + std::to_string(s);
        return;
      }
      const Eigen::VectorXcd lambda = es.eigenvalues();
      Eigen::VectorXcd z = lambda;
      for (int n = 1; n <= n_max; ++n) {
        if (n > 1) z = z.cwiseProduct(lambda);
        powers(row, n - 1) = std::norm(z.sum());
      }
      return;
    }
    const Eigen::SparseMatrix<Complex> u = map.matrix.sparseView(1.0, 0.0);
    ComplexMatrix p = map.matrix;
    ComplexMatrix next(dim, dim);
    for (int n = 1; n <= n_max; ++n) {
      if (n > 1) {
        next.noalias() = p * u;
        p.swap(next);
      }
      powers(row, n - 1) = std::norm(p.trace());
    }
  });
  for (const auto& f : failures)
    if (!f.empty()) fail(Errc::convergence_failure, f);

  FormFactorCurve curve;
  curve.samples = samples;
  curve.dimension = dim;
  curve.seed = seed;
  curve.descriptor = options.descriptor;
  for (int n = 1; n <= n_max; ++n) {
    double sum = 0.0;
    for (int s = 0; s < samples; ++s) sum += powers(s, n - 1);
    const double mean = sum / samples;
    double var = 0.0;
    for (int s = 0; s < samples; ++s) var += (powers(s, n - 1) - mean) * (powers(s, n - 1) - mean);
    const double se = samples > 1 ? std::sqrt(var / (samples - 1) / samples) : 0.0;
    curve.n.push_back(n);
    curve.k.push_back(mean / dim);
    curve.standard_error.push_back(se / dim);
  }
  return curve;
}

double cue_reference(int n, int dimension) {
  require(n >= 1 && dimension >= 1, "n and dimension must be positive");
  return static_cast<double>(std::min(n, dimension)) / dimension;
}

std::vector<double> cue_reference_curve(const FormFactorCurve& curve) {
  std::vector<double> out;
  out.reserve(curve.n.size());
  for (int n : curve.n) out.push_back(cue_reference(n, curve.dimension));
  return out;
}

double deviation(const FormFactorCurve& curve, const std::vector<double>& reference, int n_lo, int n_hi) {
  require(reference.size() == curve.k.size(), "reference must share the n grid");
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < curve.n.size(); ++i) {
    if (curve.n[i] < n_lo || curve.n[i] > n_hi) continue;
    sum += std::abs(curve.k[i] - reference[i]);
    ++count;
  }
  require(count > 0, "deviation window is empty");
  return sum / count;
}

double analytic_first_value(const PropagationMatrix& bcal) {
  return bcal.matrix.diagonal().cwiseAbs2().sum() / bcal.dimension();
}

}  // namespace qgraph
