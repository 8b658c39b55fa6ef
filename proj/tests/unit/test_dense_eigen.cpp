#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "oracles.hpp"
#include "qgraph/dense_eigen.hpp"
#include "qgraph/error.hpp"
#include "qgraph/perron_frobenius.hpp"
#include "qgraph/scattering.hpp"

using namespace qgraph;
using C = std::complex<double>;

namespace {

// Greedy matching distance between two spectra.
double spectrum_distance(std::vector<C> a, std::vector<C> b) {
  EXPECT_EQ(a.size(), b.size());
  double worst = 0.0;
  for (C x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](C p, C q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

Eigen::MatrixXd random_matrix(int n, std::uint64_t seed) {
  Rng rng(mix_seed(seed));
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = qgraph::testing::gaussian(rng);
  return m;
}

}  // namespace

TEST(DenseEigen, Permutation) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 1, 0;
  EXPECT_LT(spectrum_distance(real_eigenvalues(m), {1.0, -1.0}), 1e-14);
}

TEST(DenseEigen, RotationGivesConjugatePair) {
  Eigen::MatrixXd m(2, 2);
  m << 0, -1, 1, 0;
  EXPECT_LT(spectrum_distance(real_eigenvalues(m), {C(0, 1), C(0, -1)}), 1e-14);
}

TEST(DenseEigen, UpperTriangularReadsDiagonal) {
  Eigen::MatrixXd m(3, 3);
  m << 3, 1, 4, 0, -2, 5, 0, 0, 0.5;
  EXPECT_LT(spectrum_distance(real_eigenvalues(m), {3.0, -2.0, 0.5}), 1e-13);
}

TEST(DenseEigen, HessenbergFormHasZerosBelowSubdiagonal) {
  Eigen::MatrixXd m = random_matrix(9, 4);
  const Eigen::MatrixXd original = m;
  reduce_to_hessenberg(m);
  for (int i = 2; i < 9; ++i)
    for (int j = 0; j < i - 1; ++j) EXPECT_NEAR(m(i, j), 0.0, 1e-13);
  EXPECT_NEAR(m.trace(), original.trace(), 1e-12);
}

TEST(DenseEigen, BalancingPreservesSpectrum) {
  Eigen::MatrixXd m = random_matrix(7, 5);
  m.row(2) *= 1e6;
  m.col(4) *= 1e-5;
  Eigen::MatrixXd b = m;
  balance_matrix(b);
  EXPECT_LT(spectrum_distance(real_eigenvalues(b, {false, 60}), qgraph::testing::eigenvalues_oracle(m)), 1e-6);
}

TEST(DenseEigen, BudgetExhaustionIsConvergenceFailure) {
  try {
    real_eigenvalues(random_matrix(12, 6), {true, 0});
    FAIL() << "expected convergence failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::convergence_failure);
  }
}

// Property: random dense matrices of assorted sizes against Eigen's solver.
TEST(DenseEigenProperty, MatchesEigenOnRandomMatrices) {
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 17;
    const Eigen::MatrixXd m = random_matrix(n, 100 + trial);
    const double scale = std::max(1.0, m.norm());
    EXPECT_LT(spectrum_distance(real_eigenvalues(m), qgraph::testing::eigenvalues_oracle(m)), 1e-10 * scale) << n;
  }
}

// Property: Perron-Frobenius operators of random graph ensembles.
TEST(DenseEigenProperty, MatchesEigenOnBistochasticOperators) {
  for (const auto& c : qgraph::testing::graph_cases(21)) {
    const PFOperator f = build_pf(build_propagation(c.graph, VertexKind::dft));
    const auto ev = real_eigenvalues(f.matrix);
    // Graph operators carry defective eigenvalues (nilpotent blocks at zero,
    // repeated subleading pairs) whose perturbation is O(sqrt(eps)) in any
    // solver, so the pointwise comparison uses that scale. The trace is well
    // conditioned and is held to rounding.
    EXPECT_LT(spectrum_distance(ev, qgraph::testing::eigenvalues_oracle(f.matrix)), 1e-6) << c.label;
    Complex sum = 0.0;
    for (auto l : ev) sum += l;
    EXPECT_NEAR(sum.real(), f.matrix.trace(), 1e-11) << c.label;
    EXPECT_NEAR(sum.imag(), 0.0, 1e-11) << c.label;
  }
}
