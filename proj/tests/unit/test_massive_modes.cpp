#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "qgraph/error.hpp"
#include "qgraph/massive_modes.hpp"
#include "qgraph/random.hpp"

#include <Eigen/SVD>
#include <numeric>

using namespace qgraph;

namespace {

struct Example {
  PFOperator f;
  GapReport spectrum;
  std::vector<WMatrix> w;
};

// F = [[1/2, 1/2], [1/2, 1/2]]: W^(n) = [[1/2, -1/2], [-1/2, 1/2]] for all n.
Example rank_one() {
  Example e;
  e.f.matrix.resize(2, 2);
  e.f.matrix << 0.5, 0.5, 0.5, 0.5;
  e.spectrum = spectral_gap(e.f, GapMethod::dense);
  e.w = PFResolvent(e.f, e.spectrum.gap).w_matrices(3);
  return e;
}

Example complete(int v) {
  Example e;
  e.f = build_pf(build_propagation(build_complete_graph(v), VertexKind::dft));
  e.spectrum = spectral_gap(e.f, GapMethod::dense);
  e.w = PFResolvent(e.f, e.spectrum.gap).w_matrices(3);
  return e;
}

}  // namespace

TEST(DiagAverage, RankOneExample) {
  const Example e = rank_one();
  const EstimateReport r = diag_w_average(e.w[0], e.spectrum);
  EXPECT_NEAR(r.exact, 0.5, 1e-14);
  EXPECT_NEAR(r.estimate, 1.0, 1e-14);
}

TEST(DiagAverage, SpectralMismatchDetected) {
  Example e = complete(5);
  WMatrix w = e.w[0];
  w.matrix(0, 0) += 1e-3;
  try {
    diag_w_average(w, e.spectrum);
    FAIL() << "expected spectral inconsistency";
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::spectral_inconsistency);
  }
}

TEST(DiagAverage, SixteenVerticesWithinBoundAndReal) {
  const Example e = complete(16);
  const EstimateReport r = diag_w_average(e.w[0], e.spectrum);
  EXPECT_GT(r.exact, 0.0);
  EXPECT_LE(r.exact, 1.0 / e.spectrum.gap);
  EXPECT_NEAR(r.detail("spectral_imag"), 0.0, 1e-9);
}

TEST(OffDiagStats, RankOneExample) {
  const Example e = rank_one();
  const EstimateReport r = offdiag_w_stats(e.w[0], e.spectrum.gap);
  EXPECT_NEAR(r.detail("mean"), -0.5, 1e-14);
  EXPECT_NEAR(r.detail("max_row_sum"), 0.0, 1e-14);
}

TEST(OffDiagStats, MeanIdentityAndOrderOfMagnitude) {
  const Example e = complete(16);
  const EstimateReport r = offdiag_w_stats(e.w[0], e.spectrum.gap);
  EXPECT_LT(r.detail("mean_identity_error"), 1e-10);
  EXPECT_LT(r.detail("max_row_sum"), 1e-10);
  EXPECT_GT(r.ratio, 0.1);
  EXPECT_LT(r.ratio, 10.0);
}

TEST(ChainProduct, ClosedTwoChainOnRankOneExample) {
  const Example e = rank_one();
  EXPECT_NEAR(e.w[0].matrix(0, 1) * e.w[0].matrix(1, 0), 0.25, 1e-15);
}

TEST(ChainProduct, InteriorSumIsMatrixProduct) {
  const Example e = complete(6);
  const RealMatrix& w = e.w[0].matrix;
  const int n = static_cast<int>(w.rows());
  for (int a = 0; a < n; a += 3)
    for (int c = 0; c < n; c += 5) {
      double s = 0.0;
      for (int b = 0; b < n; ++b) s += w(a, b) * w(b, c);
      EXPECT_NEAR(s, e.w[1].matrix(a, c), 1e-9);
    }
}

TEST(ChainProduct, SixteenVerticesMedianWithinFactorTen) {
  const Example e = complete(16);
  const PFResolvent res(e.f, e.spectrum.gap);
  const EstimateReport r = chain_product_check(res, 3, 2000, 17);
  EXPECT_GT(r.ratio, 0.1);
  EXPECT_LT(r.ratio, 10.0);
  EXPECT_EQ(r.samples.size(), 2000u);
}

TEST(ChainProduct, RejectsShortChains) {
  const Example e = complete(4);
  EXPECT_THROW(chain_product_check(PFResolvent(e.f, e.spectrum.gap), 1, 10, 1), Error);
}

TEST(BMagnitudes, TriangleFlagsSparseGraph) {
  const MagnitudeStats s = b_magnitude_stats(build_propagation(build_complete_graph(3), VertexKind::dft));
  EXPECT_LT(s.report.detail("max_row_sum_defect"), 1e-12);
  // Nonzero |B| = 1/sqrt(2), not 1/sqrt(6).
  EXPECT_NEAR(s.report.detail("max_abs2"), 0.5, 1e-12);
  EXPECT_LT(s.report.detail("flatness"), 1.0);
}

TEST(BMagnitudes, EntriesTrackConnectivity) {
  double previous_entry = 1.0;
  for (int v : {4, 8, 16}) {
    const MagnitudeStats s = b_magnitude_stats(build_propagation(build_complete_graph(v), VertexKind::dft));
    EXPECT_NEAR(s.report.detail("max_abs2"), 1.0 / (v - 1), 1e-12);
    EXPECT_LT(s.report.detail("max_abs2"), previous_entry);
    previous_entry = s.report.detail("max_abs2");
    int total = 0;
    for (const auto& b : s.histogram) total += b.count;
    EXPECT_EQ(total, 2 * v * (v - 1) / 2 * (v - 1));
  }
}

TEST(SourceTerm, RankOneExample) {
  const Example e = rank_one();
  const SourceTerm t = source_term_value(e.w[0], 1, e.spectrum.gap);
  EXPECT_NEAR(t.value, 1.0, 1e-14);
  EXPECT_NEAR(t.value_entrywise, 1.0, 1e-14);
}

TEST(SourceTerm, SpectralCrossCheckAndBound) {
  for (int v : {5, 8}) {
    const Example e = complete(v);
    const int bonds = v * (v - 1) / 2;
    const SourceTerm t = source_term_value(e.w[0], bonds, e.spectrum.gap);
    EXPECT_NEAR(t.value * bonds * bonds, qgraph::testing::spectral_trace_oracle(e.f.matrix, 2).real(), 1e-8);
    EXPECT_TRUE(t.within_bound);
  }
}

TEST(HigherOrder, RankOneExample) {
  const Example e = rank_one();
  const auto v = higher_order_values(e.w, 1, HigherOrderCase::m1n2);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(v[0], 0.5, 1e-14);
  EXPECT_EQ(higher_order_values(e.w, 1, HigherOrderCase::m2n22).size(), 6u);
}

TEST(HigherOrder, DominanceMarginDefinition) {
  EXPECT_NEAR(dominance_margin({3, 1, 4, 2, 5, 6}), 1.5, 1e-15);
  EXPECT_LT(dominance_margin({1, 3, 4, 2, 5, 6}), 1.0);
}

TEST(OperatorNorm, BoundsRowSquares) {
  const Example e = complete(8);
  const double norm = operator_norm(e.w[0].matrix);
  Eigen::JacobiSVD<RealMatrix> svd(e.w[0].matrix);
  EXPECT_NEAR(norm, svd.singularValues()(0), 1e-8);
  const RealMatrix& w = e.w[0].matrix;
  for (int mu = 0; mu < w.rows(); ++mu) EXPECT_LE(std::abs(w.row(mu).dot(w.col(mu))), norm * norm * (1 + 1e-12));
}

TEST(LogLogFit, RecoversPowerLaw) {
  std::vector<double> x{10, 20, 40, 80, 160}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -1.25));
  const ScalingSeries s = fit_loglog(x, y);
  EXPECT_NEAR(s.slope, -1.25, 1e-12);
  EXPECT_EQ(s.points_used, 4);
  EXPECT_THROW(fit_loglog({1, 2, 3, 4}, {1, 2, 3, 4}), Error);
}

// Property: exact values are invariant under relabeling of directed bonds.
TEST(MassiveModesProperty, PermutationInvariance) {
  const Example e = complete(6);
  const int n = e.f.dimension();
  Rng rng(mix_seed(99));
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[uniform_index(rng, i + 1)]);
    Eigen::PermutationMatrix<Eigen::Dynamic> p(n);
    for (int i = 0; i < n; ++i) p.indices()(i) = perm[i];
    PFOperator g{p * e.f.matrix * p.transpose()};
    const GapReport spec = spectral_gap(g, GapMethod::dense);
    const auto w = PFResolvent(g, spec.gap).w_matrices(3);
    EXPECT_NEAR(diag_w_average(w[0], spec).exact, diag_w_average(e.w[0], e.spectrum).exact, 1e-12);
    EXPECT_NEAR(offdiag_w_stats(w[0], spec.gap).exact, offdiag_w_stats(e.w[0], e.spectrum.gap).exact, 1e-12);
    const auto a = higher_order_values(w, 15, HigherOrderCase::m2n22);
    const auto b = higher_order_values(e.w, 15, HigherOrderCase::m2n22);
    for (int k = 0; k < 6; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
}
