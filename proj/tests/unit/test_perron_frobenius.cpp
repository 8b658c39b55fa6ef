#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "qgraph/error.hpp"
#include "qgraph/perron_frobenius.hpp"

using namespace qgraph;

namespace {

PFOperator two_by_two(double a, double b) {
  PFOperator f;
  f.matrix.resize(2, 2);
  f.matrix << a, b, b, a;
  return f;
}

PFOperator complete_dft(int v) { return build_pf(build_propagation(build_complete_graph(v), VertexKind::dft)); }

}  // namespace

TEST(BuildPf, TriangleEntriesAreOneHalf) {
  const PFOperator f = complete_dft(3);
  for (int i = 0; i < f.dimension(); ++i)
    for (int j = 0; j < f.dimension(); ++j)
      if (f.matrix(i, j) != 0.0) {
        EXPECT_NEAR(f.matrix(i, j), 0.5, 1e-15);
      }
}

TEST(BuildPf, NeumannEntries) {
  const Graph g = build_complete_graph(5);  // degree 4
  const DirectedBondSpace space(g);
  const PFOperator f = build_pf(build_propagation(g, VertexKind::neumann));
  for (int mu = 0; mu < f.dimension(); ++mu)
    for (int nu = 0; nu < f.dimension(); ++nu) {
      if (space.terminus(nu) != space.origin(mu)) continue;
      const double expected = nu == DirectedBondSpace::flip(mu) ? std::pow(1.0 - 2.0 / 4, 2) : std::pow(2.0 / 4, 2);
      EXPECT_NEAR(f.matrix(mu, nu), expected, 1e-15);
    }
}

TEST(BuildPf, SingleBondIsSwap) {
  const PFOperator f = complete_dft(2);
  // Either the swap or the identity; with the flip convention it is the swap.
  EXPECT_NEAR(f.matrix(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(f.matrix(1, 0), 1.0, 1e-15);
}

TEST(BuildPf, NonUnitaryInputRejected) {
  PropagationMatrix b{ComplexMatrix::Identity(4, 4) * 1.1};
  EXPECT_THROW(build_pf(b), Error);
}

TEST(SpectralGap, PermutationHasZeroGap) {
  const GapReport r = spectral_gap(two_by_two(0, 1), GapMethod::dense);
  EXPECT_NEAR(r.gap, 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r.lambda1 - 1.0), 0.0, 1e-14);
}

TEST(SpectralGap, RankOneHasFullGap) {
  for (GapMethod m : {GapMethod::dense, GapMethod::deflated_power}) {
    const GapReport r = spectral_gap(two_by_two(0.5, 0.5), m);
    EXPECT_NEAR(r.gap, 1.0, 1e-12) << to_string(m);
  }
}

TEST(SpectralGap, CompleteGraphsFollowClosedForm) {
  // K_V with DFT vertices: oracle spectrum gives a = 1 - 1/(V - 1).
  for (int v : {4, 5, 8}) {
    const PFOperator f = complete_dft(v);
    const GapReport r = spectral_gap(f, GapMethod::dense);
    EXPECT_NEAR(r.gap, qgraph::testing::gap_oracle(f.matrix), 1e-10);
    EXPECT_NEAR(r.gap, 1.0 - 1.0 / (v - 1), 1e-10);
    EXPECT_LT(r.perron_residual, 1e-10);
  }
}

TEST(SpectralGap, FrozenThresholdAtEightVertices) {
  const GapReport r = spectral_gap(complete_dft(8), GapMethod::dense);
  EXPECT_NEAR(r.gap, 0.857142857142857, 1e-12);
}

TEST(SpectralGap, PowerIterationBudgetReportsPartial) {
  PowerIterationOptions opts;
  opts.max_iterations = 2;
  opts.tolerance = 1e-300;
  try {
    spectral_gap(build_pf(build_propagation(build_random_regular(20, 3, 4), VertexKind::dft)), GapMethod::deflated_power,
                 opts);
    FAIL() << "expected convergence failure";
  } catch (const ConvergenceFailure& e) {
    EXPECT_EQ(e.code(), Errc::convergence_failure);
    EXPECT_GT(e.partial().iterations, 0);
  }
}

// Property: dense and deflated-power subleading moduli agree, spectrum is
// closed under conjugation, Perron pair holds.
TEST(SpectralGapProperty, MethodsAgreeOnRandomEnsembles) {
  for (const auto& c : qgraph::testing::graph_cases(31)) {
    for (VertexKind kind : {VertexKind::dft, VertexKind::neumann}) {
      const PFOperator f = build_pf(build_propagation(c.graph, kind));
      if (f.dimension() < 3) continue;
      EXPECT_LT(bistochastic_defect(f.matrix), 1e-12);
      const GapReport dense = spectral_gap(f, GapMethod::dense);
      EXPECT_NEAR(dense.gap, qgraph::testing::gap_oracle(f.matrix), 1e-9) << c.label;
      EXPECT_LT(dense.perron_residual, 1e-10);
      for (auto l : dense.eigenvalues) {
        double best = 1e9;
        for (auto m : dense.eigenvalues) best = std::min(best, std::abs(m - std::conj(l)));
        EXPECT_LT(best, 1e-9);
      }
      if (dense.gap < 1e-6) continue;  // bipartite or degenerate members
      // The iteration resolves one real root or one pair. With three or more
      // distinct eigenvalues on the subleading circle (Neumann vertices on
      // cubic graphs put them all at modulus 1/sqrt(3)) it must report
      // convergence failure rather than a wrong gap.
      std::vector<Complex> circle;
      for (auto l : subleading_eigenvalues(dense))
        if (std::abs(std::abs(l) - dense.lambda_sub) < 1e-6) {
          bool seen = false;
          for (auto m : circle) seen = seen || std::abs(m - l) < 1e-6;
          if (!seen) circle.push_back(l);
        }
      try {
        const GapReport power = spectral_gap(f, GapMethod::deflated_power);
        EXPECT_NEAR(power.lambda_sub, dense.lambda_sub, 1e-6) << c.label << " " << static_cast<int>(kind);
      } catch (const ConvergenceFailure& e) {
        EXPECT_GE(circle.size(), 3u) << c.label << ": " << e.what();
      }
    }
  }
}

TEST(Resolvent, RankOneExample) {
  const PFResolvent res(two_by_two(0.5, 0.5), 1.0);
  const auto w = res.w_matrices(4);
  Eigen::MatrixXd expected(2, 2);
  expected << 0.5, -0.5, -0.5, 0.5;
  for (const auto& wn : w) EXPECT_LT((wn.matrix - expected).cwiseAbs().maxCoeff(), 1e-14) << wn.order;
}

TEST(Resolvent, SmallGapIsIllConditioned) {
  try {
    PFResolvent res(two_by_two(0, 1), 0.0);
    FAIL() << "expected ill-conditioned resolvent";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ill_conditioned_resolvent);
  }
}

TEST(Resolvent, ProjectorIdempotentAndAnnihilatesUniform) {
  const PFResolvent res(complete_dft(5), 0.75);
  const RealMatrix p = res.projector();
  EXPECT_LT((p * p - p).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((p * RealVector::Ones(p.rows())).cwiseAbs().maxCoeff(), 1e-12);
}

// Property: W against the pseudo-inverse oracle, row/column sums, resolvent
// identity, spectral traces.
TEST(ResolventProperty, MatchesOraclesOnRandomEnsembles) {
  for (const auto& c : qgraph::testing::graph_cases(41)) {
    const PFOperator f = build_pf(build_propagation(c.graph, VertexKind::dft));
    const double gap = qgraph::testing::gap_oracle(f.matrix);
    if (gap < 1e-3 || f.dimension() < 3) continue;
    const PFResolvent res(f, gap);
    const auto w = res.w_matrices(3);
    const int n = f.dimension();
    EXPECT_LT((w[0].matrix - qgraph::testing::w_oracle(f.matrix)).cwiseAbs().maxCoeff(), 1e-9) << c.label;
    EXPECT_LT(w[0].matrix.rowwise().sum().cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(w[0].matrix.colwise().sum().cwiseAbs().maxCoeff(), 1e-9);
    const RealMatrix one_minus_f = RealMatrix::Identity(n, n) - f.matrix;
    EXPECT_LT((one_minus_f * w[0].matrix - res.projector()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((w[0].matrix * w[1].matrix - w[2].matrix).cwiseAbs().maxCoeff(), 1e-8);
    const auto s1 = qgraph::testing::spectral_trace_oracle(f.matrix, 1);
    const auto s2 = qgraph::testing::spectral_trace_oracle(f.matrix, 2);
    EXPECT_NEAR(w[0].matrix.trace(), s1.real(), 1e-8) << c.label;
    EXPECT_NEAR(s1.imag(), 0.0, 1e-9);
    EXPECT_NEAR(w[1].matrix.trace(), s2.real(), 1e-8) << c.label;
  }
}
