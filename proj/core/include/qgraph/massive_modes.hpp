#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qgraph/perron_frobenius.hpp"
#include "qgraph/scattering.hpp"

namespace qgraph {

/// Exact value of a massive-mode quantity next to its order-of-magnitude
/// estimate. `details` keeps extra named numbers in insertion order.
struct EstimateReport {
  std::string quantity;
  std::string provenance;
  int bond_count = 0;
  int directed_count = 0;
  double gap = 0.0;
  double exact = 0.0;
  double estimate = 0.0;
  double ratio = 0.0;
  std::vector<std::pair<std::string, double>> details;
  std::vector<double> samples;

  double detail(const std::string& key) const;
};

struct ScalingSeries {
  std::vector<double> x;
  std::vector<double> y;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of the log-log fit
  int points_used = 0;
};

/// Least-squares fit of log|y| against log x. Needs at least 4 sizes in the
/// fit; with drop_smallest the point with the smallest x is excluded.
ScalingSeries fit_loglog(std::vector<double> x, std::vector<double> y, bool drop_smallest = true);

/// (1/2B) Tr W, cross-checked against the spectrum (spectral_inconsistency
/// on mismatch beyond 1e-8). Estimate is the bound 1/a.
EstimateReport diag_w_average(const WMatrix& w, const GapReport& spectrum);

/// Mean, rms and max |.| of the off-diagonal entries. Estimate 1/(2B a).
EstimateReport offdiag_w_stats(const WMatrix& w, double gap);

/// Products W(m1,m2) W(m2,m3) ... over sampled index tuples against
/// (delta(m1, m_{n+1}) - 1/2B) / (a^n (2B)^{n-1}). The headline ratio is the
/// median |exact/estimate| over the samples.
EstimateReport chain_product_check(const PFResolvent& res, int n, int samples, std::uint64_t seed);

struct HistogramBin {
  double low = 0.0;
  double high = 0.0;
  int count = 0;
};

struct MagnitudeStats {
  EstimateReport report;
  std::vector<HistogramBin> histogram;  // of (2B)|B|^2 over nonzero entries
};

/// Row sums of |B|^2, histogram of (2B)|B|^2 and a flatness measure: the
/// mean row participation ratio divided by 2B (1 when every entry has
/// modulus 1/sqrt(2B)).
MagnitudeStats b_magnitude_stats(const PropagationMatrix& bcal, int bins = 20);

struct SourceTerm {
  double value = 0.0;          // (1/B^2) Tr(W^2)
  double value_entrywise = 0.0;  // (1/B^2) sum W(mu,nu) W(nu,mu)
  double bound = 0.0;          // 2B / (B^2 a^2)
  bool within_bound = false;
};

/// Throws internal_consistency when the two evaluations differ by > 1e-8.
SourceTerm source_term_value(const WMatrix& w, int bond_count, double gap);

enum class HigherOrderCase { m1n2, m2n22 };

/// Exact values of the listed sums, each with the 1/B^2 prefactor. The
/// single-trace case returns two values, the two-trace case six, in the
/// published order. `w` holds at least W^(1..3).
std::vector<double> higher_order_values(const std::vector<WMatrix>& w, int bond_count, HigherOrderCase which);

/// In the two-trace case: min over terms 1,3,5,6 of |value| divided by max
/// over terms 2,4 (> 1 means the expected terms dominate).
double dominance_margin(const std::vector<double>& m2n22_values);

/// Largest singular value of W by power iteration on W^T W.
double operator_norm(const RealMatrix& w, int iterations = 500);

}  // namespace qgraph
