#include "qgraph/massive_modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qgraph/random.hpp"

namespace qgraph {

double EstimateReport::detail(const std::string& key) const {
  for (const auto& [k, v] : details)
    if (k == key) return v;
  fail(Errc::invalid_argument, "no detail named " + key);
}

ScalingSeries fit_loglog(std::vector<double> x, std::vector<double> y, bool drop_smallest) {
  require(x.size() == y.size(), "scaling series needs matching x and y");
  ScalingSeries s;
  s.x = x;
  s.y = y;
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  if (drop_smallest && !order.empty()) order.erase(order.begin());
  require(order.size() >= 4, "log-log fit needs at least 4 sizes");
  std::vector<double> lx, ly;
  for (auto i : order) {
    require(x[i] > 0.0 && y[i] != 0.0, "log-log fit needs positive x and nonzero y");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  require(sxx > 0.0, "log-log fit needs distinct sizes");
  s.slope = sxy / sxx;
  s.intercept = my - s.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (s.intercept + s.slope * lx[i]);
    rss += r * r;
  }
  s.residual = std::sqrt(rss / n);
  s.points_used = static_cast<int>(lx.size());
  return s;
}

namespace {

EstimateReport base_report(std::string quantity, int directed, double gap) {
  EstimateReport r;
  r.quantity = std::move(quantity);
  r.directed_count = directed;
  r.bond_count = directed / 2;
  r.gap = gap;
  return r;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace

EstimateReport diag_w_average(const WMatrix& w, const GapReport& spectrum) {
  const auto n = w.matrix.rows();
  require(n > 0 && w.order == 1, "diagonal average needs W of order 1");
  const auto sub = subleading_eigenvalues(spectrum);
  require(static_cast<Eigen::Index>(sub.size()) + 1 == n, "spectrum size does not match W");
  EstimateReport r = base_report("diag_w_average", static_cast<int>(n), spectrum.gap);
  r.exact = w.matrix.trace() / static_cast<double>(n);
  Complex spectral = 0.0;
  for (const auto& l : sub) spectral += 1.0 / (1.0 - l);
  spectral /= static_cast<double>(n);
  const double mismatch = std::abs(spectral - r.exact);
  if (mismatch > 1e-8 * std::max(1.0, std::abs(r.exact))) {
    std::ostringstream msg;
    msg << "Tr W / 2B = " << r.exact << " but spectral sum gives " << spectral;
    fail(Errc::spectral_inconsistency, msg.str());
  }
  r.estimate = 1.0 / spectrum.gap;
  r.ratio = r.exact * spectrum.gap;
  r.details = {{"spectral_value", spectral.real()},
               {"spectral_imag", spectral.imag()},
               {"positive", r.exact > 0.0 ? 1.0 : 0.0},
               {"within_bound", r.exact <= r.estimate ? 1.0 : 0.0}};
  return r;
}

EstimateReport offdiag_w_stats(const WMatrix& w, double gap) {
  const auto n = w.matrix.rows();
  require(n >= 2, "off-diagonal statistics need dimension >= 2");
  EstimateReport r = base_report("offdiag_w_stats", static_cast<int>(n), gap);
  double sum = 0.0, sumsq = 0.0, maxabs = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = w.matrix(i, j);
      sum += v;
      sumsq += v * v;
      maxabs = std::max(maxabs, std::abs(v));
    }
  const double count = static_cast<double>(n) * static_cast<double>(n - 1);
  const double mean = sum / count;
  const double mean_diag = w.matrix.trace() / static_cast<double>(n);
  const double identity_target = -mean_diag / static_cast<double>(n - 1);
  r.exact = std::sqrt(sumsq / count);
  r.estimate = 1.0 / (static_cast<double>(n) * gap);
  r.ratio = r.exact / r.estimate;
  r.details = {{"mean", mean},
               {"mean_identity_target", identity_target},
               {"mean_identity_error", std::abs(mean - identity_target)},
               {"rms", r.exact},
               {"max_abs", maxabs},
               {"max_row_sum", w.matrix.rowwise().sum().cwiseAbs().maxCoeff()}};
  return r;
}

EstimateReport chain_product_check(const PFResolvent& res, int n, int samples, std::uint64_t seed) {
  require(n >= 2, "chain length must be >= 2");
  require(samples >= 1, "need at least one sample");
  const auto ws = res.w_matrices(n);
  const RealMatrix& w = ws.front().matrix;
  const RealMatrix& wn = ws.back().matrix;
  const int dim = res.dimension();
  const double a = res.gap();
  const double two_b = dim;
  EstimateReport r = base_report("chain_product", dim, a);
  auto estimate_for = [&](int first, int last) {
    return ((first == last ? 1.0 : 0.0) - 1.0 / two_b) / (std::pow(a, n) * std::pow(two_b, n - 1));
  };

  Rng rng(mix_seed(seed));
  std::vector<int> tuple(n + 1);
  std::vector<double> open_ratio, closed_ratio, interior_ratio;
  for (int s = 0; s < samples; ++s) {
    for (int& i : tuple) i = static_cast<int>(uniform_index(rng, dim));
    // Alternate open and closed chains so both shapes are covered.
    if (s % 2 == 1) tuple[n] = tuple[0];
    double product = 1.0;
    for (int i = 0; i < n; ++i) product *= w(tuple[i], tuple[i + 1]);
    const double est = estimate_for(tuple[0], tuple[n]);
    const double ratio = std::abs(product / est);
    r.samples.push_back(ratio);
    (tuple[0] == tuple[n] ? closed_ratio : open_ratio).push_back(ratio);
    // Summing the product over the interior indices gives W^(n); dividing
    // by the number of interior tuples gives the average interior product.
    const double averaged = wn(tuple[0], tuple[n]) / std::pow(two_b, n - 1);
    interior_ratio.push_back(std::abs(averaged / est));
  }
  r.exact = median_of(r.samples);
  r.estimate = 1.0;
  r.ratio = r.exact;
  r.details = {{"order", static_cast<double>(n)},
               {"median_ratio_open", median_of(open_ratio)},
               {"median_ratio_closed", median_of(closed_ratio)},
               {"median_ratio_interior_averaged", median_of(interior_ratio)}};
  return r;
}

MagnitudeStats b_magnitude_stats(const PropagationMatrix& bcal, int bins) {
  require(bins >= 1, "histogram needs at least one bin");
  const int dim = bcal.dimension();
  require(dim >= 1, "empty propagation matrix");
  const RealMatrix f = bcal.matrix.cwiseAbs2();
  MagnitudeStats out;
  EstimateReport& r = out.report;
  r = base_report("b_magnitude", dim, 0.0);

  double max_row_defect = 0.0, mean_pr = 0.0, max_entry = 0.0;
  std::vector<double> scaled;
  for (int i = 0; i < dim; ++i) {
    const double row = f.row(i).sum();
    max_row_defect = std::max(max_row_defect, std::abs(row - 1.0));
    mean_pr += row * row / f.row(i).squaredNorm();
    for (int j = 0; j < dim; ++j)
      if (f(i, j) > 0.0) {
        scaled.push_back(dim * f(i, j));
        max_entry = std::max(max_entry, f(i, j));
      }
  }
  mean_pr /= dim;
  // Mean of (2B)|B|^2 over a full row is exactly one.
  r.exact = mean_pr / dim;
  r.estimate = 1.0;
  r.ratio = r.exact;
  const double upper = *std::max_element(scaled.begin(), scaled.end());
  out.histogram.resize(bins);
  for (int b = 0; b < bins; ++b) out.histogram[b] = {upper * b / bins, upper * (b + 1) / bins, 0};
  for (double v : scaled) {
    const int b = std::min(bins - 1, static_cast<int>(v / upper * bins));
    ++out.histogram[b].count;
  }
  r.details = {{"max_row_sum_defect", max_row_defect},
               {"mean_participation", mean_pr},
               {"flatness", r.exact},
               {"support_exponent", dim > 1 ? std::log(mean_pr) / std::log(static_cast<double>(dim)) : 1.0},
               {"max_abs2", max_entry},
               {"max_scaled", upper},
               {"nonzero_fraction", static_cast<double>(scaled.size()) / (static_cast<double>(dim) * dim)}};
  return out;
}

SourceTerm source_term_value(const WMatrix& w, int bond_count, double gap) {
  require(w.order == 1, "source term needs W of order 1");
  require(bond_count >= 1 && w.matrix.rows() == 2 * bond_count, "bond count does not match W");
  const double b2 = static_cast<double>(bond_count) * bond_count;
  SourceTerm t;
  t.value = (w.matrix * w.matrix).trace() / b2;
  t.value_entrywise = w.matrix.cwiseProduct(w.matrix.transpose()).sum() / b2;
  if (std::abs(t.value - t.value_entrywise) > 1e-8 * std::max(1.0, std::abs(t.value)))
    fail(Errc::internal_consistency, "trace and entrywise forms of Tr(W^2) disagree");
  t.bound = 2.0 * bond_count / (b2 * gap * gap);
  t.within_bound = t.value <= t.bound;
  return t;
}

std::vector<double> higher_order_values(const std::vector<WMatrix>& w, int bond_count, HigherOrderCase which) {
  require(w.size() >= 3, "need W orders 1..3");
  for (std::size_t k = 0; k < 3; ++k) require(w[k].order == static_cast<int>(k) + 1, "W orders out of sequence");
  const RealMatrix& w1 = w[0].matrix;
  const RealMatrix& w2 = w[1].matrix;
  const RealMatrix& w3 = w[2].matrix;
  require(w1.rows() == 2 * bond_count, "bond count does not match W");
  const double pre = 1.0 / (static_cast<double>(bond_count) * bond_count);
  const RealVector d1 = w1.diagonal(), d2 = w2.diagonal(), d3 = w3.diagonal();

  if (which == HigherOrderCase::m1n2) {
    return {pre * d3.dot(d1), pre * d2.dot(d2)};
  }
  // Indices (rho, tau) follow the row/column of the matrices below.
  const RealMatrix w1t = w1.transpose();
  const RealMatrix cross = w1.cwiseProduct(w1t);             // W(r,t) W(t,r)
  const RealMatrix cross2 = w2.cwiseProduct(w2.transpose());  // W2(r,t) W2(t,r)
  const RealMatrix w3t = w3.transpose();                      // W3(t,r) at (r,t)
  return {
      pre * d3.dot(cross * d1),
      pre * w3t.cwiseProduct(w1).cwiseProduct(w1).cwiseProduct(w1t).sum(),
      pre * (d1.asDiagonal() * w3t.cwiseProduct(w1) * d1).sum(),
      pre * cross2.cwiseProduct(cross).sum(),
      pre * d2.dot(cross * d2),
      pre * d1.dot(cross2 * d1),
  };
}

double dominance_margin(const std::vector<double>& v) {
  require(v.size() == 6, "dominance needs the six two-trace values");
  const double lead = std::min({std::abs(v[0]), std::abs(v[2]), std::abs(v[4]), std::abs(v[5])});
  const double sub = std::max(std::abs(v[1]), std::abs(v[3]));
  return sub == 0.0 ? std::numeric_limits<double>::infinity() : lead / sub;
}

double operator_norm(const RealMatrix& w, int iterations) {
  require(w.rows() > 0 && w.rows() == w.cols(), "operator norm needs a square matrix");
  RealVector x = RealVector::Ones(w.cols()).normalized();
  x(0) += 0.5;  // break symmetry with the uniform kernel vector
  x.normalize();
  double sigma2 = 0.0;
  for (int i = 0; i < iterations; ++i) {
    RealVector y = w.transpose() * (w * x);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    sigma2 = x.dot(y);
    x = y / ny;
  }
  return std::sqrt(sigma2);
}

}  // namespace qgraph
