#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/scattering.hpp"

namespace qgraph {

/// K(n) for n = 1..n_max of the phase-averaged quantum map at k = 0.
struct FormFactorCurve {
  std::vector<int> n;
  std::vector<double> k;
  std::vector<double> standard_error;
  int samples = 0;
  int dimension = 0;  // 2B
  std::uint64_t seed = 0;
  std::string descriptor;
};

/// How Tr U^n is obtained per sample. powers: repeated dense-times-sparse
/// products, about n_max (2B)^2 d operations for d nonzeros per row.
/// eigenphases: one complex Schur decomposition, O((2B)^3), then sums of
/// lambda^n. automatic picks the cheaper one by a calibrated cost estimate.
enum class TraceMethod { automatic, powers, eigenphases };

struct FormFactorOptions {
  int threads = 1;
  std::string descriptor;
  TraceMethod method = TraceMethod::automatic;
};

/// K(n) = mean_s |Tr U_s^n|^2 / 2B with independent uniform phases per
/// sample. Sample s draws its phases from derive_seed(seed, s); the mean is
/// reduced in sample order, so the curve does not depend on `threads`.
/// convergence_failure if an eigenphase solve fails.
FormFactorCurve form_factor(const PropagationMatrix& bcal, const BondLengths& lengths, int n_max, int samples,
                            std::uint64_t seed, const FormFactorOptions& options = {});

/// Circular unitary ensemble of dimension N: min(n, N) / N.
double cue_reference(int n, int dimension);
std::vector<double> cue_reference_curve(const FormFactorCurve& curve);

/// Mean absolute deviation over n in [n_lo, n_hi] (inclusive).
double deviation(const FormFactorCurve& curve, const std::vector<double>& reference, int n_lo, int n_hi);

/// Phase average of |Tr U|^2 / 2B: sum_mu |B_mu,mu|^2 / 2B.
double analytic_first_value(const PropagationMatrix& bcal);

}  // namespace qgraph
