#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qgraph/error.hpp"
#include "qgraph/scattering.hpp"

namespace qgraph {

inline constexpr double kBistochasticTolerance = 1e-12;
inline constexpr double kPerronTolerance = 1e-10;
inline constexpr double kDefaultGapFloor = 1e-6;

/// F(mu, nu) = |B(mu, nu)|^2.
struct PFOperator {
  RealMatrix matrix;

  int dimension() const noexcept { return static_cast<int>(matrix.rows()); }
  Eigen::SparseMatrix<double, Eigen::RowMajor> sparse() const;
};

enum class GapMethod { dense, deflated_power };
std::string_view to_string(GapMethod method) noexcept;

struct GapReport {
  GapMethod method = GapMethod::dense;
  Complex lambda1{1.0, 0.0};
  double perron_residual = 0.0;  // |F u1 - u1| with the uniform vector
  double lambda_sub = 0.0;       // max_{k >= 2} |lambda_k|
  double gap = 1.0;              // 1 - lambda_sub
  std::vector<Complex> eigenvalues;  // full spectrum (dense method only)
  int iterations = 0;
};

/// Carries the estimate reached when the iteration budget runs out.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, GapReport partial)
      : Error(Errc::convergence_failure, what), partial_(std::move(partial)) {}
  const GapReport& partial() const noexcept { return partial_; }

 private:
  GapReport partial_;
};

struct PowerIterationOptions {
  int max_iterations = 20000;
  double tolerance = 1e-10;
  std::uint64_t seed = 0x5eed;
};

PFOperator build_pf(const PropagationMatrix& bcal);

/// Maximum deviation of any row or column sum from one.
double bistochastic_defect(const RealMatrix& f);

GapReport spectral_gap(const PFOperator& f, GapMethod method, const PowerIterationOptions& options = {});

/// Eigenvalues other than the Perron root: the entry closest to 1 is removed.
std::vector<Complex> subleading_eigenvalues(const GapReport& report);

struct WMatrix {
  int order = 1;
  RealMatrix matrix;
};

/// Deflated resolvent of 1 - F on the complement of the uniform vector.
/// Immutable after construction; w_matrix may be called concurrently.
class PFResolvent {
 public:
  /// Throws ill_conditioned_resolvent when gap < gap_floor.
  PFResolvent(PFOperator f, double gap, double gap_floor = kDefaultGapFloor);

  const PFOperator& pf() const noexcept { return f_; }
  double gap() const noexcept { return gap_; }
  int dimension() const noexcept { return f_.dimension(); }
  /// P = 1 - |u1><w1|.
  RealMatrix projector() const;

  /// W^(n) = P (1 - F + |u1><w1|)^{-n} P.
  WMatrix w_matrix(int order) const;
  /// W^(1) .. W^(max_order), built by successive solves.
  std::vector<WMatrix> w_matrices(int max_order) const;

 private:
  PFOperator f_;
  double gap_;
  Eigen::PartialPivLU<RealMatrix> lu_;
};

}  // namespace qgraph
