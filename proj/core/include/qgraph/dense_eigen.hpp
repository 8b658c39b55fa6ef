#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qgraph {

struct DenseEigenOptions {
  bool balance = true;
  int iterations_per_eigenvalue = 60;
};

/// Eigenvalues of a real square matrix: balancing, Householder reduction
/// to upper Hessenberg form, then Francis double-shift QR. Complex
/// eigenvalues come out in conjugate pairs. Throws convergence_failure
/// when a block does not deflate within the iteration budget.
std::vector<std::complex<double>> real_eigenvalues(Eigen::MatrixXd a, const DenseEigenOptions& options = {});

/// Exposed for testing. Both operate in place.
void balance_matrix(Eigen::MatrixXd& a);
void reduce_to_hessenberg(Eigen::MatrixXd& a);

}  // namespace qgraph
