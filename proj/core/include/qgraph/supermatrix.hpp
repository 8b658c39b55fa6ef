#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qgraph/grassmann.hpp"

namespace qgraph {

enum class Grade { boson, fermion };

/// Square or rectangular matrix of Grassmann elements with a boson/fermion
/// grade per row and column. Entries linking equal grades are expected to
/// be even, the others odd.
class Supermatrix {
 public:
  using Complex = std::complex<double>;

  Supermatrix() = default;
  Supermatrix(int generators, std::vector<Grade> row_grades, std::vector<Grade> col_grades);
  Supermatrix(int generators, const std::vector<Grade>& grades) : Supermatrix(generators, grades, grades) {}

  static Supermatrix identity(int generators, const std::vector<Grade>& grades);
  static Supermatrix from_body(int generators, const std::vector<Grade>& grades, const Eigen::MatrixXcd& body);

  int rows() const noexcept { return static_cast<int>(row_grades_.size()); }
  int cols() const noexcept { return static_cast<int>(col_grades_.size()); }
  int generators() const noexcept { return generators_; }
  const std::vector<Grade>& row_grades() const noexcept { return row_grades_; }
  const std::vector<Grade>& col_grades() const noexcept { return col_grades_; }

  GrassmannElement& operator()(int i, int j) { return entries_.at(static_cast<std::size_t>(i) * cols() + j); }
  const GrassmannElement& operator()(int i, int j) const {
    return entries_.at(static_cast<std::size_t>(i) * cols() + j);
  }

  Eigen::MatrixXcd body() const;
  double max_abs() const;
  /// True when every entry has the parity its grades demand.
  bool grading_consistent(double tolerance = 0.0) const;

  Supermatrix& operator+=(const Supermatrix& o);
  Supermatrix& operator-=(const Supermatrix& o);
  Supermatrix& operator*=(Complex s);
  friend Supermatrix operator+(Supermatrix a, const Supermatrix& b) { return a += b; }
  friend Supermatrix operator-(Supermatrix a, const Supermatrix& b) { return a -= b; }
  friend Supermatrix operator*(Supermatrix a, Complex s) { return a *= s; }
  friend Supermatrix operator*(Complex s, Supermatrix a) { return a *= s; }
  friend Supermatrix operator*(const Supermatrix& a, const Supermatrix& b);

  /// Supertrace: boson diagonal minus fermion diagonal.
  GrassmannElement str() const;
  /// Body inverse plus the terminating Neumann series in the nilpotent part.
  Supermatrix inverse() const;
  Supermatrix block(int row0, int col0, int nrows, int ncols) const;
  void set_block(int row0, int col0, const Supermatrix& b);
  Supermatrix conj() const;

 private:
  int generators_ = 0;
  std::vector<Grade> row_grades_;
  std::vector<Grade> col_grades_;
  std::vector<GrassmannElement> entries_;
};

Supermatrix block_matrix(const Supermatrix& a, const Supermatrix& b, const Supermatrix& c, const Supermatrix& d);
Supermatrix block_diagonal(const std::vector<Supermatrix>& blocks);
/// m (x) 1_s for a plain complex matrix m acting on an outer index.
Supermatrix kron_outer(const Eigen::MatrixXcd& m, int generators, const std::vector<Grade>& inner);
/// 1_n (x) s.
Supermatrix kron_identity(int n, const Supermatrix& s);

double max_deviation(const Supermatrix& a, const Supermatrix& b);

struct SeriesOptions {
  double tail_tolerance = 1e-14;
  int max_terms = 4000;
  double max_body_norm = 0.95;
};

/// sum_k c_k X^k; rescale_required when the body norm of X reaches
/// max_body_norm, convergence_failure when the tail never drops.
Supermatrix power_series(const Supermatrix& x, const std::function<double(int)>& coefficient,
                         const SeriesOptions& options = {});
/// (1 - X)^(-1/2)
Supermatrix inverse_sqrt_one_minus(const Supermatrix& x, const SeriesOptions& options = {});
/// (1 + X)^(-1/2)
Supermatrix inverse_sqrt_one_plus(const Supermatrix& x, const SeriesOptions& options = {});
/// ln(1 - X)
Supermatrix log_one_minus(const Supermatrix& x, const SeriesOptions& options = {});
GrassmannElement str_log_one_minus(const Supermatrix& x, const SeriesOptions& options = {});

}  // namespace qgraph
