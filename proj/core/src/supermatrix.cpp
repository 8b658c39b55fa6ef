#include "qgraph/supermatrix.hpp"

#include <algorithm>
#include <cmath>

#include "qgraph/error.hpp"

namespace qgraph {

using Complex = std::complex<double>;

Supermatrix::Supermatrix(int generators, std::vector<Grade> row_grades, std::vector<Grade> col_grades)
    : generators_(generators), row_grades_(std::move(row_grades)), col_grades_(std::move(col_grades)) {
  entries_.assign(row_grades_.size() * col_grades_.size(), GrassmannElement(generators));
}

Supermatrix Supermatrix::identity(int generators, const std::vector<Grade>& grades) {
  Supermatrix m(generators, grades);
  for (int i = 0; i < m.rows(); ++i) m(i, i) = GrassmannElement(generators, 1.0);
  return m;
}

Supermatrix Supermatrix::from_body(int generators, const std::vector<Grade>& grades, const Eigen::MatrixXcd& body) {
  require(body.rows() == static_cast<Eigen::Index>(grades.size()) && body.cols() == body.rows(),
          "body dimension does not match grades");
  Supermatrix m(generators, grades);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = GrassmannElement(generators, body(i, j));
  return m;
}

Eigen::MatrixXcd Supermatrix::body() const {
  Eigen::MatrixXcd b(rows(), cols());
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < cols(); ++j) b(i, j) = (*this)(i, j).body();
  return b;
}

double Supermatrix::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, e.max_abs());
  return m;
}

bool Supermatrix::grading_consistent(double tolerance) const {
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < cols(); ++j) {
      const Parity p = (*this)(i, j).parity(tolerance);
      if (p == Parity::zero) continue;
      const bool want_even = row_grades_[i] == col_grades_[j];
      if (p != (want_even ? Parity::even : Parity::odd)) return false;
    }
  return true;
}

Supermatrix& Supermatrix::operator+=(const Supermatrix& o) {
  require(rows() == o.rows() && cols() == o.cols(), "supermatrix shapes differ");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

Supermatrix& Supermatrix::operator-=(const Supermatrix& o) {
  require(rows() == o.rows() && cols() == o.cols(), "supermatrix shapes differ");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

Supermatrix& Supermatrix::operator*=(Complex s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

Supermatrix operator*(const Supermatrix& a, const Supermatrix& b) {
  require(a.cols() == b.rows(), "supermatrix inner dimensions differ");
  Supermatrix out(a.generators_, a.row_grades_, b.col_grades_);
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const auto& aik = a(i, k);
      if (aik.max_abs() == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

GrassmannElement Supermatrix::str() const {
  require(rows() == cols(), "supertrace needs a square supermatrix");
  GrassmannElement s(generators_);
  for (int i = 0; i < rows(); ++i) {
    if (row_grades_[i] == Grade::boson)
      s += (*this)(i, i);
    else
      s -= (*this)(i, i);
  }
  return s;
}

Supermatrix Supermatrix::inverse() const {
  require(rows() == cols(), "inverse needs a square supermatrix");
  const Eigen::MatrixXcd b = body();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(b);
  if (!lu.isInvertible()) fail(Errc::not_invertible, "supermatrix body is singular");
  const Supermatrix body_inv = from_body(generators_, row_grades_, lu.inverse());
  // M = M0 (1 + M0^-1 N); (1 + K)^-1 = sum (-K)^k terminates since K is nilpotent.
  Supermatrix n = *this - from_body(generators_, row_grades_, b);
  const Supermatrix k = body_inv * n;
  Supermatrix term = identity(generators_, row_grades_);
  Supermatrix sum = term;
  for (int order = 1; order <= generators_; ++order) {
    term = (-1.0) * (term * k);
    if (term.max_abs() == 0.0) break;
    sum += term;
  }
  return sum * body_inv;
}

Supermatrix Supermatrix::block(int row0, int col0, int nrows, int ncols) const {
  require(row0 >= 0 && col0 >= 0 && row0 + nrows <= rows() && col0 + ncols <= cols(), "block out of range");
  Supermatrix out(generators_, std::vector<Grade>(row_grades_.begin() + row0, row_grades_.begin() + row0 + nrows),
                  std::vector<Grade>(col_grades_.begin() + col0, col_grades_.begin() + col0 + ncols));
  for (int i = 0; i < nrows; ++i)
    for (int j = 0; j < ncols; ++j) out(i, j) = (*this)(row0 + i, col0 + j);
  return out;
}

void Supermatrix::set_block(int row0, int col0, const Supermatrix& b) {
  require(row0 >= 0 && col0 >= 0 && row0 + b.rows() <= rows() && col0 + b.cols() <= cols(), "block out of range");
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(row0 + i, col0 + j) = b(i, j);
}

Supermatrix Supermatrix::conj() const {
  Supermatrix out = *this;
  for (auto& e : out.entries_) e = e.conj();
  return out;
}

Supermatrix block_matrix(const Supermatrix& a, const Supermatrix& b, const Supermatrix& c, const Supermatrix& d) {
  require(a.rows() == b.rows() && c.rows() == d.rows() && a.cols() == c.cols() && b.cols() == d.cols(),
          "block shapes do not fit");
  std::vector<Grade> rg = a.row_grades(), cg = a.col_grades();
  rg.insert(rg.end(), c.row_grades().begin(), c.row_grades().end());
  cg.insert(cg.end(), b.col_grades().begin(), b.col_grades().end());
  Supermatrix out(a.generators(), rg, cg);
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  out.set_block(a.rows(), 0, c);
  out.set_block(a.rows(), a.cols(), d);
  return out;
}

Supermatrix block_diagonal(const std::vector<Supermatrix>& blocks) {
  require(!blocks.empty(), "need at least one block");
  std::vector<Grade> rg, cg;
  for (const auto& b : blocks) {
    rg.insert(rg.end(), b.row_grades().begin(), b.row_grades().end());
    cg.insert(cg.end(), b.col_grades().begin(), b.col_grades().end());
  }
  Supermatrix out(blocks.front().generators(), rg, cg);
  int r = 0, c = 0;
  for (const auto& b : blocks) {
    out.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

Supermatrix kron_outer(const Eigen::MatrixXcd& m, int generators, const std::vector<Grade>& inner) {
  const int s = static_cast<int>(inner.size());
  std::vector<Grade> grades;
  for (Eigen::Index i = 0; i < m.rows(); ++i) grades.insert(grades.end(), inner.begin(), inner.end());
  Supermatrix out(generators, grades);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (int k = 0; k < s; ++k) out(static_cast<int>(i) * s + k, static_cast<int>(j) * s + k) = GrassmannElement(generators, m(i, j));
  return out;
}

Supermatrix kron_identity(int n, const Supermatrix& s) { return block_diagonal(std::vector<Supermatrix>(n, s)); }

double max_deviation(const Supermatrix& a, const Supermatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "supermatrix shapes differ");
  return (a - b).max_abs();
}

Supermatrix power_series(const Supermatrix& x, const std::function<double(int)>& coefficient,
                         const SeriesOptions& options) {
  require(x.rows() == x.cols(), "power series needs a square supermatrix");
  const Eigen::MatrixXcd b = x.body();
  const double norm = b.size() == 0 ? 0.0 : Eigen::JacobiSVD<Eigen::MatrixXcd>(b).singularValues()(0);
  if (norm >= options.max_body_norm) fail(Errc::rescale_required, "body norm too large for the power series");
  Supermatrix power = Supermatrix::identity(x.generators(), x.row_grades());
  Supermatrix sum = coefficient(0) * power;
  int small_run = 0;
  for (int k = 1; k <= options.max_terms; ++k) {
    power = power * x;
    const double c = coefficient(k);
    const double size = std::abs(c) * power.max_abs();
    if (c != 0.0) sum += c * power;
    if (power.max_abs() == 0.0) return sum;
    // The coefficient of X^k behaves like k^G |x|^k: unimodal, so a run of
    // small terms past the generator count marks the tail.
    small_run = size < options.tail_tolerance * std::max(1.0, sum.max_abs()) ? small_run + 1 : 0;
    if (small_run >= 3 && k > x.generators()) return sum;
  }
  fail(Errc::convergence_failure, "power series tail did not drop below tolerance");
}

Supermatrix inverse_sqrt_one_minus(const Supermatrix& x, const SeriesOptions& options) {
  // binom(2k, k) / 4^k, built recursively.
  std::vector<double> c{1.0};
  return power_series(x, [&c](int k) {
    while (static_cast<int>(c.size()) <= k) {
      const int j = static_cast<int>(c.size());
      c.push_back(c.back() * (2.0 * j - 1.0) / (2.0 * j));
    }
    return c[k];
  }, options);
}

Supermatrix inverse_sqrt_one_plus(const Supermatrix& x, const SeriesOptions& options) {
  return inverse_sqrt_one_minus((-1.0) * x, options);
}

Supermatrix log_one_minus(const Supermatrix& x, const SeriesOptions& options) {
  return power_series(x, [](int k) { return k == 0 ? 0.0 : -1.0 / k; }, options);
}

GrassmannElement str_log_one_minus(const Supermatrix& x, const SeriesOptions& options) {
  require(x.rows() == x.cols() && x.row_grades() == x.col_grades(), "supertrace needs a square graded matrix");
  // Sdet is multiplicative: 1 - X = (1 - X_b)(1 - M) with M = (1 - X_b)^-1 (X - X_b)
  // nilpotent, so the body part goes through eigenvalues and the series in M
  // terminates.
  const Eigen::MatrixXcd body = x.body();
  const int n = static_cast<int>(body.rows());
  const Eigen::MatrixXcd one_minus = Eigen::MatrixXcd::Identity(n, n) - body;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(one_minus);
  if (!lu.isInvertible()) fail(Errc::not_invertible, "1 - X has a singular body");
  std::complex<double> log_body = 0.0;
  for (Grade grade : {Grade::boson, Grade::fermion}) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (x.row_grades()[i] == grade) idx.push_back(i);
    if (idx.empty()) continue;
    Eigen::MatrixXcd sub(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = body(idx[i], idx[j]);
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(sub, false);
    std::complex<double> sum = 0.0;
    for (const auto& lambda : solver.eigenvalues())
      sum += std::log(1.0 - lambda);
    log_body += grade == Grade::boson ? sum : -sum;
  }
  const Supermatrix inv = Supermatrix::from_body(x.generators(), x.row_grades(), lu.inverse());
  const Supermatrix m = inv * (x - Supermatrix::from_body(x.generators(), x.row_grades(), body));
  GrassmannElement out = log_one_minus(m, options).str();
  out += GrassmannElement(x.generators(), log_body);
  return out;
}

}  // namespace qgraph
