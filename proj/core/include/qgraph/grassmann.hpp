#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace qgraph {

inline constexpr int kMaxGenerators = 12;

enum class Parity { zero, even, odd, mixed };

/// Element of the exterior algebra over G generators with complex
/// coefficients, stored densely over the 2^G monomials. Bit i of a monomial
/// index means generator i is present; monomials are ordered by increasing
/// generator index.
class GrassmannElement {
 public:
  using Complex = std::complex<double>;

  GrassmannElement() : GrassmannElement(0) {}
  explicit GrassmannElement(int generators, Complex body = 0.0);

  static GrassmannElement generator(int generators, int index);

  int generators() const noexcept { return generators_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  Complex body() const noexcept { return coeffs_[0]; }
  Complex coefficient(std::uint32_t monomial) const { return coeffs_.at(monomial); }
  void set_coefficient(std::uint32_t monomial, Complex value) { coeffs_.at(monomial) = value; }
  const std::vector<Complex>& coefficients() const noexcept { return coeffs_; }

  Parity parity(double tolerance = 0.0) const;
  GrassmannElement nilpotent_part() const;
  double max_abs() const;
  GrassmannElement conj() const;  // coefficientwise complex conjugation

  GrassmannElement& operator+=(const GrassmannElement& o);
  GrassmannElement& operator-=(const GrassmannElement& o);
  GrassmannElement& operator*=(Complex s);
  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator-(GrassmannElement a) { return a *= -1.0; }
  friend GrassmannElement operator*(GrassmannElement a, Complex s) { return a *= s; }
  friend GrassmannElement operator*(Complex s, GrassmannElement a) { return a *= s; }
  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b);

  /// f(body + n) = sum_k f^(k)(body) n^k / k!, exact because n^(G+1) = 0.
  /// `derivatives(body, k)` returns f^(k)(body) / k! for k = 0..G.
  GrassmannElement apply(const std::function<std::vector<Complex>(Complex, int)>& derivatives) const;

  GrassmannElement inverse() const;  // not_invertible if body is zero
  GrassmannElement sqrt() const;     // principal branch of the body
  GrassmannElement log() const;
  GrassmannElement exp() const;

 private:
  int generators_;
  std::vector<Complex> coeffs_;
};

/// Sign of moving monomial b past monomial a when forming a*b (0 when they
/// share a generator).
int monomial_product_sign(std::uint32_t a, std::uint32_t b) noexcept;

/// Largest coefficient deviation between two elements.
double max_deviation(const GrassmannElement& a, const GrassmannElement& b);

}  // namespace qgraph
