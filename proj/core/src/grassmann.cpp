#include "qgraph/grassmann.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qgraph/error.hpp"

namespace qgraph {

using Complex = std::complex<double>;

GrassmannElement::GrassmannElement(int generators, Complex body) : generators_(generators) {
  require(generators >= 0 && generators <= kMaxGenerators, "generator count must be in [0, 12]");
  coeffs_.assign(std::size_t{1} << generators, Complex(0.0, 0.0));
  coeffs_[0] = body;
}

GrassmannElement GrassmannElement::generator(int generators, int index) {
  require(index >= 0 && index < generators, "generator index out of range");
  GrassmannElement e(generators);
  e.coeffs_[std::size_t{1} << index] = 1.0;
  return e;
}

int monomial_product_sign(std::uint32_t a, std::uint32_t b) noexcept {
  if (a & b) return 0;
  // Each generator j of b moves left past every generator of a above j.
  int swaps = 0;
  for (std::uint32_t rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    swaps += std::popcount(a >> (j + 1));
  }
  return swaps % 2 == 0 ? 1 : -1;
}

Parity GrassmannElement::parity(double tolerance) const {
  bool even = false, odd = false;
  for (std::size_t m = 0; m < coeffs_.size(); ++m)
    if (std::abs(coeffs_[m]) > tolerance) (std::popcount(m) % 2 == 0 ? even : odd) = true;
  if (even && odd) return Parity::mixed;
  if (even) return Parity::even;
  if (odd) return Parity::odd;
  return Parity::zero;
}

GrassmannElement GrassmannElement::nilpotent_part() const {
  GrassmannElement n = *this;
  n.coeffs_[0] = 0.0;
  return n;
}

double GrassmannElement::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

GrassmannElement GrassmannElement::conj() const {
  GrassmannElement out = *this;
  for (auto& c : out.coeffs_) c = std::conj(c);
  return out;
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& o) {
  require(generators_ == o.generators_, "generator counts differ");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& o) {
  require(generators_ == o.generators_, "generator counts differ");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

GrassmannElement& GrassmannElement::operator*=(Complex s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
  require(a.generators_ == b.generators_, "generator counts differ");
  GrassmannElement out(a.generators_);
  const std::uint32_t full = static_cast<std::uint32_t>(a.coeffs_.size()) - 1;
  for (std::uint32_t ma = 0; ma <= full; ++ma) {
    const Complex ca = a.coeffs_[ma];
    if (ca == Complex(0.0, 0.0)) continue;
    // Only monomials disjoint from ma contribute: walk the submasks of ~ma.
    const std::uint32_t free = full & ~ma;
    for (std::uint32_t mb = free;; mb = (mb - 1) & free) {
      const Complex cb = b.coeffs_[mb];
      if (cb != Complex(0.0, 0.0)) out.coeffs_[ma | mb] += static_cast<double>(monomial_product_sign(ma, mb)) * ca * cb;
      if (mb == 0) break;
    }
  }
  return out;
}

GrassmannElement GrassmannElement::apply(const std::function<std::vector<Complex>(Complex, int)>& derivatives) const {
  const std::vector<Complex> c = derivatives(body(), generators_);
  require(static_cast<int>(c.size()) >= 1, "series needs at least the constant term");
  const GrassmannElement n = nilpotent_part();
  GrassmannElement out(generators_, c[0]);
  GrassmannElement power(generators_, 1.0);
  for (int k = 1; k < static_cast<int>(c.size()) && k <= generators_; ++k) {
    power = power * n;
    if (power.max_abs() == 0.0) break;
    out += c[k] * power;
  }
  return out;
}

GrassmannElement GrassmannElement::inverse() const {
  if (body() == Complex(0.0, 0.0)) fail(Errc::not_invertible, "Grassmann element has zero body");
  return apply([](Complex b, int order) {
    std::vector<Complex> c(order + 1);
    Complex p = 1.0 / b;
    for (int k = 0; k <= order; ++k) {
      c[k] = (k % 2 == 0 ? 1.0 : -1.0) * p;
      p /= b;
    }
    return c;
  });
}

GrassmannElement GrassmannElement::sqrt() const {
  if (body() == Complex(0.0, 0.0)) fail(Errc::not_invertible, "square root needs a nonzero body");
  return apply([](Complex b, int order) {
    // Taylor coefficients binom(1/2, k) b^(1/2 - k).
    std::vector<Complex> c(order + 1);
    Complex coeff = 1.0;
    const Complex root = std::sqrt(b);
    Complex p = root;
    for (int k = 0; k <= order; ++k) {
      c[k] = coeff * p;
      coeff *= (0.5 - k) / (k + 1.0);
      p /= b;
    }
    return c;
  });
}

GrassmannElement GrassmannElement::log() const {
  if (body() == Complex(0.0, 0.0)) fail(Errc::not_invertible, "logarithm needs a nonzero body");
  return apply([](Complex b, int order) {
    std::vector<Complex> c(order + 1);
    c[0] = std::log(b);
    Complex p = 1.0 / b;
    for (int k = 1; k <= order; ++k) {
      c[k] = (k % 2 == 1 ? 1.0 : -1.0) * p / static_cast<double>(k);
      p /= b;
    }
    return c;
  });
}

GrassmannElement GrassmannElement::exp() const {
  return apply([](Complex b, int order) {
    std::vector<Complex> c(order + 1);
    Complex e = std::exp(b);
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
      c[k] = e / fact;
      fact *= k + 1.0;
    }
    return c;
  });
}

double max_deviation(const GrassmannElement& a, const GrassmannElement& b) { return (a - b).max_abs(); }

}  // namespace qgraph
