#include "qgraph/coset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>

#include "qgraph/error.hpp"
#include "qgraph/random.hpp"

namespace qgraph {

namespace {

using Complex = std::complex<double>;

double gaussian(Rng& rng) {
  // Box-Muller on the portable uniform draw.
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex complex_gaussian(Rng& rng) {
  const double re = gaussian(rng);
  return {re, gaussian(rng)};
}

// Random element of fixed parity. Even elements get a body of modulus in
// [0.2, 1] * body_scale.
GrassmannElement random_element(int generators, bool even, Rng& rng, double body_scale, double nil_scale) {
  GrassmannElement e(generators);
  for (std::uint32_t m = 1; m < e.size(); ++m)
    if ((std::popcount(m) % 2 == 0) == even) e.set_coefficient(m, nil_scale * complex_gaussian(rng));
  if (even && body_scale > 0.0) {
    const double r = body_scale * (0.2 + 0.8 * uniform01(rng));
    const double phase = 2.0 * std::numbers::pi * uniform01(rng);
    e.set_coefficient(0, std::polar(r, phase));
  }
  return e;
}

Supermatrix random_block(int generators, Rng& rng, double body_scale, double nil_scale) {
  Supermatrix m(generators, bond_grades(1));
  m(0, 0) = random_element(generators, true, rng, body_scale, nil_scale);
  m(0, 1) = random_element(generators, false, rng, 0.0, nil_scale);
  m(1, 0) = random_element(generators, false, rng, 0.0, nil_scale);
  m(1, 1) = random_element(generators, true, rng, body_scale, nil_scale);
  return m;
}

Supermatrix identity_like(const Supermatrix& m) { return Supermatrix::identity(m.generators(), m.row_grades()); }

IdentityCheck make_check(std::string name, double deviation, double tolerance, int generators) {
  IdentityCheck c;
  c.identity = std::move(name);
  c.max_deviation = deviation;
  c.tolerance = tolerance;
  c.passed = deviation <= tolerance;
  c.generators = generators;
  return c;
}

constexpr double kCheckTolerance = 1e-9;

Supermatrix lifted(const Eigen::MatrixXcd& bcal, int generators) {
  return kron_outer(bcal, generators, bond_grades(1));
}

// STr ln(1 + psi psit) + STr ln(1 - B psi (1 + psit psi)^-1/2 B^dag psit (1 + psi psit)^-1/2).
GrassmannElement psi_action(const Supermatrix& psi, const Supermatrix& psit, const Supermatrix& b,
                            const Supermatrix& bdag) {
  const Supermatrix pp = psi * psit;
  const Supermatrix tp = psit * psi;
  const Supermatrix x = b * psi * inverse_sqrt_one_plus(tp) * bdag * psit * inverse_sqrt_one_plus(pp);
  return str_log_one_minus((-1.0) * pp) + str_log_one_minus(x);
}

Eigen::MatrixXcd random_unitary(int n, Rng& rng) {
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = complex_gaussian(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

}  // namespace

std::vector<Grade> bond_grades(int bonds) {
  std::vector<Grade> g;
  for (int i = 0; i < bonds; ++i) {
    g.push_back(Grade::boson);
    g.push_back(Grade::fermion);
  }
  return g;
}

void validate_coset_point(const CosetPoint& p) {
  if (p.z.rows() != p.z.cols() || p.z.rows() % 2 != 0 || p.z_tilde.rows() != p.z.rows() ||
      p.z_tilde.cols() != p.z.cols())
    fail(Errc::invalid_coset_point, "Z and Zt must be square of equal even size");
  for (int b = 0; b < p.bonds(); ++b)
    if (std::abs(p.z(2 * b, 2 * b).body()) >= 1.0)
      fail(Errc::invalid_coset_point, "|Z_BB| must be below 1 on every bond");
  const Eigen::MatrixXcd one_minus =
      Eigen::MatrixXcd::Identity(p.z.rows(), p.z.rows()) - p.z.body() * p.z_tilde.body();
  if (!Eigen::FullPivLU<Eigen::MatrixXcd>(one_minus).isInvertible())
    fail(Errc::invalid_coset_point, "1 - Z Zt is not invertible");
}

CosetPoint random_coset_point(int generators, int bonds, std::uint64_t seed, CosetProfile profile, double body_norm) {
  require(bonds >= 1, "need at least one bond");
  require(body_norm > 0.0 && body_norm < 1.0, "body norm must lie in (0, 1)");
  Rng rng(mix_seed(seed));
  const double nil = 0.3;
  std::vector<Supermatrix> zs, zts;
  for (int b = 0; b < bonds; ++b) {
    Supermatrix z = random_block(generators, rng, body_norm, nil);
    Supermatrix zt = random_block(generators, rng, body_norm, nil);
    if (profile == CosetProfile::physical) {
      zt(0, 0) = z(0, 0).conj();
      zt(1, 1) = -z(1, 1).conj();
    }
    zs.push_back(std::move(z));
    zts.push_back(std::move(zt));
  }
  CosetPoint p{block_diagonal(zs), block_diagonal(zts)};
  validate_coset_point(p);
  return p;
}

Supermatrix random_group_element(int generators, std::uint64_t seed, double spread) {
  Rng rng(mix_seed(seed));
  const auto grades = bond_grades(2);
  Supermatrix g = Supermatrix::identity(generators, grades);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool even = grades[i] == grades[j];
      GrassmannElement e = random_element(generators, even, rng, 0.0, spread);
      if (even) e.set_coefficient(0, spread * complex_gaussian(rng));
      g(i, j) += e;
    }
  return g;
}

Supermatrix sigma3(int generators) {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
  s(0, 0) = 1.0;
  s(1, 1) = -1.0;
  return Supermatrix::from_body(generators, bond_grades(1), s);
}

Supermatrix lambda_matrix(int generators, int bonds) {
  const int n = 2 * bonds;
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
  l.bottomRightCorner(n, n) *= -1.0;
  return Supermatrix::from_body(generators, bond_grades(2 * bonds), l);
}

Supermatrix q_matrix(const CosetPoint& p) {
  const Supermatrix one = identity_like(p.z);
  const Supermatrix x = p.z * p.z_tilde;
  const Supermatrix xt = p.z_tilde * p.z;
  const Supermatrix inv_x = (one - x).inverse();
  const Supermatrix inv_xt = (one - xt).inverse();
  return block_matrix((one + x) * inv_x, (-2.0) * (p.z * inv_xt), 2.0 * (p.z_tilde * inv_x),
                      (-1.0) * ((one + xt) * inv_xt));
}

Supermatrix build_g(const CosetPoint& p) {
  validate_coset_point(p);
  const Supermatrix a = inverse_sqrt_one_minus(p.z * p.z_tilde);
  const Supermatrix d = inverse_sqrt_one_minus(p.z_tilde * p.z);
  return block_matrix(a, p.z * d, p.z_tilde * a, d);
}

GroupBlocks group_blocks(const Supermatrix& g0, int bonds) {
  require(g0.rows() == 4 && g0.cols() == 4, "group element must be 4x4");
  require(bonds >= 1, "need at least one bond");
  return {kron_identity(bonds, g0.block(0, 0, 2, 2)), kron_identity(bonds, g0.block(0, 2, 2, 2)),
          kron_identity(bonds, g0.block(2, 0, 2, 2)), kron_identity(bonds, g0.block(2, 2, 2, 2))};
}

CosetPoint group_action(const Supermatrix& g0, const CosetPoint& p) {
  const auto [a, b, c, d] = group_blocks(g0, p.bonds());
  const Supermatrix den = d + c * p.z;
  const Supermatrix den_t = a + b * p.z_tilde;
  Supermatrix inv, inv_t;
  try {
    inv = den.inverse();
    inv_t = den_t.inverse();
  } catch (const Error& e) {
    if (e.code() == Errc::not_invertible) fail(Errc::action_undefined, "Moebius denominator is singular");
    throw;
  }
  return {(a * p.z + b) * inv, (d * p.z_tilde + c) * inv_t};
}

GrassmannElement bare_action(const CosetPoint& p, const Eigen::MatrixXcd& bcal, const SeriesOptions& options) {
  require(bcal.rows() == p.bonds() && bcal.cols() == p.bonds(), "B dimension must match the bond count");
  const Supermatrix b = lifted(bcal, p.z.generators());
  const Supermatrix bdag = lifted(bcal.adjoint(), p.z.generators());
  return (-1.0) * str_log_one_minus(p.z * p.z_tilde, options) +
         str_log_one_minus(b * p.z * bdag * p.z_tilde, options);
}

std::vector<IdentityCheck> verify_build_g(const CosetPoint& p) {
  const int gen = p.z.generators();
  const Supermatrix g = build_g(p);
  const Supermatrix lam = lambda_matrix(gen, p.bonds());
  const Supermatrix q = g * lam * g.inverse();
  const Supermatrix one = Supermatrix::identity(gen, q.row_grades());
  const int n = p.z.rows();
  return {
      make_check("q-block-form", max_deviation(q, q_matrix(p)), kCheckTolerance, gen),
      make_check("q-squared", max_deviation(q * q, one), kCheckTolerance, gen),
      make_check("local-coordinates-z", max_deviation(g.block(0, n, n, n) * g.block(n, n, n, n).inverse(), p.z),
                 kCheckTolerance, gen),
      make_check("local-coordinates-zt",
                 max_deviation(g.block(n, 0, n, n) * g.block(0, 0, n, n).inverse(), p.z_tilde), kCheckTolerance, gen),
  };
}

std::vector<IdentityCheck> verify_composition(const Supermatrix& g0, const Supermatrix& g1, const CosetPoint& p) {
  const int gen = p.z.generators();
  const CosetPoint nested = group_action(g0, group_action(g1, p));
  const CosetPoint direct = group_action(g0 * g1, p);
  return {make_check("composition-z", max_deviation(nested.z, direct.z), kCheckTolerance, gen),
          make_check("composition-zt", max_deviation(nested.z_tilde, direct.z_tilde), kCheckTolerance, gen)};
}

std::vector<IdentityCheck> verify_invariance(const Supermatrix& g0, const CosetPoint& p,
                                             const Eigen::MatrixXcd& bcal) {
  const int gen = p.z.generators();
  const CosetPoint moved = group_action(g0, p);
  const GrassmannElement before = bare_action(p, bcal);
  const GrassmannElement after = bare_action(moved, bcal);

  const Supermatrix b = lifted(bcal, gen);
  const Supermatrix bdag = lifted(bcal.adjoint(), gen);
  const CosetPoint mixed{b * p.z * bdag, p.z_tilde};
  const Supermatrix lhs = group_action(g0, mixed).z;
  const Supermatrix rhs = b * moved.z * bdag;

  const auto [a0, b0, c0, d0] = group_blocks(g0, p.bonds());
  const CosetPoint xi{a0 * p.z * d0.inverse(), d0 * p.z_tilde * a0.inverse()};
  return {make_check("bare-action-invariance", max_deviation(before, after), kCheckTolerance, gen),
          make_check("mixing-proviso", max_deviation(lhs, rhs), kCheckTolerance, gen),
          make_check("gauge-invariant-variables", max_deviation(bare_action(xi, bcal), before), kCheckTolerance, gen)};
}

std::vector<IdentityCheck> verify_mode_split(const Supermatrix& g0, const CosetPoint& zeta) {
  const int gen = zeta.z.generators();
  const auto [a0, b0, c0, d0] = group_blocks(g0, zeta.bonds());
  const Supermatrix y = b0 * d0.inverse();
  const Supermatrix yt = c0 * a0.inverse();
  const Supermatrix xi = a0 * zeta.z * d0.inverse();
  const Supermatrix xit = d0 * zeta.z_tilde * a0.inverse();
  const Supermatrix one = identity_like(zeta.z);
  const CosetPoint moved = group_action(g0, zeta);
  Supermatrix zero(gen, zeta.z.row_grades());
  const CosetPoint at_zero = group_action(g0, CosetPoint{zero, zero});
  return {
      make_check("mode-split-z", max_deviation(moved.z, (y + xi) * (one + yt * xi).inverse()), kCheckTolerance, gen),
      make_check("mode-split-zt", max_deviation(moved.z_tilde, (yt + xit) * (one + y * xit).inverse()),
                 kCheckTolerance, gen),
      make_check("zero-mode", std::max(max_deviation(at_zero.z, y), max_deviation(at_zero.z_tilde, yt)),
                 kCheckTolerance, gen),
  };
}

std::vector<IdentityCheck> verify_psi_transform(const CosetPoint& xi, const Eigen::MatrixXcd& bcal) {
  const int gen = xi.z.generators();
  const Supermatrix one = identity_like(xi.z);
  const Supermatrix psi = xi.z * inverse_sqrt_one_minus(xi.z_tilde * xi.z);
  const Supermatrix psit = xi.z_tilde * inverse_sqrt_one_minus(xi.z * xi.z_tilde);
  const Supermatrix back = psi * inverse_sqrt_one_plus(psit * psi);
  const Supermatrix back_t = psit * inverse_sqrt_one_plus(psi * psit);

  const int n = xi.z.rows();
  const Supermatrix q = q_matrix(xi);
  // Lambda = diag(1, -1): the ++ block of Q Lambda is Q_++, the -- block is -Q_--.
  const Supermatrix pp = q.block(0, 0, n, n) - one;
  const Supermatrix mm = (-1.0) * q.block(n, n, n, n) - one;

  // Quadratic coefficient: f(s) = A(sqrt(s) psi, sqrt(s) psit) is a series in
  // s; Richardson extrapolation of f(s)/s to s = 0.
  const Supermatrix b = lifted(bcal, gen);
  const Supermatrix bdag = lifted(bcal.adjoint(), gen);
  constexpr int levels = 7;
  double s = 0.02;
  std::vector<std::vector<GrassmannElement>> table(levels);
  for (int k = 0; k < levels; ++k, s /= 2.0) {
    const double t = std::sqrt(s);
    const GrassmannElement f = psi_action(t * psi, t * psit, b, bdag);
    table[k].push_back(f * (1.0 / s));
    for (int j = 1; j <= k; ++j) {
      const double w = std::ldexp(1.0, j);
      table[k].push_back((w * table[k][j - 1] - table[k - 1][j - 1]) * (1.0 / (w - 1.0)));
    }
  }
  const GrassmannElement quadratic = (psi * psit - b * psi * bdag * psit).str();

  return {
      make_check("psi-roundtrip", std::max(max_deviation(back, xi.z), max_deviation(back_t, xi.z_tilde)),
                 kCheckTolerance, gen),
      make_check("q-lambda-plus-plus", max_deviation(pp, 2.0 * (psi * psit)), kCheckTolerance, gen),
      make_check("q-lambda-minus-minus", max_deviation(mm, 2.0 * (psit * psi)), kCheckTolerance, gen),
      make_check("psi-action-quadratic", max_deviation(table[levels - 1][levels - 1], quadratic), kCheckTolerance,
                 gen),
  };
}

std::vector<IdentityCheck> verify_source_rewrite(const CosetPoint& y, const CosetPoint& xi) {
  require(y.bonds() == 1 && xi.bonds() == 1, "source rewrite works on a single directed bond");
  const int gen = y.z.generators();
  const Supermatrix one = identity_like(y.z);
  const Supermatrix s3 = sigma3(gen);
  const Supermatrix& yy = y.z;
  const Supermatrix& yt = y.z_tilde;
  const Supermatrix z = (yy + xi.z) * (one + yt * xi.z).inverse();
  const Supermatrix zt = (yt + xi.z_tilde) * (one + yy * xi.z_tilde).inverse();

  const Supermatrix inv_zzt = (one - z * zt).inverse();
  const Supermatrix inv_ztz = (one - zt * z).inverse();
  const GrassmannElement lhs1 = (s3 * inv_zzt * z * zt).str();
  const GrassmannElement lhs2 = (s3 * inv_ztz * zt * z).str();
  const GrassmannElement lhs3 = (s3 * z * inv_ztz * s3 * zt * inv_zzt).str();

  Supermatrix zero(gen, one.row_grades());
  const Supermatrix scale = block_matrix((one - yy * yt).inverse(), zero, zero, (one - yt * yy).inverse());
  const Supermatrix sigma = 0.5 * (scale * block_matrix(s3, s3 * yy, yt * s3, yt * s3 * yy));
  const Supermatrix sigma_p = 0.5 * (scale * block_matrix(yy * s3 * yt, yy * s3, s3 * yt, s3));
  const Supermatrix ql = q_matrix(xi) * lambda_matrix(gen, 1);
  const GrassmannElement minus_one(gen, -1.0);
  const GrassmannElement rhs1 = minus_one + (sigma * ql).str();
  const GrassmannElement rhs2 = minus_one + (sigma_p * ql).str();
  const GrassmannElement rhs3 = (sigma * ql * sigma_p * ql).str();
  return {make_check("source-rewrite-1", max_deviation(lhs1, rhs1), kCheckTolerance, gen),
          make_check("source-rewrite-2", max_deviation(lhs2, rhs2), kCheckTolerance, gen),
          make_check("source-rewrite-3", max_deviation(lhs3, rhs3), kCheckTolerance, gen)};
}

std::vector<IdentityCheck> run_coset_suite(const CosetSuiteOptions& options) {
  require(options.points >= 1, "need at least one point");
  std::vector<IdentityCheck> out;
  for (int gen : options.generator_counts) {
    std::vector<std::string> order;
    std::map<std::string, IdentityCheck> worst;
    auto absorb = [&](const std::vector<IdentityCheck>& checks, std::uint64_t seed) {
      for (auto c : checks) {
        c.seed = seed;
        c.tolerance = options.tolerance;
        auto [it, inserted] = worst.try_emplace(c.identity, c);
        if (inserted) order.push_back(c.identity);
        else if (c.max_deviation > it->second.max_deviation) it->second = c;
      }
    };
    for (int i = 0; i < options.points; ++i) {
      const std::uint64_t seed = derive_seed(options.seed, static_cast<std::uint64_t>(gen) * 100003 + i);
      Rng rng(mix_seed(seed));
      const auto s = [&](int k) { return derive_seed(seed, k); };
      const CosetPoint p = random_coset_point(gen, 1, s(1), options.profile);
      const CosetPoint p2 = random_coset_point(gen, 2, s(2), options.profile);
      const CosetPoint y = random_coset_point(gen, 1, s(3), options.profile);
      const Supermatrix g0 = random_group_element(gen, s(4));
      const Supermatrix g1 = random_group_element(gen, s(5));
      const Eigen::MatrixXcd bcal = random_unitary(2, rng);
      absorb(verify_build_g(p), seed);
      absorb(verify_composition(g0, g1, p), seed);
      absorb(verify_invariance(g0, p2, bcal), seed);
      absorb(verify_mode_split(g0, p), seed);
      absorb(verify_psi_transform(p2, bcal), seed);
      absorb(verify_source_rewrite(y, p), seed);
    }
    for (const auto& name : order) {
      IdentityCheck c = worst.at(name);
      c.passed = c.max_deviation <= options.tolerance;
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace qgraph
