#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qgraph/scattering.hpp"
#include "qgraph/supermatrix.hpp"

namespace qgraph {

/// Local coset coordinates (Z, Zt): square supermatrices over `bonds`
/// directed-bond blocks, each block graded (boson, fermion).
struct CosetPoint {
  Supermatrix z;
  Supermatrix z_tilde;
  int bonds() const noexcept { return z.rows() / 2; }
};

/// generic: independent random coefficients. physical: additionally
/// Z_BB = conj(Zt_BB) and Z_FF = -conj(Zt_FF) (coefficientwise conjugation).
enum class CosetProfile { generic, physical };

/// Grades (B, F) repeated `bonds` times.
std::vector<Grade> bond_grades(int bonds);

/// Throws invalid_coset_point unless each block has |body(Z_BB)| < 1 and
/// the body of 1 - Z Zt is invertible.
void validate_coset_point(const CosetPoint& p);

/// Random point, block diagonal over bonds; bodies scaled so the body of Z
/// and Zt has spectral norm `body_norm`.
CosetPoint random_coset_point(int generators, int bonds, std::uint64_t seed, CosetProfile profile,
                              double body_norm = 0.5);

/// 4x4 group element 1 + spread * R with grading-consistent random R.
Supermatrix random_group_element(int generators, std::uint64_t seed, double spread = 0.25);

Supermatrix sigma3(int generators);
/// diag(1, -1) in retarded/advanced blocks of size 2 * bonds.
Supermatrix lambda_matrix(int generators, int bonds);

/// Q written out in blocks of Z and Zt.
Supermatrix q_matrix(const CosetPoint& p);
/// g(Z) with (1 - Z Zt)^(-1/2) blocks; validates the point.
Supermatrix build_g(const CosetPoint& p);

struct GroupBlocks {
  Supermatrix a, b, c, d;
};
/// Blocks of a 4x4 element, lifted to 1_bonds (x) block when bonds > 1.
GroupBlocks group_blocks(const Supermatrix& g0, int bonds = 1);

/// (A Z + B)(D + C Z)^-1 and (D Zt + C)(A + B Zt)^-1; action_undefined when
/// a denominator body is singular.
CosetPoint group_action(const Supermatrix& g0, const CosetPoint& p);

/// -STr ln(1 - Z Zt) + STr ln(1 - B Z B^dag Zt), with B lifted to B (x) 1_s.
GrassmannElement bare_action(const CosetPoint& p, const Eigen::MatrixXcd& bcal, const SeriesOptions& options = {});

struct IdentityCheck {
  std::string identity;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::uint64_t seed = 0;
  int generators = 0;
};

/// Q = g Lambda g^-1 against the block form, Q^2 = 1, B D^-1 = Z, C A^-1 = Zt.
std::vector<IdentityCheck> verify_build_g(const CosetPoint& p);
/// (g0 g1) . Z = g0 . (g1 . Z) for both Z and Zt.
std::vector<IdentityCheck> verify_composition(const Supermatrix& g0, const Supermatrix& g1, const CosetPoint& p);
/// Invariance of the bare action under Z -> g0 . Z with B mixing bonds, the
/// proviso g0 . (B Z B^dag) = B (g0 . Z) B^dag, and A_bare(zeta) = A_bare(xi).
std::vector<IdentityCheck> verify_invariance(const Supermatrix& g0, const CosetPoint& p, const Eigen::MatrixXcd& bcal);
/// g0 . zeta = (Y + xi)(1 + Yt xi)^-1 with Y = B0 D0^-1, xi = A0 zeta D0^-1,
/// and the tilde counterpart.
std::vector<IdentityCheck> verify_mode_split(const Supermatrix& g0, const CosetPoint& zeta);
/// psi = xi (1 - xit xi)^(-1/2) and back; [Q Lambda - 1]_{++} = 2 psi psit,
/// [Q Lambda - 1]_{--} = 2 psit psi; quadratic part of the bare action in
/// psi equals STr(psi psit - B psi B^dag psit).
std::vector<IdentityCheck> verify_psi_transform(const CosetPoint& xi, const Eigen::MatrixXcd& bcal);
/// The three source-term rewrites with Z, Zt built from (Y, xi).
std::vector<IdentityCheck> verify_source_rewrite(const CosetPoint& y, const CosetPoint& xi);

struct CosetSuiteOptions {
  std::vector<int> generator_counts{2, 4, 6};
  int points = 20;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  CosetProfile profile = CosetProfile::generic;
};

/// Runs every verification over random points; one entry per
/// (identity, generator count) with the worst deviation.
std::vector<IdentityCheck> run_coset_suite(const CosetSuiteOptions& options);

}  // namespace qgraph
