#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "qgraph/error.hpp"
#include "qgraph/supermatrix.hpp"

using namespace qgraph;
using qgraph::testing::random_even_supermatrix;

namespace {

const std::vector<Grade> kGrades = {Grade::boson, Grade::fermion, Grade::boson, Grade::fermion};

Supermatrix one(int g, const std::vector<Grade>& grades = kGrades) { return Supermatrix::identity(g, grades); }

}  // namespace

TEST(Supertrace, BodyOnlyExample) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m.diagonal() << 1.0, 2.0, 5.0, 7.0;
  EXPECT_NEAR(std::abs(Supermatrix::from_body(2, kGrades, m).str().body() - std::complex<double>(-3.0, 0.0)), 0.0, 1e-15);
}

TEST(Grading, OddDiagonalEntryDetected) {
  Supermatrix m = one(2);
  EXPECT_TRUE(m.grading_consistent());
  m(0, 0) += GrassmannElement::generator(2, 0);
  EXPECT_FALSE(m.grading_consistent());
}

TEST(Blocks, RoundTrip) {
  const Supermatrix m = random_even_supermatrix(3, kGrades, 1);
  const Supermatrix rebuilt = block_matrix(m.block(0, 0, 2, 2), m.block(0, 2, 2, 2), m.block(2, 0, 2, 2),
                                           m.block(2, 2, 2, 2));
  EXPECT_LT(max_deviation(rebuilt, m), 1e-15);
}

TEST(Inverse, SingularBodyRejected) {
  Supermatrix m(2, kGrades);
  EXPECT_THROW(m.inverse(), Error);
}

TEST(Series, LargeBodyRequiresRescale) {
  const Supermatrix x = Supermatrix::from_body(2, kGrades, 0.97 * Eigen::MatrixXcd::Identity(4, 4));
  try {
    inverse_sqrt_one_minus(x);
    FAIL() << "expected rescale_required";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::rescale_required);
  }
}

// Body-only matrices: STr ln(1 - X) = ln det(1 - X_BB) - ln det(1 - X_FF).
TEST(StrLog, BodyOnlyMatchesDeterminants) {
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(4, 4);
  b(0, 0) = 0.3;
  b(0, 2) = 0.2;
  b(2, 0) = -0.1;
  b(2, 2) = 0.5;
  b(1, 1) = 0.4;
  b(3, 3) = -0.2;
  b(1, 3) = 0.25;
  const Supermatrix x = Supermatrix::from_body(2, kGrades, b);
  Eigen::Matrix2cd bb, ff;
  bb << 1.0 - b(0, 0), -b(0, 2), -b(2, 0), 1.0 - b(2, 2);
  ff << 1.0 - b(1, 1), -b(1, 3), -b(3, 1), 1.0 - b(3, 3);
  const std::complex<double> expected = std::log(bb.determinant()) - std::log(ff.determinant());
  EXPECT_LT(std::abs(str_log_one_minus(x).body() - expected), 1e-14);
  EXPECT_LT(str_log_one_minus(x).nilpotent_part().max_abs(), 1e-15);
}

// Property: STr(AB) = STr(BA) for even supermatrices.
TEST(SupermatrixProperty, SupertraceIsCyclic) {
  for (int g : {2, 4, 6})
    for (std::uint64_t s = 0; s < 4; ++s) {
      const Supermatrix a = random_even_supermatrix(g, kGrades, 10 * g + s, 0.7);
      const Supermatrix b = random_even_supermatrix(g, kGrades, 100 * g + s, 0.7);
      EXPECT_LT(max_deviation((a * b).str(), (b * a).str()), 1e-12);
      EXPECT_TRUE((a * b).grading_consistent(1e-14));
    }
}

// Property: inverse on both sides.
TEST(SupermatrixProperty, InverseBothSides) {
  for (int g : {2, 4, 6})
    for (std::uint64_t s = 0; s < 4; ++s) {
      const Supermatrix a = one(g) + random_even_supermatrix(g, kGrades, 7 * g + s, 0.4);
      const Supermatrix inv = a.inverse();
      // Nilpotent coefficients grow combinatorially with G; scale accordingly.
      const double scale = std::max(1.0, a.max_abs() * inv.max_abs());
      EXPECT_LT(max_deviation(a * inv, one(g)), 1e-13 * scale) << scale;
      EXPECT_LT(max_deviation(inv * a, one(g)), 1e-13 * scale) << scale;
    }
}

// Property: (1 - X)^(-1/2) squared inverts 1 - X; same for 1 + X.
TEST(SupermatrixProperty, InverseSquareRoots) {
  for (int g : {2, 4})
    for (std::uint64_t s = 0; s < 3; ++s) {
      const Supermatrix x = random_even_supermatrix(g, kGrades, 31 * g + s, 0.15);
      const Supermatrix r = inverse_sqrt_one_minus(x);
      EXPECT_LT(max_deviation(r * r * (one(g) - x), one(g)), 1e-11);
      const Supermatrix p = inverse_sqrt_one_plus(x);
      EXPECT_LT(max_deviation(p * p * (one(g) + x), one(g)), 1e-11);
    }
}

// Property: the exact STr ln agrees with the supertrace of the log series and
// is additive over products, STr ln((1-X)(1-Y)) = STr ln(1-X) + STr ln(1-Y).
TEST(SupermatrixProperty, StrLogExactAndAdditive) {
  for (int g : {2, 4, 6})
    for (std::uint64_t s = 0; s < 3; ++s) {
      const Supermatrix x = random_even_supermatrix(g, kGrades, 53 * g + s, 0.15);
      const Supermatrix y = random_even_supermatrix(g, kGrades, 59 * g + s, 0.15);
      EXPECT_LT(max_deviation(str_log_one_minus(x), log_one_minus(x).str()), 1e-11);
      const Supermatrix z = x + y - x * y;
      EXPECT_LT(max_deviation(str_log_one_minus(z), str_log_one_minus(x) + str_log_one_minus(y)), 1e-11);
    }
}

// The exact STr ln needs no series in the body, so body norms past the
// series limit are fine as long as 1 - X stays invertible.
TEST(StrLog, LargeBodyHandledExactly) {
  Supermatrix x = random_even_supermatrix(4, kGrades, 77, 0.1);
  for (int i = 0; i < 4; ++i) x(i, i).set_coefficient(0, 1.6);
  const Supermatrix y = random_even_supermatrix(4, kGrades, 78, 0.1);
  const Supermatrix z = x + y - x * y;
  EXPECT_LT(max_deviation(str_log_one_minus(z) - str_log_one_minus(x) - str_log_one_minus(y),
                          GrassmannElement(4)),
            1e-10);
}
