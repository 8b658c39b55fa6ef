#include <gtest/gtest.h>

#include "generators.hpp"
#include "qgraph/coset.hpp"
#include "qgraph/error.hpp"
#include "qgraph/random.hpp"

using namespace qgraph;

namespace {

CosetPoint zero_point(int g, int bonds) {
  return {Supermatrix(g, bond_grades(bonds)), Supermatrix(g, bond_grades(bonds))};
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected qgraph::Error";
  return Errc::internal_consistency;
}

void expect_all_pass(const std::vector<IdentityCheck>& checks, const std::string& where) {
  ASSERT_FALSE(checks.empty()) << where;
  for (const auto& c : checks) EXPECT_LE(c.max_deviation, 1e-9) << where << " " << c.identity;
}

}  // namespace

TEST(Origin, GroupElementIsIdentityAndQIsLambda) {
  const CosetPoint p = zero_point(2, 1);
  const Supermatrix g = build_g(p);
  EXPECT_LT(max_deviation(g, Supermatrix::identity(2, g.row_grades())), 1e-15);
  EXPECT_LT(max_deviation(q_matrix(p), lambda_matrix(2, 1)), 1e-15);
}

TEST(Origin, BareActionVanishes) {
  const Eigen::MatrixXcd b = qgraph::testing::random_unitary(2, 3);
  EXPECT_LT(bare_action(zero_point(2, 2), b).max_abs(), 1e-15);
}

TEST(Action, IdentityElementFixesEveryPoint) {
  const CosetPoint p = random_coset_point(4, 1, 11, CosetProfile::generic);
  const CosetPoint moved = group_action(Supermatrix::identity(4, bond_grades(2)), p);
  EXPECT_LT(max_deviation(moved.z, p.z), 1e-14);
  EXPECT_LT(max_deviation(moved.z_tilde, p.z_tilde), 1e-14);
}

TEST(Action, SingularDenominatorIsUndefined) {
  Eigen::MatrixXcd body = Eigen::MatrixXcd::Zero(4, 4);
  body(0, 0) = body(1, 1) = 1.0;  // D = C = 0, so D + C Z has zero body
  const Supermatrix g0 = Supermatrix::from_body(2, bond_grades(2), body);
  EXPECT_EQ(code_of([&] { group_action(g0, random_coset_point(2, 1, 5, CosetProfile::generic)); }),
            Errc::action_undefined);
}

TEST(Points, OutsideDomainRejected) {
  CosetPoint p = zero_point(2, 1);
  p.z(0, 0).set_coefficient(0, 1.5);
  EXPECT_EQ(code_of([&] { validate_coset_point(p); }), Errc::invalid_coset_point);
  EXPECT_EQ(code_of([&] { build_g(p); }), Errc::invalid_coset_point);
}

TEST(Points, PhysicalProfileConjugationRelations) {
  const CosetPoint p = random_coset_point(4, 2, 21, CosetProfile::physical);
  for (int b = 0; b < 2; ++b) {
    const int bb = 2 * b, ff = 2 * b + 1;
    EXPECT_LT(max_deviation(p.z(bb, bb), p.z_tilde(bb, bb).conj()), 1e-15);
    EXPECT_LT(max_deviation(p.z(ff, ff), -p.z_tilde(ff, ff).conj()), 1e-15);
  }
  EXPECT_TRUE(p.z.grading_consistent());
  EXPECT_NO_THROW(validate_coset_point(p));
}

TEST(Points, DeterministicGivenSeed) {
  const CosetPoint a = random_coset_point(4, 2, 9, CosetProfile::generic);
  const CosetPoint b = random_coset_point(4, 2, 9, CosetProfile::generic);
  EXPECT_EQ(max_deviation(a.z, b.z), 0.0);
  EXPECT_EQ(max_deviation(a.z_tilde, b.z_tilde), 0.0);
}

TEST(Matrices, LambdaAndSigmaSquareToOne) {
  const Supermatrix l = lambda_matrix(2, 2);
  EXPECT_LT(max_deviation(l * l, Supermatrix::identity(2, l.row_grades())), 1e-15);
  const Supermatrix s = sigma3(2);
  EXPECT_LT(max_deviation(s * s, Supermatrix::identity(2, s.row_grades())), 1e-15);
}

// Property: every identity at random points for G = 2, 4, 6 and both profiles.
TEST(CosetProperty, IdentitiesHoldAtRandomPoints) {
  for (CosetProfile profile : {CosetProfile::generic, CosetProfile::physical})
    for (int g : {2, 4, 6})
      for (std::uint64_t s = 0; s < 2; ++s) {
        const std::string where = "G=" + std::to_string(g) + " seed=" + std::to_string(s);
        const std::uint64_t seed = derive_seed(1000 + s, g);
        const CosetPoint p = random_coset_point(g, 1, derive_seed(seed, 1), profile);
        const CosetPoint p2 = random_coset_point(g, 2, derive_seed(seed, 2), profile);
        const CosetPoint y = random_coset_point(g, 1, derive_seed(seed, 3), profile);
        const Supermatrix g0 = random_group_element(g, derive_seed(seed, 4));
        const Supermatrix g1 = random_group_element(g, derive_seed(seed, 5));
        const Eigen::MatrixXcd b = qgraph::testing::random_unitary(2, seed);
        expect_all_pass(verify_build_g(p), where);
        expect_all_pass(verify_composition(g0, g1, p), where);
        expect_all_pass(verify_invariance(g0, p2, b), where);
        expect_all_pass(verify_mode_split(g0, p), where);
        expect_all_pass(verify_psi_transform(p2, b), where);
        expect_all_pass(verify_source_rewrite(y, p), where);
      }
}

// Negative control: a non-unitary B breaks the invariance of the bare action,
// and the check must notice.
TEST(CosetProperty, InvarianceCheckDetectsNonUnitaryMixing) {
  const CosetPoint p2 = random_coset_point(2, 2, 31, CosetProfile::generic);
  const Supermatrix g0 = random_group_element(2, 32);
  Eigen::MatrixXcd b(2, 2);
  b << 0.9, 0.3, -0.2, 0.7;
  double worst = 0.0;
  for (const auto& c : verify_invariance(g0, p2, b))
    if (c.identity == "bare-action-invariance") worst = c.max_deviation;
  EXPECT_GT(worst, 1e-6);
}

TEST(Suite, ReportsWorstCasePerIdentityAndGeneratorCount) {
  CosetSuiteOptions opts;
  opts.generator_counts = {2, 4};
  opts.points = 2;
  const auto checks = run_coset_suite(opts);
  ASSERT_FALSE(checks.empty());
  EXPECT_EQ(checks.size() % 2, 0u);
  int at_two = 0;
  for (const auto& c : checks) {
    EXPECT_TRUE(c.passed) << c.identity << " " << c.max_deviation;
    EXPECT_EQ(c.tolerance, 1e-9);
    at_two += c.generators == 2;
  }
  EXPECT_EQ(2 * at_two, static_cast<int>(checks.size()));
  opts.points = 0;
  EXPECT_THROW(run_coset_suite(opts), Error);
}
