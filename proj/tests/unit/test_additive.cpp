#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "pdcov/additive.hpp"
#include "pdcov/error.hpp"
#include "pdcov/lasso.hpp"
#include "test_helpers.hpp"

using namespace pdcov;
using pdcov::testing::normal_matrix;
using pdcov::testing::uniform_matrix;

namespace {

// Cox-de Boor recursion on the full clamped knot vector.
double cox_de_boor(const std::vector<double>& t, int i, int p, double x) {
  if (p == 0) {
    const bool last = t[static_cast<std::size_t>(i) + 1] == t.back() && x == t.back() &&
                      t[static_cast<std::size_t>(i)] < t[static_cast<std::size_t>(i) + 1];
    return (t[static_cast<std::size_t>(i)] <= x && x < t[static_cast<std::size_t>(i) + 1]) ||
                   last
               ? 1.0
               : 0.0;
  }
  double out = 0.0;
  const double d1 = t[static_cast<std::size_t>(i + p)] - t[static_cast<std::size_t>(i)];
  const double d2 = t[static_cast<std::size_t>(i + p + 1)] - t[static_cast<std::size_t>(i + 1)];
  if (d1 > 0) out += (x - t[static_cast<std::size_t>(i)]) / d1 * cox_de_boor(t, i, p - 1, x);
  if (d2 > 0) {
    out += (t[static_cast<std::size_t>(i + p + 1)] - x) / d2 * cox_de_boor(t, i + 1, p - 1, x);
  }
  return out;
}

}  // namespace

TEST(BSpline, MatchesCoxDeBoor) {
  const std::vector<double> interior{0.2, 0.5, 0.7};
  const int degree = 3;
  std::vector<double> knots(degree + 1, 0.0);
  knots.insert(knots.end(), interior.begin(), interior.end());
  knots.insert(knots.end(), degree + 1, 1.0);
  Eigen::VectorXd x(9);
  x << 0.0, 0.05, 0.2, 0.33, 0.5, 0.61, 0.7, 0.95, 1.0;
  const Eigen::MatrixXd b = bspline_basis(x, degree, 0.0, 1.0, interior);
  ASSERT_EQ(b.cols(), static_cast<Index>(interior.size()) + degree + 1);
  for (Index r = 0; r < x.size(); ++r) {
    for (Index c = 0; c < b.cols(); ++c) {
      EXPECT_NEAR(b(r, c), cox_de_boor(knots, static_cast<int>(c), degree, x(r)), 1e-12)
          << "x " << x(r) << " basis " << c;
    }
  }
}

TEST(BSpline, PartitionOfUnityAndNonNegative) {
  const Eigen::VectorXd x = uniform_matrix(200, 1, 3).col(0);
  const Eigen::MatrixXd b = bspline_basis(x, 3, 0.0, 1.0, {0.25, 0.5, 0.75});
  for (Index r = 0; r < b.rows(); ++r) {
    EXPECT_NEAR(b.row(r).sum(), 1.0, 1e-12);
    EXPECT_GE(b.row(r).minCoeff(), 0.0);
  }
}

TEST(AdditiveExpand, BlocksCenteredAndGrouped) {
  const Eigen::MatrixXd f = normal_matrix(100, 3, 4);
  const AdditiveBasis basis = additive_expand(DataMatrix(f), 3, 3);
  EXPECT_EQ(basis.factors(), 3);
  EXPECT_EQ(basis.expanded.rows(), 100);
  EXPECT_EQ(static_cast<Index>(basis.group_index.size()), basis.expanded.cols());
  for (Index c = 0; c < basis.expanded.cols(); ++c) {
    EXPECT_NEAR(basis.expanded.col(c).mean(), 0.0, 1e-12);
  }
  for (Index g = 0; g < 3; ++g) EXPECT_FALSE(basis.columns_of(g).empty());
  EXPECT_TRUE(basis.linear_fallback.empty());
}

TEST(AdditiveExpand, BinaryFactorFallsBackToLinear) {
  Eigen::MatrixXd f = normal_matrix(40, 2, 5);
  for (Index r = 0; r < 40; ++r) f(r, 1) = r % 2;
  const AdditiveBasis basis = additive_expand(DataMatrix(f), 3, 3);
  ASSERT_EQ(basis.linear_fallback.size(), 1u);
  EXPECT_EQ(basis.linear_fallback[0], 1);
  EXPECT_EQ(basis.columns_of(1).size(), 1u);
  EXPECT_FALSE(basis.warnings.empty());
}

TEST(GroupLasso, ZeroAtLambdaMax) {
  const Eigen::MatrixXd f = normal_matrix(80, 4, 6);
  const Eigen::VectorXd y = f.col(0).array().square() + 0.3 * normal_matrix(80, 1, 7).col(0).array();
  const AdditiveBasis basis = additive_expand(DataMatrix(f), 3, 3);
  const double lmax = group_lambda_max(basis, y);
  EXPECT_TRUE(group_lasso_fit(basis, y, lmax).group_support.empty());
  const LinearFit below = group_lasso_fit(basis, y, 0.9 * lmax);
  ASSERT_FALSE(below.group_support.empty());
  EXPECT_EQ(below.group_support[0], 0);
}

TEST(GroupLasso, SingletonGroupsEqualLasso) {
  const Eigen::MatrixXd f = normal_matrix(60, 8, 8);
  Eigen::VectorXd y = (1.5 * f.col(0) - f.col(3)).eval();
  y += 0.5 * normal_matrix(60, 1, 9).col(0);
  const AdditiveBasis basis = linear_groups(DataMatrix(f));
  SolverControl tight;
  tight.tol = 1e-16;
  EXPECT_NEAR(group_lambda_max(basis, y), lasso_lambda_max(DataMatrix(f), y), 1e-12);
  for (double lambda : {0.05, 0.2, 0.6}) {
    const LinearFit g = group_lasso_fit(basis, y, lambda, tight);
    const LinearFit l = lasso_coordinate_descent(DataMatrix(f), y, lambda, tight);
    for (Index j = 0; j < 8; ++j) {
      EXPECT_NEAR(g.coefficients(j), l.coefficients(j), 1e-6) << "lambda " << lambda;
    }
  }
}

TEST(GroupLasso, CrossValidationFindsNonlinearFactor) {
  const Eigen::MatrixXd f = normal_matrix(200, 5, 10);
  const Eigen::VectorXd y =
      f.col(2).array().square() + 0.3 * normal_matrix(200, 1, 11).col(0).array();
  const AdditiveBasis basis = additive_expand(DataMatrix(f), 3, 3);
  const CvResult cv = cv_select_group_lambda(basis, y, 10, 3);
  EXPECT_NE(std::find(cv.fit.group_support.begin(), cv.fit.group_support.end(), 2),
            cv.fit.group_support.end());
  // A square has no linear trend, so the spline fit must beat a linear one.
  const Eigen::VectorXd resid = y - cv.fit.predict(basis.expanded);
  const double rsq = 1.0 - resid.squaredNorm() / (y.array() - y.mean()).square().sum();
  EXPECT_GT(rsq, 0.8);
}
