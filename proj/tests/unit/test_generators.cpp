#include <gtest/gtest.h>

#include <cmath>

#include "pdcov/error.hpp"
#include "pdcov/generators.hpp"

using namespace pdcov;

namespace {

Eigen::MatrixXd sample_cov(const Eigen::MatrixXd& z) {
  const Eigen::MatrixXd c = z.rowwise() - z.colwise().mean();
  return c.transpose() * c / static_cast<double>(z.rows() - 1);
}

double corr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ac = a.array() - a.mean();
  const Eigen::VectorXd bc = b.array() - b.mean();
  return ac.dot(bc) / (ac.norm() * bc.norm());
}

}  // namespace

TEST(Example1, ShapesLoadingsAndDeterminism) {
  const Example1Data a = gen_example1(50, 0.3, 7);
  EXPECT_EQ(a.x.cols(), 5);
  EXPECT_EQ(a.y.cols(), 10);
  EXPECT_EQ(a.f.cols(), 1000);
  EXPECT_TRUE(a.dependent);
  EXPECT_FALSE(gen_example1(50, 0.0, 7).dependent);
  const Example1Data b = gen_example1(50, 0.3, 7);
  EXPECT_EQ(a.x.values(), b.x.values());
  EXPECT_EQ(a.f.values(), b.f.values());
  EXPECT_NE(a.x.values(), gen_example1(50, 0.3, 8).x.values());
  // X minus its error depends on the first three factors only.
  const Eigen::MatrixXd signal = a.x.values() - a.eps_x.values();
  const Eigen::MatrixXd coef =
      a.f.values().leftCols(3).colPivHouseholderQr().solve(signal);
  EXPECT_LT((a.f.values().leftCols(3) * coef - signal).norm(), 1e-8);
  EXPECT_GE(coef.minCoeff(), 2.0 - 1e-9);
  EXPECT_LE(coef.maxCoeff(), 3.0 + 1e-9);
}

TEST(Example1, ErrorsCenteredAndCorrelated) {
  const Example1Data d = gen_example1(20000, 0.4, 3, Example1Options{2, 2, 3});
  const Eigen::MatrixXd& ex = d.eps_x.values();
  const double sd = std::sqrt((std::exp(1.0) - 1.0) * std::exp(1.0));
  for (Index c = 0; c < 2; ++c) {
    EXPECT_LT(std::abs(ex.col(c).mean()), 3.0 * sd / std::sqrt(20000.0));
  }
  // Correlation of exp(Z) for corr(Z) = rho: (e^rho - 1) / (e - 1).
  const double expected = (std::exp(0.4) - 1.0) / (std::exp(1.0) - 1.0);
  EXPECT_NEAR(corr(ex.col(0), d.eps_y.values().col(1)), expected, 0.05);
  const double f_mean = d.f.values().mean();
  EXPECT_NEAR(f_mean, 0.0, 0.03);
}

TEST(Example1, InvalidRho) {
  EXPECT_THROW(gen_example1(50, 1.0, 1), DomainError);
  EXPECT_THROW(gen_example1(50, -0.1, 1), DomainError);
  EXPECT_THROW(gen_example1(5, 0.1, 1), DomainError);
}

TEST(Ar1Sigma, TwoDimensionalClosedForm) {
  const Eigen::MatrixXd s = gen_ar1_sigma(2, 9);
  EXPECT_DOUBLE_EQ(s(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(s(0, 1), s(1, 0));
  const double gap = -std::log(s(0, 1));
  EXPECT_GE(gap, 1.0);
  EXPECT_LE(gap, 3.0);
}

TEST(Ar1Sigma, PrecisionIsTridiagonal) {
  for (Index d : {5, 10, 30}) {
    const Eigen::MatrixXd s = gen_ar1_sigma(d, static_cast<std::uint64_t>(d));
    EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(s).info(), Eigen::Success);
    const Eigen::MatrixXd omega = spd_inverse(s);
    const double top = omega.cwiseAbs().maxCoeff();
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) {
        if (std::abs(i - j) >= 2) {
          EXPECT_LE(std::abs(omega(i, j)), 1e-8 * top);
        }
      }
    }
    EXPECT_EQ(support_of(omega), tridiagonal_truth(d));
  }
}

TEST(Example2, SampleCovarianceConverges) {
  const GraphData g = gen_example2(5000, 6, 4);
  EXPECT_LT((sample_cov(g.z.values()) - g.sigma).cwiseAbs().maxCoeff(), 0.1);
  EXPECT_EQ(g.truth, tridiagonal_truth(6));
  EXPECT_EQ(gen_example2(30, 30, 1).z.cols(), 30);
  EXPECT_EQ(gen_example2(30, 6, 4).z.values(), gen_example2(30, 6, 4).z.values());
}

TEST(Example3, ScaleMixtureProperties) {
  Example3Options o;
  o.t_dim = 4;
  o.ggm_dim = 3;
  o.standard_t_scaling = true;  // finite fourth moments keep the check stable
  const GraphData g = gen_example3(20000, 5, o);
  const Eigen::MatrixXd& z = g.z.values();
  EXPECT_LT(std::abs(corr(z.col(0), z.col(1))), 0.05);
  const Eigen::VectorXd a = z.col(0).array().square();
  const Eigen::VectorXd b = z.col(1).array().square();
  EXPECT_GT(corr(a, b), 0.1);
  EXPECT_LT(std::abs(corr(z.col(0), z.col(5))), 0.05);
  EXPECT_EQ(g.truth(0, 1), 1);
  EXPECT_EQ(g.truth(0, 5), 0);
  EXPECT_EQ(g.truth(4, 5), 1);
  EXPECT_EQ(g.truth(4, 6), 0);
  EXPECT_EQ(g.truth(2, 2), 0);
}

TEST(Example3, UnscaledMixtureIsSmaller) {
  Example3Options raw;
  raw.t_dim = 3;
  raw.ggm_dim = 0;
  Example3Options standard = raw;
  standard.standard_t_scaling = true;
  const auto a = gen_example3(100, 2, raw).z.values();
  const auto b = gen_example3(100, 2, standard).z.values();
  EXPECT_LT((a * std::sqrt(5.0) - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Example4, LoadingsSparsityAndRange) {
  const Eigen::MatrixXd q = sparse_loadings(40, 50, 3);
  const Index nonzero = (q.array() != 0.0).count();
  EXPECT_NEAR(static_cast<double>(nonzero) / 2000.0, 0.2, 0.03);
  for (Index r = 0; r < q.rows(); ++r) {
    for (Index c = 0; c < q.cols(); ++c) {
      if (q(r, c) != 0.0) {
        EXPECT_GE(q(r, c), 0.5);
        EXPECT_LE(q(r, c), 1.0);
      }
    }
  }
}

TEST(Example4, Composition) {
  const GraphData lin = gen_example4(50, 6, 4, FactorShape::linear, 8);
  const GraphData sq = gen_example4(50, 6, 4, FactorShape::square, 8);
  ASSERT_TRUE(lin.f && sq.f);
  EXPECT_EQ(lin.f->values(), sq.f->values());
  const Eigen::MatrixXd u = lin.z.values() - lin.f->values() * lin.q.transpose();
  const Eigen::MatrixXd f2 = sq.f->values().array().square();
  EXPECT_LT((sq.z.values() - f2 * sq.q.transpose() - u).norm(), 1e-10);
  EXPECT_EQ(lin.truth, tridiagonal_truth(6));
}

TEST(Example5, ZeroFactorsReproduceExample3) {
  Example5Options o;
  o.u.t_dim = 5;
  o.u.ggm_dim = 4;
  o.zero_factors = true;
  const GraphData five = gen_example5(60, FactorShape::square, 12, o);
  const GraphData three = gen_example3(60, 12, o.u);
  EXPECT_EQ(five.z.values(), three.z.values());
  EXPECT_EQ(five.truth, three.truth);
  o.zero_factors = false;
  const GraphData a = gen_example5(60, FactorShape::linear, 12, o);
  EXPECT_EQ(a.f->cols(), 30);
  EXPECT_EQ(a.z.values(), gen_example5(60, FactorShape::linear, 12, o).z.values());
  EXPECT_NE(a.z.values(), three.z.values());
}
