#pragma once

// Covariance-mode lasso machinery shared by the public lasso, CV and
// projection entry points. Not installed.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pdcov/data_matrix.hpp"
#include "pdcov/linear_fit.hpp"

namespace pdcov::detail {

// A column is treated as constant when its centered norm is negligible
// next to its raw norm.
bool is_constant_column(const Eigen::Ref<const Eigen::VectorXd>& column,
                        double mean);

struct StandardizedDesign {
  Eigen::MatrixXd xs;  // standardized columns; excluded columns are zero
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // population sd, 0 when excluded
  std::vector<char> usable;

  Index rows() const { return xs.rows(); }
  Index cols() const { return xs.cols(); }
};

StandardizedDesign standardize(const Eigen::MatrixXd& f);

// Coefficients on the standardized scale -> original scale with intercept.
LinearFit to_original_scale(const StandardizedDesign& design,
                            const Eigen::VectorXd& beta, double y_mean,
                            double lambda);

std::vector<std::string> exclusion_warnings(const StandardizedDesign& design);

struct NotConverged {
  Eigen::VectorXd beta;
  double lambda = 0.0;
};

// Solves the standardized lasso from the sufficient statistics
// c = Xs' y / n and the Gram matrix Xs' Xs / n, whose columns are computed
// on first use and cached. Not thread-safe.
class CovarianceLasso {
 public:
  explicit CovarianceLasso(StandardizedDesign design);

  const StandardizedDesign& design() const { return design_; }
  Index rows() const { return design_.rows(); }
  Index cols() const { return design_.cols(); }

  // c = Xs' y_centered / n.
  Eigen::VectorXd correlations(const Eigen::VectorXd& y_centered) const;

  // Called once per fitted lambda with (grid index, beta, R^2).
  using PathCallback =
      std::function<void(std::size_t, const Eigen::VectorXd&, double)>;

  // Fits `lambdas` in order with warm starts. `y_sq` is ||y_c||^2 / n.
  // Returns the number of lambdas fitted; with stop_early the path ends
  // once R^2 > 0.999 or R^2 gains less than 1e-5 relative (after at least
  // five fits), and before a fit with n - 1 or more nonzeros.
  std::size_t solve_path(const Eigen::VectorXd& c, double y_sq,
                         std::span<const double> lambdas,
                         const SolverControl& control, bool stop_early,
                         const PathCallback& on_fit);

  // Single lambda from a zero start.
  Eigen::VectorXd solve(const Eigen::VectorXd& c, double y_sq, double lambda,
                        const SolverControl& control);

 private:
  const Eigen::VectorXd& gram_column(Index j);
  // Converged when max_j G_jj (change in beta_j)^2 < control.tol * y_sq.
  void solve_at(const Eigen::VectorXd& c, double y_sq, double lambda,
                double lambda_prev, Eigen::VectorXd& beta,
                Eigen::VectorXd& grad, std::vector<Index>& ever_active,
                const SolverControl& control);
  void refresh_gradient(const Eigen::VectorXd& c, const Eigen::VectorXd& beta,
                        const std::vector<Index>& ever_active,
                        Eigen::VectorXd& grad);

  StandardizedDesign design_;
  std::vector<Eigen::VectorXd> gram_;
  std::vector<char> have_gram_;
};

// Cross-validation state shared by every response regressed on the same
// design with the same fold seed: per-fold standardizations and Gram
// caches are built once.
class LassoCvWorkspace {
 public:
  LassoCvWorkspace(const Eigen::MatrixXd& f, std::size_t folds,
                   std::uint64_t seed, SolverControl control);

  CvResult select(const Eigen::VectorXd& y);

 private:
  struct Part {
    std::vector<Index> train;
    std::vector<Index> test;
    CovarianceLasso solver;
  };

  Eigen::MatrixXd f_;
  std::size_t folds_;
  SolverControl control_;
  CovarianceLasso full_;
  std::vector<Part> parts_;
};

}  // namespace pdcov::detail
