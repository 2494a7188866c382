#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdcov/data_matrix.hpp"
#include "pdcov/error.hpp"

namespace pdcov {

// One response regressed on a design: coefficients on the original column
// scale plus an unpenalized intercept. coefficients[j] == 0 for every j
// not listed in `support`.
struct LinearFit {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  std::vector<Index> support;
  // Source-factor groups with a nonzero block (group-penalized fits only).
  std::vector<Index> group_support;
  double lambda = 0.0;
  std::size_t cv_folds = 0;
  std::vector<std::string> warnings;

  Eigen::VectorXd predict(const Eigen::MatrixXd& design) const {
    return (design * coefficients).array() + intercept;
  }
};

// Coordinate descent hit its sweep limit. Carries the last iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, LinearFit last)
      : Error(what), last_(std::move(last)) {}
  const LinearFit& last_iterate() const { return last_; }

 private:
  LinearFit last_;
};

struct SolverControl {
  // Converged once a full sweep moves no coefficient by more than
  // max_j G_jj (delta b_j)^2 < tol * var(y), on the standardized scale
  // (G = X'X / n).
  double tol = 1e-7;
  std::size_t max_iter = 100000;
};

struct CvPoint {
  double lambda = 0.0;
  double cv_error = 0.0;
};

struct CvResult {
  double lambda = 0.0;
  std::size_t best_index = 0;
  std::vector<CvPoint> path;
  // Full-data fit at the selected lambda.
  LinearFit fit;
};

inline constexpr std::size_t kLambdaGridSize = 100;
inline constexpr double kLambdaMinRatio = 1e-3;

// kLambdaGridSize log-spaced values from lambda_max down to
// kLambdaMinRatio * lambda_max.
std::vector<double> lambda_grid(double lambda_max);

}  // namespace pdcov
