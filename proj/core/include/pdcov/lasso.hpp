#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "pdcov/data_matrix.hpp"
#include "pdcov/linear_fit.hpp"

namespace pdcov {

// Minimizes (1/2n)||y - F b||^2 + lambda ||b||_1 by cyclic coordinate
// descent on internally standardized columns (mean 0, population variance
// 1) and centered y. Zero-variance columns are left out of the penalized
// set and reported in LinearFit::warnings.
LinearFit lasso_coordinate_descent(const DataMatrix& f, const Eigen::VectorXd& y,
                                   double lambda, SolverControl control = {});

// Smallest lambda with an all-zero solution: max_j |F_j' y| / n on the
// standardized scale.
double lasso_lambda_max(const DataMatrix& f, const Eigen::VectorXd& y);

// K-fold cross-validation over lambda_grid(lasso_lambda_max(F, y)), warm
// started along the grid. The path stops early once the full-data fit
// explains 99.9% of the variance or stops improving. Returns the lambda
// with the smallest mean out-of-fold squared error.
CvResult cv_select_lambda(const DataMatrix& f, const Eigen::VectorXd& y,
                          std::size_t folds, std::uint64_t seed,
                          SolverControl control = {});

// Unpenalized least squares on the `support` columns plus an intercept.
// Rank-deficient supports get the minimum-norm solution.
LinearFit refit_ols(const DataMatrix& f, const Eigen::VectorXd& y,
                    std::span<const Index> support);

// Fold label for every row: a seeded shuffle dealt round-robin, so fold
// sizes differ by at most one.
std::vector<std::size_t> fold_assignment(Index n, std::size_t folds,
                                         std::uint64_t seed);

}  // namespace pdcov
