#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdcov/data_matrix.hpp"
#include "pdcov/linear_fit.hpp"

namespace pdcov {

// Per-factor B-spline expansion. Each factor contributes one block of
// column-centered basis functions; group_index maps every expanded column
// back to its source factor.
struct AdditiveBasis {
  int degree = 3;
  // Interior knots per factor (empty for linear fallbacks).
  std::vector<std::vector<double>> internal_knots;
  // Boundary knots (min, max) per factor.
  std::vector<std::pair<double, double>> boundary;
  Eigen::MatrixXd expanded;
  std::vector<Index> group_index;
  // Factors expanded as a single centered linear column.
  std::vector<Index> linear_fallback;
  std::vector<std::string> warnings;

  Index factors() const { return static_cast<Index>(internal_knots.size()); }
  // Expanded columns that belong to factor g.
  std::vector<Index> columns_of(Index g) const;
};

// B-spline basis of the given degree on a clamped knot vector built from
// [lo, hi] and `interior`; one row per x, n_interior + degree + 1 columns.
// The basis is a partition of unity on [lo, hi].
Eigen::MatrixXd bspline_basis(const Eigen::VectorXd& x, int degree,
                              double lo, double hi,
                              const std::vector<double>& interior);

// Knots at the i/(n_knots+1) sample quantiles, i = 1..n_knots. A factor
// with fewer than n_knots + 2 distinct values (or coinciding quantiles)
// falls back to its centered linear term with a warning.
AdditiveBasis additive_expand(const DataMatrix& f, int degree, int n_knots);

// Every column of `f` as its own single-column group, centered.
AdditiveBasis linear_groups(const DataMatrix& f);

// Smallest lambda for which every block is zero:
// max_g ||Q_g' y_c|| / n with Q_g the block orthonormalized so that
// Q_g' Q_g / n = I (for one-column groups, the standardized column).
double group_lambda_max(const AdditiveBasis& basis, const Eigen::VectorXd& y);

// Minimizes (1/2n)||y - X b||^2 + lambda sum_g ||Q-coordinates of b_g||_2
// by block coordinate descent with group soft-thresholding on the
// orthonormalized blocks. Whole factor blocks are zeroed or kept together;
// LinearFit::group_support lists the kept factors.
LinearFit group_lasso_fit(const AdditiveBasis& basis, const Eigen::VectorXd& y,
                          double lambda, SolverControl control = {});

// K-fold cross-validation over lambda_grid(group_lambda_max(...)).
CvResult cv_select_group_lambda(const AdditiveBasis& basis,
                                const Eigen::VectorXd& y, std::size_t folds,
                                std::uint64_t seed, SolverControl control = {});

}  // namespace pdcov
