#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pdcov/additive.hpp"
#include "pdcov/data_matrix.hpp"
#include "pdcov/linear_fit.hpp"

namespace pdcov {

enum class ProjectionMethod {
  ols,             // least squares on every factor
  lasso_cv_refit,  // CV lasso, then least squares on the selected support
  additive_spline  // cubic B-spline blocks, CV group lasso, then refit
};

std::string_view to_string(ProjectionMethod method);
// Accepts "ols", "lasso", "lasso_cv_refit", "additive", "additive_spline".
ProjectionMethod parse_projection_method(std::string_view name);

struct ProjectionOptions {
  std::size_t folds = 10;
  int degree = 3;
  int n_knots = 3;
  SolverControl control;
};

// Residuals of every response column after projecting on the factors.
// residuals.col(j) = x.col(j) - fits[j].predict(design()).
struct ResidualSet {
  DataMatrix residuals;
  std::vector<LinearFit> fits;
  ProjectionMethod method = ProjectionMethod::ols;
  // Expanded design used by the fits (additive_spline only).
  std::optional<AdditiveBasis> basis;
};

// All response columns share one fold assignment drawn from `seed`.
ResidualSet residualize(const DataMatrix& x, const DataMatrix& f,
                        ProjectionMethod method, std::uint64_t seed,
                        const ProjectionOptions& options = {});

}  // namespace pdcov
