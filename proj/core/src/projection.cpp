#include "pdcov/projection.hpp"

#include <string>

#include "group_engine.hpp"
#include "lasso_engine.hpp"
#include "pdcov/error.hpp"
#include "pdcov/lasso.hpp"

namespace pdcov {

std::string_view to_string(ProjectionMethod method) {
  switch (method) {
    case ProjectionMethod::ols:
      return "ols";
    case ProjectionMethod::lasso_cv_refit:
      return "lasso_cv_refit";
    case ProjectionMethod::additive_spline:
      return "additive_spline";
  }
  return "unknown";
}

ProjectionMethod parse_projection_method(std::string_view name) {
  if (name == "ols") return ProjectionMethod::ols;
  if (name == "lasso" || name == "lasso_cv_refit") {
    return ProjectionMethod::lasso_cv_refit;
  }
  if (name == "additive" || name == "additive_spline" || name == "sam") {
    return ProjectionMethod::additive_spline;
  }
  throw ConfigError("unknown projection method '" + std::string(name) + "'");
}

namespace {

std::vector<Index> all_columns(Index k) {
  std::vector<Index> out(static_cast<std::size_t>(k));
  for (Index j = 0; j < k; ++j) out[static_cast<std::size_t>(j)] = j;
  return out;
}

void merge_warnings(LinearFit& into, const std::vector<std::string>& extra) {
  into.warnings.insert(into.warnings.end(), extra.begin(), extra.end());
}

}  // namespace

ResidualSet residualize(const DataMatrix& x, const DataMatrix& f,
                        ProjectionMethod method, std::uint64_t seed,
                        const ProjectionOptions& options) {
  if (x.rows() != f.rows()) {
    throw InvalidInput("responses have " + std::to_string(x.rows()) +
                       " rows but factors have " + std::to_string(f.rows()));
  }
  const Index n = x.rows();
  ResidualSet out;
  out.method = method;
  out.fits.reserve(static_cast<std::size_t>(x.cols()));
  Eigen::MatrixXd residuals(n, x.cols());

  switch (method) {
    case ProjectionMethod::ols: {
      const std::vector<Index> support = all_columns(f.cols());
      for (Index j = 0; j < x.cols(); ++j) {
        const Eigen::VectorXd y = x.values().col(j);
        LinearFit fit = refit_ols(f, y, support);
        residuals.col(j) = y - fit.predict(f.values());
        out.fits.push_back(std::move(fit));
      }
      break;
    }
    case ProjectionMethod::lasso_cv_refit: {
      if (f.cols() == 0) {
        return residualize(x, f, ProjectionMethod::ols, seed, options);
      }
      detail::LassoCvWorkspace workspace(f.values(), options.folds, seed,
                                         options.control);
      for (Index j = 0; j < x.cols(); ++j) {
        const Eigen::VectorXd y = x.values().col(j);
        const CvResult cv = workspace.select(y);
        LinearFit fit = refit_ols(f, y, cv.fit.support);
        fit.lambda = cv.lambda;
        fit.cv_folds = options.folds;
        merge_warnings(fit, cv.fit.warnings);
        residuals.col(j) = y - fit.predict(f.values());
        out.fits.push_back(std::move(fit));
      }
      break;
    }
    case ProjectionMethod::additive_spline: {
      out.basis = additive_expand(f, options.degree, options.n_knots);
      const AdditiveBasis& basis = *out.basis;
      const DataMatrix design(basis.expanded);
      if (basis.expanded.cols() == 0) {
        return residualize(x, f, ProjectionMethod::ols, seed, options);
      }
      detail::GroupCvWorkspace workspace(basis, options.folds, seed,
                                         options.control);
      for (Index j = 0; j < x.cols(); ++j) {
        const Eigen::VectorXd y = x.values().col(j);
        const CvResult cv = workspace.select(y);
        LinearFit fit;
        if (static_cast<Index>(cv.fit.support.size()) < n) {
          fit = refit_ols(design, y, cv.fit.support);
        } else {
          fit = cv.fit;
          fit.warnings.push_back("selected blocks too wide to refit; "
                                 "keeping the penalized fit");
        }
        fit.group_support = cv.fit.group_support;
        fit.lambda = cv.lambda;
        fit.cv_folds = options.folds;
        merge_warnings(fit, basis.warnings);
        residuals.col(j) = y - fit.predict(basis.expanded);
        out.fits.push_back(std::move(fit));
      }
      break;
    }
  }
  out.residuals = DataMatrix(std::move(residuals));
  return out;
}

}  // namespace pdcov
