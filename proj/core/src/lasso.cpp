#include "pdcov/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lasso_engine.hpp"
#include "pdcov/error.hpp"
#include "pdcov/rng.hpp"

namespace pdcov {

std::vector<double> lambda_grid(double lambda_max) {
  std::vector<double> grid(kLambdaGridSize);
  const double last = static_cast<double>(kLambdaGridSize - 1);
  for (std::size_t k = 0; k < kLambdaGridSize; ++k) {
    grid[k] = lambda_max * std::pow(kLambdaMinRatio, static_cast<double>(k) / last);
  }
  return grid;
}

std::vector<std::size_t> fold_assignment(Index n, std::size_t folds,
                                         std::uint64_t seed) {
  if (folds < 2) throw ConfigError("need at least 2 folds");
  if (n < static_cast<Index>(folds)) {
    throw ConfigError("fold count " + std::to_string(folds) +
                      " exceeds sample size " + std::to_string(n));
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng = Rng::stream(seed, 0xf01d5ULL);
  rng.shuffle(std::span<Index>(order));
  std::vector<std::size_t> label(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < order.size(); ++k) {
    label[static_cast<std::size_t>(order[k])] = k % folds;
  }
  return label;
}

namespace detail {

namespace {

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

void check_response(const Eigen::MatrixXd& f, const Eigen::VectorXd& y) {
  if (y.size() != f.rows()) {
    throw InvalidInput("response length " + std::to_string(y.size()) +
                       " does not match design rows " +
                       std::to_string(f.rows()));
  }
  require_finite(Eigen::MatrixXd(y), "response");
}

}  // namespace

bool is_constant_column(const Eigen::Ref<const Eigen::VectorXd>& column,
                        double mean) {
  const double centered = (column.array() - mean).matrix().norm();
  return centered <= 1e-12 * column.norm();
}

StandardizedDesign standardize(const Eigen::MatrixXd& f) {
  const Index n = f.rows();
  const Index k = f.cols();
  StandardizedDesign d;
  d.xs.setZero(n, k);
  d.mean = f.colwise().mean().transpose();
  d.scale.setZero(k);
  d.usable.assign(static_cast<std::size_t>(k), 0);
  for (Index j = 0; j < k; ++j) {
    if (n < 2 || is_constant_column(f.col(j), d.mean(j))) continue;
    const Eigen::VectorXd centered = f.col(j).array() - d.mean(j);
    const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(n));
    d.scale(j) = sd;
    d.xs.col(j) = centered / sd;
    d.usable[static_cast<std::size_t>(j)] = 1;
  }
  return d;
}

LinearFit to_original_scale(const StandardizedDesign& design,
                            const Eigen::VectorXd& beta, double y_mean,
                            double lambda) {
  LinearFit fit;
  fit.lambda = lambda;
  fit.coefficients.setZero(design.cols());
  for (Index j = 0; j < design.cols(); ++j) {
    if (beta(j) != 0.0 && design.usable[static_cast<std::size_t>(j)]) {
      fit.coefficients(j) = beta(j) / design.scale(j);
      fit.support.push_back(j);
    }
  }
  fit.intercept = y_mean - design.mean.dot(fit.coefficients);
  return fit;
}

std::vector<std::string> exclusion_warnings(const StandardizedDesign& design) {
  std::vector<std::string> out;
  for (Index j = 0; j < design.cols(); ++j) {
    if (!design.usable[static_cast<std::size_t>(j)]) {
      out.push_back("column " + std::to_string(j) +
                    " has zero variance; excluded from the penalized set");
    }
  }
  return out;
}

CovarianceLasso::CovarianceLasso(StandardizedDesign design)
    : design_(std::move(design)),
      gram_(static_cast<std::size_t>(design_.cols())),
      have_gram_(static_cast<std::size_t>(design_.cols()), 0) {}

Eigen::VectorXd CovarianceLasso::correlations(
    const Eigen::VectorXd& y_centered) const {
  return design_.xs.transpose() * y_centered / static_cast<double>(rows());
}

const Eigen::VectorXd& CovarianceLasso::gram_column(Index j) {
  const auto u = static_cast<std::size_t>(j);
  if (!have_gram_[u]) {
    gram_[u].noalias() =
        design_.xs.transpose() * design_.xs.col(j) / static_cast<double>(rows());
    have_gram_[u] = 1;
  }
  return gram_[u];
}

void CovarianceLasso::refresh_gradient(const Eigen::VectorXd& c,
                                       const Eigen::VectorXd& beta,
                                       const std::vector<Index>& ever_active,
                                       Eigen::VectorXd& grad) {
  grad = c;
  for (Index j : ever_active) {
    if (beta(j) != 0.0) grad.noalias() -= beta(j) * gram_column(j);
  }
}

void CovarianceLasso::solve_at(const Eigen::VectorXd& c, double y_sq,
                               double lambda, double lambda_prev, Eigen::VectorXd& beta,
                               Eigen::VectorXd& grad,
                               std::vector<Index>& ever_active,
                               const SolverControl& control) {
  const Index k = cols();
  std::vector<char> in_work(static_cast<std::size_t>(k), 0);
  std::vector<Index> work;
  for (Index j : ever_active) {
    in_work[static_cast<std::size_t>(j)] = 1;
    work.push_back(j);
  }
  // Sequential strong rule; anything it wrongly discards is caught by the
  // KKT check below.
  const double strong = 2.0 * lambda - lambda_prev;
  for (Index j = 0; j < k; ++j) {
    const auto u = static_cast<std::size_t>(j);
    if (design_.usable[u] && !in_work[u] && std::abs(grad(j)) >= strong) {
      in_work[u] = 1;
      work.push_back(j);
    }
  }

  const double threshold = control.tol * (y_sq > 0.0 ? y_sq : 1.0);
  std::size_t sweeps = 0;
  // One coordinate sweep over `set`; returns max_j G_jj (change in beta_j)^2.
  auto sweep = [&](const std::vector<Index>& set) {
    double max_change = 0.0;
    for (Index j : set) {
      const Eigen::VectorXd& gj = gram_column(j);
      const double gjj = gj(j);
      const double old = beta(j);
      const double updated = soft_threshold(grad(j) + gjj * old, lambda) / gjj;
      const double delta = updated - old;
      if (delta != 0.0) {
        beta(j) = updated;
        for (Index m : work) grad(m) -= delta * gj(m);
        max_change = std::max(max_change, gjj * delta * delta);
      }
    }
    if (++sweeps > control.max_iter) throw NotConverged{beta, lambda};
    return max_change;
  };
  std::vector<Index> active;
  for (;;) {
    // Full sweeps over the working set, each followed by sweeps over the
    // nonzero coefficients alone until those settle.
    while (sweep(work) >= threshold) {
      active.clear();
      for (Index j : work) {
        if (beta(j) != 0.0) active.push_back(j);
      }
      while (sweep(active) >= threshold) {
      }
    }

    for (Index j : work) {
      if (beta(j) != 0.0 &&
          std::find(ever_active.begin(), ever_active.end(), j) ==
              ever_active.end()) {
        ever_active.push_back(j);
      }
    }
    refresh_gradient(c, beta, ever_active, grad);

    bool violated = false;
    for (Index j = 0; j < k; ++j) {
      const auto u = static_cast<std::size_t>(j);
      if (design_.usable[u] && !in_work[u] && std::abs(grad(j)) > lambda) {
        in_work[u] = 1;
        work.push_back(j);
        violated = true;
      }
    }
    if (!violated) break;
  }
}

std::size_t CovarianceLasso::solve_path(const Eigen::VectorXd& c, double y_sq,
                                        std::span<const double> lambdas,
                                        const SolverControl& control,
                                        bool stop_early,
                                        const PathCallback& on_fit) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(cols());
  Eigen::VectorXd grad = c;
  std::vector<Index> ever_active;
  double lambda_prev = c.size() > 0 ? c.cwiseAbs().maxCoeff() : 0.0;
  double rsq_prev = 0.0;
  std::size_t fitted = 0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double lambda = lambdas[k];
    lambda_prev = std::max(lambda_prev, lambda);
    solve_at(c, y_sq, lambda, lambda_prev, beta, grad, ever_active, control);
    // A centered design has rank at most n - 1; a larger support would make
    // the refit interpolate, so the path ends before it.
    if (stop_early && fitted > 0 &&
        static_cast<Index>((beta.array() != 0.0).count()) >= design_.rows() - 1) {
      break;
    }
    // rss / n = y'y/n - 2 b'c + b'Gb, and Gb = c - grad.
    const double rss = y_sq - beta.dot(c) - beta.dot(grad);
    const double rsq = y_sq > 0.0 ? 1.0 - rss / y_sq : 0.0;
    on_fit(k, beta, rsq);
    ++fitted;
    if (stop_early && fitted >= 5 &&
        (rsq > 0.999 || rsq - rsq_prev < 1e-5 * rsq)) {
      break;
    }
    rsq_prev = rsq;
    lambda_prev = lambda;
  }
  return fitted;
}

Eigen::VectorXd CovarianceLasso::solve(const Eigen::VectorXd& c, double y_sq,
                                       double lambda,
                                       const SolverControl& control) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(cols());
  Eigen::VectorXd grad = c;
  std::vector<Index> ever_active;
  solve_at(c, y_sq, lambda, lambda, beta, grad, ever_active, control);
  return beta;
}

LassoCvWorkspace::LassoCvWorkspace(const Eigen::MatrixXd& f, std::size_t folds,
                                   std::uint64_t seed, SolverControl control)
    : f_(f),
      folds_(folds),
      control_(control),
      full_(standardize(f)) {
  const std::vector<std::size_t> label = fold_assignment(f.rows(), folds, seed);
  parts_.reserve(folds);
  for (std::size_t fold = 0; fold < folds; ++fold) {
    std::vector<Index> train;
    std::vector<Index> test;
    for (Index i = 0; i < f.rows(); ++i) {
      (label[static_cast<std::size_t>(i)] == fold ? test : train).push_back(i);
    }
    const Eigen::MatrixXd sub = f(train, Eigen::all);
    parts_.push_back(Part{std::move(train), std::move(test),
                          CovarianceLasso(standardize(sub))});
  }
}

CvResult LassoCvWorkspace::select(const Eigen::VectorXd& y) {
  check_response(f_, y);
  const Index n = f_.rows();
  const double nd = static_cast<double>(n);
  const double y_mean = y.mean();
  const Eigen::VectorXd yc = y.array() - y_mean;
  const Eigen::VectorXd c = full_.correlations(yc);
  const double lambda_max = c.size() > 0 ? c.cwiseAbs().maxCoeff() : 0.0;

  CvResult result;
  if (!(lambda_max > 0.0)) {
    // Nothing to select: intercept-only model.
    double sse = 0.0;
    for (const Part& part : parts_) {
      const double train_mean = y(part.train).mean();
      for (Index i : part.test) sse += (y(i) - train_mean) * (y(i) - train_mean);
    }
    result.path.push_back({0.0, sse / nd});
    result.fit = to_original_scale(full_.design(), Eigen::VectorXd::Zero(f_.cols()),
                                   y_mean, 0.0);
    result.fit.cv_folds = folds_;
    result.fit.warnings = exclusion_warnings(full_.design());
    return result;
  }

  const std::vector<double> grid = lambda_grid(lambda_max);
  std::vector<Eigen::VectorXd> betas;
  std::size_t length = 0;
  try {
    length = full_.solve_path(c, yc.squaredNorm() / nd, grid, control_, true,
                              [&](std::size_t, const Eigen::VectorXd& b, double) {
                                betas.push_back(b);
                              });
  } catch (const NotConverged& e) {
    throw ConvergenceError("lasso path did not converge at lambda " +
                               std::to_string(e.lambda),
                           to_original_scale(full_.design(), e.beta, y_mean,
                                             e.lambda));
  }

  std::vector<double> sse(length, 0.0);
  const std::span<const double> fold_grid(grid.data(), length);
  for (Part& part : parts_) {
    const Eigen::VectorXd y_train = y(part.train);
    const double train_mean = y_train.mean();
    const Eigen::VectorXd yct = y_train.array() - train_mean;
    const Eigen::VectorXd ct = part.solver.correlations(yct);
    const StandardizedDesign& d = part.solver.design();
    std::vector<Index> nonzero;
    try {
      part.solver.solve_path(
          ct, yct.squaredNorm() / static_cast<double>(yct.size()), fold_grid,
          control_, false,
          [&](std::size_t k, const Eigen::VectorXd& b, double) {
            nonzero.clear();
            for (Index j = 0; j < b.size(); ++j) {
              if (b(j) != 0.0) nonzero.push_back(j);
            }
            for (Index i : part.test) {
              double pred = train_mean;
              for (Index j : nonzero) {
                pred += (f_(i, j) - d.mean(j)) / d.scale(j) * b(j);
              }
              const double r = y(i) - pred;
              sse[k] += r * r;
            }
          });
    } catch (const NotConverged& e) {
      throw ConvergenceError("lasso path did not converge in a CV fold at "
                             "lambda " + std::to_string(e.lambda),
                             to_original_scale(d, e.beta, train_mean, e.lambda));
    }
  }

  result.path.reserve(length);
  for (std::size_t k = 0; k < length; ++k) {
    result.path.push_back({grid[k], sse[k] / nd});
  }
  result.best_index = static_cast<std::size_t>(
      std::min_element(sse.begin(), sse.end()) - sse.begin());
  result.lambda = grid[result.best_index];
  result.fit = to_original_scale(full_.design(), betas[result.best_index],
                                 y_mean, result.lambda);
  result.fit.cv_folds = folds_;
  result.fit.warnings = exclusion_warnings(full_.design());
  return result;
}

}  // namespace detail

LinearFit lasso_coordinate_descent(const DataMatrix& f, const Eigen::VectorXd& y,
                                   double lambda, SolverControl control) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
  detail::check_response(f.values(), y);
  detail::CovarianceLasso solver(detail::standardize(f.values()));
  const double y_mean = y.size() > 0 ? y.mean() : 0.0;
  const Eigen::VectorXd yc = y.array() - y_mean;
  const Eigen::VectorXd c = solver.correlations(yc);
  Eigen::VectorXd beta;
  try {
    beta = solver.solve(c, yc.squaredNorm() / static_cast<double>(yc.size()), lambda,
                        control);
  } catch (const detail::NotConverged& e) {
    throw ConvergenceError(
        "lasso did not converge within " + std::to_string(control.max_iter) +
            " sweeps",
        detail::to_original_scale(solver.design(), e.beta, y_mean, lambda));
  }
  LinearFit fit = detail::to_original_scale(solver.design(), beta, y_mean, lambda);
  fit.warnings = detail::exclusion_warnings(solver.design());
  return fit;
}

double lasso_lambda_max(const DataMatrix& f, const Eigen::VectorXd& y) {
  detail::check_response(f.values(), y);
  const detail::StandardizedDesign d = detail::standardize(f.values());
  if (d.cols() == 0) return 0.0;
  const Eigen::VectorXd yc = y.array() - y.mean();
  return (d.xs.transpose() * yc).cwiseAbs().maxCoeff() /
         static_cast<double>(f.rows());
}

CvResult cv_select_lambda(const DataMatrix& f, const Eigen::VectorXd& y,
                          std::size_t folds, std::uint64_t seed,
                          SolverControl control) {
  detail::LassoCvWorkspace workspace(f.values(), folds, seed, control);
  return workspace.select(y);
}

LinearFit refit_ols(const DataMatrix& f, const Eigen::VectorXd& y,
                    std::span<const Index> support) {
  detail::check_response(f.values(), y);
  const Index n = f.rows();
  std::vector<Index> cols(support.begin(), support.end());
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  for (Index j : cols) {
    if (j < 0 || j >= f.cols()) {
      throw InvalidInput("support index " + std::to_string(j) + " out of range");
    }
  }
  if (static_cast<Index>(cols.size()) >= n) {
    throw InvalidInput("refit support of size " + std::to_string(cols.size()) +
                       " needs more than " + std::to_string(n) + " rows");
  }

  LinearFit fit;
  fit.coefficients.setZero(f.cols());
  fit.support = cols;
  const double y_mean = n > 0 ? y.mean() : 0.0;

  std::vector<Index> kept;
  for (Index j : cols) {
    const double m = f.values().col(j).mean();
    if (detail::is_constant_column(f.values().col(j), m)) {
      fit.warnings.push_back("column " + std::to_string(j) +
                             " is constant; coefficient fixed at 0");
    } else {
      kept.push_back(j);
    }
  }
  if (!kept.empty()) {
    Eigen::MatrixXd x = f.values()(Eigen::all, kept);
    const Eigen::RowVectorXd means = x.colwise().mean();
    x.rowwise() -= means;
    const Eigen::VectorXd yc = y.array() - y_mean;
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(x);
    const Eigen::VectorXd b = cod.solve(yc);
    for (std::size_t k = 0; k < kept.size(); ++k) {
      fit.coefficients(kept[k]) = b(static_cast<Index>(k));
    }
  }
  fit.intercept = y_mean - f.values().colwise().mean().dot(fit.coefficients);
  return fit;
}

}  // namespace pdcov
