#include "pdcov/additive.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "group_engine.hpp"
#include "lasso_engine.hpp"
#include "pdcov/error.hpp"
#include "pdcov/lasso.hpp"

namespace pdcov {

std::vector<Index> AdditiveBasis::columns_of(Index g) const {
  std::vector<Index> out;
  for (std::size_t c = 0; c < group_index.size(); ++c) {
    if (group_index[c] == g) out.push_back(static_cast<Index>(c));
  }
  return out;
}

Eigen::MatrixXd bspline_basis(const Eigen::VectorXd& x, int degree, double lo,
                              double hi, const std::vector<double>& interior) {
  if (degree < 0) throw DomainError("spline degree must be non-negative");
  if (!(hi > lo)) throw DomainError("spline range must have hi > lo");
  const int p = degree;
  std::vector<double> t;
  t.insert(t.end(), static_cast<std::size_t>(p + 1), lo);
  t.insert(t.end(), interior.begin(), interior.end());
  t.insert(t.end(), static_cast<std::size_t>(p + 1), hi);
  const int m = static_cast<int>(interior.size()) + p + 1;

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.size(), m);
  std::vector<double> left(static_cast<std::size_t>(p + 1));
  std::vector<double> right(static_cast<std::size_t>(p + 1));
  std::vector<double> basis(static_cast<std::size_t>(p + 1));
  for (Index row = 0; row < x.size(); ++row) {
    const double u = std::clamp(x(row), lo, hi);
    // Knot span: t[span] <= u < t[span + 1], last span closed on the right.
    int span = m - 1;
    if (u < hi) {
      span = static_cast<int>(std::upper_bound(t.begin() + p, t.begin() + m, u) -
                              t.begin()) - 1;
    }
    basis[0] = 1.0;
    for (int j = 1; j <= p; ++j) {
      left[static_cast<std::size_t>(j)] = u - t[static_cast<std::size_t>(span + 1 - j)];
      right[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(span + j)] - u;
      double saved = 0.0;
      for (int r = 0; r < j; ++r) {
        const double denom = right[static_cast<std::size_t>(r + 1)] +
                             left[static_cast<std::size_t>(j - r)];
        const double temp = basis[static_cast<std::size_t>(r)] / denom;
        basis[static_cast<std::size_t>(r)] =
            saved + right[static_cast<std::size_t>(r + 1)] * temp;
        saved = left[static_cast<std::size_t>(j - r)] * temp;
      }
      basis[static_cast<std::size_t>(j)] = saved;
    }
    for (int j = 0; j <= p; ++j) {
      out(row, span - p + j) = basis[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

namespace {

// Linear interpolation between order statistics (R's type 7).
double quantile_sorted(const std::vector<double>& sorted, double prob) {
  const double h = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void append_block(AdditiveBasis& basis, const Eigen::MatrixXd& block, Index g) {
  Eigen::MatrixXd centered = block;
  centered.rowwise() -= block.colwise().mean();
  const Index start = basis.expanded.cols();
  basis.expanded.conservativeResize(block.rows(), start + block.cols());
  basis.expanded.rightCols(block.cols()) = centered;
  for (Index c = 0; c < block.cols(); ++c) basis.group_index.push_back(g);
}

}  // namespace

AdditiveBasis additive_expand(const DataMatrix& f, int degree, int n_knots) {
  if (degree < 1) throw DomainError("spline degree must be >= 1");
  if (n_knots < 0) throw DomainError("knot count must be >= 0");
  AdditiveBasis basis;
  basis.degree = degree;
  basis.expanded.resize(f.rows(), 0);
  for (Index g = 0; g < f.cols(); ++g) {
    const Eigen::VectorXd x = f.values().col(g);
    std::vector<double> sorted(x.data(), x.data() + x.size());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> uniq = sorted;
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

    std::vector<double> knots;
    bool fallback = static_cast<int>(uniq.size()) < n_knots + 2;
    if (!fallback) {
      const double lo = sorted.front();
      const double hi = sorted.back();
      double prev = lo;
      for (int i = 1; i <= n_knots; ++i) {
        const double k = quantile_sorted(sorted, static_cast<double>(i) /
                                                     static_cast<double>(n_knots + 1));
        if (!(k > prev)) {
          fallback = true;
          break;
        }
        knots.push_back(k);
        prev = k;
      }
      if (!fallback && !(hi > prev)) fallback = true;
    }

    basis.boundary.emplace_back(sorted.empty() ? 0.0 : sorted.front(),
                                sorted.empty() ? 0.0 : sorted.back());
    if (fallback) {
      basis.warnings.push_back("factor " + std::to_string(g) + " has " +
                               std::to_string(uniq.size()) +
                               " distinct values; using a linear term");
      basis.linear_fallback.push_back(g);
      basis.internal_knots.emplace_back();
      append_block(basis, Eigen::MatrixXd(x), g);
      continue;
    }
    basis.internal_knots.push_back(knots);
    append_block(basis,
                 bspline_basis(x, degree, sorted.front(), sorted.back(), knots), g);
  }
  return basis;
}

AdditiveBasis linear_groups(const DataMatrix& f) {
  AdditiveBasis basis;
  basis.degree = 1;
  basis.expanded.resize(f.rows(), 0);
  for (Index g = 0; g < f.cols(); ++g) {
    const Eigen::VectorXd x = f.values().col(g);
    basis.internal_knots.emplace_back();
    basis.boundary.emplace_back(x.size() ? x.minCoeff() : 0.0,
                                x.size() ? x.maxCoeff() : 0.0);
    basis.linear_fallback.push_back(g);
    append_block(basis, Eigen::MatrixXd(x), g);
  }
  return basis;
}

namespace detail {

GroupDesign orthonormalize(const Eigen::MatrixXd& x,
                           const std::vector<Index>& group_index,
                           Index factors) {
  GroupDesign d;
  d.rows = x.rows();
  d.total_columns = x.cols();
  d.column_mean = x.colwise().mean().transpose();
  d.groups.resize(static_cast<std::size_t>(factors));
  for (Index c = 0; c < x.cols(); ++c) {
    d.groups[static_cast<std::size_t>(group_index[static_cast<std::size_t>(c)])]
        .columns.push_back(c);
  }
  const double n = static_cast<double>(x.rows());
  for (OrthoGroup& g : d.groups) {
    std::vector<Index> live;
    for (Index c : g.columns) {
      if (x.rows() >= 2 && !is_constant_column(x.col(c), d.column_mean(c))) {
        live.push_back(c);
      }
    }
    const auto m = static_cast<Index>(g.columns.size());
    g.q.resize(x.rows(), 0);
    g.back.resize(m, 0);
    if (live.empty()) continue;

    Eigen::MatrixXd block(x.rows(), m);
    for (Index k = 0; k < m; ++k) {
      block.col(k) = x.col(g.columns[static_cast<std::size_t>(k)]).array() -
                     d.column_mean(g.columns[static_cast<std::size_t>(k)]);
      if (std::find(live.begin(), live.end(),
                    g.columns[static_cast<std::size_t>(k)]) == live.end()) {
        block.col(k).setZero();
      }
    }
    const Eigen::MatrixXd cov = block.transpose() * block / n;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double top = values.maxCoeff();
    std::vector<Index> keep;
    for (Index k = 0; k < values.size(); ++k) {
      if (values(k) > 1e-10 * top) keep.push_back(k);
    }
    g.back.resize(m, static_cast<Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
      g.back.col(static_cast<Index>(k)) =
          eig.eigenvectors().col(keep[k]) / std::sqrt(values(keep[k]));
    }
    g.q = block * g.back;
  }
  return d;
}

std::size_t solve_group_path(const GroupDesign& design,
                             const Eigen::VectorXd& y_centered,
                             std::span<const double> lambdas,
                             const SolverControl& control, bool stop_early,
                             const GroupPathCallback& on_fit) {
  const double n = static_cast<double>(design.rows);
  const std::size_t groups = design.groups.size();
  std::vector<Eigen::VectorXd> theta(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    theta[g].setZero(design.groups[g].q.cols());
  }
  Eigen::VectorXd residual = y_centered;
  const double y_sq = y_centered.squaredNorm();
  double rsq_prev = 0.0;
  std::size_t fitted = 0;
  std::size_t sweeps = 0;
  // Blocks have q'q / n = I, so ||delta||^2 is the scaled change; same
  // stopping rule as the coordinate-wise lasso.
  const double threshold = control.tol * (y_sq > 0.0 ? y_sq / n : 1.0);

  auto update = [&](std::size_t g, double lambda) {
    const OrthoGroup& grp = design.groups[g];
    if (grp.q.cols() == 0) return 0.0;
    const Eigen::VectorXd z = grp.q.transpose() * residual / n + theta[g];
    const double norm = z.norm();
    Eigen::VectorXd updated = Eigen::VectorXd::Zero(z.size());
    if (norm > lambda) updated = (1.0 - lambda / norm) * z;
    const Eigen::VectorXd delta = updated - theta[g];
    const double change = delta.squaredNorm();
    if (change != 0.0) {
      residual.noalias() -= grp.q * delta;
      theta[g] = updated;
    }
    return change;
  };

  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double lambda = lambdas[k];
    for (;;) {
      double full_change = 0.0;
      for (std::size_t g = 0; g < groups; ++g) {
        full_change = std::max(full_change, update(g, lambda));
      }
      if (++sweeps > control.max_iter) {
        throw ConvergenceError("group lasso did not converge",
                               group_fit_from_theta(design, theta, 0.0, lambda));
      }
      if (full_change < threshold) break;
      // Cycle over the nonzero blocks until they settle, then re-check all.
      for (;;) {
        double change = 0.0;
        for (std::size_t g = 0; g < groups; ++g) {
          if (theta[g].size() > 0 && !theta[g].isZero(0.0)) {
            change = std::max(change, update(g, lambda));
          }
        }
        if (++sweeps > control.max_iter) {
          throw ConvergenceError("group lasso did not converge",
                                 group_fit_from_theta(design, theta, 0.0, lambda));
        }
        if (change < threshold) break;
      }
    }
    if (stop_early && fitted > 0) {
      Index active = 0;
      for (std::size_t g = 0; g < groups; ++g) {
        if (theta[g].size() > 0 && !theta[g].isZero(0.0)) active += theta[g].size();
      }
      if (active >= design.rows - 1) break;
    }
    const double rsq = y_sq > 0.0 ? 1.0 - residual.squaredNorm() / y_sq : 0.0;
    on_fit(k, theta, rsq);
    ++fitted;
    if (stop_early && fitted >= 5 &&
        (rsq > 0.999 || rsq - rsq_prev < 1e-5 * rsq)) {
      break;
    }
    rsq_prev = rsq;
  }
  return fitted;
}

LinearFit group_fit_from_theta(const GroupDesign& design,
                               const std::vector<Eigen::VectorXd>& theta,
                               double y_mean, double lambda) {
  LinearFit fit;
  fit.lambda = lambda;
  fit.coefficients.setZero(design.total_columns);
  for (std::size_t g = 0; g < design.groups.size(); ++g) {
    const OrthoGroup& grp = design.groups[g];
    if (theta[g].size() == 0 || theta[g].isZero(0.0)) continue;
    const Eigen::VectorXd b = grp.back * theta[g];
    for (std::size_t k = 0; k < grp.columns.size(); ++k) {
      fit.coefficients(grp.columns[k]) = b(static_cast<Index>(k));
      fit.support.push_back(grp.columns[k]);
    }
    fit.group_support.push_back(static_cast<Index>(g));
  }
  std::sort(fit.support.begin(), fit.support.end());
  fit.intercept = y_mean - design.column_mean.dot(fit.coefficients);
  return fit;
}

namespace {

double group_lambda_max(const GroupDesign& design, const Eigen::VectorXd& yc) {
  double best = 0.0;
  for (const OrthoGroup& g : design.groups) {
    if (g.q.cols() == 0) continue;
    best = std::max(best, (g.q.transpose() * yc).norm() /
                              static_cast<double>(design.rows));
  }
  return best;
}

void check_basis_response(const AdditiveBasis& basis, const Eigen::VectorXd& y) {
  if (y.size() != basis.expanded.rows()) {
    throw InvalidInput("response length does not match basis rows");
  }
  require_finite(Eigen::MatrixXd(y), "response");
}

}  // namespace

GroupCvWorkspace::GroupCvWorkspace(const AdditiveBasis& basis, std::size_t folds,
                                   std::uint64_t seed, SolverControl control)
    : basis_(basis),
      folds_(folds),
      control_(control),
      full_(orthonormalize(basis.expanded, basis.group_index, basis.factors())) {
  const std::vector<std::size_t> label =
      fold_assignment(basis.expanded.rows(), folds, seed);
  for (std::size_t fold = 0; fold < folds; ++fold) {
    Part part;
    for (Index i = 0; i < basis.expanded.rows(); ++i) {
      (label[static_cast<std::size_t>(i)] == fold ? part.test : part.train)
          .push_back(i);
    }
    part.design = orthonormalize(basis.expanded(part.train, Eigen::all),
                                 basis.group_index, basis.factors());
    parts_.push_back(std::move(part));
  }
}

CvResult GroupCvWorkspace::select(const Eigen::VectorXd& y) {
  check_basis_response(basis_, y);
  const Eigen::MatrixXd& x = basis_.expanded;
  const double nd = static_cast<double>(x.rows());
  const double y_mean = y.mean();
  const Eigen::VectorXd yc = y.array() - y_mean;
  const double lambda_max = group_lambda_max(full_, yc);

  CvResult result;
  result.fit.cv_folds = folds_;
  if (!(lambda_max > 0.0)) {
    double sse = 0.0;
    for (const Part& part : parts_) {
      const double train_mean = y(part.train).mean();
      for (Index i : part.test) sse += (y(i) - train_mean) * (y(i) - train_mean);
    }
    result.path.push_back({0.0, sse / nd});
    std::vector<Eigen::VectorXd> zero(full_.groups.size());
    for (std::size_t g = 0; g < zero.size(); ++g) {
      zero[g].setZero(full_.groups[g].q.cols());
    }
    result.fit = group_fit_from_theta(full_, zero, y_mean, 0.0);
    result.fit.cv_folds = folds_;
    return result;
  }

  const std::vector<double> grid = lambda_grid(lambda_max);
  std::vector<std::vector<Eigen::VectorXd>> thetas;
  const std::size_t length = solve_group_path(
      full_, yc, grid, control_, true,
      [&](std::size_t, const std::vector<Eigen::VectorXd>& t, double) {
        thetas.push_back(t);
      });

  std::vector<double> sse(length, 0.0);
  const std::span<const double> fold_grid(grid.data(), length);
  for (const Part& part : parts_) {
    const Eigen::VectorXd y_train = y(part.train);
    const double train_mean = y_train.mean();
    const Eigen::VectorXd yct = y_train.array() - train_mean;
    const Eigen::MatrixXd x_test = x(part.test, Eigen::all);
    solve_group_path(part.design, yct, fold_grid, control_, false,
                     [&](std::size_t k, const std::vector<Eigen::VectorXd>& t,
                         double) {
                       const LinearFit fit =
                           group_fit_from_theta(part.design, t, train_mean, 0.0);
                       const Eigen::VectorXd pred = fit.predict(x_test);
                       for (std::size_t i = 0; i < part.test.size(); ++i) {
                         const double r = y(part.test[i]) - pred(static_cast<Index>(i));
                         sse[k] += r * r;
                       }
                     });
  }

  for (std::size_t k = 0; k < length; ++k) {
    result.path.push_back({grid[k], sse[k] / nd});
  }
  result.best_index = static_cast<std::size_t>(
      std::min_element(sse.begin(), sse.end()) - sse.begin());
  result.lambda = grid[result.best_index];
  result.fit = group_fit_from_theta(full_, thetas[result.best_index], y_mean,
                                    result.lambda);
  result.fit.cv_folds = folds_;
  return result;
}

}  // namespace detail

double group_lambda_max(const AdditiveBasis& basis, const Eigen::VectorXd& y) {
  detail::check_basis_response(basis, y);
  const detail::GroupDesign d =
      detail::orthonormalize(basis.expanded, basis.group_index, basis.factors());
  const Eigen::VectorXd yc = y.array() - y.mean();
  return detail::group_lambda_max(d, yc);
}

LinearFit group_lasso_fit(const AdditiveBasis& basis, const Eigen::VectorXd& y,
                          double lambda, SolverControl control) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
  detail::check_basis_response(basis, y);
  const detail::GroupDesign d =
      detail::orthonormalize(basis.expanded, basis.group_index, basis.factors());
  const double y_mean = y.mean();
  const Eigen::VectorXd yc = y.array() - y_mean;
  LinearFit fit;
  const double lambdas[] = {lambda};
  try {
    detail::solve_group_path(
        d, yc, lambdas, control, false,
        [&](std::size_t, const std::vector<Eigen::VectorXd>& t, double) {
          fit = detail::group_fit_from_theta(d, t, y_mean, lambda);
        });
  } catch (const ConvergenceError& e) {
    LinearFit last = e.last_iterate();
    last.intercept = y_mean - d.column_mean.dot(last.coefficients);
    throw ConvergenceError(e.what(), std::move(last));
  }
  fit.warnings = basis.warnings;
  return fit;
}

CvResult cv_select_group_lambda(const AdditiveBasis& basis,
                                const Eigen::VectorXd& y, std::size_t folds,
                                std::uint64_t seed, SolverControl control) {
  detail::GroupCvWorkspace workspace(basis, folds, seed, control);
  return workspace.select(y);
}

}  // namespace pdcov
