#include "pdcov/generators.hpp"

#include <cmath>
#include <string>

#include "pdcov/error.hpp"
#include "pdcov/rng.hpp"

namespace pdcov {

namespace {

// Sub-stream labels within one generator call.
enum : std::uint64_t {
  kLoadings = 1,
  kFactors = 2,
  kErrors = 3,
  kCovariance = 4,
  kGaussian = 5,
  kMixing = 6,
};

Eigen::MatrixXd standard_normal(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) out(r, c) = rng.normal();
  }
  return out;
}

Eigen::MatrixXd apply_shape(const Eigen::MatrixXd& f, FactorShape g) {
  return g == FactorShape::square ? Eigen::MatrixXd(f.array().square()) : f;
}

}  // namespace

Example1Data gen_example1(Index n, double rho, std::uint64_t seed,
                          const Example1Options& options) {
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("rho must lie in [0, 1)");
  if (n < 10) throw DomainError("Example 1 needs n >= 10");
  const Index p = options.p;
  const Index q = options.q;
  const Index k = options.k;
  if (k < 3) throw DomainError("Example 1 needs at least 3 factors");

  Rng loadings(stream_seed(seed, kLoadings));
  Eigen::MatrixXd bx = Eigen::MatrixXd::Zero(p, k);
  Eigen::MatrixXd by = Eigen::MatrixXd::Zero(q, k);
  for (Index r = 0; r < p; ++r) {
    for (Index c = 0; c < 3; ++c) bx(r, c) = loadings.uniform(2.0, 3.0);
  }
  for (Index r = 0; r < q; ++r) {
    for (Index c = 0; c < 3; ++c) by(r, c) = loadings.uniform(2.0, 3.0);
  }

  const Eigen::MatrixXd f = standard_normal(n, k, stream_seed(seed, kFactors));

  // Equal correlation rho: z_j = sqrt(1 - rho) e_j + sqrt(rho) c.
  Rng errors(stream_seed(seed, kErrors));
  const double own = std::sqrt(1.0 - rho);
  const double shared = std::sqrt(rho);
  const double mean = std::exp(0.5);  // E exp(N(0, 1))
  Eigen::MatrixXd eps(n, p + q);
  for (Index r = 0; r < n; ++r) {
    const double common = errors.normal();
    for (Index c = 0; c < p + q; ++c) {
      eps(r, c) = std::exp(own * errors.normal() + shared * common) - mean;
    }
  }

  Example1Data data;
  data.eps_x = DataMatrix(eps.leftCols(p));
  data.eps_y = DataMatrix(eps.rightCols(q));
  data.x = DataMatrix(f * bx.transpose() + eps.leftCols(p));
  data.y = DataMatrix(f * by.transpose() + eps.rightCols(q));
  data.f = DataMatrix(f);
  data.dependent = rho > 0.0;
  return data;
}

Eigen::MatrixXd gen_ar1_sigma(Index d, std::uint64_t seed) {
  if (d < 2) throw DomainError("AR(1) covariance needs d >= 2");
  Rng rng(seed);
  Eigen::VectorXd s(d);
  s(0) = 0.0;
  for (Index i = 1; i < d; ++i) s(i) = s(i - 1) + rng.uniform(1.0, 3.0);
  Eigen::MatrixXd sigma(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) sigma(i, j) = std::exp(-std::abs(s(i) - s(j)));
  }
  return sigma;
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& sigma) {
  const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw DomainError("matrix is not positive definite");
  }
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
  return (inv + inv.transpose()) / 2.0;
}

Eigen::MatrixXd sample_gaussian(Index n, const Eigen::MatrixXd& sigma,
                                std::uint64_t seed) {
  const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw DomainError("covariance is not positive definite");
  }
  const Eigen::MatrixXd w = standard_normal(n, sigma.rows(), seed);
  return w * llt.matrixL().transpose();
}

Adjacency tridiagonal_truth(Index d) {
  Adjacency a = Adjacency::Zero(d, d);
  for (Index i = 0; i + 1 < d; ++i) {
    a(i, i + 1) = 1;
    a(i + 1, i) = 1;
  }
  return a;
}

Adjacency support_of(const Eigen::MatrixXd& m, double rel_tol) {
  const double top = m.cwiseAbs().maxCoeff();
  Adjacency a = Adjacency::Zero(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (i != j && std::abs(m(i, j)) > rel_tol * top) a(i, j) = 1;
    }
  }
  return a;
}

Eigen::MatrixXd sparse_loadings(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const bool nonzero = rng.bernoulli(0.2);
      const double value = rng.uniform(0.5, 1.0);
      if (nonzero) q(r, c) = value;
    }
  }
  return q;
}

GraphData gen_example2(Index n, Index d, std::uint64_t seed) {
  if (d < 3) throw DomainError("Example 2 needs d >= 3");
  GraphData data;
  data.sigma = gen_ar1_sigma(d, stream_seed(seed, kCovariance));
  data.z = DataMatrix(sample_gaussian(n, data.sigma, stream_seed(seed, kGaussian)));
  data.truth = tridiagonal_truth(d);
  return data;
}

GraphData gen_example3(Index n, std::uint64_t seed,
                       const Example3Options& options) {
  if (n < 10) throw DomainError("Example 3 needs n >= 10");
  const Index t = options.t_dim;
  const Index g = options.ggm_dim;
  if (t < 0 || g < 0 || t + g < 3) {
    throw DomainError("Example 3 needs at least 3 columns");
  }
  Eigen::MatrixXd z(n, t + g);

  Rng mix(stream_seed(seed, kMixing));
  for (Index r = 0; r < n; ++r) {
    double tau = mix.chi_squared(options.dof);
    if (options.standard_t_scaling) tau /= static_cast<double>(options.dof);
    const double scale = 1.0 / std::sqrt(tau);
    for (Index c = 0; c < t; ++c) z(r, c) = mix.normal() * scale;
  }

  GraphData data;
  data.truth = Adjacency::Zero(t + g, t + g);
  for (Index i = 0; i < t; ++i) {
    for (Index j = 0; j < t; ++j) data.truth(i, j) = i == j ? 0 : 1;
  }
  if (g >= 2) {
    data.sigma = gen_ar1_sigma(g, stream_seed(seed, kCovariance));
    z.rightCols(g) = sample_gaussian(n, data.sigma, stream_seed(seed, kGaussian));
    data.truth.bottomRightCorner(g, g) = tridiagonal_truth(g);
  } else if (g == 1) {
    data.sigma = Eigen::MatrixXd::Identity(1, 1);
    z.rightCols(1) = standard_normal(n, 1, stream_seed(seed, kGaussian));
  }
  data.z = DataMatrix(std::move(z));
  return data;
}

GraphData gen_example4(Index n, Index d, Index k, FactorShape g,
                       std::uint64_t seed) {
  if (d < 2) throw DomainError("Example 4 needs d >= 2");
  if (k < 1) throw DomainError("Example 4 needs at least one factor");
  const Eigen::MatrixXd sigma = gen_ar1_sigma(d, stream_seed(seed, kCovariance));
  const Eigen::MatrixXd omega = spd_inverse(sigma);
  const Eigen::MatrixXd u = sample_gaussian(n, omega, stream_seed(seed, kGaussian));
  const Eigen::MatrixXd f = standard_normal(n, k, stream_seed(seed, kFactors));

  GraphData data;
  data.q = sparse_loadings(d, k, stream_seed(seed, kLoadings));
  data.z = DataMatrix(u + apply_shape(f, g) * data.q.transpose());
  data.f = DataMatrix(f);
  data.sigma = omega;
  data.truth = support_of(omega);
  return data;
}

GraphData gen_example5(Index n, FactorShape g, std::uint64_t seed,
                       const Example5Options& options) {
  GraphData data = gen_example3(n, seed, options.u);
  const Index d = data.z.cols();
  Eigen::MatrixXd f = options.zero_factors
                          ? Eigen::MatrixXd::Zero(n, options.k)
                          : standard_normal(n, options.k, stream_seed(seed, kFactors));
  data.q = sparse_loadings(d, options.k, stream_seed(seed, kLoadings));
  data.z = DataMatrix(data.z.values() + apply_shape(f, g) * data.q.transpose());
  data.f = DataMatrix(std::move(f));
  return data;
}

}  // namespace pdcov
