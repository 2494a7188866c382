#include "pdcov/dcov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pdcov/error.hpp"
#include "pdcov/parallel.hpp"
#include "pdcov/rng.hpp"

namespace pdcov {

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd values)
    : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw InvalidInput("distance matrix must be square");
  }
  require_finite(values_, "distance matrix");
  const Index n = values_.rows();
  for (Index l = 0; l < n; ++l) {
    if (values_(l, l) != 0.0) {
      throw InvalidInput("distance matrix diagonal must be zero");
    }
    for (Index k = 0; k < l; ++k) {
      if (values_(k, l) != values_(l, k) || values_(k, l) < 0.0) {
        throw InvalidInput("distance matrix must be symmetric and "
                           "non-negative");
      }
    }
  }
  cache_sums();
}

void DistanceMatrix::cache_sums() {
  row_sums_ = values_.rowwise().sum();
  total_ = row_sums_.sum();
}

DistanceMatrix pairwise_distances(const DataMatrix& x) {
  const Index n = x.rows();
  const Index d = x.cols();
  if (n < 2) throw InvalidInput("distance matrix needs at least 2 rows");
  // One observation per column keeps the inner loop contiguous.
  const Eigen::MatrixXd obs = x.values().transpose();
  DistanceMatrix out;
  out.values_.setZero(n, n);
  for (Index l = 1; l < n; ++l) {
    const double* xl = obs.col(l).data();
    for (Index k = 0; k < l; ++k) {
      const double* xk = obs.col(k).data();
      double s = 0.0;
      for (Index c = 0; c < d; ++c) {
        const double diff = xk[c] - xl[c];
        s += diff * diff;
      }
      const double dist = std::sqrt(s);
      out.values_(k, l) = dist;
      out.values_(l, k) = dist;
    }
  }
  out.cache_sums();
  return out;
}

DcovComponents dcov_components(const DistanceMatrix& dx,
                               const DistanceMatrix& dy) {
  const Index n = dx.size();
  if (dy.size() != n) {
    throw InvalidInput("distance matrices differ in size: " +
                       std::to_string(n) + " vs " + std::to_string(dy.size()));
  }
  if (n < 1) throw InvalidInput("empty distance matrix");
  const double nd = static_cast<double>(n);
  DcovComponents c;
  c.n = n;
  c.s1 = dx.values().cwiseProduct(dy.values()).sum() / (nd * nd);
  c.s2 = (dx.total() / (nd * nd)) * (dy.total() / (nd * nd));
  c.s3 = dx.row_sums().dot(dy.row_sums()) / (nd * nd * nd);
  c.v2_unclamped = c.s1 + c.s2 - 2.0 * c.s3;
  c.v2 = std::max(0.0, c.v2_unclamped);
  return c;
}

double normalized_statistic(const DcovComponents& c) {
  if (!(c.s2 > 0.0) || !std::isfinite(c.s2)) {
    throw DegenerateSample(
        "degenerate sample: S2 = 0 (a sample has identical rows)");
  }
  return static_cast<double>(c.n) * c.v2 / c.s2;
}

StatisticResult test_statistic(const DataMatrix& ex, const DataMatrix& ey) {
  if (ex.rows() != ey.rows()) {
    throw InvalidInput("samples differ in row count");
  }
  StatisticResult r;
  r.components = dcov_components(pairwise_distances(ex), pairwise_distances(ey));
  r.statistic = normalized_statistic(r.components);
  return r;
}

double critical_value(double alpha) {
  if (!(alpha > 0.0 && alpha <= kMaxAsymptoticAlpha)) {
    throw DomainError("alpha must lie in (0, 0.215] for the asymptotic "
                      "critical value, got " + std::to_string(alpha));
  }
  const double z = inverse_normal_cdf(1.0 - alpha / 2.0);
  return z * z;
}

std::size_t default_permutations(Index n) {
  if (n < 1) throw InvalidInput("sample size must be positive");
  return static_cast<std::size_t>(200 + 5000 / n);
}

double permutation_p_value(std::size_t exceedances, std::size_t permutations) {
  return static_cast<double>(1 + exceedances) /
         static_cast<double>(permutations + 1);
}

void draw_permutation(std::uint64_t seed, std::size_t r,
                      std::span<Index> perm) {
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng = Rng::stream(seed, r);
  rng.shuffle(perm);
}

namespace {

// S1 under a reindexing of the first sample, summed over the strict upper
// triangle (both matrices have zero diagonals).
double permuted_s1(const Eigen::MatrixXd& dx, const Eigen::MatrixXd& dy,
                   std::span<const Index> perm) {
  const Index n = dx.rows();
  double s = 0.0;
  for (Index l = 1; l < n; ++l) {
    const double* xcol = dx.col(perm[static_cast<std::size_t>(l)]).data();
    const double* ycol = dy.col(l).data();
    double partial = 0.0;
    for (Index k = 0; k < l; ++k) {
      partial += xcol[perm[static_cast<std::size_t>(k)]] * ycol[k];
    }
    s += partial;
  }
  return 2.0 * s;
}

}  // namespace

PermutationEngine::PermutationEngine(DistanceMatrix dx, DistanceMatrix dy)
    : dx_(std::move(dx)), dy_(std::move(dy)) {
  observed_ = dcov_components(dx_, dy_);
  normalized_statistic(observed_);  // throws on a degenerate sample
  std::vector<Index> identity(static_cast<std::size_t>(size()));
  std::iota(identity.begin(), identity.end(), Index{0});
  // Compared against permuted values computed by the same routine, so that
  // an identity draw ties exactly.
  observed_statistic_ = permuted_statistic(identity);
}

double PermutationEngine::permuted_statistic(std::span<const Index> perm) const {
  const Index n = size();
  const double nd = static_cast<double>(n);
  const double s1 = permuted_s1(dx_.values(), dy_.values(), perm) / (nd * nd);
  const double s2 = (dx_.total() / (nd * nd)) * (dy_.total() / (nd * nd));
  const Eigen::VectorXd& rx = dx_.row_sums();
  const Eigen::VectorXd& ry = dy_.row_sums();
  double s3 = 0.0;
  for (Index k = 0; k < n; ++k) s3 += rx(perm[static_cast<std::size_t>(k)]) * ry(k);
  s3 /= nd * nd * nd;
  const double v2 = std::max(0.0, s1 + s2 - 2.0 * s3);
  return nd * v2 / s2;
}

std::size_t PermutationEngine::count_exceedances(std::size_t permutations,
                                                 std::uint64_t seed,
                                                 std::size_t threads) const {
  std::vector<unsigned char> exceeds(permutations, 0);
  const auto n = static_cast<std::size_t>(size());
  parallel_for(permutations, threads, [&](std::size_t r) {
    std::vector<Index> perm(n);
    draw_permutation(seed, r, perm);
    exceeds[r] = permuted_statistic(perm) >= observed_statistic_ ? 1 : 0;
  });
  return static_cast<std::size_t>(
      std::count(exceeds.begin(), exceeds.end(), 1));
}

double PermutationEngine::p_value(std::size_t permutations, std::uint64_t seed,
                                  std::size_t threads) const {
  if (permutations == 0) throw ConfigError("permutation count must be >= 1");
  return permutation_p_value(count_exceedances(permutations, seed, threads),
                             permutations);
}

TestResult permutation_test(const DataMatrix& ex, const DataMatrix& ey,
                            std::size_t permutations, std::uint64_t seed,
                            double alpha, std::size_t threads) {
  if (ex.rows() != ey.rows()) {
    throw InvalidInput("samples differ in row count");
  }
  TestResult result;
  result.alpha = alpha;
  result.seed = seed;
  result.n_permutations = permutations;
  const double threshold = critical_value(alpha);

  PermutationEngine engine(pairwise_distances(ex), pairwise_distances(ey));
  result.components = engine.observed_components();
  result.statistic = normalized_statistic(result.components);
  result.reject_asymptotic = result.statistic > threshold;
  if (permutations > 0) {
    result.p_value = engine.p_value(permutations, seed, threads);
  }
  return result;
}

TestResult pearson_permutation_test(const Eigen::VectorXd& ex,
                                    const Eigen::VectorXd& ey,
                                    std::size_t permutations,
                                    std::uint64_t seed, double alpha) {
  const Index n = ex.size();
  if (ey.size() != n) throw InvalidInput("samples differ in row count");
  if (n < 3) throw InvalidInput("Pearson test needs at least 3 rows");
  const Eigen::VectorXd xc = ex.array() - ex.mean();
  const Eigen::VectorXd yc = ey.array() - ey.mean();
  const double scale = xc.norm() * yc.norm();
  if (!(scale > 0.0)) {
    throw DegenerateSample("degenerate sample: zero variance");
  }
  auto r_squared = [&](std::span<const Index> perm) {
    double s = 0.0;
    for (Index k = 0; k < n; ++k) s += xc(perm[static_cast<std::size_t>(k)]) * yc(k);
    const double r = s / scale;
    return r * r;
  };

  TestResult result;
  result.alpha = alpha;
  result.seed = seed;
  result.n_permutations = permutations;
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  const double observed = r_squared(perm);
  result.statistic = static_cast<double>(n) * observed;
  result.reject_asymptotic = result.statistic > critical_value(alpha);
  if (permutations > 0) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < permutations; ++r) {
      draw_permutation(seed, r, perm);
      if (r_squared(perm) >= observed) ++count;
    }
    result.p_value = permutation_p_value(count, permutations);
  }
  return result;
}

}  // namespace pdcov
