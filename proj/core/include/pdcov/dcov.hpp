#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pdcov/data_matrix.hpp"

namespace pdcov {

// Symmetric n x n matrix of Euclidean distances between sample rows.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  // Takes ownership of a precomputed matrix; checks symmetry, zero
  // diagonal and non-negativity.
  explicit DistanceMatrix(Eigen::MatrixXd values);

  Index size() const { return values_.rows(); }
  double operator()(Index k, Index l) const { return values_(k, l); }
  const Eigen::MatrixXd& values() const { return values_; }

  // Row sums, reused by S3 and by every permutation.
  const Eigen::VectorXd& row_sums() const { return row_sums_; }
  // Sum of every entry.
  double total() const { return total_; }

 private:
  friend DistanceMatrix pairwise_distances(const DataMatrix& x);
  void cache_sums();

  Eigen::MatrixXd values_;
  Eigen::VectorXd row_sums_;
  double total_ = 0.0;
};

DistanceMatrix pairwise_distances(const DataMatrix& x);

// Components of the empirical distance covariance of two samples:
//   S1 = n^-2 sum_kl a_kl b_kl
//   S2 = (n^-2 sum_kl a_kl) (n^-2 sum_kl b_kl)
//   S3 = n^-3 sum_k sum_lm a_kl b_km
//   V2 = max(0, S1 + S2 - 2 S3)
struct DcovComponents {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double v2 = 0.0;
  double v2_unclamped = 0.0;
  Index n = 0;
};

DcovComponents dcov_components(const DistanceMatrix& dx,
                               const DistanceMatrix& dy);

// T = n V2 / S2. Throws DegenerateSample when S2 is zero.
double normalized_statistic(const DcovComponents& c);

struct StatisticResult {
  double statistic = 0.0;
  DcovComponents components;
};

StatisticResult test_statistic(const DataMatrix& ex, const DataMatrix& ey);

// Phi^-1(p) for p in (0, 1), Wichura's AS 241 (PPND16).
double inverse_normal_cdf(double p);

// Asymptotic rejection threshold (Phi^-1(1 - alpha/2))^2, valid for
// 0 < alpha <= 0.215.
double critical_value(double alpha);

inline constexpr double kMaxAsymptoticAlpha = 0.215;

// floor(200 + 5000 / n).
std::size_t default_permutations(Index n);

// Add-one permutation p-value (1 + #{T_r >= T_0}) / (R + 1).
double permutation_p_value(std::size_t exceedances, std::size_t permutations);

struct TestResult {
  double statistic = 0.0;
  std::optional<double> p_value;
  bool reject_asymptotic = false;
  std::size_t n_permutations = 0;
  std::uint64_t seed = 0;
  double alpha = 0.1;
  DcovComponents components;
};

// Null distribution by permuting the rows of the first sample. The cached
// distance matrices are permuted by index; distances are never
// recomputed. Permutation r draws from stream (seed, r), so the p-value
// does not depend on how permutations are scheduled across threads.
class PermutationEngine {
 public:
  PermutationEngine(DistanceMatrix dx, DistanceMatrix dy);

  Index size() const { return dx_.size(); }
  const DcovComponents& observed_components() const { return observed_; }
  double observed_statistic() const { return observed_statistic_; }

  // Statistic with rows/columns of Dx reindexed by `perm`.
  double permuted_statistic(std::span<const Index> perm) const;

  // Number of permutations whose statistic is >= the observed one.
  std::size_t count_exceedances(std::size_t permutations, std::uint64_t seed,
                                std::size_t threads = 1) const;

  double p_value(std::size_t permutations, std::uint64_t seed,
                 std::size_t threads = 1) const;

 private:
  DistanceMatrix dx_;
  DistanceMatrix dy_;
  DcovComponents observed_;
  double observed_statistic_ = 0.0;
};

// Fills `perm` with the permutation used for replicate r of `seed`.
void draw_permutation(std::uint64_t seed, std::size_t r,
                      std::span<Index> perm);

// Full test on residual samples: statistic, asymptotic decision at
// `alpha` and, when permutations > 0, the permutation p-value.
TestResult permutation_test(const DataMatrix& ex, const DataMatrix& ey,
                            std::size_t permutations, std::uint64_t seed,
                            double alpha = 0.1, std::size_t threads = 1);

// Pearson baseline for univariate residual pairs: statistic n r^2 with a
// permutation p-value from the same engine conventions.
TestResult pearson_permutation_test(const Eigen::VectorXd& ex,
                                    const Eigen::VectorXd& ey,
                                    std::size_t permutations,
                                    std::uint64_t seed, double alpha = 0.1);

}  // namespace pdcov
