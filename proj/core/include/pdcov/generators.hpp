#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "pdcov/data_matrix.hpp"

namespace pdcov {

// 0/1 adjacency with a zero diagonal.
using Adjacency = Eigen::MatrixXi;

enum class FactorShape { linear, square };

// High-dimensional factor model with sparse loadings and equal-correlation
// log-normal errors.
struct Example1Options {
  Index p = 5;
  Index q = 10;
  Index k = 1000;
};

struct Example1Data {
  DataMatrix x;      // n x p
  DataMatrix y;      // n x q
  DataMatrix f;      // n x k
  DataMatrix eps_x;  // true errors, for the oracle test
  DataMatrix eps_y;
  bool dependent = false;  // rho > 0
};

Example1Data gen_example1(Index n, double rho, std::uint64_t seed,
                          const Example1Options& options = {});

// sigma_ij = exp(-|s_i - s_j|) with s_i - s_{i-1} ~ Uniform(1, 3).
Eigen::MatrixXd gen_ar1_sigma(Index d, std::uint64_t seed);

// Inverse of a symmetric positive definite matrix via Cholesky. Throws
// DomainError if the factorization fails.
Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& sigma);

// Rows i.i.d. N(0, sigma).
Eigen::MatrixXd sample_gaussian(Index n, const Eigen::MatrixXd& sigma,
                                std::uint64_t seed);

// |i - j| == 1.
Adjacency tridiagonal_truth(Index d);

// Nonzero off-diagonal pattern of a matrix, relative to its largest entry.
Adjacency support_of(const Eigen::MatrixXd& m, double rel_tol = 1e-8);

struct GraphData {
  DataMatrix z;
  std::optional<DataMatrix> f;
  Adjacency truth;
  Eigen::MatrixXd sigma;  // covariance of the Gaussian block, when any
  Eigen::MatrixXd q;      // factor loadings (Examples 4 and 5)
};

// Gaussian graphical model with AR(1) covariance; truth is tridiagonal.
GraphData gen_example2(Index n, Index d, std::uint64_t seed);

struct Example3Options {
  Index t_dim = 20;
  Index ggm_dim = 10;
  int dof = 5;
  // false: w / sqrt(tau); true: w / sqrt(tau / dof).
  bool standard_t_scaling = false;
};

// Scale-mixture block (every pair conditionally dependent) next to an
// independent Gaussian graphical block.
GraphData gen_example3(Index n, std::uint64_t seed,
                       const Example3Options& options = {});

// x = u + Q g(f) with u ~ N(0, Omega), Omega the tridiagonal AR(1)
// precision; Q entries nonzero with probability 0.2, then Uniform(0.5, 1).
GraphData gen_example4(Index n, Index d, Index k, FactorShape g,
                       std::uint64_t seed);

struct Example5Options {
  Example3Options u;
  Index k = 30;
  // Zero factor matrix: output equals gen_example3 for the same seed.
  bool zero_factors = false;
};

GraphData gen_example5(Index n, FactorShape g, std::uint64_t seed,
                       const Example5Options& options = {});

// Sparse loading matrix (rows x cols) as used by Examples 4 and 5.
Eigen::MatrixXd sparse_loadings(Index rows, Index cols, std::uint64_t seed);

}  // namespace pdcov
