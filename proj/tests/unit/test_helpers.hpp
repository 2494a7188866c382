#pragma once

#include <Eigen/Dense>

#include "pdcov/data_matrix.hpp"
#include "pdcov/rng.hpp"

namespace pdcov::testing {

inline Eigen::MatrixXd normal_matrix(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.normal();
  }
  return m;
}

inline Eigen::MatrixXd uniform_matrix(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.uniform();
  }
  return m;
}

}  // namespace pdcov::testing
