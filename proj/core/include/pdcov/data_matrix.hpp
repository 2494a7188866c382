#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pdcov {

using Index = Eigen::Index;

// Dense column-major sample matrix: rows are observations, columns are
// variables. Every entry is finite; construction throws InvalidInput
// naming the first offending row/column otherwise.
class DataMatrix {
 public:
  DataMatrix() = default;
  explicit DataMatrix(Eigen::MatrixXd values);

  static DataMatrix from_column(const Eigen::VectorXd& column);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  double operator()(Index row, Index col) const { return values_(row, col); }

  const Eigen::MatrixXd& values() const { return values_; }

  // Columns in the order given.
  DataMatrix select_columns(std::span<const Index> columns) const;
  // Every column except `skip` (which must be sorted ascending).
  DataMatrix drop_columns(std::span<const Index> skip) const;

 private:
  Eigen::MatrixXd values_;
};

// Throws InvalidInput if any entry is NaN or infinite.
void require_finite(const Eigen::MatrixXd& values, const char* what);

}  // namespace pdcov
