#include "pdcov/data_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdcov/error.hpp"

namespace pdcov {

void require_finite(const Eigen::MatrixXd& values, const char* what) {
  for (Index c = 0; c < values.cols(); ++c) {
    for (Index r = 0; r < values.rows(); ++r) {
      if (!std::isfinite(values(r, c))) {
        throw InvalidInput(std::string(what) + ": non-finite entry at row " +
                           std::to_string(r + 1) + ", column " +
                           std::to_string(c + 1));
      }
    }
  }
}

DataMatrix::DataMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  require_finite(values_, "data matrix");
}

DataMatrix DataMatrix::from_column(const Eigen::VectorXd& column) {
  return DataMatrix(Eigen::MatrixXd(column));
}

DataMatrix DataMatrix::select_columns(std::span<const Index> columns) const {
  Eigen::MatrixXd out(rows(), static_cast<Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const Index c = columns[k];
    if (c < 0 || c >= cols()) {
      throw InvalidInput("column index " + std::to_string(c) +
                         " out of range");
    }
    out.col(static_cast<Index>(k)) = values_.col(c);
  }
  DataMatrix result;
  result.values_ = std::move(out);
  return result;
}

DataMatrix DataMatrix::drop_columns(std::span<const Index> skip) const {
  std::vector<Index> keep;
  keep.reserve(static_cast<std::size_t>(cols()));
  for (Index c = 0; c < cols(); ++c) {
    if (!std::binary_search(skip.begin(), skip.end(), c)) keep.push_back(c);
  }
  return select_columns(keep);
}

}  // namespace pdcov
