#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pdcov/generators.hpp"

namespace pdcov {

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocSummary {
  std::vector<RocPoint> points;  // ascending threshold
  double auc = 0.0;
  Adjacency truth;
};

// Edge (i < j) is called present when p_ij <= threshold. Thresholds are
// 0, every distinct p-value, and 1. Throws InvalidInput if the truth has
// no edges or no non-edges, or on a shape mismatch.
RocSummary roc_from_pvalues(const Eigen::MatrixXd& p, const Adjacency& truth);

// Same on a flat list of pairs; labels are 0/1 and `truth` stays empty.
RocSummary roc_from_pvalues(std::span<const double> p, std::span<const int> labels);

// Trapezoidal area under (fpr, tpr) points sorted by fpr.
double trapezoid_auc(std::span<const RocPoint> points);

// Vertical average: TPR of each curve interpolated at every grid FPR.
std::vector<RocPoint> average_roc(std::span<const RocSummary> curves,
                                  std::size_t grid_size = 101);

}  // namespace pdcov
