#pragma once

// Block coordinate descent for the group lasso on orthonormalized blocks.
// Not installed.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pdcov/additive.hpp"
#include "pdcov/linear_fit.hpp"

namespace pdcov::detail {

struct OrthoGroup {
  std::vector<Index> columns;  // expanded columns in this factor's block
  Eigen::MatrixXd q;           // n x r, q'q / n = I
  Eigen::MatrixXd back;        // m x r: block coefficients = back * theta
};

struct GroupDesign {
  std::vector<OrthoGroup> groups;  // one per factor, possibly rank 0
  Eigen::VectorXd column_mean;
  Index rows = 0;
  Index total_columns = 0;
};

GroupDesign orthonormalize(const Eigen::MatrixXd& x,
                           const std::vector<Index>& group_index,
                           Index factors);

using GroupPathCallback = std::function<void(
    std::size_t, const std::vector<Eigen::VectorXd>&, double)>;

// Fits `lambdas` in order with warm starts; same early-stop rule as the
// lasso path. Throws NotConverged-like ConvergenceError via the caller.
std::size_t solve_group_path(const GroupDesign& design,
                             const Eigen::VectorXd& y_centered,
                             std::span<const double> lambdas,
                             const SolverControl& control, bool stop_early,
                             const GroupPathCallback& on_fit);

LinearFit group_fit_from_theta(const GroupDesign& design,
                               const std::vector<Eigen::VectorXd>& theta,
                               double y_mean, double lambda);

class GroupCvWorkspace {
 public:
  GroupCvWorkspace(const AdditiveBasis& basis, std::size_t folds,
                   std::uint64_t seed, SolverControl control);

  CvResult select(const Eigen::VectorXd& y);

 private:
  struct Part {
    std::vector<Index> train;
    std::vector<Index> test;
    GroupDesign design;
  };

  const AdditiveBasis& basis_;
  std::size_t folds_;
  SolverControl control_;
  GroupDesign full_;
  std::vector<Part> parts_;
};

}  // namespace pdcov::detail
