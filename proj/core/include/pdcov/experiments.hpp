#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdcov/generators.hpp"
#include "pdcov/graph.hpp"
#include "pdcov/projection.hpp"
#include "pdcov/roc.hpp"

namespace pdcov {

struct SimSpec {
  int example_id = 1;
  Index n = 200;
  Index d = 10;  // Examples 2 and 4
  Index p = 5;   // Example 1
  Index q = 10;  // Example 1
  Index k = 1000;  // factors: Example 1 (1000), Examples 4 and 5 (30)
  double rho = 0.0;
  FactorShape g = FactorShape::linear;
  std::size_t reps = 200;
  std::uint64_t seed = 1;
  Example3Options example3;  // also the u-block of Example 5

  // Throws ConfigError when the parameters do not fit the example.
  void validate() const;
};

// Reduced sizes that finish on a desk machine: d = 10, Example 3 split
// 7 + 3, 200 reps for Example 1 and 20 for the graph examples.
SimSpec desk_spec(int example_id);
// Full sizes: d = 30, split 20 + 10, 1000 and 100 reps.
SimSpec full_spec(int example_id);

// Seed of replicate `rep`.
std::uint64_t rep_seed(std::uint64_t master, std::size_t rep);

// Data of one graph-example replicate (examples 2 to 5).
GraphData generate_graph_data(const SimSpec& spec, std::uint64_t seed);

struct Example1Config {
  ProjectionMethod projection = ProjectionMethod::lasso_cv_refit;
  ProjectionOptions projection_options;
  // Test the true errors, skipping projection.
  bool oracle = false;
  // Unset: floor(200 + 5000 / n). Zero: asymptotic decision only.
  std::optional<std::size_t> permutations;
  std::size_t threads = 1;  // across replicates
};

struct Example1Rep {
  double statistic = 0.0;
  std::optional<double> p_value;
};

// Runs the Example-1 pipeline once per replicate.
std::vector<Example1Rep> example1_replicates(const SimSpec& spec,
                                             const Example1Config& config);

struct RateRow {
  double alpha = 0.0;
  std::size_t rejections = 0;
  std::size_t reps = 0;
  double rate = 0.0;
  double half_width = 0.0;  // 1.96 sqrt(rate (1 - rate) / reps)
};

// Rejection rate at each alpha: p <= alpha with permutations, otherwise
// T above the asymptotic critical value. Requires reps >= 50.
std::vector<RateRow> rejection_rates(std::span<const Example1Rep> reps,
                                     std::span<const double> alphas);

std::vector<RateRow> type1_power_table(const SimSpec& spec,
                                       std::span<const double> alphas,
                                       const Example1Config& config);

struct GraphMethod {
  FactorMode mode = FactorMode::internal;
  GraphConfig graph;
  std::string label;
};

struct AucExperiment {
  std::string label;
  std::vector<double> aucs;  // one per replicate
  double mean_auc = 0.0;
  double sd_auc = 0.0;
  std::vector<RocPoint> mean_curve;
};

// ROC of p-value graphs over spec.reps replicates of examples 2 to 5.
// `threads` runs replicates in parallel; the result does not depend on it.
AucExperiment graph_auc_experiment(const SimSpec& spec,
                                   const GraphMethod& method,
                                   std::size_t threads = 1);

}  // namespace pdcov
