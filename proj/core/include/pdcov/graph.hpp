#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pdcov/data_matrix.hpp"
#include "pdcov/projection.hpp"

namespace pdcov {

enum class Selection { per_test_alpha, bh_fdr };
enum class FactorMode { internal, external, two_step };
enum class DependenceMeasure { dcov, pearson };

std::string_view to_string(Selection s);
std::string_view to_string(FactorMode m);
std::string_view to_string(DependenceMeasure m);
Selection parse_selection(std::string_view name);
FactorMode parse_factor_mode(std::string_view name);
DependenceMeasure parse_measure(std::string_view name);

struct GraphConfig {
  ProjectionMethod projection = ProjectionMethod::lasso_cv_refit;
  ProjectionOptions projection_options;
  DependenceMeasure measure = DependenceMeasure::dcov;
  // Unset: floor(200 + 5000 / n). Zero: no permutations; edges are decided
  // by the asymptotic threshold and carry no p-value.
  std::optional<std::size_t> permutations;
  // Keep d_bar = d(d-1)/2 in the BH thresholds even when some pairs are
  // untestable. When false, d_bar counts tested pairs only.
  bool bh_count_untestable = true;
  std::size_t threads = 1;
};

// Outcome of the test of one node pair; i < j always.
struct EdgeTest {
  Index i = 0;
  Index j = 0;
  double statistic = 0.0;
  std::optional<double> p_value;
  bool untestable = false;
  bool rejected = false;
};

struct Graph {
  std::vector<std::string> node_labels;
  std::vector<EdgeTest> edges;  // every pair, ordered (0,1), (0,2), ...
  Selection selection = Selection::per_test_alpha;
  double alpha = 0.05;
  FactorMode factor_mode = FactorMode::internal;
  ProjectionMethod projection = ProjectionMethod::lasso_cv_refit;
  DependenceMeasure measure = DependenceMeasure::dcov;
  std::size_t permutations = 0;
  std::uint64_t seed = 0;

  Index nodes() const { return static_cast<Index>(node_labels.size()); }
  std::size_t rejected_count() const;
  std::vector<std::pair<Index, Index>> untestable_pairs() const;
  // Symmetric matrix of edge p-values; untestable pairs and the diagonal
  // hold 1.
  Eigen::MatrixXd p_value_matrix() const;
};

// Seed of the (i, j) edge test, independent of argument order.
std::uint64_t pair_seed(std::uint64_t master_seed, Index i, Index j);

// Tests node i against node j conditioning on every other column of z
// (internal factors).
EdgeTest pair_test(const DataMatrix& z, Index i, Index j,
                   const GraphConfig& config, std::uint64_t seed);

// Tests two already-residualized columns directly. `raw_i` / `raw_j` are
// the pre-projection columns, used to detect residuals that vanished.
EdgeTest residual_pair_test(const Eigen::VectorXd& resid_i,
                            const Eigen::VectorXd& resid_j,
                            const Eigen::VectorXd& raw_i,
                            const Eigen::VectorXd& raw_j, Index i, Index j,
                            const GraphConfig& config, std::uint64_t seed);

// Internal-factor graph: every pair conditioned on the remaining nodes.
Graph build_graph(const DataMatrix& z, Selection selection, double alpha,
                  const GraphConfig& config, std::uint64_t seed,
                  std::vector<std::string> labels = {});

// Every column residualized once on external factors f, then residual
// pairs tested directly.
Graph external_factor_graph(const DataMatrix& z, const DataMatrix& f,
                            Selection selection, double alpha,
                            const GraphConfig& config, std::uint64_t seed,
                            std::vector<std::string> labels = {});

// Residualize on f, then build an internal-factor graph on the residuals.
Graph two_step_graph(const DataMatrix& z, const DataMatrix& f,
                     Selection selection, double alpha,
                     const GraphConfig& config, std::uint64_t seed,
                     std::vector<std::string> labels = {});

struct DegreeSummary {
  std::vector<std::size_t> degrees;
  double mean = 0.0;
};

DegreeSummary degree_distribution(const Graph& graph);

}  // namespace pdcov
