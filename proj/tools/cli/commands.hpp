#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdcov/generators.hpp"
#include "pdcov/graph.hpp"
#include "pdcov/projection.hpp"

namespace pdcov::cli {

enum class Command { test, graph, simulate, roc };

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  Command command = Command::test;

  std::string input;
  std::string truth;  // roc: 0/1 adjacency CSV
  bool has_header = true;
  std::string x_cols;
  std::string y_cols;
  std::string factor_cols;
  std::string node_cols;  // graph: default every non-factor column

  // Default 0.1 for test, 0.05 for graph.
  std::optional<double> alpha;
  std::vector<double> alphas;  // simulate, Example 1
  Selection selection = Selection::per_test_alpha;
  std::optional<FactorMode> mode;
  ProjectionMethod projection = ProjectionMethod::lasso_cv_refit;
  DependenceMeasure measure = DependenceMeasure::dcov;
  std::optional<std::size_t> permutations;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string out;
  std::string edges_out;  // graph: defaults to <out>.edges.csv

  // simulate
  int example = 0;
  std::optional<Index> n;
  std::optional<Index> d;
  std::optional<Index> k;
  std::vector<double> rho{0.0};
  FactorShape g = FactorShape::linear;
  std::optional<std::size_t> reps;
  bool full_scale = false;
  bool oracle = false;
  bool standard_t = false;
};

nlohmann::ordered_json test_report(const RunConfig& config);

nlohmann::ordered_json graph_json(const Graph& graph);
std::string graph_edges_csv(const Graph& graph);
Graph run_graph(const RunConfig& config);

// Example 1: rate table. Examples 2 to 5: averaged ROC curve plus an AUC
// footer row.
std::string simulate_csv(const RunConfig& config);

std::string roc_csv(const RunConfig& config);

// Executes one command, writing the primary output to `out` (or the
// --out file) and diagnostics to `err`. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace pdcov::cli
