#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

using pdcov::cli::Command;
using pdcov::cli::RunConfig;

namespace {

// Enum-valued flags are read as text and converted once parsing is done.
struct EnumFlags {
  std::string projection = "lasso";
  std::string mode;
  std::string measure = "dcov";
  std::string selection = "alpha";
  std::string g = "linear";
};

void add_common(CLI::App* app, RunConfig& c) {
  app->add_option("--input", c.input, "CSV file")->required();
  app->add_flag("!--no-header", c.has_header, "First row holds data, not names");
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "Output file (default: standard output)");
}

void add_projection(CLI::App* app, EnumFlags& f) {
  app->add_option("--projection", f.projection, "ols | lasso | additive")
      ->check(CLI::IsMember({"ols", "lasso", "additive"}));
}

void add_permutations(CLI::App* app, RunConfig& c) {
  app->add_option("--permutations", c.permutations,
                  "Permutation count; 0 = asymptotic only (default floor(200 + 5000/n))");
}

void add_graph_options(CLI::App* app, EnumFlags& f) {
  app->add_option("--mode", f.mode, "internal | external | two-step")
      ->check(CLI::IsMember({"internal", "external", "two-step"}));
  app->add_option("--measure", f.measure, "dcov | pearson")
      ->check(CLI::IsMember({"dcov", "pearson"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projected distance covariance tests and conditional dependency graphs"};
  app.require_subcommand(1);
  RunConfig c;
  EnumFlags flags;

  auto* test = app.add_subcommand("test", "Test x independent of y given factors");
  add_common(test, c);
  test->add_option("--x-cols", c.x_cols, "Columns of x (names, 1-based indices, ranges)")
      ->required();
  test->add_option("--y-cols", c.y_cols, "Columns of y")->required();
  test->add_option("--factor-cols", c.factor_cols, "Factor columns");
  test->add_option("--alpha", c.alpha, "Level for the asymptotic decision, in (0, 0.215]");
  add_projection(test, flags);
  add_permutations(test, c);

  auto* graph = app.add_subcommand("graph", "Build a conditional dependency graph");
  add_common(graph, c);
  graph->add_option("--cols", c.node_cols, "Node columns (default: all non-factor columns)");
  graph->add_option("--factor-cols", c.factor_cols, "External factor columns");
  graph->add_option("--alpha", c.alpha, "Per-test level or FDR level (default 0.05)");
  graph->add_option("--selection", flags.selection, "alpha | bh")
      ->check(CLI::IsMember({"alpha", "bh"}));
  graph->add_option("--edges-out", c.edges_out, "Edge CSV (default: <out>.edges.csv)");
  add_graph_options(graph, flags);
  add_projection(graph, flags);
  add_permutations(graph, c);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo tables and ROC curves");
  sim->add_option("--example", c.example, "Example 1..5")->required();
  sim->add_option("--n", c.n, "Sample size");
  sim->add_option("--d", c.d, "Dimension (Examples 2 and 4)");
  sim->add_option("--K", c.k, "Number of factors");
  sim->add_option("--rho", c.rho, "Error correlation(s), Example 1")->delimiter(',');
  sim->add_option("--alpha", c.alphas, "Level(s), Example 1")->delimiter(',');
  sim->add_option("--g", flags.g, "Factor transform: linear | square")
      ->check(CLI::IsMember({"linear", "square"}));
  sim->add_option("--reps", c.reps, "Replicates");
  sim->add_flag("--full-scale", c.full_scale, "Full sizes (d = 30, more reps)");
  sim->add_flag("--oracle", c.oracle, "Example 1: test the true errors");
  sim->add_flag("--standard-t", c.standard_t, "Example 3: w / sqrt(tau / dof) scaling");
  sim->add_option("--seed", c.seed, "Master seed");
  sim->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  sim->add_option("--out", c.out, "Output CSV (default: standard output)");
  add_graph_options(sim, flags);
  add_projection(sim, flags);
  add_permutations(sim, c);

  auto* roc = app.add_subcommand("roc", "ROC curve of a p-value matrix against a truth");
  add_common(roc, c);
  roc->add_option("--truth", c.truth, "0/1 adjacency CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pdcov::cli::kExitInput;
  }

  c.projection = pdcov::parse_projection_method(flags.projection);
  if (!flags.mode.empty()) c.mode = pdcov::parse_factor_mode(flags.mode);
  c.measure = pdcov::parse_measure(flags.measure);
  c.selection = pdcov::parse_selection(flags.selection);
  c.g = flags.g == "square" ? pdcov::FactorShape::square : pdcov::FactorShape::linear;

  if (*test) c.command = Command::test;
  if (*graph) c.command = Command::graph;
  if (*sim) c.command = Command::simulate;
  if (*roc) c.command = Command::roc;
  return pdcov::cli::run(c, std::cout, std::cerr);
}
