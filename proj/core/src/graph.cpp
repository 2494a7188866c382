#include "pdcov/graph.hpp"

#include <algorithm>
#include <string>

#include "pdcov/dcov.hpp"
#include "pdcov/error.hpp"
#include "pdcov/fdr.hpp"
#include "pdcov/parallel.hpp"
#include "pdcov/rng.hpp"

namespace pdcov {

std::string_view to_string(Selection s) {
  return s == Selection::bh_fdr ? "bh" : "alpha";
}

std::string_view to_string(FactorMode m) {
  switch (m) {
    case FactorMode::internal:
      return "internal";
    case FactorMode::external:
      return "external";
    case FactorMode::two_step:
      return "two-step";
  }
  return "unknown";
}

std::string_view to_string(DependenceMeasure m) {
  return m == DependenceMeasure::pearson ? "pearson" : "dcov";
}

Selection parse_selection(std::string_view name) {
  if (name == "alpha" || name == "per_test_alpha") return Selection::per_test_alpha;
  if (name == "bh" || name == "bh_fdr" || name == "fdr") return Selection::bh_fdr;
  throw ConfigError("unknown selection '" + std::string(name) + "'");
}

FactorMode parse_factor_mode(std::string_view name) {
  if (name == "internal") return FactorMode::internal;
  if (name == "external") return FactorMode::external;
  if (name == "two-step" || name == "two_step") return FactorMode::two_step;
  throw ConfigError("unknown factor mode '" + std::string(name) + "'");
}

DependenceMeasure parse_measure(std::string_view name) {
  if (name == "dcov") return DependenceMeasure::dcov;
  if (name == "pearson") return DependenceMeasure::pearson;
  throw ConfigError("unknown dependence measure '" + std::string(name) + "'");
}

std::size_t Graph::rejected_count() const {
  return static_cast<std::size_t>(std::count_if(
      edges.begin(), edges.end(), [](const EdgeTest& e) { return e.rejected; }));
}

std::vector<std::pair<Index, Index>> Graph::untestable_pairs() const {
  std::vector<std::pair<Index, Index>> out;
  for (const EdgeTest& e : edges) {
    if (e.untestable) out.emplace_back(e.i, e.j);
  }
  return out;
}

Eigen::MatrixXd Graph::p_value_matrix() const {
  Eigen::MatrixXd p = Eigen::MatrixXd::Ones(nodes(), nodes());
  for (const EdgeTest& e : edges) {
    if (e.p_value) {
      p(e.i, e.j) = *e.p_value;
      p(e.j, e.i) = *e.p_value;
    }
  }
  return p;
}

std::uint64_t pair_seed(std::uint64_t master_seed, Index i, Index j) {
  return stream_seed(master_seed, std::min(i, j), std::max(i, j));
}

namespace {

constexpr std::uint64_t kProjectionStream = 0;
constexpr std::uint64_t kPermutationStream = 1;
constexpr std::uint64_t kExternalStream = 0xe7e7e7ULL;

bool vanished(const Eigen::VectorXd& resid, const Eigen::VectorXd& raw) {
  const double scale = raw.norm();
  return scale == 0.0 || resid.norm() <= 1e-10 * scale;
}

void check_alpha(Selection selection, double alpha, const GraphConfig& config) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1)");
  }
  if (config.permutations && *config.permutations == 0) {
    if (selection == Selection::bh_fdr) {
      throw ConfigError("BH selection needs permutation p-values");
    }
    if (alpha > kMaxAsymptoticAlpha) {
      throw ConfigError("asymptotic decisions need alpha <= 0.215");
    }
  }
}

std::vector<std::string> default_labels(Index d, std::vector<std::string> labels) {
  if (labels.empty()) {
    for (Index k = 0; k < d; ++k) labels.push_back("v" + std::to_string(k + 1));
  }
  if (static_cast<Index>(labels.size()) != d) {
    throw InvalidInput("expected " + std::to_string(d) + " node labels");
  }
  return labels;
}

std::vector<std::pair<Index, Index>> all_pairs(Index d) {
  std::vector<std::pair<Index, Index>> out;
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) out.emplace_back(i, j);
  }
  return out;
}

void apply_selection(Graph& g, const GraphConfig& config) {
  if (g.permutations == 0) {
    const double threshold = critical_value(g.alpha);
    for (EdgeTest& e : g.edges) {
      e.rejected = !e.untestable && e.statistic > threshold;
    }
    return;
  }
  if (g.selection == Selection::per_test_alpha) {
    for (EdgeTest& e : g.edges) {
      e.rejected = !e.untestable && e.p_value && *e.p_value <= g.alpha;
    }
    return;
  }
  std::vector<double> pvals;
  std::vector<std::size_t> where;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    if (!g.edges[k].untestable && g.edges[k].p_value) {
      pvals.push_back(*g.edges[k].p_value);
      where.push_back(k);
    }
  }
  const std::size_t d_bar =
      config.bh_count_untestable ? g.edges.size() : pvals.size();
  for (EdgeTest& e : g.edges) e.rejected = false;
  if (pvals.empty()) return;
  for (std::size_t k : bh_select(pvals, g.alpha, d_bar)) {
    g.edges[where[k]].rejected = true;
  }
}

Graph empty_graph(Index d, Selection selection, double alpha, FactorMode mode,
                  const GraphConfig& config, std::uint64_t seed, Index n,
                  std::vector<std::string> labels) {
  Graph g;
  g.node_labels = default_labels(d, std::move(labels));
  g.selection = selection;
  g.alpha = alpha;
  g.factor_mode = mode;
  g.projection = config.projection;
  g.measure = config.measure;
  g.permutations = config.permutations.value_or(default_permutations(n));
  g.seed = seed;
  return g;
}

}  // namespace

EdgeTest residual_pair_test(const Eigen::VectorXd& resid_i,
                            const Eigen::VectorXd& resid_j,
                            const Eigen::VectorXd& raw_i,
                            const Eigen::VectorXd& raw_j, Index i, Index j,
                            const GraphConfig& config, std::uint64_t seed) {
  EdgeTest edge;
  edge.i = std::min(i, j);
  edge.j = std::max(i, j);
  if (vanished(resid_i, raw_i) || vanished(resid_j, raw_j)) {
    edge.untestable = true;
    return edge;
  }
  const Index n = resid_i.size();
  const std::size_t permutations =
      config.permutations.value_or(default_permutations(n));
  const std::uint64_t perm_seed = stream_seed(seed, kPermutationStream);
  try {
    if (config.measure == DependenceMeasure::pearson) {
      const TestResult t =
          pearson_permutation_test(resid_i, resid_j, permutations, perm_seed);
      edge.statistic = t.statistic;
      edge.p_value = t.p_value;
    } else {
      PermutationEngine engine(pairwise_distances(DataMatrix::from_column(resid_i)),
                               pairwise_distances(DataMatrix::from_column(resid_j)));
      edge.statistic = normalized_statistic(engine.observed_components());
      if (permutations > 0) edge.p_value = engine.p_value(permutations, perm_seed);
    }
  } catch (const DegenerateSample&) {
    edge.untestable = true;
    edge.statistic = 0.0;
    edge.p_value.reset();
  }
  return edge;
}

EdgeTest pair_test(const DataMatrix& z, Index i, Index j,
                   const GraphConfig& config, std::uint64_t seed) {
  if (i == j) throw InvalidInput("pair test needs two distinct nodes");
  const Index d = z.cols();
  if (i < 0 || j < 0 || i >= d || j >= d) {
    throw InvalidInput("node index out of range");
  }
  if (d < 3) throw InvalidInput("internal-factor tests need at least 3 nodes");
  const Index a = std::min(i, j);
  const Index b = std::max(i, j);
  const std::uint64_t edge_seed = pair_seed(seed, a, b);
  const Index pair[] = {a, b};
  const DataMatrix responses = z.select_columns(pair);
  const DataMatrix factors = z.drop_columns(pair);
  const ResidualSet rs =
      residualize(responses, factors, config.projection,
                  stream_seed(edge_seed, kProjectionStream),
                  config.projection_options);
  return residual_pair_test(rs.residuals.values().col(0),
                            rs.residuals.values().col(1),
                            responses.values().col(0), responses.values().col(1),
                            a, b, config, edge_seed);
}

Graph build_graph(const DataMatrix& z, Selection selection, double alpha,
                  const GraphConfig& config, std::uint64_t seed,
                  std::vector<std::string> labels) {
  const Index d = z.cols();
  if (d < 3) throw InvalidInput("graph building needs at least 3 nodes");
  if (z.rows() < 10) throw InvalidInput("graph building needs at least 10 rows");
  check_alpha(selection, alpha, config);
  Graph g = empty_graph(d, selection, alpha, FactorMode::internal, config, seed,
                        z.rows(), std::move(labels));
  const auto pairs = all_pairs(d);
  g.edges.resize(pairs.size());
  parallel_for(pairs.size(), config.threads, [&](std::size_t k) {
    g.edges[k] = pair_test(z, pairs[k].first, pairs[k].second, config, seed);
  });
  apply_selection(g, config);
  return g;
}

Graph external_factor_graph(const DataMatrix& z, const DataMatrix& f,
                            Selection selection, double alpha,
                            const GraphConfig& config, std::uint64_t seed,
                            std::vector<std::string> labels) {
  if (f.cols() == 0) throw InvalidInput("external mode requires at least one factor");
  if (z.rows() != f.rows()) throw InvalidInput("nodes and factors differ in rows");
  const Index d = z.cols();
  if (d < 2) throw InvalidInput("graph building needs at least 2 nodes");
  if (z.rows() < 10) throw InvalidInput("graph building needs at least 10 rows");
  check_alpha(selection, alpha, config);
  const ResidualSet rs = residualize(z, f, config.projection,
                                     stream_seed(seed, kExternalStream),
                                     config.projection_options);
  Graph g = empty_graph(d, selection, alpha, FactorMode::external, config, seed,
                        z.rows(), std::move(labels));
  const auto pairs = all_pairs(d);
  g.edges.resize(pairs.size());
  const Eigen::MatrixXd& resid = rs.residuals.values();
  parallel_for(pairs.size(), config.threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    g.edges[k] = residual_pair_test(resid.col(i), resid.col(j),
                                    z.values().col(i), z.values().col(j), i, j,
                                    config, pair_seed(seed, i, j));
  });
  apply_selection(g, config);
  return g;
}

Graph two_step_graph(const DataMatrix& z, const DataMatrix& f,
                     Selection selection, double alpha,
                     const GraphConfig& config, std::uint64_t seed,
                     std::vector<std::string> labels) {
  if (f.cols() == 0) throw InvalidInput("two-step mode requires at least one factor");
  if (z.rows() != f.rows()) throw InvalidInput("nodes and factors differ in rows");
  check_alpha(selection, alpha, config);
  const ResidualSet rs = residualize(z, f, config.projection,
                                     stream_seed(seed, kExternalStream),
                                     config.projection_options);
  Graph g = build_graph(rs.residuals, selection, alpha, config, seed,
                        std::move(labels));
  g.factor_mode = FactorMode::two_step;
  return g;
}

DegreeSummary degree_distribution(const Graph& graph) {
  DegreeSummary s;
  s.degrees.assign(static_cast<std::size_t>(graph.nodes()), 0);
  for (const EdgeTest& e : graph.edges) {
    if (!e.rejected) continue;
    ++s.degrees[static_cast<std::size_t>(e.i)];
    ++s.degrees[static_cast<std::size_t>(e.j)];
  }
  if (!s.degrees.empty()) {
    std::size_t total = 0;
    for (std::size_t v : s.degrees) total += v;
    s.mean = static_cast<double>(total) / static_cast<double>(s.degrees.size());
  }
  return s;
}

}  // namespace pdcov
