#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "pdcov/dcov.hpp"
#include "pdcov/error.hpp"
#include "pdcov/experiments.hpp"
#include "pdcov/rng.hpp"
#include "pdcov/roc.hpp"

namespace pdcov::cli {

namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> names_of(const Table& t, const std::vector<Index>& cols) {
  std::vector<std::string> out;
  for (Index c : cols) out.push_back(t.names[static_cast<std::size_t>(c)]);
  return out;
}

void require_disjoint(const std::vector<std::vector<Index>>& blocks) {
  std::set<Index> seen;
  for (const auto& b : blocks) {
    for (Index c : b) {
      if (!seen.insert(c).second) {
        throw ConfigError("column blocks must be disjoint (column " +
                          std::to_string(c + 1) + " used twice)");
      }
    }
  }
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write '" + path + "'");
  f << text;
}

std::string method_label(ProjectionMethod p, DependenceMeasure m, FactorMode mode) {
  const std::string proj = p == ProjectionMethod::additive_spline ? "sam"
                           : p == ProjectionMethod::ols           ? "ols"
                                                                  : "lasso";
  return proj + "." + std::string(to_string(m)) + "." + std::string(to_string(mode));
}

}  // namespace

json test_report(const RunConfig& config) {
  const double alpha = config.alpha.value_or(0.1);
  const double threshold = critical_value(alpha);  // validates alpha
  const Table t = read_csv(config.input, config.has_header);
  if (config.x_cols.empty() || config.y_cols.empty()) {
    throw ConfigError("test needs --x-cols and --y-cols");
  }
  const auto xc = parse_selector(config.x_cols, t.names);
  const auto yc = parse_selector(config.y_cols, t.names);
  const auto fc = parse_selector(config.factor_cols, t.names);
  require_disjoint({xc, yc, fc});

  std::vector<Index> responses = xc;
  responses.insert(responses.end(), yc.begin(), yc.end());
  const DataMatrix f = t.data.select_columns(fc);
  const ResidualSet rs = residualize(t.data.select_columns(responses), f,
                                     config.projection, stream_seed(config.seed, 1));
  const auto p = static_cast<Index>(xc.size());
  const DataMatrix ex(rs.residuals.values().leftCols(p));
  const DataMatrix ey(rs.residuals.values().rightCols(static_cast<Index>(yc.size())));
  const Index n = t.data.rows();
  const std::size_t r = config.permutations.value_or(default_permutations(n));
  const TestResult result = permutation_test(ex, ey, r, stream_seed(config.seed, 2),
                                             alpha, config.threads);

  std::vector<std::string> warnings;
  for (const LinearFit& fit : rs.fits) {
    for (const std::string& w : fit.warnings) {
      if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) {
        warnings.push_back(w);
      }
    }
  }
  json j;
  j["statistic"] = result.statistic;
  j["p_value"] = optional_number(result.p_value);
  j["reject_asymptotic"] = result.reject_asymptotic;
  j["critical_value"] = threshold;
  j["alpha"] = alpha;
  j["n"] = n;
  j["R"] = r;
  j["seed"] = config.seed;
  j["method"] = std::string(to_string(config.projection));
  j["x"] = names_of(t, xc);
  j["y"] = names_of(t, yc);
  j["factors"] = names_of(t, fc);
  j["warnings"] = warnings;
  return j;
}

Graph run_graph(const RunConfig& config) {
  const Table t = read_csv(config.input, config.has_header);
  const FactorMode mode = config.mode.value_or(FactorMode::internal);
  const auto fc = parse_selector(config.factor_cols, t.names);
  std::vector<Index> nodes;
  if (!config.node_cols.empty()) {
    nodes = parse_selector(config.node_cols, t.names);
  } else {
    for (Index c = 0; c < t.data.cols(); ++c) {
      if (std::find(fc.begin(), fc.end(), c) == fc.end()) nodes.push_back(c);
    }
  }
  require_disjoint({nodes, fc});
  if (mode == FactorMode::internal && !fc.empty()) {
    throw ConfigError("internal mode takes no factor columns; use --mode external or two-step");
  }
  if (mode != FactorMode::internal && fc.empty()) {
    throw ConfigError("--mode " + std::string(to_string(mode)) + " needs --factor-cols");
  }

  GraphConfig gc;
  gc.projection = config.projection;
  gc.measure = config.measure;
  gc.permutations = config.permutations;
  gc.threads = config.threads;
  const double alpha = config.alpha.value_or(0.05);
  const DataMatrix z = t.data.select_columns(nodes);
  auto labels = names_of(t, nodes);
  switch (mode) {
    case FactorMode::internal:
      return build_graph(z, config.selection, alpha, gc, config.seed, std::move(labels));
    case FactorMode::external:
      return external_factor_graph(z, t.data.select_columns(fc), config.selection, alpha,
                                   gc, config.seed, std::move(labels));
    case FactorMode::two_step:
      return two_step_graph(z, t.data.select_columns(fc), config.selection, alpha, gc,
                            config.seed, std::move(labels));
  }
  throw ConfigError("unknown mode");
}

json graph_json(const Graph& graph) {
  json j;
  j["nodes"] = graph.node_labels;
  j["mode"] = std::string(to_string(graph.factor_mode));
  j["selection"] = std::string(to_string(graph.selection));
  j["alpha"] = graph.alpha;
  j["projection"] = std::string(to_string(graph.projection));
  j["measure"] = std::string(to_string(graph.measure));
  j["permutations"] = graph.permutations;
  j["seed"] = graph.seed;
  json edges = json::array();
  for (const EdgeTest& e : graph.edges) {
    json edge;
    edge["i"] = e.i;
    edge["j"] = e.j;
    edge["names"] = {graph.node_labels[static_cast<std::size_t>(e.i)],
                     graph.node_labels[static_cast<std::size_t>(e.j)]};
    edge["statistic"] = e.untestable ? json(nullptr) : json(e.statistic);
    edge["p_value"] = optional_number(e.p_value);
    edge["rejected"] = e.rejected;
    edge["untestable"] = e.untestable;
    edges.push_back(std::move(edge));
  }
  j["edges"] = std::move(edges);
  return j;
}

std::string graph_edges_csv(const Graph& graph) {
  std::ostringstream out;
  out << "i,j,name_i,name_j,statistic,p_value,rejected,untestable\n";
  for (const EdgeTest& e : graph.edges) {
    out << e.i << ',' << e.j << ',' << graph.node_labels[static_cast<std::size_t>(e.i)]
        << ',' << graph.node_labels[static_cast<std::size_t>(e.j)] << ','
        << (e.untestable ? "" : format_number(e.statistic)) << ','
        << (e.p_value ? format_number(*e.p_value) : "") << ',' << (e.rejected ? 1 : 0)
        << ',' << (e.untestable ? 1 : 0) << '\n';
  }
  return out.str();
}

namespace {

SimSpec simulation_spec(const RunConfig& config) {
  if (config.example < 1 || config.example > 5) {
    throw ConfigError("unknown example id " + std::to_string(config.example) +
                      " (expected 1..5)");
  }
  SimSpec s = config.full_scale ? full_spec(config.example) : desk_spec(config.example);
  if (config.n) s.n = *config.n;
  if (config.d) s.d = *config.d;
  if (config.k) s.k = *config.k;
  if (config.reps) s.reps = *config.reps;
  s.g = config.g;
  s.seed = config.seed;
  s.example3.standard_t_scaling = config.standard_t;
  return s;
}

std::string example1_csv(const RunConfig& config) {
  SimSpec spec = simulation_spec(config);
  const std::vector<double> alphas = config.alphas.empty() ? std::vector<double>{0.1}
                                                           : config.alphas;
  Example1Config ec;
  ec.projection = config.projection;
  ec.oracle = config.oracle;
  ec.permutations = config.permutations;
  ec.threads = config.threads;
  const std::string method =
      config.oracle ? "oracle" : std::string(to_string(config.projection));

  std::ostringstream out;
  out << "example,n,param,reps,seed,method,alpha,rejections,rate,half_width\n";
  for (double rho : config.rho) {
    spec.rho = rho;
    for (const RateRow& row : type1_power_table(spec, alphas, ec)) {
      out << spec.example_id << ',' << spec.n << ",rho=" << format_number(rho) << ','
          << row.reps << ',' << spec.seed << ',' << method << ','
          << format_number(row.alpha) << ',' << row.rejections << ','
          << format_number(row.rate) << ',' << format_number(row.half_width) << '\n';
    }
  }
  return out.str();
}

std::string graph_example_csv(const RunConfig& config) {
  const SimSpec spec = simulation_spec(config);
  GraphMethod method;
  const FactorMode fallback = spec.example_id == 4   ? FactorMode::external
                              : spec.example_id == 5 ? FactorMode::two_step
                                                     : FactorMode::internal;
  method.mode = config.mode.value_or(fallback);
  method.graph.projection = config.projection;
  method.graph.measure = config.measure;
  method.graph.permutations = config.permutations;
  method.label = method_label(config.projection, config.measure, method.mode);
  const AucExperiment result = graph_auc_experiment(spec, method, config.threads);

  std::ostringstream param;
  switch (spec.example_id) {
    case 2:
      param << "d=" << spec.d;
      break;
    case 3:
      param << "t=" << spec.example3.t_dim << ";ggm=" << spec.example3.ggm_dim;
      break;
    case 4:
      param << "d=" << spec.d << ";k=" << spec.k << ";g="
            << (spec.g == FactorShape::square ? "square" : "linear");
      break;
    default:
      param << "t=" << spec.example3.t_dim << ";ggm=" << spec.example3.ggm_dim
            << ";k=" << spec.k << ";g="
            << (spec.g == FactorShape::square ? "square" : "linear");
      break;
  }
  std::ostringstream prefix;
  prefix << spec.example_id << ',' << spec.n << ',' << param.str() << ',' << spec.reps
         << ',' << spec.seed << ',' << method.label << ',';

  std::ostringstream out;
  out << "example,n,param,reps,seed,method,kind,fpr,tpr,auc,auc_sd\n";
  for (const RocPoint& p : result.mean_curve) {
    out << prefix.str() << "point," << format_number(p.fpr) << ','
        << format_number(p.tpr) << ",,\n";
  }
  out << prefix.str() << "auc,,," << format_number(result.mean_auc) << ','
      << format_number(result.sd_auc) << '\n';
  return out.str();
}

}  // namespace

std::string simulate_csv(const RunConfig& config) {
  const SimSpec spec = simulation_spec(config);
  return spec.example_id == 1 ? example1_csv(config) : graph_example_csv(config);
}

std::string roc_csv(const RunConfig& config) {
  if (config.truth.empty()) throw ConfigError("roc needs --truth");
  const Table p = read_csv(config.input, config.has_header);
  const Table truth = read_csv(config.truth, config.has_header);
  const Eigen::MatrixXd& tv = truth.data.values();
  Adjacency adj(tv.rows(), tv.cols());
  for (Index r = 0; r < tv.rows(); ++r) {
    for (Index c = 0; c < tv.cols(); ++c) {
      if (tv(r, c) != 0.0 && tv(r, c) != 1.0) {
        throw InvalidInput("truth entries must be 0 or 1");
      }
      adj(r, c) = tv(r, c) != 0.0 ? 1 : 0;
    }
  }
  const RocSummary roc = roc_from_pvalues(p.data.values(), adj);
  std::ostringstream out;
  out << "kind,threshold,fpr,tpr,auc\n";
  for (const RocPoint& pt : roc.points) {
    out << "point," << format_number(pt.threshold) << ',' << format_number(pt.fpr) << ','
        << format_number(pt.tpr) << ",\n";
  }
  out << "auc,,,," << format_number(roc.auc) << '\n';
  return out.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::string primary;
    switch (config.command) {
      case Command::test:
        primary = test_report(config).dump(2) + "\n";
        break;
      case Command::graph: {
        const Graph g = run_graph(config);
        primary = graph_json(g).dump(2) + "\n";
        const std::string edges = graph_edges_csv(g);
        if (!config.edges_out.empty()) {
          write_text(config.edges_out, edges);
        } else if (!config.out.empty()) {
          write_text(config.out + ".edges.csv", edges);
        }
        const DegreeSummary deg = degree_distribution(g);
        err << "graph: " << g.rejected_count() << " of " << g.edges.size()
            << " pairs rejected, " << g.untestable_pairs().size()
            << " untestable, mean degree " << format_number(deg.mean) << '\n';
        break;
      }
      case Command::simulate:
        primary = simulate_csv(config);
        break;
      case Command::roc:
        primary = roc_csv(config);
        break;
    }
    if (config.out.empty()) {
      out << primary;
    } else {
      write_text(config.out, primary);
    }
    return kExitOk;
  } catch (const ConvergenceError& e) {
    err << "pdcov: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "pdcov: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace pdcov::cli
