#include "pdcov/experiments.hpp"

#include <cmath>
#include <string>

#include "pdcov/dcov.hpp"
#include "pdcov/error.hpp"
#include "pdcov/parallel.hpp"
#include "pdcov/rng.hpp"

namespace pdcov {

void SimSpec::validate() const {
  if (example_id < 1 || example_id > 5) {
    throw ConfigError("example id must be 1..5, got " + std::to_string(example_id));
  }
  if (reps == 0) throw ConfigError("reps must be positive");
  if (n < 10) throw ConfigError("n must be at least 10");
  switch (example_id) {
    case 1:
      if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("rho must lie in [0, 1)");
      if (p < 1 || q < 1) throw ConfigError("p and q must be positive");
      if (k < 3) throw ConfigError("Example 1 needs k >= 3");
      break;
    case 2:
      if (d < 3) throw ConfigError("d must be at least 3");
      break;
    case 4:
      if (d < 3) throw ConfigError("d must be at least 3");
      if (k < 1) throw ConfigError("k must be positive");
      break;
    case 5:
      if (k < 1) throw ConfigError("k must be positive");
      [[fallthrough]];
    case 3:
      if (example3.t_dim < 0 || example3.ggm_dim < 0 ||
          example3.t_dim + example3.ggm_dim < 3) {
        throw ConfigError("t and GGM blocks need at least 3 columns in total");
      }
      if (example3.dof < 1) throw ConfigError("degrees of freedom must be positive");
      break;
  }
}

SimSpec desk_spec(int example_id) {
  SimSpec s;
  s.example_id = example_id;
  if (example_id == 1) {
    s.n = 200;
    s.reps = 200;
    s.k = 1000;
    return s;
  }
  s.n = 300;
  s.d = 10;
  s.reps = 20;
  s.k = 30;
  s.example3.t_dim = 7;
  s.example3.ggm_dim = 3;
  return s;
}

SimSpec full_spec(int example_id) {
  SimSpec s = desk_spec(example_id);
  if (example_id == 1) {
    s.reps = 1000;
    return s;
  }
  s.d = 30;
  s.reps = 100;
  s.example3.t_dim = 20;
  s.example3.ggm_dim = 10;
  return s;
}

std::uint64_t rep_seed(std::uint64_t master, std::size_t rep) {
  return stream_seed(master, 0x5eedULL, rep);
}

GraphData generate_graph_data(const SimSpec& spec, std::uint64_t seed) {
  switch (spec.example_id) {
    case 2:
      return gen_example2(spec.n, spec.d, seed);
    case 3:
      return gen_example3(spec.n, seed, spec.example3);
    case 4:
      return gen_example4(spec.n, spec.d, spec.k, spec.g, seed);
    case 5: {
      Example5Options o;
      o.u = spec.example3;
      o.k = spec.k;
      return gen_example5(spec.n, spec.g, seed, o);
    }
    default:
      throw ConfigError("example " + std::to_string(spec.example_id) +
                        " does not generate a graph");
  }
}

std::vector<Example1Rep> example1_replicates(const SimSpec& spec,
                                             const Example1Config& config) {
  spec.validate();
  if (spec.example_id != 1) throw ConfigError("example1_replicates needs example 1");
  Example1Options shape{spec.p, spec.q, spec.k};
  const std::size_t r = config.permutations.value_or(default_permutations(spec.n));

  std::vector<Example1Rep> out(spec.reps);
  parallel_for(spec.reps, config.threads, [&](std::size_t rep) {
    const std::uint64_t seed = rep_seed(spec.seed, rep);
    const Example1Data data = gen_example1(spec.n, spec.rho, stream_seed(seed, 0), shape);
    DataMatrix ex;
    DataMatrix ey;
    if (config.oracle) {
      ex = data.eps_x;
      ey = data.eps_y;
    } else {
      Eigen::MatrixXd joint(spec.n, spec.p + spec.q);
      joint << data.x.values(), data.y.values();
      const ResidualSet res = residualize(DataMatrix(std::move(joint)), data.f,
                                          config.projection, stream_seed(seed, 1),
                                          config.projection_options);
      ex = DataMatrix(res.residuals.values().leftCols(spec.p));
      ey = DataMatrix(res.residuals.values().rightCols(spec.q));
    }
    const TestResult t = permutation_test(ex, ey, r, stream_seed(seed, 2));
    out[rep] = {t.statistic, t.p_value};
  });
  return out;
}

std::vector<RateRow> rejection_rates(std::span<const Example1Rep> reps,
                                     std::span<const double> alphas) {
  if (reps.size() < 50) throw ConfigError("rate tables need at least 50 reps");
  std::vector<RateRow> rows;
  for (double alpha : alphas) {
    RateRow row;
    row.alpha = alpha;
    row.reps = reps.size();
    std::optional<double> threshold;
    for (const Example1Rep& r : reps) {
      bool reject = false;
      if (r.p_value) {
        if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
        reject = *r.p_value <= alpha;
      } else {
        if (!threshold) threshold = critical_value(alpha);
        reject = r.statistic > *threshold;
      }
      row.rejections += reject ? 1 : 0;
    }
    row.rate = static_cast<double>(row.rejections) / static_cast<double>(row.reps);
    row.half_width = 1.96 * std::sqrt(row.rate * (1.0 - row.rate) /
                                      static_cast<double>(row.reps));
    rows.push_back(row);
  }
  return rows;
}

std::vector<RateRow> type1_power_table(const SimSpec& spec,
                                       std::span<const double> alphas,
                                       const Example1Config& config) {
  spec.validate();
  if (spec.reps < 50) throw ConfigError("rate tables need at least 50 reps");
  const auto reps = example1_replicates(spec, config);
  return rejection_rates(reps, alphas);
}

AucExperiment graph_auc_experiment(const SimSpec& spec,
                                   const GraphMethod& method,
                                   std::size_t threads) {
  spec.validate();
  if (spec.example_id < 2) throw ConfigError("graph experiments need examples 2 to 5");
  if (method.graph.permutations && *method.graph.permutations == 0) {
    throw ConfigError("ROC curves need permutation p-values");
  }
  std::vector<RocSummary> curves(spec.reps);
  parallel_for(spec.reps, threads, [&](std::size_t rep) {
    const std::uint64_t seed = rep_seed(spec.seed, rep);
    const GraphData data = generate_graph_data(spec, stream_seed(seed, 0));
    const std::uint64_t test_seed = stream_seed(seed, 1);
    // Selection does not matter for p-values; alpha is a placeholder.
    Graph g;
    switch (method.mode) {
      case FactorMode::internal:
        g = build_graph(data.z, Selection::per_test_alpha, 0.05, method.graph, test_seed);
        break;
      case FactorMode::external:
      case FactorMode::two_step:
        if (!data.f) {
          throw ConfigError("example " + std::to_string(spec.example_id) +
                            " has no external factors");
        }
        g = method.mode == FactorMode::external
                ? external_factor_graph(data.z, *data.f, Selection::per_test_alpha,
                                        0.05, method.graph, test_seed)
                : two_step_graph(data.z, *data.f, Selection::per_test_alpha, 0.05,
                                 method.graph, test_seed);
        break;
    }
    curves[rep] = roc_from_pvalues(g.p_value_matrix(), data.truth);
  });

  AucExperiment out;
  out.label = method.label;
  double sum = 0.0;
  for (const auto& c : curves) {
    out.aucs.push_back(c.auc);
    sum += c.auc;
  }
  out.mean_auc = sum / static_cast<double>(curves.size());
  double ss = 0.0;
  for (double a : out.aucs) ss += (a - out.mean_auc) * (a - out.mean_auc);
  out.sd_auc = curves.size() > 1 ? std::sqrt(ss / static_cast<double>(curves.size() - 1)) : 0.0;
  out.mean_curve = average_roc(curves);
  return out;
}

}  // namespace pdcov
