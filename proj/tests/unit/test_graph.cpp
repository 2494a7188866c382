#include <gtest/gtest.h>

#include "pdcov/dcov.hpp"
#include "pdcov/error.hpp"
#include "pdcov/generators.hpp"
#include "pdcov/graph.hpp"
#include "test_helpers.hpp"

using namespace pdcov;
using pdcov::testing::normal_matrix;

namespace {

GraphConfig quick_config() {
  GraphConfig c;
  c.permutations = 99;
  return c;
}

}  // namespace

TEST(GraphNames, ParseRoundTrip) {
  EXPECT_EQ(parse_selection("bh"), Selection::bh_fdr);
  EXPECT_EQ(parse_factor_mode("two-step"), FactorMode::two_step);
  EXPECT_EQ(parse_measure("pearson"), DependenceMeasure::pearson);
  EXPECT_EQ(to_string(FactorMode::external), "external");
  EXPECT_THROW(parse_selection("holm"), ConfigError);
}

TEST(PairSeed, OrderIndependent) {
  EXPECT_EQ(pair_seed(5, 2, 7), pair_seed(5, 7, 2));
  EXPECT_NE(pair_seed(5, 2, 7), pair_seed(5, 2, 8));
  EXPECT_NE(pair_seed(5, 2, 7), pair_seed(6, 2, 7));
}

TEST(PairTest, SymmetricInNodeOrder) {
  const DataMatrix z(normal_matrix(60, 5, 1));
  const GraphConfig c = quick_config();
  const EdgeTest a = pair_test(z, 1, 3, c, 42);
  const EdgeTest b = pair_test(z, 3, 1, c, 42);
  EXPECT_EQ(a.i, 1);
  EXPECT_EQ(a.j, 3);
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.p_value, b.p_value);
}

TEST(PairTest, InvalidPairs) {
  const DataMatrix z(normal_matrix(30, 4, 1));
  EXPECT_THROW(pair_test(z, 1, 1, quick_config(), 1), InvalidInput);
  EXPECT_THROW(pair_test(z, 0, 9, quick_config(), 1), InvalidInput);
  EXPECT_THROW(pair_test(DataMatrix(normal_matrix(30, 2, 1)), 0, 1, quick_config(), 1),
               InvalidInput);
}

TEST(BuildGraph, EveryPairOnceInOrder) {
  const DataMatrix z(normal_matrix(40, 6, 2));
  const Graph g = build_graph(z, Selection::per_test_alpha, 0.05, quick_config(), 3);
  ASSERT_EQ(g.edges.size(), 15u);
  std::size_t k = 0;
  for (Index i = 0; i < 6; ++i) {
    for (Index j = i + 1; j < 6; ++j, ++k) {
      EXPECT_EQ(g.edges[k].i, i);
      EXPECT_EQ(g.edges[k].j, j);
    }
  }
  EXPECT_EQ(g.node_labels.front(), "v1");
  EXPECT_EQ(g.permutations, 99u);
}

TEST(BuildGraph, ThreadCountDoesNotMatter) {
  const GraphData data = gen_example2(80, 6, 4);
  GraphConfig one = quick_config();
  GraphConfig many = quick_config();
  many.threads = 4;
  const Graph a = build_graph(data.z, Selection::bh_fdr, 0.1, one, 9);
  const Graph b = build_graph(data.z, Selection::bh_fdr, 0.1, many, 9);
  for (std::size_t k = 0; k < a.edges.size(); ++k) {
    EXPECT_EQ(a.edges[k].statistic, b.edges[k].statistic);
    EXPECT_EQ(a.edges[k].p_value, b.edges[k].p_value);
    EXPECT_EQ(a.edges[k].rejected, b.edges[k].rejected);
  }
}

TEST(BuildGraph, RecoversChainStructure) {
  const GraphData data = gen_example2(300, 6, 11);
  const Graph g = build_graph(data.z, Selection::per_test_alpha, 0.05, GraphConfig{}, 1);
  std::size_t on_chain = 0;
  std::size_t off_chain = 0;
  for (const EdgeTest& e : g.edges) {
    if (!e.rejected) continue;
    (e.j - e.i == 1 ? on_chain : off_chain) += 1;
  }
  EXPECT_GT(on_chain, off_chain);
}

TEST(BuildGraph, ConstantColumnIsUntestable) {
  Eigen::MatrixXd z = normal_matrix(40, 4, 5);
  z.col(2).setConstant(1.0);
  const Graph g = build_graph(DataMatrix(z), Selection::bh_fdr, 0.1, quick_config(), 1);
  for (const EdgeTest& e : g.edges) {
    const bool touches = e.i == 2 || e.j == 2;
    EXPECT_EQ(e.untestable, touches);
    if (touches) {
      EXPECT_FALSE(e.p_value);
      EXPECT_FALSE(e.rejected);
    }
  }
  EXPECT_EQ(g.untestable_pairs().size(), 3u);
  EXPECT_EQ(g.p_value_matrix()(0, 2), 1.0);
}

TEST(BuildGraph, BhRejectionsAreSubsetOfPerTest) {
  const GraphData data = gen_example2(150, 6, 12);
  const Graph per = build_graph(data.z, Selection::per_test_alpha, 0.1, quick_config(), 2);
  const Graph bh = build_graph(data.z, Selection::bh_fdr, 0.1, quick_config(), 2);
  for (std::size_t k = 0; k < per.edges.size(); ++k) {
    if (bh.edges[k].rejected) {
      EXPECT_TRUE(per.edges[k].rejected);
    }
    EXPECT_EQ(per.edges[k].p_value, bh.edges[k].p_value);
  }
}

TEST(BuildGraph, AsymptoticModeHasNoPValues) {
  GraphConfig c;
  c.permutations = 0;
  const Graph g = build_graph(DataMatrix(normal_matrix(40, 4, 6)), Selection::per_test_alpha,
                              0.1, c, 1);
  for (const EdgeTest& e : g.edges) {
    EXPECT_FALSE(e.p_value);
    EXPECT_EQ(e.rejected, e.statistic > critical_value(0.1));
  }
  EXPECT_THROW(build_graph(DataMatrix(normal_matrix(40, 4, 6)), Selection::bh_fdr, 0.1, c, 1),
               ConfigError);
  EXPECT_THROW(build_graph(DataMatrix(normal_matrix(40, 4, 6)), Selection::per_test_alpha,
                           0.3, c, 1),
               ConfigError);
}

TEST(BuildGraph, PearsonMeasure) {
  GraphConfig c = quick_config();
  c.measure = DependenceMeasure::pearson;
  const Graph g = build_graph(gen_example2(100, 5, 3).z, Selection::per_test_alpha, 0.05, c, 1);
  EXPECT_EQ(g.measure, DependenceMeasure::pearson);
  for (const EdgeTest& e : g.edges) ASSERT_TRUE(e.p_value);
}

TEST(ExternalGraph, RemovesSharedFactor) {
  const Eigen::MatrixXd f = normal_matrix(200, 1, 7);
  const Eigen::MatrixXd u = normal_matrix(200, 4, 8);
  const Eigen::MatrixXd z = u + 2.0 * f * Eigen::RowVectorXd::Ones(4);
  GraphConfig c = quick_config();
  c.projection = ProjectionMethod::ols;
  const Graph ext = external_factor_graph(DataMatrix(z), DataMatrix(f), Selection::per_test_alpha,
                                          0.01, c, 1);
  EXPECT_EQ(ext.factor_mode, FactorMode::external);
  EXPECT_LE(ext.rejected_count(), 1u);
  EXPECT_THROW(external_factor_graph(DataMatrix(z), DataMatrix(Eigen::MatrixXd(200, 0)),
                                     Selection::per_test_alpha, 0.05, c, 1),
               InvalidInput);
}

TEST(TwoStepGraph, ModeRecorded) {
  const GraphData data = gen_example4(100, 5, 3, FactorShape::linear, 2);
  const Graph g = two_step_graph(data.z, *data.f, Selection::per_test_alpha, 0.05,
                                 quick_config(), 1);
  EXPECT_EQ(g.factor_mode, FactorMode::two_step);
  EXPECT_EQ(g.edges.size(), 10u);
}

TEST(Degrees, HandBuiltGraph) {
  Graph g;
  g.node_labels = {"a", "b", "c", "d"};
  for (Index i = 0; i < 4; ++i) {
    for (Index j = i + 1; j < 4; ++j) {
      EdgeTest e;
      e.i = i;
      e.j = j;
      e.rejected = (i == 0 && (j == 1 || j == 2));
      g.edges.push_back(e);
    }
  }
  const DegreeSummary s = degree_distribution(g);
  EXPECT_EQ(s.degrees, (std::vector<std::size_t>{2, 1, 1, 0}));
  EXPECT_DOUBLE_EQ(s.mean, 1.0);
}

TEST(Degrees, EmptyAndComplete) {
  Graph g;
  g.node_labels = {"a", "b", "c"};
  for (Index i = 0; i < 3; ++i) {
    for (Index j = i + 1; j < 3; ++j) g.edges.push_back(EdgeTest{i, j, 0.0, {}, false, false});
  }
  EXPECT_DOUBLE_EQ(degree_distribution(g).mean, 0.0);
  for (auto& e : g.edges) e.rejected = true;
  EXPECT_EQ(degree_distribution(g).degrees, (std::vector<std::size_t>{2, 2, 2}));
}
