#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "commands.hpp"
#include "csv.hpp"
#include "pdcov/error.hpp"
#include "pdcov/generators.hpp"
#include "pdcov/rng.hpp"

using namespace pdcov;
using namespace pdcov::cli;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("pdcov_cli_" + std::to_string(::getpid()) + "_" + name))
      .string();
}

std::string write_file(const std::string& name, const Eigen::MatrixXd& m,
                       const std::vector<std::string>& header) {
  const std::string path = temp_path(name);
  std::ofstream f(path);
  write_csv(f, header, m);
  return path;
}

std::vector<std::string> names(const std::string& prefix, Index k) {
  std::vector<std::string> out;
  for (Index i = 1; i <= k; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Example-1 style file: x1..x2, y1..y2, f1..f3.
std::string example1_file(double rho) {
  const Example1Data d = gen_example1(80, rho, 5, Example1Options{2, 2, 3});
  Eigen::MatrixXd m(80, 7);
  m << d.x.values(), d.y.values(), d.f.values();
  auto h = names("x", 2);
  for (const auto& s : names("y", 2)) h.push_back(s);
  for (const auto& s : names("f", 3)) h.push_back(s);
  return write_file("ex1_" + std::to_string(rho) + ".csv", m, h);
}

std::string read_all(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Csv, ParsesHeaderAndValues) {
  std::istringstream in("\xEF\xBB\xBF" "a,b\n1,2.5\n\n-3,4e-2\n");
  const Table t = parse_csv(in, true);
  ASSERT_EQ(t.names, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.data.rows(), 2);
  EXPECT_DOUBLE_EQ(t.data.values()(1, 0), -3.0);
  EXPECT_DOUBLE_EQ(t.data.values()(1, 1), 0.04);
}

TEST(Csv, DefaultNamesWithoutHeader) {
  std::istringstream in("1,2,3\n4,5,6\n");
  const Table t = parse_csv(in, false);
  EXPECT_EQ(t.names, (std::vector<std::string>{"v1", "v2", "v3"}));
  EXPECT_EQ(t.data.rows(), 2);
}

TEST(Csv, RaggedRowReportsLine) {
  std::istringstream in("a,b\n1,2\n3\n");
  try {
    parse_csv(in, true);
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Csv, NonNumericCellReportsPosition) {
  std::istringstream in("a,b\n1,2\n3,abc\n");
  try {
    parse_csv(in, true);
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
  }
}

TEST(Csv, NumbersRoundTrip) {
  Rng rng(stream_seed(3, 1));
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, static_cast<int>(rng.next_u64() % 40) - 20);
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(0.1), "0.1");
}

TEST(Selector, NamesIndicesAndRanges) {
  const std::vector<std::string> cols{"a", "b", "c", "d", "e"};
  EXPECT_EQ(parse_selector("1-3,e", cols), (std::vector<Index>{0, 1, 2, 4}));
  EXPECT_EQ(parse_selector("d", cols), (std::vector<Index>{3}));
  EXPECT_EQ(parse_selector("b-d", cols), (std::vector<Index>{1, 2, 3}));
  EXPECT_THROW(parse_selector("a,1", cols), InvalidInput);
  EXPECT_THROW(parse_selector("6", cols), InvalidInput);
  EXPECT_THROW(parse_selector("zz", cols), InvalidInput);
  EXPECT_THROW(parse_selector("3-1", cols), InvalidInput);
}

TEST(RunTest, RejectsStrongDependence) {
  RunConfig c;
  c.command = Command::test;
  c.input = example1_file(0.8);
  c.x_cols = "x1,x2";
  c.y_cols = "y1,y2";
  c.factor_cols = "f1-f3";
  c.projection = ProjectionMethod::ols;
  const auto j = test_report(c);
  EXPECT_EQ(j["R"].get<int>(), 262);  // floor(200 + 5000 / 80)
  EXPECT_LT(j["p_value"].get<double>(), 0.05);
  EXPECT_DOUBLE_EQ(j["alpha"].get<double>(), 0.1);
  EXPECT_EQ(j["n"].get<int>(), 80);
  std::remove(c.input.c_str());
}

TEST(RunTest, ZeroPermutationsGiveNullPValue) {
  RunConfig c;
  c.command = Command::test;
  c.input = example1_file(0.0);
  c.x_cols = "x1";
  c.y_cols = "y1";
  c.factor_cols = "f1-f3";
  c.projection = ProjectionMethod::ols;
  c.permutations = 0;
  const auto j = test_report(c);
  EXPECT_TRUE(j["p_value"].is_null());
  EXPECT_TRUE(j["reject_asymptotic"].is_boolean());
  std::remove(c.input.c_str());
}

TEST(RunTest, ExitCodes) {
  RunConfig c;
  c.command = Command::test;
  c.input = example1_file(0.3);
  c.x_cols = "x1,x2";
  c.y_cols = "x2,y1";
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(run(c, out, err), kExitInput);
  EXPECT_FALSE(err.str().empty());
  c.y_cols = "y1";
  c.alpha = 0.5;
  EXPECT_EQ(run(c, out, err), kExitInput);
  c.alpha.reset();
  c.input = temp_path("missing.csv");
  EXPECT_EQ(run(c, out, err), kExitInput);
  RunConfig s;
  s.command = Command::simulate;
  s.example = 9;
  EXPECT_EQ(run(s, out, err), kExitInput);
}

TEST(RunGraph, OutputIndependentOfThreads) {
  const GraphData g = gen_example2(60, 5, 11);
  Eigen::MatrixXd m = g.z.values();
  m.col(4).setConstant(2.0);
  const std::string path = write_file("graph.csv", m, names("z", 5));
  RunConfig c;
  c.command = Command::graph;
  c.input = path;
  c.permutations = 49;
  c.projection = ProjectionMethod::ols;
  c.threads = 1;
  const std::string one = graph_json(run_graph(c)).dump();
  c.threads = 8;
  const Graph g8 = run_graph(c);
  EXPECT_EQ(graph_json(g8).dump(), one);
  const auto j = graph_json(g8);
  int untestable = 0;
  for (const auto& e : j["edges"]) {
    if (e["untestable"].get<bool>()) {
      ++untestable;
      EXPECT_TRUE(e["statistic"].is_null());
      EXPECT_FALSE(e["rejected"].get<bool>());
    }
  }
  EXPECT_EQ(untestable, 4);
  const std::string csv = graph_edges_csv(g8);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "i,j,name_i,name_j,statistic,p_value,rejected,untestable");
  std::remove(path.c_str());
}

TEST(RunGraph, WritesJsonAndEdges) {
  const std::string path = write_file("g2.csv", gen_example2(40, 4, 2).z.values(), names("z", 4));
  RunConfig c;
  c.command = Command::graph;
  c.input = path;
  c.permutations = 19;
  c.projection = ProjectionMethod::ols;
  c.out = temp_path("g2.json");
  std::ostringstream out;
  std::ostringstream err;
  ASSERT_EQ(run(c, out, err), kExitOk) << err.str();
  EXPECT_EQ(nlohmann::json::parse(read_all(c.out))["edges"].size(), 6u);
  EXPECT_FALSE(read_all(c.out + ".edges.csv").empty());
  EXPECT_NE(err.str().find("pairs rejected"), std::string::npos);
  c.mode = FactorMode::external;
  EXPECT_EQ(run(c, out, err), kExitInput);
  for (const auto& p : {path, c.out, c.out + ".edges.csv"}) std::remove(p.c_str());
}

TEST(RunRoc, ScoresExternalPValues) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Ones(3, 3);
  p(0, 1) = p(1, 0) = 0.01;
  p(0, 2) = p(2, 0) = 0.5;
  p(1, 2) = p(2, 1) = 0.6;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(3, 3);
  t(0, 1) = t(1, 0) = 1;
  RunConfig c;
  c.command = Command::roc;
  c.input = write_file("p.csv", p, names("n", 3));
  c.truth = write_file("t.csv", t, names("n", 3));
  const std::string csv = roc_csv(c);
  EXPECT_NE(csv.find("auc"), std::string::npos);
  EXPECT_NE(csv.find(",1\n"), std::string::npos) << csv;
  t(0, 2) = 2.0;
  c.truth = write_file("t_bad.csv", t, names("n", 3));
  EXPECT_THROW(roc_csv(c), InvalidInput);
  for (const auto& f : {"p.csv", "t.csv", "t_bad.csv"}) std::remove(temp_path(f).c_str());
}
