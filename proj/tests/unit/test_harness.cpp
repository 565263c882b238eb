// Copyright 2026 The loadplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <numbers>
#include <sstream>

#include "loadplan/errors.hpp"
#include "loadplan/harness.hpp"
#include "loadplan/io.hpp"
#include "oracles.hpp"

namespace loadplan {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::vector<std::string> split(const std::string& header) {
  return parse_csv(header + "\n").front();
}

// Small scenario: a narrow region and a few cycles.
ScenarioConfig small_config() {
  ScenarioConfig c;
  c.region = {-1.0, 3.0, 0.0, 6.0};
  c.cycles = 3;
  c.depths = {1, 2};
  c.strategies = {Strategy::kGreedy, Strategy::kNominal};
  c.seeds = {0, 1, 2};
  return c;
}

VTurnLut table_for(const ScenarioConfig& c) {
  return testing::distance_lut(c.dump, {LutAxis{-5.0, 1.0, 14}, LutAxis{0.0, 1.0, 7},
                                        LutAxis{0.0, 2 * kPi / 24, 24}});
}

class ExperimentTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    config_ = new ScenarioConfig(small_config());
    lut_ = new VTurnLut(table_for(*config_));
    ExperimentOptions opts;
    opts.jobs = 2;
    result_ = new ExperimentResult(run_experiment(*config_, *lut_, opts));
  }
  static void TearDownTestSuite() {
    delete result_;
    delete lut_;
    delete config_;
  }
  static ScenarioConfig* config_;
  static VTurnLut* lut_;
  static ExperimentResult* result_;
};

ScenarioConfig* ExperimentTest::config_ = nullptr;
VTurnLut* ExperimentTest::lut_ = nullptr;
ExperimentResult* ExperimentTest::result_ = nullptr;

TEST(Config, DefaultRoundTrips) {
  const ScenarioConfig c;
  const std::string json = config_to_json(c);
  EXPECT_EQ(config_to_json(parse_config(json)), json);
  EXPECT_NE(json.find("\"dump_pose_m_deg\""), std::string::npos);
}

TEST(Config, EditedValuesSurvive) {
  ScenarioConfig c;
  c.cycles = 7;
  c.depths = {2, 5};
  c.seeds = {11, 12};
  c.dump = {-10.0, -2.0, -0.25 * kPi};
  c.strategies = {Strategy::kMaxLoading};
  const ScenarioConfig back = parse_config(config_to_json(c));
  EXPECT_EQ(back.cycles, 7);
  EXPECT_EQ(back.depths, c.depths);
  EXPECT_EQ(back.seeds, c.seeds);
  EXPECT_NEAR(back.dump.heading, -0.25 * kPi, 1e-12);
  EXPECT_EQ(back.strategies, c.strategies);
}

TEST(Config, PartialDocumentKeepsDefaults) {
  const ScenarioConfig c = parse_config(R"({"cycles": 8})");
  EXPECT_EQ(c.cycles, 8);
  EXPECT_EQ(c.seeds.size(), 10u);
  EXPECT_NEAR(c.dump.x, -12.0, 0.0);
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_THROW(parse_config(R"({"cycle": 4})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"pile": {"crest_height": 1.8}})"), ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
}

TEST(Config, InvalidValuesRejected) {
  EXPECT_THROW(parse_config(R"({"seeds": []})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"cycles": 0})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"strategies": ["random"]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"depths": [3], "cycles": 2})"), ConfigError);
}

TEST(Config, LutAxesCoverRegion) {
  const ScenarioConfig c;
  const auto axes = scenario_lut_axes(c);
  EXPECT_LE(axes[0].min, c.region.x_min);
  EXPECT_GE(axes[0].min + axes[0].step * (axes[0].count - 1), c.region.x_max);
  EXPECT_LE(axes[1].min, c.region.y_min);
  EXPECT_GE(axes[1].min + axes[1].step * (axes[1].count - 1), c.region.y_max);
  EXPECT_NEAR(axes[2].step * axes[2].count, 2 * kPi, 1e-12);
}

TEST(InitialPile, SeededAndSettled) {
  const ScenarioConfig c;
  EXPECT_TRUE(initial_pile(c, 3) == initial_pile(c, 3));
  EXPECT_FALSE(initial_pile(c, 3) == initial_pile(c, 4));
  EXPECT_LE(max_slope(initial_pile(c, 3)), std::tan(c.surrogate.repose) + 1e-6);
}

TEST_F(ExperimentTest, Cardinality) {
  const std::size_t per_seed = config_->depths.size() + config_->strategies.size();
  ASSERT_EQ(result_->runs.size(), config_->seeds.size() * per_seed);
  // Seed-major; depths, then strategies.
  for (std::size_t s = 0; s < config_->seeds.size(); ++s) {
    const RunRecord* r = &result_->runs[s * per_seed];
    EXPECT_EQ(r[0].seed, config_->seeds[s]);
    EXPECT_EQ(r[0].label(), "tree_d1");
    EXPECT_EQ(r[1].label(), "tree_d2");
    EXPECT_EQ(r[2].label(), "greedy");
    EXPECT_EQ(r[3].label(), "nominal");
  }
  EXPECT_EQ(aggregate(*result_).size(), per_seed);
}

TEST_F(ExperimentTest, DepthOneEqualsGreedy) {
  for (std::size_t k = 0; k < result_->runs.size(); k += 4) {
    const RunTotals& a = result_->runs[k].totals;
    const RunTotals& b = result_->runs[k + 2].totals;
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_EQ(a.mass, b.mass);
    EXPECT_EQ(a.time, b.time);
    EXPECT_EQ(a.work, b.work);
  }
}

TEST_F(ExperimentTest, TotalsMatchSteps) {
  for (const RunRecord& r : result_->runs) {
    double obj = 0, mass = 0, time = 0, work = 0;
    for (const PlanStep& s : r.plan.steps) {
      obj += s.objective;
      mass += s.perf_total.mass;
      time += s.perf_total.time;
      work += s.perf_total.work;
      EXPECT_EQ(s.field_after, nullptr);
    }
    EXPECT_NEAR(r.totals.objective, obj, 1e-12 * obj);
    EXPECT_NEAR(r.totals.mass, mass, 1e-12 * mass);
    EXPECT_NEAR(r.totals.time, time, 1e-12 * time);
    EXPECT_NEAR(r.totals.work, work, 1e-12 * work);
    EXPECT_NEAR(r.totals.time_load + r.totals.time_vturn + r.totals.time_dump,
                r.totals.time, 1e-9 * time);
    EXPECT_EQ(r.totals.cycles, static_cast<int>(r.plan.steps.size()));
  }
}

TEST_F(ExperimentTest, AggregatesRecomputable) {
  std::map<std::string, std::vector<double>> objs;
  for (const RunRecord& r : result_->runs) objs[r.label()].push_back(r.totals.objective);
  for (const Aggregate& a : aggregate(*result_)) {
    const std::vector<double>& v = objs.at(a.label);
    double mean = 0;
    for (double x : v) mean += x;
    mean /= v.size();
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (v.size() - 1));
    EXPECT_EQ(a.runs, static_cast<int>(v.size()));
    EXPECT_NEAR(a.obj_mean, mean, 1e-12 * mean);
    EXPECT_NEAR(a.obj_std, sd, 1e-12 * mean);
  }
}

TEST_F(ExperimentTest, DepthSweepSchema) {
  const Report rep = depth_sweep_report(*result_);
  const auto rows = parse_csv(rep.csv);
  ASSERT_EQ(rows.size(), 1 + config_->depths.size());
  EXPECT_EQ(rows[0], split("depth,obj_mean,obj_std,mass_t,time_s,work_MJ,predictions"));
  EXPECT_LE(std::stoll(rows[1][6]), std::stoll(rows[2][6]));
  EXPECT_TRUE(rep.warnings.empty());
  EXPECT_FALSE(rep.svg.empty());
}

TEST_F(ExperimentTest, StrategyRowsConsistent) {
  const Report rep = strategy_report(*result_);
  const auto rows = parse_csv(rep.csv);
  ASSERT_EQ(rows[0], split("strategy,runs,obj_mean,obj_std,mass_t,time_load_s,"
                           "time_vturn_s,time_dump_s,time_s,work_load_MJ,"
                           "work_vturn_MJ,work_MJ,predictions"));
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& r = rows[k];
    const double time = std::stod(r[8]);
    EXPECT_NEAR(std::stod(r[5]) + std::stod(r[6]) + std::stod(r[7]), time, 1e-9 * time);
    const double work = std::stod(r[11]);
    EXPECT_NEAR(std::stod(r[9]) + std::stod(r[10]), work, 1e-9 * work);
  }
}

TEST_F(ExperimentTest, SvgIsWellFormed) {
#ifdef LOADPLAN_PYTHON
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "loadplan_harness_svg";
  fs::create_directories(dir);
  const std::string files[] = {depth_sweep_report(*result_).svg,
                               strategy_report(*result_).svg};
  for (int k = 0; k < 2; ++k) {
    ASSERT_FALSE(files[k].empty());
    const fs::path p = dir / ("chart" + std::to_string(k) + ".svg");
    write_file_atomic(p, files[k]);
    const std::string cmd = std::string(LOADPLAN_PYTHON) +
                            " -c \"import sys, xml.dom.minidom as m; "
                            "d = m.parse(sys.argv[1]); "
                            "sys.exit(d.documentElement.tagName != 'svg')\" " +
                            p.string();
    EXPECT_EQ(std::system(cmd.c_str()), 0) << p;
  }
  fs::remove_all(dir);
#else
  GTEST_SKIP() << "no Python interpreter configured";
#endif
}

TEST_F(ExperimentTest, DeterministicAcrossJobs) {
  ExperimentOptions serial;
  serial.jobs = 1;
  const ExperimentResult again = run_experiment(*config_, *lut_, serial);
  EXPECT_EQ(runs_csv(again), runs_csv(*result_));
  EXPECT_EQ(cycle_series_csv(again), cycle_series_csv(*result_));
  EXPECT_EQ(depth_sweep_report(again).csv, depth_sweep_report(*result_).csv);
  EXPECT_EQ(strategy_report(again).csv, strategy_report(*result_).csv);
}

TEST(Experiment, SingleDepthWarns) {
  ScenarioConfig c = small_config();
  c.depths = {1};
  c.strategies = {Strategy::kGreedy};
  c.seeds = {0};
  c.cycles = 2;
  const VTurnLut lut = table_for(c);
  const ExperimentResult r = run_experiment(c, lut);
  ASSERT_EQ(r.runs.size(), 2u);
  EXPECT_EQ(r.runs[0].totals.objective, r.runs[1].totals.objective);
  const Report rep = depth_sweep_report(r);
  EXPECT_EQ(rep.warnings.size(), 1u);
  EXPECT_TRUE(rep.svg.empty());
  EXPECT_EQ(parse_csv(rep.csv).size(), 2u);
}

TEST(Experiment, RunsCsvHasOneRowPerRun) {
  ScenarioConfig c = small_config();
  c.depths = {1};
  c.strategies = {Strategy::kNominal};
  c.seeds = {4, 5};
  c.cycles = 2;
  const VTurnLut lut = table_for(c);
  const ExperimentResult r = run_experiment(c, lut);
  EXPECT_EQ(parse_csv(runs_csv(r)).size(), 1 + r.runs.size());
  EXPECT_NE(experiment_stats_json(r, 1.0).find("\"runs\""), std::string::npos);
}

}  // namespace
}  // namespace loadplan
