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

/// \file
/// \brief Scenario configuration, the seeded experiment runner and its CSV,
/// SVG and JSON reports.

#ifndef LOADPLAN_HARNESS_HPP_
#define LOADPLAN_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loadplan/heightfield.hpp"
#include "loadplan/planner.hpp"
#include "loadplan/vturn.hpp"
#include "loadplan/worldmodel.hpp"

namespace loadplan {

struct LutSpec {
  double xy_step = 1.0;                              // m
  double heading_step = 0.2617993877991494;          // rad (15 deg)
  double reference_mass = 4800.0;                    // kg
};

/// Everything one experiment depends on. The defaults are the documented
/// benchmark: ten seeds, 15 cycles, depths 1 to 6 and three strategies.
struct ScenarioConfig {
  PileSpec pile;
  FieldDims field;
  Pose2 dump{-12.0, -3.0, -0.5235987755982988};
  DigRegion region;
  ListupOptions listup;
  int cycles = 15;
  std::vector<int> depths{1, 2, 3, 4, 5, 6};
  std::vector<Strategy> strategies{Strategy::kGreedy, Strategy::kMaxLoading,
                                   Strategy::kNominal};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  Normalization norm;
  OptimizerOptions optimizer;
  double dump_time = 5.0;
  bool fixed_action_rollout = false;
  SurrogateParams surrogate;
  VehicleParams vehicle;
  VTurnSettings vturn;
  LutSpec lut;

  void validate() const;
  PlannerConfig planner_config(int jobs = 1) const;
};

/// Parses a scenario document. Keys left out keep their defaults; unknown
/// keys are rejected.
ScenarioConfig parse_config(std::string_view json);
/// The full effective configuration as JSON.
std::string config_to_json(const ScenarioConfig& config);
ScenarioConfig load_config(const std::filesystem::path& path);

/// V-turn table axes covering the dig region.
std::array<LutAxis, 3> scenario_lut_axes(const ScenarioConfig& config);
VTurnLut build_scenario_lut(const ScenarioConfig& config, int jobs = 1);

/// Generated and settled initial pile of one seed.
HeightField initial_pile(const ScenarioConfig& config, std::uint64_t seed);

/// Per-run totals, with time and work split by subtask.
struct RunTotals {
  double objective = 0.0;
  double mass = 0.0;        // kg
  double time = 0.0;        // s
  double work = 0.0;        // J
  double time_load = 0.0;
  double time_vturn = 0.0;
  double time_dump = 0.0;
  double work_load = 0.0;
  double work_vturn = 0.0;
  std::int64_t predictions = 0;
  int cycles = 0;
};

RunTotals totals_of(const PlanResult& plan);

struct RunRecord {
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::kGreedy;
  int depth = 1;
  PlanResult plan;  // steps without pile snapshots
  RunTotals totals;

  /// "tree_d4", "greedy", ...
  std::string label() const;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;  // seed-major, tree depths then strategies
};

struct ExperimentOptions {
  int jobs = 1;
  /// Replaces the generated pile for every seed.
  std::optional<HeightField> initial_field;
  /// Called after each finished run (from worker threads, serialized).
  std::function<void(const RunRecord&, std::size_t done, std::size_t total)>
      progress;
};

ExperimentResult run_experiment(const ScenarioConfig& config,
                                const VTurnLut& lut,
                                const ExperimentOptions& options = {});

/// Mean and sample standard deviation over the seeds of one label.
struct Aggregate {
  std::string label;
  Strategy strategy = Strategy::kGreedy;
  int depth = 1;
  int runs = 0;
  double obj_mean = 0.0;
  double obj_std = 0.0;
  RunTotals mean;  // per-field means
};

/// Aggregates in run order of first appearance.
std::vector<Aggregate> aggregate(const ExperimentResult& result);

struct Report {
  std::string csv;
  std::string svg;  // empty when there is nothing to chart
  std::vector<std::string> warnings;
};

/// Tree-search totals against depth: columns depth, obj_mean, obj_std,
/// mass_t, time_s, work_MJ, predictions. The chart needs two depths.
Report depth_sweep_report(const ExperimentResult& result);

/// Totals per strategy (and tree depth) split into loading, V-turns and
/// dumping, plus the per-cycle series as a stacked chart. Needs two labels.
Report strategy_report(const ExperimentResult& result);

/// Mean per-cycle series: label, cycle, mass and the time/work split.
std::string cycle_series_csv(const ExperimentResult& result);

/// One row per run.
std::string runs_csv(const ExperimentResult& result);

/// Run and aggregate statistics including wall times.
std::string experiment_stats_json(const ExperimentResult& result,
                                  double wall_time);

/// Timing of one stage of a loading-cycle prediction, in milliseconds.
struct ProfileRow {
  std::string name;
  double mean_ms = 0.0;
  double p95_ms = 0.0;
};

struct ProfileResult {
  int reps = 0;
  std::vector<ProfileRow> stages;  // per-function timings
  ProfileRow cycle;                // cutout + performance + optimization + pile + lookups
};

/// Times the stages of a single loading-cycle prediction over `reps`
/// candidates of the seed's initial pile, cycling through the candidate list.
ProfileResult profile_cycle(const ScenarioConfig& config, const VTurnLut& lut,
                            std::uint64_t seed, int reps);

/// Table of mean and 95th-percentile times.
std::string profile_table(const ProfileResult& result);

}  // namespace loadplan

#endif  // LOADPLAN_HARNESS_HPP_
