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
/// \brief Dig-candidate listing along the pile toe, the depth-d evaluation
/// function with greedy rollout, the look-ahead tree search and the
/// single-step strategies.

#ifndef LOADPLAN_PLANNER_HPP_
#define LOADPLAN_PLANNER_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "loadplan/heightfield.hpp"
#include "loadplan/vturn.hpp"
#include "loadplan/worldmodel.hpp"

namespace loadplan {

/// Axis-aligned bounds that dig locations must lie in (inclusive).
struct DigRegion {
  double x_min = -5.0;
  double x_max = 8.0;
  double y_min = 0.0;
  double y_max = 6.0;

  bool contains(double x, double y, double tol = 1e-9) const {
    return x >= x_min - tol && x <= x_max + tol && y >= y_min - tol &&
           y <= y_max + tol;
  }
  void validate() const;
};

struct DigCandidate {
  DigPose pose;
  int index = 0;            // ordinal along the contour
  double arc_length = 0.0;  // m from the start of its contour piece

  friend bool operator==(const DigCandidate&, const DigCandidate&) = default;
};

struct ListupOptions {
  double dx = 1.0;              // m between candidates along the contour
  double contour_level = 0.15;  // m above ground marking the pile toe
  double gradient_radius = 0.5; // m, stencil radius of the smoothed gradient
};

/// Toe contour of the pile inside the region, walked at arc-length spacing
/// dx. Each contour piece is oriented with the pile on its left and walked
/// from where it enters the region; pieces are taken longest first. Points
/// closer than dx/2 to an earlier point are dropped. Headings point up the
/// smoothed height gradient, into the pile. Returns an empty list when no
/// contour crosses the region.
std::vector<DigCandidate> listup(const HeightField& field,
                                 const DigRegion& region,
                                 const ListupOptions& options = {});

/// Total of one cycle: mass from loading only; time and work summed over
/// loading, both V-turns and dumping.
PerformanceTriple perf_total(const PerformanceTriple& load,
                             const PerformanceTriple& v1,
                             const PerformanceTriple& v2,
                             const PerformanceTriple& dump,
                             const Normalization& norm);

enum class Strategy { kTree, kGreedy, kMaxLoading, kNominal };

std::string_view strategy_name(Strategy s);
/// Parses "tree", "greedy", "max_loading" or "nominal".
Strategy parse_strategy(std::string_view name);

struct PlannerConfig {
  DigRegion region;
  ListupOptions listup;
  Normalization norm;
  OptimizerOptions optimizer;
  double dump_time = 5.0;  // s, no work
  /// Evaluate rollout levels with the optimizer's initial action instead of
  /// optimizing each candidate.
  bool fixed_action_rollout = false;
  /// Worker threads for top-level candidate evaluation; < 1 means machine
  /// parallelism.
  int jobs = 1;

  void validate() const;
};

/// Predicted cycle of one candidate on one pile.
struct CyclePrediction {
  DigCandidate candidate;
  ActionResult load;
  PerformanceTriple perf_load;
  PerformanceTriple perf_v1;
  PerformanceTriple perf_v2;
  PerformanceTriple perf_dump;
  PerformanceTriple perf_total;
  double objective = 0.0;  // w . normalized(perf_total)

  double vturn_time() const { return perf_v1.time + perf_v2.time; }
};

struct PlanStep {
  int cycle = 0;  // 1-based
  DigCandidate dig;
  LoadAction action;
  PerformanceTriple perf_load;
  PerformanceTriple perf_v1;
  PerformanceTriple perf_v2;
  PerformanceTriple perf_dump;
  PerformanceTriple perf_total;
  double objective = 0.0;     // this cycle's contribution
  double evaluation = 0.0;    // Q of the selected candidate
  int candidates = 0;
  std::int64_t predictions = 0;
  std::shared_ptr<const HeightField> field_after;
};

enum class Termination { kCompleted, kRegionExhausted };

std::string_view termination_name(Termination t);

struct SearchStats {
  std::int64_t predictions_total = 0;
  std::vector<std::int64_t> predictions_per_cycle;
  double wall_time = 0.0;  // s
  Termination termination = Termination::kCompleted;
};

struct PlanResult {
  std::vector<PlanStep> steps;
  SearchStats stats;

  /// Sum of per-cycle objectives.
  double total_objective() const;
};

/// Look-ahead planner over one world model and one V-turn table. The dump
/// pose is the table's.
class Planner {
 public:
  Planner(const WorldModel& model, const VTurnLut& lut, PlannerConfig config);
  ~Planner();

  Planner(const Planner&) = delete;
  Planner& operator=(const Planner&) = delete;

  const PlannerConfig& config() const { return config_; }
  const Pose2& dump() const { return lut_.dump; }

  /// Predicted cycle at a candidate with an optimized action.
  CyclePrediction predict_cycle(const HeightField& field,
                                const DigCandidate& candidate) const;
  /// Predicted cycle at a candidate with a fixed action.
  CyclePrediction predict_cycle(const HeightField& field,
                                const DigCandidate& candidate,
                                const LoadAction& action) const;

  /// Evaluation value of a candidate whose own cycle is `own`: its
  /// objective plus a greedy rollout over levels 2..min(depth, remaining).
  /// Adds every cycle prediction made to *predictions.
  double evaluate_Q(const HeightField& field, const CyclePrediction& own,
                    int depth, int remaining,
                    std::int64_t* predictions = nullptr) const;

  PlanResult tree_search(const HeightField& field, int cycles, int depth) const;
  PlanResult strategy_greedy(const HeightField& field, int cycles) const;
  PlanResult strategy_max_loading(const HeightField& field, int cycles) const;
  PlanResult strategy_nominal(const HeightField& field, int cycles) const;

  PlanResult run(Strategy strategy, const HeightField& field, int cycles,
                 int depth = 1) const;

 private:
  struct Cache;

  ActionResult loading(const HeightField& field, const DigPose& dig) const;
  CyclePrediction assemble(const DigCandidate& candidate,
                           const ActionResult& load) const;
  /// Greedy pick among predictions: objective, V-turn time, index.
  static std::size_t pick(const std::vector<CyclePrediction>& preds,
                          const std::vector<double>& values);
  PlanResult search(Strategy strategy, const HeightField& field, int cycles,
                    int depth) const;

  const WorldModel& model_;
  const VTurnLut& lut_;
  PlannerConfig config_;
  std::unique_ptr<Cache> cache_;
};

/// One CSV row per cycle.
void write_plan_csv(std::ostream& out, const PlanResult& result);
/// Totals and search statistics.
std::string plan_stats_json(const PlanResult& result, const Normalization& norm);

}  // namespace loadplan

#endif  // LOADPLAN_PLANNER_HPP_
