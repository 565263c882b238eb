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

#ifndef LOADPLAN_TESTS_ORACLES_HPP_
#define LOADPLAN_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "loadplan/planner.hpp"

namespace loadplan::testing {

/// Table whose costs grow with the straight-line distance from the dump to
/// each node, independent of heading.
inline VTurnLut distance_lut(const Pose2& dump, std::array<LutAxis, 3> axes) {
  VTurnLut lut;
  lut.dump = dump;
  lut.axes = axes;
  lut.nodes.resize(static_cast<std::size_t>(axes[0].count) * axes[1].count *
                   axes[2].count);
  for (std::uint32_t h = 0; h < axes[2].count; ++h) {
    for (std::uint32_t j = 0; j < axes[1].count; ++j) {
      for (std::uint32_t i = 0; i < axes[0].count; ++i) {
        const double d = std::hypot(axes[0].min + i * axes[0].step - dump.x,
                                    axes[1].min + j * axes[1].step - dump.y);
        lut.nodes[lut.node_index(i, j, h)] = {
            static_cast<float>(5.0 + 0.5 * d), static_cast<float>(1e4 * d),
            static_cast<float>(6.0 + 0.5 * d), static_cast<float>(1.2e4 * d),
            static_cast<float>(2.0 * d)};
      }
    }
  }
  return lut;
}

inline std::array<LutAxis, 3> toy_axes() {
  return {LutAxis{-6.0, 1.0, 16}, LutAxis{-1.0, 1.0, 9},
          LutAxis{0.0, 2.0 * std::numbers::pi / 24.0, 24}};
}

/// Straight re-derivation of one predicted cycle and of the greedy rollout,
/// built from the world model, optimizer and table lookups only.
class CycleOracle {
 public:
  struct Cycle {
    DigCandidate candidate;
    LoadAction action;
    double objective = 0.0;
    double vturn_time = 0.0;
  };

  CycleOracle(const WorldModel& model, const VTurnLut& lut, PlannerConfig config)
      : model_(model), lut_(lut), config_(config) {}

  Cycle cycle(const HeightField& field, const DigCandidate& c) const {
    const auto pm = model_.bind(field, c.pose);
    const ActionResult r = optimize_action(*pm, config_.norm, config_.optimizer);
    const auto [v1, v2] = lut_lookup(lut_, c.pose.pose(), r.outcome.mass);
    const double time = r.outcome.time + v1.time + v2.time + config_.dump_time;
    const double work = r.outcome.work + v1.work + v2.work + 0.0;
    const PerformanceTriple p = make_performance(r.outcome.mass, time, work, config_.norm);
    return {c, r.action, objective(p, config_.norm), v1.time + v2.time};
  }

  std::vector<Cycle> cycles(const HeightField& field) const {
    std::vector<Cycle> out;
    for (const DigCandidate& c : listup(field, config_.region, config_.listup)) {
      out.push_back(cycle(field, c));
    }
    return out;
  }

  /// Index of the minimum value; ties by V-turn time, then candidate index.
  static std::size_t argmin(const std::vector<Cycle>& cs, const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < cs.size(); ++k) {
      const bool better =
          v[k] < v[best] ||
          (v[k] == v[best] &&
           (cs[k].vturn_time < cs[best].vturn_time ||
            (cs[k].vturn_time == cs[best].vturn_time &&
             cs[k].candidate.index < cs[best].candidate.index)));
      if (better) best = k;
    }
    return best;
  }

  HeightField expand(const HeightField& field, const Cycle& c) const {
    return model_.predict_pile(field, c.candidate.pose, c.action).field;
  }

  /// Own objective plus `levels - 1` greedy follow-up cycles.
  double rollout(const HeightField& field, const Cycle& own, int levels) const {
    double q = own.objective;
    if (levels <= 1) return q;
    HeightField pile = expand(field, own);
    for (int level = 2; level <= levels; ++level) {
      const std::vector<Cycle> cs = cycles(pile);
      if (cs.empty()) break;
      std::vector<double> v;
      for (const Cycle& c : cs) v.push_back(c.objective);
      const Cycle& g = cs[argmin(cs, v)];
      q += g.objective;
      if (level < levels) pile = expand(pile, g);
    }
    return q;
  }

  /// Every policy that picks the first dig freely and then plays greedy;
  /// returns the value of each, in candidate order.
  std::vector<double> greedy_consistent_policies(const HeightField& field,
                                                 int cycles_left) const {
    std::vector<double> out;
    for (const Cycle& c : cycles(field)) out.push_back(rollout(field, c, cycles_left));
    return out;
  }

  /// Minimum total objective over every dig sequence of the given length.
  double exhaustive_minimum(const HeightField& field, int cycles_left) const {
    const std::vector<Cycle> cs = cycles(field);
    if (cs.empty() || cycles_left == 0) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const Cycle& c : cs) {
      const double rest =
          cycles_left > 1 ? exhaustive_minimum(expand(field, c), cycles_left - 1) : 0.0;
      best = std::min(best, c.objective + rest);
    }
    return best;
  }

  /// Replays the look-ahead rule: at every cycle, the candidate minimizing
  /// own objective plus a greedy rollout over the capped depth.
  std::vector<Cycle> lookahead_sequence(const HeightField& field, int cycles_total,
                                        int depth) const {
    std::vector<Cycle> seq;
    HeightField pile = field;
    for (int n = 1; n <= cycles_total; ++n) {
      const std::vector<Cycle> cs = cycles(pile);
      if (cs.empty()) break;
      const int levels = std::min(depth, cycles_total - n + 1);
      std::vector<double> v;
      for (const Cycle& c : cs) v.push_back(rollout(pile, c, levels));
      const Cycle& chosen = cs[argmin(cs, v)];
      seq.push_back(chosen);
      pile = expand(pile, chosen);
    }
    return seq;
  }

 private:
  const WorldModel& model_;
  const VTurnLut& lut_;
  PlannerConfig config_;
};

}  // namespace loadplan::testing

#endif  // LOADPLAN_TESTS_ORACLES_HPP_
