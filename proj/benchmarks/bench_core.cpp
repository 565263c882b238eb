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

#include <benchmark/benchmark.h>

#include <cstdint>

#include "loadplan/harness.hpp"
#include "loadplan/heightfield.hpp"
#include "loadplan/planner.hpp"
#include "loadplan/vturn.hpp"
#include "loadplan/worldmodel.hpp"

namespace loadplan {
namespace {

const ScenarioConfig& config() {
  static const ScenarioConfig c;
  return c;
}

const HeightField& pile() {
  static const HeightField f = initial_pile(config(), 0);
  return f;
}

const DigCandidate& first_candidate() {
  static const DigCandidate c = listup(pile(), config().region, config().listup).at(0);
  return c;
}

void BM_SettleGeneratedPile(benchmark::State& state) {
  const HeightField raw = generate_pile(config().pile, config().field);
  for (auto _ : state) {
    benchmark::DoNotOptimize(settle(raw, config().surrogate.repose));
  }
}
BENCHMARK(BM_SettleGeneratedPile)->Unit(benchmark::kMillisecond);

void BM_CutoutReplace(benchmark::State& state) {
  const Pose2 pose = first_candidate().pose.pose();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const LocalPatch p = cutout(pile(), pose, n, 0.1 * n);
    benchmark::DoNotOptimize(replace(pile(), p));
  }
}
BENCHMARK(BM_CutoutReplace)->Arg(36)->Arg(52)->Unit(benchmark::kMicrosecond);

void BM_SurrogateEvaluate(benchmark::State& state) {
  const SurrogateWorldModel model(config().surrogate);
  const auto pm = model.bind(pile(), first_candidate().pose);
  // A fresh action each time so the memo never hits.
  LoadAction a = kNominalAction;
  std::uint64_t k = 0;
  for (auto _ : state) {
    a.a[0] = 0.2 + 0.6 * static_cast<double>(k++ % 100003) / 100003.0;
    benchmark::DoNotOptimize(pm->evaluate(a));
  }
}
BENCHMARK(BM_SurrogateEvaluate)->Unit(benchmark::kMicrosecond);

void BM_PredictPile(benchmark::State& state) {
  const SurrogateWorldModel model(config().surrogate);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.predict_pile(pile(), first_candidate().pose, kNominalAction));
  }
}
BENCHMARK(BM_PredictPile)->Unit(benchmark::kMillisecond);

void BM_OptimizeAction(benchmark::State& state) {
  const SurrogateWorldModel model(config().surrogate);
  const auto pm = model.bind(pile(), first_candidate().pose);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_action(*pm, config().norm, config().optimizer));
  }
}
BENCHMARK(BM_OptimizeAction)->Unit(benchmark::kMillisecond);

void BM_PlanVTurn(benchmark::State& state) {
  const ScenarioConfig& c = config();
  const Pose2 dig = first_candidate().pose.pose();
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan_cycle_vturns(c.dump, dig, c.vturn));
  }
}
BENCHMARK(BM_PlanVTurn)->Unit(benchmark::kMillisecond);

void BM_LutLookup(benchmark::State& state) {
  // Lattice corners only; lookup cost does not depend on node density.
  const ScenarioConfig& c = config();
  std::array<LutAxis, 3> axes = scenario_lut_axes(c);
  axes[0] = {axes[0].min, axes[0].max() - axes[0].min, 2};
  axes[1] = {axes[1].min, axes[1].max() - axes[1].min, 2};
  const VTurnLut lut = build_lut(c.dump, axes, c.vturn, c.vehicle);
  const Pose2 dig = first_candidate().pose.pose();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lut_lookup(lut, dig, 4000.0));
  }
}
BENCHMARK(BM_LutLookup);

void BM_Listup(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(listup(pile(), config().region, config().listup));
  }
}
BENCHMARK(BM_Listup)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace loadplan

BENCHMARK_MAIN();
