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

// loadplan: pile generation, V-turn tables, plans, experiments, profiling.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "loadplan/errors.hpp"
#include "loadplan/harness.hpp"
#include "loadplan/io.hpp"
#include "loadplan/parallel.hpp"
#include "loadplan/planner.hpp"
#include "loadplan/vturn.hpp"

namespace fs = std::filesystem;
using namespace loadplan;

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;
constexpr double kCycleBudgetMs = 100.0;

struct Common {
  std::string config;
  int jobs = 0;
  bool verbose = false;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> cycles;
  std::vector<int> depths;
  std::vector<std::string> strategies;
  std::vector<std::uint64_t> seeds;
};

ScenarioConfig effective_config(const Common& common, const Overrides& o) {
  ScenarioConfig c = common.config.empty() ? ScenarioConfig{} : load_config(common.config);
  if (o.cycles) c.cycles = *o.cycles;
  if (!o.depths.empty()) c.depths = o.depths;
  if (!o.strategies.empty()) {
    c.strategies.clear();
    for (const std::string& s : o.strategies) c.strategies.push_back(parse_strategy(s));
  }
  if (!o.seeds.empty()) c.seeds = o.seeds;
  if (o.seed) c.seeds = {*o.seed};
  c.validate();
  if (common.verbose) std::cerr << "effective config:\n" << config_to_json(c);
  return c;
}

VTurnLut obtain_lut(const ScenarioConfig& c, const std::string& path, int jobs,
                    bool verbose) {
  if (!path.empty()) {
    VTurnLut lut = load_vlut(path);
    if (lut.dump != c.dump) {
      throw ConfigError(path + ": table was built for a different dump pose");
    }
    return lut;
  }
  if (verbose) std::cerr << "building V-turn table\n";
  return build_scenario_lut(c, jobs);
}

HeightField obtain_pile(const ScenarioConfig& c, const std::string& path,
                        std::uint64_t seed) {
  return path.empty() ? initial_pile(c, seed) : load_hfld(path);
}

void add_common(CLI::App* app, Common& common) {
  app->add_option("--config", common.config, "Scenario JSON (defaults when absent)");
  app->add_option("--jobs", common.jobs, "Worker threads (0: machine parallelism)")
      ->envname("LOADPLAN_JOBS")
      ->check(CLI::NonNegativeNumber);
  app->add_flag("--verbose", common.verbose, "Print the effective config");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loading-sequence planner for wheel-loader excavation"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "loadplan 0.1.0");

  Common common;
  Overrides over;

  auto* cmd_default = app.add_subcommand("default-config", "Print the built-in config");
  std::string default_out;
  cmd_default->add_option("--out", default_out, "Write to a file instead of stdout");

  auto* cmd_pile = app.add_subcommand("generate-pile", "Generate and settle an initial pile");
  add_common(cmd_pile, common);
  std::uint64_t pile_seed = 0;
  std::string pile_out;
  bool pile_csv = false;
  cmd_pile->add_option("--seed", pile_seed, "Noise seed");
  cmd_pile->add_option("--out", pile_out, "Output heightfield (HFLD)")->required();
  cmd_pile->add_flag("--csv", pile_csv, "Write CSV instead of HFLD");

  auto* cmd_lut = app.add_subcommand("precompute-vturns", "Build the V-turn table");
  add_common(cmd_lut, common);
  std::string lut_out;
  cmd_lut->add_option("--out", lut_out, "Output table (VLUT)")->required();

  auto* cmd_plan = app.add_subcommand("plan", "Plan one strategy on one pile");
  add_common(cmd_plan, common);
  std::string plan_strategy = "tree";
  int plan_depth = 1;
  std::uint64_t plan_seed = 0;
  std::string plan_pile;
  std::string plan_lut;
  std::string plan_out;
  std::string plan_stats;
  std::optional<int> plan_cycles;
  cmd_plan->add_option("--strategy", plan_strategy, "tree, greedy, max_loading or nominal");
  cmd_plan->add_option("--depth", plan_depth, "Search depth for tree search")
      ->check(CLI::PositiveNumber);
  cmd_plan->add_option("--seed", plan_seed, "Pile seed");
  cmd_plan->add_option("--cycles", plan_cycles, "Loading cycles");
  cmd_plan->add_option("--pile", plan_pile, "Initial heightfield (HFLD)");
  cmd_plan->add_option("--lut", plan_lut, "V-turn table (VLUT)");
  cmd_plan->add_option("--out", plan_out, "Plan log CSV (stdout when absent)");
  cmd_plan->add_option("--stats", plan_stats, "Statistics JSON");

  auto* cmd_exp = app.add_subcommand("experiment", "Seeded strategy and depth sweep");
  add_common(cmd_exp, common);
  std::string exp_dir;
  std::string exp_lut;
  std::string exp_pile;
  cmd_exp->add_option("--out-dir", exp_dir, "Output directory")->required();
  cmd_exp->add_option("--lut", exp_lut, "V-turn table (VLUT)");
  cmd_exp->add_option("--pile", exp_pile, "Heightfield replacing every generated pile");
  cmd_exp->add_option("--cycles", over.cycles, "Loading cycles");
  cmd_exp->add_option("--depths", over.depths, "Tree-search depths");
  cmd_exp->add_option("--strategies", over.strategies, "Baseline strategies");
  cmd_exp->add_option("--seeds", over.seeds, "Pile seeds");

  auto* cmd_prof = app.add_subcommand("profile", "Time a single loading-cycle prediction");
  add_common(cmd_prof, common);
  int prof_reps = 100;
  std::uint64_t prof_seed = 0;
  std::string prof_lut;
  cmd_prof->add_option("--reps", prof_reps, "Repetitions")->check(CLI::PositiveNumber);
  cmd_prof->add_option("--seed", prof_seed, "Pile seed");
  cmd_prof->add_option("--lut", prof_lut, "V-turn table (VLUT)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (cmd_default->parsed()) {
      const std::string text = config_to_json(ScenarioConfig{});
      if (default_out.empty()) {
        std::cout << text;
      } else {
        write_file_atomic(default_out, text);
      }
      return 0;
    }

    if (cmd_pile->parsed()) {
      over.seed = pile_seed;
      const ScenarioConfig c = effective_config(common, over);
      const HeightField field = initial_pile(c, pile_seed);
      if (pile_csv) {
        std::ostringstream os;
        write_heightfield_csv(os, field);
        write_file_atomic(pile_out, os.str());
      } else {
        save_hfld(pile_out, field);
      }
      std::cerr << "pile seed " << pile_seed << ": " << field.nx() << "x" << field.ny()
                << " cells, volume " << field.volume() << " m^3 -> " << pile_out << '\n';
      return 0;
    }

    if (cmd_lut->parsed()) {
      const ScenarioConfig c = effective_config(common, over);
      const auto t0 = std::chrono::steady_clock::now();
      const VTurnLut lut = build_scenario_lut(c, common.jobs);
      save_vlut(lut_out, lut);
      const double s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cerr << lut.nodes.size() << " nodes in " << s << " s -> " << lut_out << '\n';
      return 0;
    }

    if (cmd_plan->parsed()) {
      over.seed = plan_seed;
      over.cycles = plan_cycles;
      const Strategy strategy = parse_strategy(plan_strategy);
      over.depths = {strategy == Strategy::kTree ? plan_depth : 1};
      const ScenarioConfig c = effective_config(common, over);
      const VTurnLut lut = obtain_lut(c, plan_lut, common.jobs, common.verbose);
      const HeightField field = obtain_pile(c, plan_pile, plan_seed);
      const SurrogateWorldModel model(c.surrogate);
      const Planner planner(model, lut, c.planner_config(common.jobs));
      const PlanResult result = planner.run(strategy, field, c.cycles, plan_depth);
      std::ostringstream csv;
      write_plan_csv(csv, result);
      if (plan_out.empty()) {
        std::cout << csv.str();
      } else {
        write_file_atomic(plan_out, csv.str());
      }
      if (!plan_stats.empty()) {
        write_file_atomic(plan_stats, plan_stats_json(result, c.norm));
      }
      std::cerr << result.steps.size() << " cycles ("
                << termination_name(result.stats.termination) << "), objective "
                << result.total_objective() << ", " << result.stats.predictions_total
                << " predictions\n";
      return 0;
    }

    if (cmd_exp->parsed()) {
      const ScenarioConfig c = effective_config(common, over);
      const auto t0 = std::chrono::steady_clock::now();
      const VTurnLut lut = obtain_lut(c, exp_lut, common.jobs, common.verbose);
      ExperimentOptions opts;
      opts.jobs = common.jobs;
      if (!exp_pile.empty()) opts.initial_field = load_hfld(exp_pile);
      if (common.verbose) {
        opts.progress = [](const RunRecord& r, std::size_t done, std::size_t total) {
          std::cerr << "[" << done << "/" << total << "] seed " << r.seed << ' '
                    << r.label() << " objective " << r.totals.objective << '\n';
        };
      }
      const ExperimentResult result = run_experiment(c, lut, opts);
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      const fs::path dir(exp_dir);
      fs::create_directories(dir);
      write_file_atomic(dir / "runs.csv", runs_csv(result));
      write_file_atomic(dir / "cycles.csv", cycle_series_csv(result));
      const Report depth = depth_sweep_report(result);
      const Report strat = strategy_report(result);
      write_file_atomic(dir / "depth_sweep.csv", depth.csv);
      write_file_atomic(dir / "strategies.csv", strat.csv);
      if (!depth.svg.empty()) write_file_atomic(dir / "depth_sweep.svg", depth.svg);
      if (!strat.svg.empty()) write_file_atomic(dir / "strategies.svg", strat.svg);
      for (const std::string& w : depth.warnings) std::cerr << "warning: " << w << '\n';
      for (const std::string& w : strat.warnings) std::cerr << "warning: " << w << '\n';
      write_file_atomic(dir / "stats.json", experiment_stats_json(result, wall));
      write_file_atomic(dir / "config.json", config_to_json(c));
      std::cout << strat.csv;
      std::cerr << result.runs.size() << " runs in " << wall << " s -> " << dir.string()
                << '\n';
      return 0;
    }

    if (cmd_prof->parsed()) {
      over.seed = prof_seed;
      const ScenarioConfig c = effective_config(common, over);
      VTurnLut lut;
      if (!prof_lut.empty()) {
        lut = obtain_lut(c, prof_lut, common.jobs, common.verbose);
      } else {
        // Lookups cost the same on any lattice; corner nodes keep this fast.
        ScenarioConfig coarse = c;
        coarse.lut.xy_step = std::max(c.region.x_max - c.region.x_min,
                                      c.region.y_max - c.region.y_min);
        lut = build_scenario_lut(coarse, common.jobs);
      }
      const ProfileResult prof = profile_cycle(c, lut, prof_seed, prof_reps);
      std::cout << profile_table(prof);
      if (prof.cycle.mean_ms > kCycleBudgetMs) {
        std::cerr << "budget exceeded: mean loading-cycle prediction "
                  << prof.cycle.mean_ms << " ms > " << kCycleBudgetMs << " ms\n";
        return kRuntimeError;
      }
      std::cout << "budget: " << kCycleBudgetMs << " ms, ok\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
