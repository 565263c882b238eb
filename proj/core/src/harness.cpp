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

#include "loadplan/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "loadplan/errors.hpp"
#include "loadplan/io.hpp"
#include "loadplan/parallel.hpp"
#include "svg.hpp"

namespace loadplan {
namespace {

using json = nlohmann::ordered_json;

constexpr double kKmh = 1.0 / 3.6;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// Reads keys from one JSON object, rejecting any key never asked for.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_ + ": expected an object");
  }
  ~Reader() = default;

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = node_.find(key);
    if (it == node_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  void angle_deg(const char* key, double& radians) {
    double deg = rad_to_deg(radians);
    get(key, deg);
    radians = deg_to_rad(deg);
  }

  void scaled(const char* key, double& value, double unit) {
    double v = value / unit;
    get(key, v);
    value = v * unit;
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
      }
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void section(Reader& parent, const char* key, Fn&& fn) {
  if (const json* node = parent.child(key)) {
    Reader r(*node, parent.path() + "." + key);
    fn(r);
    r.finish();
  }
}

std::vector<double> stack3(const RunTotals& t, bool time) {
  return time ? std::vector<double>{t.time_load, t.time_vturn, t.time_dump}
              : std::vector<double>{t.work_load / 1e6, t.work_vturn / 1e6, 0.0};
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

void ScenarioConfig::validate() const {
  pile.validate();
  if (field.nx < 2 || field.ny < 2 || !(field.cell > 0.0)) {
    throw ConfigError("field dimensions must be at least 2x2 with a positive cell");
  }
  region.validate();
  if (!(listup.dx > 0.0)) throw ConfigError("dx must be positive");
  if (cycles < 1) throw ConfigError("cycles must be >= 1");
  for (int d : depths) {
    if (d < 1 || d > cycles) throw ConfigError("every depth must lie in [1, cycles]");
  }
  for (Strategy s : strategies) {
    if (s == Strategy::kTree) {
      throw ConfigError("list tree search under depths, not strategies");
    }
  }
  if (depths.empty() && strategies.empty()) {
    throw ConfigError("config lists neither depths nor strategies");
  }
  if (seeds.empty()) throw ConfigError("seeds must be non-empty");
  norm.validate();
  surrogate.validate();
  vehicle.validate();
  if (!(lut.xy_step > 0.0 && lut.heading_step > 0.0 && lut.reference_mass > 0.0)) {
    throw ConfigError("LUT steps and reference mass must be positive");
  }
  if (!(vturn.box.l1 >= 0.0 && vturn.box.l2 > 0.0)) {
    throw ConfigError("switch-back box needs l1 >= 0 and l2 > 0");
  }
  if (!(dump_time >= 0.0)) throw ConfigError("dump time must be non-negative");
  planner_config().validate();
}

PlannerConfig ScenarioConfig::planner_config(int jobs) const {
  PlannerConfig pc;
  pc.region = region;
  pc.listup = listup;
  pc.norm = norm;
  pc.optimizer = optimizer;
  pc.dump_time = dump_time;
  pc.fixed_action_rollout = fixed_action_rollout;
  pc.jobs = jobs;
  return pc;
}

std::string config_to_json(const ScenarioConfig& c) {
  json j;
  j["pile"] = {{"crest_height_m", c.pile.crest_height},
               {"front_slope_deg", rad_to_deg(c.pile.front_slope)},
               {"noise_amplitude_m", c.pile.noise_amplitude},
               {"noise_frequency_per_m", c.pile.noise_frequency},
               {"noise_octaves", c.pile.noise_octaves},
               {"toe_y_m", c.pile.toe_y},
               {"x_min_m", c.pile.x_min},
               {"x_max_m", c.pile.x_max},
               {"footprint_depth_m", c.pile.footprint_depth}};
  j["field"] = {{"nx", c.field.nx},
                {"ny", c.field.ny},
                {"cell_m", c.field.cell},
                {"origin_x_m", c.field.origin_x},
                {"origin_y_m", c.field.origin_y}};
  j["dump_pose_m_deg"] = {c.dump.x, c.dump.y, rad_to_deg(c.dump.heading)};
  j["dig_region_m"] = {{"x_min", c.region.x_min},
                       {"x_max", c.region.x_max},
                       {"y_min", c.region.y_min},
                       {"y_max", c.region.y_max}};
  j["dx_m"] = c.listup.dx;
  j["contour_level_m"] = c.listup.contour_level;
  j["gradient_radius_m"] = c.listup.gradient_radius;
  j["cycles"] = c.cycles;
  j["depths"] = c.depths;
  json strategies = json::array();
  for (Strategy s : c.strategies) strategies.push_back(std::string(strategy_name(s)));
  j["strategies"] = strategies;
  j["seeds"] = c.seeds;
  j["normalization"] = {{"M0_kg", c.norm.m0},
                        {"T0_s", c.norm.t0},
                        {"W0_J", c.norm.w0},
                        {"weights", c.norm.w}};
  j["optimizer"] = {{"step_length", c.optimizer.step_length},
                    {"fd_step", c.optimizer.fd_step},
                    {"max_iterations", c.optimizer.max_iterations},
                    {"patience", c.optimizer.patience},
                    {"tolerance", c.optimizer.tolerance},
                    {"initial_action", c.optimizer.initial.a}};
  j["fixed_action_rollout"] = c.fixed_action_rollout;
  j["dump_time_s"] = c.dump_time;
  const SurrogateParams& s = c.surrogate;
  j["surrogate"] = {{"bucket_width_m", s.bucket_width},
                    {"bucket_capacity_m3", s.bucket_capacity},
                    {"soil_density_kg_m3", s.soil_density},
                    {"repose_deg", rad_to_deg(s.repose)},
                    {"max_penetration_m", s.max_penetration},
                    {"base_time_s", s.t0},
                    {"time_per_length_s_m", s.c_len},
                    {"time_per_bucket_s", s.c_fill},
                    {"cut_work_J_m3", s.c_cut},
                    {"lift_work_J_kg_m", s.c_lift},
                    {"gravity_m_s2", s.g},
                    {"berm_width_m", s.berm_width},
                    {"patch_offset_m", s.patch_offset},
                    {"min_mass_kg", s.min_mass}};
  const VehicleParams& v = c.vehicle;
  j["vehicle"] = {{"mass_kg", v.mass_vehicle},
                  {"rolling_resistance", v.mu_r},
                  {"gravity_m_s2", v.g},
                  {"target_speed_km_h", v.target_speed / kKmh},
                  {"approach_speed_km_h", v.approach_speed / kKmh},
                  {"approach_window_m", v.approach_window},
                  {"throttle_rate_per_s", v.throttle_rate},
                  {"max_traction_N", v.max_traction},
                  {"brake_decel_m_s2", v.brake_decel},
                  {"dt_s", v.dt}};
  j["vturn"] = {{"gamma", c.vturn.gamma},
                {"box_l1_m", c.vturn.box.l1},
                {"box_l2_m", c.vturn.box.l2},
                {"magnitudes_m", c.vturn.magnitudes},
                {"starts", c.vturn.plan.starts},
                {"samples_per_leg", c.vturn.plan.samples_per_leg},
                {"max_evaluations", c.vturn.plan.max_evaluations},
                {"min_step", c.vturn.plan.min_step}};
  j["lut"] = {{"xy_step_m", c.lut.xy_step},
              {"heading_step_deg", rad_to_deg(c.lut.heading_step)},
              {"reference_mass_kg", c.lut.reference_mass}};
  return j.dump(2) + "\n";
}

ScenarioConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ScenarioConfig c;
  Reader r(root, "config");
  section(r, "pile", [&](Reader& p) {
    p.get("crest_height_m", c.pile.crest_height);
    p.angle_deg("front_slope_deg", c.pile.front_slope);
    p.get("noise_amplitude_m", c.pile.noise_amplitude);
    p.get("noise_frequency_per_m", c.pile.noise_frequency);
    p.get("noise_octaves", c.pile.noise_octaves);
    p.get("toe_y_m", c.pile.toe_y);
    p.get("x_min_m", c.pile.x_min);
    p.get("x_max_m", c.pile.x_max);
    p.get("footprint_depth_m", c.pile.footprint_depth);
  });
  section(r, "field", [&](Reader& f) {
    f.get("nx", c.field.nx);
    f.get("ny", c.field.ny);
    f.get("cell_m", c.field.cell);
    f.get("origin_x_m", c.field.origin_x);
    f.get("origin_y_m", c.field.origin_y);
  });
  if (const json* d = r.child("dump_pose_m_deg")) {
    if (!d->is_array() || d->size() != 3 || !(*d)[0].is_number() ||
        !(*d)[1].is_number() || !(*d)[2].is_number()) {
      throw ConfigError("config.dump_pose_m_deg: expected [x, y, heading_deg]");
    }
    c.dump = {(*d)[0].get<double>(), (*d)[1].get<double>(),
              wrap_angle(deg_to_rad((*d)[2].get<double>()))};
  }
  section(r, "dig_region_m", [&](Reader& g) {
    g.get("x_min", c.region.x_min);
    g.get("x_max", c.region.x_max);
    g.get("y_min", c.region.y_min);
    g.get("y_max", c.region.y_max);
  });
  r.get("dx_m", c.listup.dx);
  r.get("contour_level_m", c.listup.contour_level);
  r.get("gradient_radius_m", c.listup.gradient_radius);
  r.get("cycles", c.cycles);
  r.get("depths", c.depths);
  std::vector<std::string> names;
  bool have_strategies = false;
  if (r.child("strategies")) {
    have_strategies = true;
    r.get("strategies", names);
  }
  if (have_strategies) {
    c.strategies.clear();
    for (const std::string& n : names) c.strategies.push_back(parse_strategy(n));
  }
  r.get("seeds", c.seeds);
  section(r, "normalization", [&](Reader& n) {
    n.get("M0_kg", c.norm.m0);
    n.get("T0_s", c.norm.t0);
    n.get("W0_J", c.norm.w0);
    n.get("weights", c.norm.w);
  });
  section(r, "optimizer", [&](Reader& o) {
    o.get("step_length", c.optimizer.step_length);
    o.get("fd_step", c.optimizer.fd_step);
    o.get("max_iterations", c.optimizer.max_iterations);
    o.get("patience", c.optimizer.patience);
    o.get("tolerance", c.optimizer.tolerance);
    o.get("initial_action", c.optimizer.initial.a);
  });
  r.get("fixed_action_rollout", c.fixed_action_rollout);
  r.get("dump_time_s", c.dump_time);
  section(r, "surrogate", [&](Reader& s) {
    SurrogateParams& p = c.surrogate;
    s.get("bucket_width_m", p.bucket_width);
    s.get("bucket_capacity_m3", p.bucket_capacity);
    s.get("soil_density_kg_m3", p.soil_density);
    s.angle_deg("repose_deg", p.repose);
    s.get("max_penetration_m", p.max_penetration);
    s.get("base_time_s", p.t0);
    s.get("time_per_length_s_m", p.c_len);
    s.get("time_per_bucket_s", p.c_fill);
    s.get("cut_work_J_m3", p.c_cut);
    s.get("lift_work_J_kg_m", p.c_lift);
    s.get("gravity_m_s2", p.g);
    s.get("berm_width_m", p.berm_width);
    s.get("patch_offset_m", p.patch_offset);
    s.get("min_mass_kg", p.min_mass);
  });
  section(r, "vehicle", [&](Reader& v) {
    VehicleParams& p = c.vehicle;
    v.get("mass_kg", p.mass_vehicle);
    v.get("rolling_resistance", p.mu_r);
    v.get("gravity_m_s2", p.g);
    v.scaled("target_speed_km_h", p.target_speed, kKmh);
    v.scaled("approach_speed_km_h", p.approach_speed, kKmh);
    v.get("approach_window_m", p.approach_window);
    v.get("throttle_rate_per_s", p.throttle_rate);
    v.get("max_traction_N", p.max_traction);
    v.get("brake_decel_m_s2", p.brake_decel);
    v.get("dt_s", p.dt);
  });
  section(r, "vturn", [&](Reader& v) {
    v.get("gamma", c.vturn.gamma);
    v.get("box_l1_m", c.vturn.box.l1);
    v.get("box_l2_m", c.vturn.box.l2);
    v.get("magnitudes_m", c.vturn.magnitudes);
    v.get("starts", c.vturn.plan.starts);
    v.get("samples_per_leg", c.vturn.plan.samples_per_leg);
    v.get("max_evaluations", c.vturn.plan.max_evaluations);
    v.get("min_step", c.vturn.plan.min_step);
  });
  section(r, "lut", [&](Reader& l) {
    l.get("xy_step_m", c.lut.xy_step);
    l.angle_deg("heading_step_deg", c.lut.heading_step);
    l.get("reference_mass_kg", c.lut.reference_mass);
  });
  r.finish();
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(read_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::array<LutAxis, 3> scenario_lut_axes(const ScenarioConfig& c) {
  auto axis = [](double lo, double hi, double step) {
    const double n = std::ceil((hi - lo) / step - 1e-9);
    return LutAxis{lo, step, static_cast<std::uint32_t>(std::max(0.0, n)) + 1};
  };
  const double turn = 2.0 * std::numbers::pi;
  const double count = std::round(turn / c.lut.heading_step);
  if (std::abs(count * c.lut.heading_step - turn) > 1e-9) {
    throw ConfigError("LUT heading step must divide 360 degrees");
  }
  return {axis(c.region.x_min, c.region.x_max, c.lut.xy_step),
          axis(c.region.y_min, c.region.y_max, c.lut.xy_step),
          LutAxis{0.0, turn / count, static_cast<std::uint32_t>(count)}};
}

VTurnLut build_scenario_lut(const ScenarioConfig& c, int jobs) {
  return build_lut(c.dump, scenario_lut_axes(c), c.vturn, c.vehicle, jobs,
                   c.lut.reference_mass);
}

HeightField initial_pile(const ScenarioConfig& c, std::uint64_t seed) {
  PileSpec spec = c.pile;
  spec.seed = seed;
  return settle(generate_pile(spec, c.field), c.surrogate.repose);
}

RunTotals totals_of(const PlanResult& plan) {
  RunTotals t;
  for (const PlanStep& s : plan.steps) {
    t.objective += s.objective;
    t.mass += s.perf_total.mass;
    t.time += s.perf_total.time;
    t.work += s.perf_total.work;
    t.time_load += s.perf_load.time;
    t.time_vturn += s.perf_v1.time + s.perf_v2.time;
    t.time_dump += s.perf_dump.time;
    t.work_load += s.perf_load.work;
    t.work_vturn += s.perf_v1.work + s.perf_v2.work;
  }
  t.predictions = plan.stats.predictions_total;
  t.cycles = static_cast<int>(plan.steps.size());
  return t;
}

std::string RunRecord::label() const {
  if (strategy == Strategy::kTree) return "tree_d" + std::to_string(depth);
  return std::string(strategy_name(strategy));
}

ExperimentResult run_experiment(const ScenarioConfig& config,
                                const VTurnLut& lut,
                                const ExperimentOptions& options) {
  config.validate();
  if (lut.dump != config.dump) {
    throw ConfigError("V-turn table was built for a different dump pose");
  }
  const SurrogateWorldModel model(config.surrogate);

  ExperimentResult result;
  for (std::uint64_t seed : config.seeds) {
    for (int d : config.depths) {
      RunRecord r;
      r.seed = seed;
      r.strategy = Strategy::kTree;
      r.depth = d;
      result.runs.push_back(std::move(r));
    }
    for (Strategy s : config.strategies) {
      RunRecord r;
      r.seed = seed;
      r.strategy = s;
      result.runs.push_back(std::move(r));
    }
  }

  std::vector<HeightField> piles;
  piles.reserve(config.seeds.size());
  for (std::uint64_t seed : config.seeds) {
    piles.push_back(options.initial_field ? *options.initial_field
                                          : initial_pile(config, seed));
  }

  const std::size_t per_seed = config.depths.size() + config.strategies.size();
  const PlannerConfig pc = config.planner_config(1);
  std::mutex progress_mutex;
  std::size_t done = 0;
  parallel_for(result.runs.size(), options.jobs, [&](std::size_t k) {
    RunRecord& r = result.runs[k];
    const Planner planner(model, lut, pc);
    r.plan = planner.run(r.strategy, piles[k / per_seed], config.cycles, r.depth);
    for (PlanStep& s : r.plan.steps) s.field_after.reset();
    r.totals = totals_of(r.plan);
    if (options.progress) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      options.progress(r, ++done, result.runs.size());
    }
  });
  return result;
}

std::vector<Aggregate> aggregate(const ExperimentResult& result) {
  std::vector<Aggregate> out;
  std::vector<std::vector<const RunRecord*>> members;
  for (const RunRecord& r : result.runs) {
    const std::string label = r.label();
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Aggregate& a) { return a.label == label; });
    if (it == out.end()) {
      Aggregate a;
      a.label = label;
      a.strategy = r.strategy;
      a.depth = r.depth;
      out.push_back(a);
      members.emplace_back();
      it = out.end() - 1;
    }
    members[static_cast<std::size_t>(it - out.begin())].push_back(&r);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    Aggregate& a = out[k];
    const auto& runs = members[k];
    a.runs = static_cast<int>(runs.size());
    const double n = static_cast<double>(runs.size());
    std::vector<double> objectives;
    double predictions = 0.0;
    double cycles = 0.0;
    for (const RunRecord* r : runs) {
      const RunTotals& t = r->totals;
      objectives.push_back(t.objective);
      a.mean.objective += t.objective / n;
      a.mean.mass += t.mass / n;
      a.mean.time += t.time / n;
      a.mean.work += t.work / n;
      a.mean.time_load += t.time_load / n;
      a.mean.time_vturn += t.time_vturn / n;
      a.mean.time_dump += t.time_dump / n;
      a.mean.work_load += t.work_load / n;
      a.mean.work_vturn += t.work_vturn / n;
      predictions += static_cast<double>(t.predictions);
      cycles += t.cycles;
    }
    a.mean.predictions = static_cast<std::int64_t>(std::llround(predictions / n));
    a.mean.cycles = static_cast<int>(std::lround(cycles / n));
    a.obj_mean = a.mean.objective;
    a.obj_std = sample_std(objectives, a.obj_mean);
  }
  return out;
}

Report depth_sweep_report(const ExperimentResult& result) {
  Report rep;
  std::vector<Aggregate> rows;
  for (const Aggregate& a : aggregate(result)) {
    if (a.strategy == Strategy::kTree) rows.push_back(a);
  }
  std::sort(rows.begin(), rows.end(),
            [](const Aggregate& a, const Aggregate& b) { return a.depth < b.depth; });
  std::ostringstream csv;
  csv << "depth,obj_mean,obj_std,mass_t,time_s,work_MJ,predictions\n";
  for (const Aggregate& a : rows) {
    csv << a.depth << ',' << fmt(a.obj_mean) << ',' << fmt(a.obj_std) << ','
        << fmt(a.mean.mass / 1000.0) << ',' << fmt(a.mean.time) << ','
        << fmt(a.mean.work / 1e6) << ',' << a.mean.predictions << '\n';
  }
  rep.csv = csv.str();
  if (rows.size() < 2) {
    rep.warnings.push_back("depth sweep has fewer than two depths; chart skipped");
    return rep;
  }
  detail::Series obj{"objective", "#1f77b4", {}, {}, {}};
  detail::Series pred{"predictions", "#d62728", {}, {}, {}};
  detail::Series mass{"mass", "#2ca02c", {}, {}, {}};
  detail::Series time{"time", "#9467bd", {}, {}, {}};
  for (const Aggregate& a : rows) {
    obj.x.push_back(a.depth);
    obj.y.push_back(a.obj_mean);
    obj.err.push_back(a.obj_std);
    pred.x.push_back(a.depth);
    pred.y.push_back(static_cast<double>(a.mean.predictions));
    mass.x.push_back(a.depth);
    mass.y.push_back(a.mean.mass / 1000.0);
    time.x.push_back(a.depth);
    time.y.push_back(a.mean.time);
  }
  rep.svg = detail::render_lines(
      {{"Total objective", "search depth d", "objective (mean +/- std)", {obj}},
       {"Predictions per search", "search depth d", "predictions", {pred}},
       {"Loaded mass", "search depth d", "mass [t]", {mass}},
       {"Cycle time", "search depth d", "time [s]", {time}}},
      2);
  return rep;
}

Report strategy_report(const ExperimentResult& result) {
  Report rep;
  const std::vector<Aggregate> rows = aggregate(result);
  std::ostringstream csv;
  csv << "strategy,runs,obj_mean,obj_std,mass_t,time_load_s,time_vturn_s,"
         "time_dump_s,time_s,work_load_MJ,work_vturn_MJ,work_MJ,predictions\n";
  for (const Aggregate& a : rows) {
    const RunTotals& m = a.mean;
    csv << a.label << ',' << a.runs << ',' << fmt(a.obj_mean) << ','
        << fmt(a.obj_std) << ',' << fmt(m.mass / 1000.0) << ',' << fmt(m.time_load)
        << ',' << fmt(m.time_vturn) << ',' << fmt(m.time_dump) << ','
        << fmt(m.time) << ',' << fmt(m.work_load / 1e6) << ','
        << fmt(m.work_vturn / 1e6) << ',' << fmt(m.work / 1e6) << ','
        << m.predictions << '\n';
  }
  rep.csv = csv.str();
  if (rows.size() < 2) {
    rep.warnings.push_back("strategy report has fewer than two strategies; chart skipped");
    return rep;
  }

  // Per-cycle mean split of each label, as stacked bars.
  std::vector<detail::StackedPanel> panels;
  for (const Aggregate& a : rows) {
    std::vector<RunTotals> per_cycle;
    std::vector<int> counts;
    for (const RunRecord& r : result.runs) {
      if (r.label() != a.label) continue;
      for (const PlanStep& s : r.plan.steps) {
        const std::size_t c = static_cast<std::size_t>(s.cycle - 1);
        if (per_cycle.size() <= c) {
          per_cycle.resize(c + 1);
          counts.resize(c + 1, 0);
        }
        per_cycle[c].time_load += s.perf_load.time;
        per_cycle[c].time_vturn += s.perf_v1.time + s.perf_v2.time;
        per_cycle[c].time_dump += s.perf_dump.time;
        per_cycle[c].work_load += s.perf_load.work;
        per_cycle[c].work_vturn += s.perf_v1.work + s.perf_v2.work;
        ++counts[c];
      }
    }
    detail::StackedPanel time{a.label + ": time per cycle", "cycle", "time [s]",
                              {"loading", "V-turns", "dumping"},
                              {"#1f77b4", "#ff7f0e", "#2ca02c"}, {}, {}};
    detail::StackedPanel work{a.label + ": work per cycle", "cycle", "work [MJ]",
                              {"loading", "V-turns"},
                              {"#1f77b4", "#ff7f0e"}, {}, {}};
    for (std::size_t c = 0; c < per_cycle.size(); ++c) {
      const double n = std::max(1, counts[c]);
      RunTotals m = per_cycle[c];
      m.time_load /= n;
      m.time_vturn /= n;
      m.time_dump /= n;
      m.work_load /= n;
      m.work_vturn /= n;
      time.values.push_back(stack3(m, true));
      std::vector<double> w = stack3(m, false);
      w.pop_back();
      work.values.push_back(w);
      time.bar_labels.push_back(std::to_string(c + 1));
      work.bar_labels.push_back(std::to_string(c + 1));
    }
    panels.push_back(std::move(time));
    panels.push_back(std::move(work));
  }
  rep.svg = detail::render_stacked(panels, 2);
  return rep;
}

std::string cycle_series_csv(const ExperimentResult& result) {
  std::ostringstream csv;
  csv << "strategy,cycle,runs,mass_t,time_load_s,time_vturn_s,time_dump_s,"
         "work_load_MJ,work_vturn_MJ,objective\n";
  for (const Aggregate& a : aggregate(result)) {
    std::vector<RunTotals> sums;
    std::vector<int> counts;
    for (const RunRecord& r : result.runs) {
      if (r.label() != a.label) continue;
      for (const PlanStep& s : r.plan.steps) {
        const std::size_t c = static_cast<std::size_t>(s.cycle - 1);
        if (sums.size() <= c) {
          sums.resize(c + 1);
          counts.resize(c + 1, 0);
        }
        sums[c].mass += s.perf_load.mass;
        sums[c].time_load += s.perf_load.time;
        sums[c].time_vturn += s.perf_v1.time + s.perf_v2.time;
        sums[c].time_dump += s.perf_dump.time;
        sums[c].work_load += s.perf_load.work;
        sums[c].work_vturn += s.perf_v1.work + s.perf_v2.work;
        sums[c].objective += s.objective;
        ++counts[c];
      }
    }
    for (std::size_t c = 0; c < sums.size(); ++c) {
      const double n = counts[c];
      csv << a.label << ',' << c + 1 << ',' << counts[c] << ','
          << fmt(sums[c].mass / n / 1000.0) << ',' << fmt(sums[c].time_load / n)
          << ',' << fmt(sums[c].time_vturn / n) << ',' << fmt(sums[c].time_dump / n)
          << ',' << fmt(sums[c].work_load / n / 1e6) << ','
          << fmt(sums[c].work_vturn / n / 1e6) << ',' << fmt(sums[c].objective / n)
          << '\n';
    }
  }
  return csv.str();
}

std::string runs_csv(const ExperimentResult& result) {
  std::ostringstream csv;
  csv << "seed,strategy,depth,cycles,termination,objective,mass_t,time_s,"
         "work_MJ,time_load_s,time_vturn_s,time_dump_s,work_load_MJ,"
         "work_vturn_MJ,predictions\n";
  for (const RunRecord& r : result.runs) {
    const RunTotals& t = r.totals;
    csv << r.seed << ',' << r.label() << ',' << r.depth << ',' << t.cycles << ','
        << termination_name(r.plan.stats.termination) << ',' << fmt(t.objective)
        << ',' << fmt(t.mass / 1000.0) << ',' << fmt(t.time) << ','
        << fmt(t.work / 1e6) << ',' << fmt(t.time_load) << ',' << fmt(t.time_vturn)
        << ',' << fmt(t.time_dump) << ',' << fmt(t.work_load / 1e6) << ','
        << fmt(t.work_vturn / 1e6) << ',' << t.predictions << '\n';
  }
  return csv.str();
}

std::string experiment_stats_json(const ExperimentResult& result,
                                  double wall_time) {
  json j;
  j["wall_time_s"] = wall_time;
  json runs = json::array();
  for (const RunRecord& r : result.runs) {
    runs.push_back({{"seed", r.seed},
                    {"label", r.label()},
                    {"cycles", r.totals.cycles},
                    {"termination", std::string(termination_name(r.plan.stats.termination))},
                    {"objective", r.totals.objective},
                    {"predictions_total", r.plan.stats.predictions_total},
                    {"predictions_per_cycle", r.plan.stats.predictions_per_cycle},
                    {"wall_time_s", r.plan.stats.wall_time}});
  }
  j["runs"] = runs;
  json aggs = json::array();
  for (const Aggregate& a : aggregate(result)) {
    aggs.push_back({{"label", a.label},
                    {"runs", a.runs},
                    {"obj_mean", a.obj_mean},
                    {"obj_std", a.obj_std},
                    {"mass_kg", a.mean.mass},
                    {"time_s", a.mean.time},
                    {"work_J", a.mean.work},
                    {"predictions", a.mean.predictions}});
  }
  j["aggregates"] = aggs;
  return j.dump(2) + "\n";
}

ProfileResult profile_cycle(const ScenarioConfig& config, const VTurnLut& lut,
                            std::uint64_t seed, int reps) {
  if (reps < 1) throw ConfigError("profile needs at least one repetition");
  const SurrogateWorldModel model(config.surrogate);
  const HeightField field = initial_pile(config, seed);
  const std::vector<DigCandidate> candidates =
      listup(field, config.region, config.listup);
  if (candidates.empty()) throw PlanningError("no dig candidates on the profiled pile");

  using Clock = std::chrono::steady_clock;
  auto ms = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  std::vector<std::vector<double>> t(6);
  std::vector<double> cycle;
  double sink = 0.0;
  for (int r = 0; r < reps; ++r) {
    const DigPose& dig =
        candidates[static_cast<std::size_t>(r) % candidates.size()].pose;
    const auto t0 = Clock::now();
    const std::unique_ptr<PerformanceModel> bound = model.bind(field, dig);
    const auto t1 = Clock::now();
    const LoadingOutcome single = bound->evaluate(config.optimizer.initial);
    const auto t2 = Clock::now();
    const ActionResult best = optimize_action(*bound, config.norm, config.optimizer);
    const auto t3 = Clock::now();
    const PileOutcome pile = model.predict_pile(field, dig, best.action);
    const auto t4 = Clock::now();
    const auto costs = lut_lookup(lut, dig.pose(), best.outcome.mass);
    const auto t5 = Clock::now();
    sink += single.mass + pile.bucket_volume + costs.first.time + costs.second.time;

    const auto t6 = Clock::now();
    const CycleVTurns paths = plan_cycle_vturns(lut.dump, dig.pose(), config.vturn);
    const auto t7 = Clock::now();
    sink += paths.to_dig.total_length + paths.to_dump.total_length;

    t[0].push_back(ms(t0, t1));
    t[1].push_back(ms(t1, t2));
    t[2].push_back(ms(t2, t3));
    t[3].push_back(ms(t3, t4));
    t[4].push_back(ms(t4, t5));
    t[5].push_back(ms(t6, t7));
    // The single evaluation is informational; the cycle excludes it.
    cycle.push_back(ms(t0, t1) + ms(t2, t5));
  }
  if (!std::isfinite(sink)) throw PlanningError("non-finite profiling result");

  auto row = [](std::string name, std::vector<double> v) {
    ProfileRow out;
    out.name = std::move(name);
    double sum = 0.0;
    for (double x : v) sum += x;
    out.mean_ms = sum / static_cast<double>(v.size());
    std::sort(v.begin(), v.end());
    const std::size_t k = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(v.size()))) - 1;
    out.p95_ms = v[std::min(k, v.size() - 1)];
    return out;
  };
  ProfileResult result;
  result.reps = reps;
  result.stages = {row("cutout", t[0]),
                   row("predict_performance", t[1]),
                   row("optimize_action", t[2]),
                   row("predict_pile", t[3]),
                   row("lut_lookup (V-turn 1 and 2)", t[4]),
                   row("plan_vturn (both, not in cycle)", t[5])};
  result.cycle = row("loading-cycle prediction", cycle);
  return result;
}

std::string profile_table(const ProfileResult& result) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof(line), "%-34s %12s %12s\n", "function", "mean [ms]",
                "p95 [ms]");
  os << line;
  for (const ProfileRow& r : result.stages) {
    std::snprintf(line, sizeof(line), "%-34s %12.3f %12.3f\n", r.name.c_str(),
                  r.mean_ms, r.p95_ms);
    os << line;
  }
  std::snprintf(line, sizeof(line), "%-34s %12.3f %12.3f\n", "total (cycle)",
                result.cycle.mean_ms, result.cycle.p95_ms);
  os << line << "repetitions: " << result.reps << '\n';
  return os.str();
}

}  // namespace loadplan
