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

#include "loadplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "loadplan/errors.hpp"
#include "loadplan/parallel.hpp"

namespace loadplan {
namespace {

using Vec2 = Eigen::Vector2d;

// ---------------------------------------------------------------------------
// Marching squares

struct Segment {
  std::int64_t e0;
  std::int64_t e1;
};

struct ContourSet {
  std::unordered_map<std::int64_t, Vec2> points;  // crossing per edge id
  std::vector<Segment> segments;
};

// Edge ids: horizontal edge (i,j)-(i+1,j) -> 2*(j*nx+i), vertical edge
// (i,j)-(i,j+1) -> 2*(j*nx+i)+1.
ContourSet march(const HeightField& field, double level, int i0, int j0,
                 int i1, int j1) {
  ContourSet cs;
  const int nx = field.nx();
  auto value = [&](int i, int j) { return field(i, j) - level; };
  auto crossing = [&](std::int64_t id, int ia, int ja, int ib, int jb) {
    if (cs.points.count(id)) return;
    const double fa = value(ia, ja);
    const double fb = value(ib, jb);
    const double t = fa / (fa - fb);
    const Vec2 a(field.cell_x(ia), field.cell_y(ja));
    const Vec2 b(field.cell_x(ib), field.cell_y(jb));
    cs.points.emplace(id, a + t * (b - a));
  };
  for (int j = j0; j < j1; ++j) {
    for (int i = i0; i < i1; ++i) {
      const double f[4] = {value(i, j), value(i + 1, j), value(i + 1, j + 1),
                           value(i, j + 1)};
      const bool in[4] = {f[0] > 0.0, f[1] > 0.0, f[2] > 0.0, f[3] > 0.0};
      // Edges in counter-clockwise order: bottom, right, top, left.
      const std::int64_t id[4] = {
          2 * (static_cast<std::int64_t>(j) * nx + i),
          2 * (static_cast<std::int64_t>(j) * nx + i + 1) + 1,
          2 * (static_cast<std::int64_t>(j + 1) * nx + i),
          2 * (static_cast<std::int64_t>(j) * nx + i) + 1};
      const int ends[4][4] = {{i, j, i + 1, j},
                              {i + 1, j, i + 1, j + 1},
                              {i, j + 1, i + 1, j + 1},
                              {i, j, i, j + 1}};
      std::array<int, 4> cut{};
      int ncut = 0;
      for (int e = 0; e < 4; ++e) {
        if (in[e] != in[(e + 1) % 4]) {
          crossing(id[e], ends[e][0], ends[e][1], ends[e][2], ends[e][3]);
          cut[ncut++] = e;
        }
      }
      if (ncut == 2) {
        cs.segments.push_back({id[cut[0]], id[cut[1]]});
      } else if (ncut == 4) {
        // Saddle: corner k lies between edges k-1 and k. Cut off the corners
        // that the centre value disagrees with.
        const bool centre_in = 0.25 * (f[0] + f[1] + f[2] + f[3]) > 0.0;
        for (int k = 0; k < 4; ++k) {
          if (in[k] != centre_in) {
            cs.segments.push_back({id[(k + 3) % 4], id[k]});
          }
        }
      }
    }
  }
  return cs;
}

std::vector<std::vector<Vec2>> link_chains(const ContourSet& cs) {
  std::unordered_map<std::int64_t, std::array<int, 2>> incident;
  incident.reserve(cs.points.size());
  for (std::size_t s = 0; s < cs.segments.size(); ++s) {
    for (std::int64_t e : {cs.segments[s].e0, cs.segments[s].e1}) {
      auto [it, fresh] = incident.try_emplace(e, std::array<int, 2>{-1, -1});
      (it->second[0] < 0 ? it->second[0] : it->second[1]) = static_cast<int>(s);
    }
  }
  std::vector<bool> used(cs.segments.size(), false);
  std::vector<std::vector<Vec2>> chains;

  auto walk = [&](std::size_t start, std::int64_t from_edge) {
    std::vector<Vec2> chain{cs.points.at(from_edge)};
    std::size_t s = start;
    std::int64_t edge = from_edge;
    for (;;) {
      used[s] = true;
      const std::int64_t next =
          cs.segments[s].e0 == edge ? cs.segments[s].e1 : cs.segments[s].e0;
      chain.push_back(cs.points.at(next));
      const auto& inc = incident.at(next);
      const int other = inc[0] == static_cast<int>(s) ? inc[1] : inc[0];
      if (other < 0 || used[static_cast<std::size_t>(other)]) break;
      s = static_cast<std::size_t>(other);
      edge = next;
    }
    chains.push_back(std::move(chain));
  };

  // Open chains first, started from their lower-id free end, then loops.
  for (std::size_t s = 0; s < cs.segments.size(); ++s) {
    if (used[s]) continue;
    for (std::int64_t e : {cs.segments[s].e0, cs.segments[s].e1}) {
      if (incident.at(e)[1] < 0) {
        walk(s, e);
        break;
      }
    }
  }
  for (std::size_t s = 0; s < cs.segments.size(); ++s) {
    if (!used[s]) walk(s, cs.segments[s].e0);
  }
  return chains;
}

// Orients a chain so that the field rises to its left.
void orient(std::vector<Vec2>& chain, const HeightField& field) {
  const double eps = 0.25 * field.cell();
  double score = 0.0;
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    const Vec2 d = chain[k + 1] - chain[k];
    const double len = d.norm();
    if (len <= 0.0) continue;
    const Vec2 mid = 0.5 * (chain[k] + chain[k + 1]);
    const Vec2 left(-d.y() / len, d.x() / len);
    const Vec2 a = mid + eps * left;
    const Vec2 b = mid - eps * left;
    score += len * (sample_clamped(field, a.x(), a.y()) -
                    sample_clamped(field, b.x(), b.y()));
  }
  if (score < 0.0) std::reverse(chain.begin(), chain.end());
}

// Parameter interval of segment a->b inside the region (Liang-Barsky).
bool clip(const Vec2& a, const Vec2& b, const DigRegion& r, double& t0,
          double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  const Vec2 d = b - a;
  const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
  const double q[4] = {a.x() - r.x_min, r.x_max - a.x(), a.y() - r.y_min,
                       r.y_max - a.y()};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;
      continue;
    }
    const double t = q[k] / p[k];
    if (p[k] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
  }
  return t0 <= t1;
}

double inside_length(const std::vector<Vec2>& chain, const DigRegion& region) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    double t0 = 0.0;
    double t1 = 0.0;
    if (clip(chain[k], chain[k + 1], region, t0, t1)) {
      total += (t1 - t0) * (chain[k + 1] - chain[k]).norm();
    }
  }
  return total;
}

struct ContourPoint {
  Vec2 p;
  double arc;
};

// Points at arc length 0, dx, 2dx, ... along every in-region piece.
std::vector<ContourPoint> walk_pieces(const std::vector<Vec2>& chain,
                                      const DigRegion& region, double dx) {
  std::vector<ContourPoint> out;
  bool inside = false;
  double arc = 0.0;   // along the current piece
  double next = 0.0;  // arc of the next point
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    const Vec2& a = chain[k];
    const Vec2& b = chain[k + 1];
    const double len = (b - a).norm();
    double t0 = 0.0;
    double t1 = 0.0;
    const bool hit = len > 0.0 && clip(a, b, region, t0, t1);
    if (!hit) {
      if (len > 0.0) inside = false;
      continue;
    }
    if (!inside || t0 > 0.0) {
      inside = true;
      arc = 0.0;
      next = 0.0;
    }
    const double s0 = t0 * len;
    const double s1 = t1 * len;
    while (arc + (s1 - s0) >= next - 1e-12) {
      const double s = s0 + (next - arc);
      out.push_back({a + (s / len) * (b - a), next});
      next += dx;
    }
    arc += s1 - s0;
    if (t1 < 1.0) inside = false;
  }
  return out;
}

// Smoothed uphill direction (3x3 Sobel stencil of radius r).
bool uphill(const HeightField& field, const Vec2& p, double r, double& heading) {
  double gx = 0.0;
  double gy = 0.0;
  const double w[3] = {1.0, 2.0, 1.0};
  for (int k = -1; k <= 1; ++k) {
    const double o = k * r;
    gx += w[k + 1] * (sample_clamped(field, p.x() + r, p.y() + o) -
                      sample_clamped(field, p.x() - r, p.y() + o));
    gy += w[k + 1] * (sample_clamped(field, p.x() + o, p.y() + r) -
                      sample_clamped(field, p.x() + o, p.y() - r));
  }
  if (std::hypot(gx, gy) <= 1e-12) return false;
  heading = std::atan2(gy, gx);
  return true;
}

}  // namespace

void DigRegion::validate() const {
  if (!(x_min <= x_max && y_min <= y_max)) {
    throw ConfigError("dig region bounds are empty");
  }
}

std::vector<DigCandidate> listup(const HeightField& field,
                                 const DigRegion& region,
                                 const ListupOptions& options) {
  region.validate();
  if (!(options.dx > 0.0)) throw ConfigError("candidate spacing must be positive");
  const double margin = 2.0 * field.cell();
  auto to_i = [&](double x) {
    return static_cast<int>(std::floor((x - field.origin_x()) / field.cell()));
  };
  auto to_j = [&](double y) {
    return static_cast<int>(std::floor((y - field.origin_y()) / field.cell()));
  };
  const int i0 = std::clamp(to_i(region.x_min - margin), 0, field.nx() - 1);
  const int i1 = std::clamp(to_i(region.x_max + margin) + 1, 0, field.nx() - 1);
  const int j0 = std::clamp(to_j(region.y_min - margin), 0, field.ny() - 1);
  const int j1 = std::clamp(to_j(region.y_max + margin) + 1, 0, field.ny() - 1);
  if (i0 >= i1 || j0 >= j1) return {};

  std::vector<std::vector<Vec2>> chains =
      link_chains(march(field, options.contour_level, i0, j0, i1, j1));
  struct Ranked {
    double length;
    std::vector<Vec2> chain;
  };
  std::vector<Ranked> ranked;
  for (auto& c : chains) {
    orient(c, field);
    const double len = inside_length(c, region);
    if (len > 0.0) ranked.push_back({len, std::move(c)});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.length != b.length) return a.length > b.length;
    const Vec2& pa = a.chain.front();
    const Vec2& pb = b.chain.front();
    return pa.x() != pb.x() ? pa.x() < pb.x() : pa.y() < pb.y();
  });

  std::vector<DigCandidate> out;
  const double min_gap = 0.5 * options.dx;
  for (const Ranked& r : ranked) {
    for (const ContourPoint& cp : walk_pieces(r.chain, region, options.dx)) {
      if (!region.contains(cp.p.x(), cp.p.y())) continue;
      const bool crowded = std::any_of(out.begin(), out.end(), [&](const DigCandidate& c) {
        return std::hypot(c.pose.x - cp.p.x(), c.pose.y - cp.p.y()) < min_gap;
      });
      if (crowded) continue;
      double heading = 0.0;
      if (!uphill(field, cp.p, options.gradient_radius, heading)) continue;
      DigCandidate c;
      c.pose = DigPose::make(cp.p.x(), cp.p.y(), heading);
      c.index = static_cast<int>(out.size());
      c.arc_length = cp.arc;
      out.push_back(c);
    }
  }
  return out;
}

PerformanceTriple perf_total(const PerformanceTriple& load,
                             const PerformanceTriple& v1,
                             const PerformanceTriple& v2,
                             const PerformanceTriple& dump,
                             const Normalization& norm) {
  return make_performance(load.mass, load.time + v1.time + v2.time + dump.time,
                          load.work + v1.work + v2.work + dump.work, norm);
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kTree: return "tree";
    case Strategy::kGreedy: return "greedy";
    case Strategy::kMaxLoading: return "max_loading";
    case Strategy::kNominal: return "nominal";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::kTree, Strategy::kGreedy, Strategy::kMaxLoading,
                     Strategy::kNominal}) {
    if (strategy_name(s) == name) return s;
  }
  throw ConfigError("unknown strategy '" + std::string(name) +
                    "' (expected tree, greedy, max_loading or nominal)");
}

std::string_view termination_name(Termination t) {
  return t == Termination::kCompleted ? "completed" : "region_exhausted";
}

void PlannerConfig::validate() const {
  region.validate();
  norm.validate();
  if (!(listup.dx > 0.0)) throw ConfigError("dx must be positive");
  if (!(listup.gradient_radius > 0.0)) {
    throw ConfigError("gradient radius must be positive");
  }
  if (!(dump_time >= 0.0)) throw ConfigError("dump time must be non-negative");
  if (optimizer.max_iterations < 0 || optimizer.patience < 1 ||
      !(optimizer.fd_step > 0.0) || !(optimizer.step_length > 0.0)) {
    throw ConfigError("invalid optimizer options");
  }
}

double PlanResult::total_objective() const {
  double sum = 0.0;
  for (const PlanStep& s : steps) sum += s.objective;
  return sum;
}

struct DigestHash {
  std::size_t operator()(const std::array<std::uint64_t, 2>& k) const {
    return static_cast<std::size_t>(k[0] ^ (k[1] * 0x9e3779b97f4a7c15ULL));
  }
};

struct Planner::Cache {
  std::mutex mutex;
  std::unordered_map<std::array<std::uint64_t, 2>, ActionResult, DigestHash>
      optimized;
  std::unordered_map<std::array<std::uint64_t, 2>, ActionResult, DigestHash>
      fixed;
};

Planner::Planner(const WorldModel& model, const VTurnLut& lut,
                 PlannerConfig config)
    : model_(model), lut_(lut), config_(config), cache_(std::make_unique<Cache>()) {
  config_.validate();
}

Planner::~Planner() = default;

ActionResult Planner::loading(const HeightField& field,
                              const DigPose& dig) const {
  const std::unique_ptr<PerformanceModel> pm = model_.bind(field, dig);
  const auto key = pm->fingerprint();
  if (key) {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (auto it = cache_->optimized.find(*key); it != cache_->optimized.end()) {
      return it->second;
    }
  }
  ActionResult r = optimize_action(*pm, config_.norm, config_.optimizer);
  if (key) {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->optimized.emplace(*key, r);
  }
  return r;
}

CyclePrediction Planner::assemble(const DigCandidate& candidate,
                                  const ActionResult& load) const {
  CyclePrediction p;
  p.candidate = candidate;
  p.load = load;
  const Normalization& norm = config_.norm;
  p.perf_load = load.outcome.performance(norm);
  const auto [v1, v2] = lut_lookup(lut_, candidate.pose.pose(), load.outcome.mass);
  p.perf_v1 = make_performance(0.0, v1.time, v1.work, norm);
  p.perf_v2 = make_performance(0.0, v2.time, v2.work, norm);
  p.perf_dump = make_performance(0.0, config_.dump_time, 0.0, norm);
  p.perf_total = perf_total(p.perf_load, p.perf_v1, p.perf_v2, p.perf_dump, norm);
  p.objective = objective(p.perf_total, norm);
  return p;
}

CyclePrediction Planner::predict_cycle(const HeightField& field,
                                       const DigCandidate& candidate) const {
  return assemble(candidate, loading(field, candidate.pose));
}

CyclePrediction Planner::predict_cycle(const HeightField& field,
                                       const DigCandidate& candidate,
                                       const LoadAction& action) const {
  const std::unique_ptr<PerformanceModel> pm = model_.bind(field, candidate.pose);
  return assemble(candidate, evaluate_action(*pm, config_.norm, action));
}

std::size_t Planner::pick(const std::vector<CyclePrediction>& preds,
                          const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < preds.size(); ++k) {
    if (values[k] < values[best]) {
      best = k;
    } else if (values[k] == values[best]) {
      const double tk = preds[k].vturn_time();
      const double tb = preds[best].vturn_time();
      if (tk < tb || (tk == tb && preds[k].candidate.index < preds[best].candidate.index)) {
        best = k;
      }
    }
  }
  return best;
}

double Planner::evaluate_Q(const HeightField& field, const CyclePrediction& own,
                           int depth, int remaining,
                           std::int64_t* predictions) const {
  if (depth < 1 || remaining < 1) {
    throw PlanningError("evaluate_Q needs depth >= 1 and remaining >= 1");
  }
  double q = own.objective;
  const int levels = std::min(depth, remaining);
  if (levels <= 1) return q;

  HeightField pile =
      model_.predict_pile(field, own.candidate.pose, own.load.action).field;
  for (int level = 2; level <= levels; ++level) {
    const std::vector<DigCandidate> cands = listup(pile, config_.region, config_.listup);
    if (cands.empty()) break;
    std::vector<CyclePrediction> preds;
    std::vector<double> values;
    preds.reserve(cands.size());
    values.reserve(cands.size());
    for (const DigCandidate& c : cands) {
      preds.push_back(config_.fixed_action_rollout
                          ? predict_cycle(pile, c, config_.optimizer.initial)
                          : predict_cycle(pile, c));
      values.push_back(preds.back().objective);
    }
    if (predictions) *predictions += static_cast<std::int64_t>(cands.size());
    const CyclePrediction& chosen = preds[pick(preds, values)];
    q += chosen.objective;
    if (level < levels) {
      pile = model_.predict_pile(pile, chosen.candidate.pose, chosen.load.action).field;
    }
  }
  return q;
}

PlanResult Planner::search(Strategy strategy, const HeightField& field,
                           int cycles, int depth) const {
  if (cycles < 1) throw PlanningError("planning horizon must be >= 1");
  if (strategy == Strategy::kTree && (depth < 1 || depth > cycles)) {
    throw PlanningError("search depth must lie in [1, N]");
  }
  const auto started = std::chrono::steady_clock::now();
  PlanResult result;
  auto current = std::make_shared<const HeightField>(field);

  for (int n = 1; n <= cycles; ++n) {
    const std::vector<DigCandidate> cands =
        listup(*current, config_.region, config_.listup);
    if (cands.empty()) {
      result.stats.termination = Termination::kRegionExhausted;
      break;
    }
    const std::size_t b = cands.size();
    std::vector<CyclePrediction> preds(b);
    std::vector<double> values(b);
    std::vector<std::int64_t> counts(b, 1);
    const int remaining = cycles - n + 1;
    const HeightField& pile = *current;

    parallel_for(b, config_.jobs, [&](std::size_t k) {
      switch (strategy) {
        case Strategy::kNominal:
          preds[k] = predict_cycle(pile, cands[k], config_.optimizer.initial);
          values[k] = objective(preds[k].perf_v1, config_.norm) +
                      objective(preds[k].perf_v2, config_.norm);
          break;
        case Strategy::kMaxLoading:
          preds[k] = predict_cycle(pile, cands[k]);
          values[k] = objective(preds[k].perf_load, config_.norm);
          break;
        case Strategy::kGreedy:
          preds[k] = predict_cycle(pile, cands[k]);
          values[k] = preds[k].objective;
          break;
        case Strategy::kTree:
          preds[k] = predict_cycle(pile, cands[k]);
          values[k] = evaluate_Q(pile, preds[k], depth, remaining, &counts[k]);
          break;
      }
    });

    const std::size_t sel = pick(preds, values);
    const CyclePrediction& chosen = preds[sel];
    std::int64_t total = 0;
    for (std::int64_t c : counts) total += c;

    PlanStep step;
    step.cycle = n;
    step.dig = chosen.candidate;
    step.action = chosen.load.action;
    step.perf_load = chosen.perf_load;
    step.perf_v1 = chosen.perf_v1;
    step.perf_v2 = chosen.perf_v2;
    step.perf_dump = chosen.perf_dump;
    step.perf_total = chosen.perf_total;
    step.objective = chosen.objective;
    step.evaluation = values[sel];
    step.candidates = static_cast<int>(b);
    step.predictions = total;
    step.field_after = std::make_shared<const HeightField>(
        model_.predict_pile(pile, chosen.candidate.pose, chosen.load.action).field);
    current = step.field_after;

    result.stats.predictions_total += total;
    result.stats.predictions_per_cycle.push_back(total);
    result.steps.push_back(std::move(step));
  }
  result.stats.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

PlanResult Planner::tree_search(const HeightField& field, int cycles,
                                int depth) const {
  return search(Strategy::kTree, field, cycles, depth);
}

PlanResult Planner::strategy_greedy(const HeightField& field, int cycles) const {
  return search(Strategy::kGreedy, field, cycles, 1);
}

PlanResult Planner::strategy_max_loading(const HeightField& field,
                                         int cycles) const {
  return search(Strategy::kMaxLoading, field, cycles, 1);
}

PlanResult Planner::strategy_nominal(const HeightField& field, int cycles) const {
  return search(Strategy::kNominal, field, cycles, 1);
}

PlanResult Planner::run(Strategy strategy, const HeightField& field, int cycles,
                        int depth) const {
  return search(strategy, field, cycles, strategy == Strategy::kTree ? depth : 1);
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void write_plan_csv(std::ostream& out, const PlanResult& result) {
  out << "n,x_dig,y_dig,heading,a1,a2,a3,a4,M,T_load,W_load,T_v1,W_v1,T_v2,"
         "W_v2,T_total,W_total,objective,predictions\n";
  for (const PlanStep& s : result.steps) {
    out << s.cycle << ',' << fmt(s.dig.pose.x) << ',' << fmt(s.dig.pose.y) << ','
        << fmt(rad_to_deg(s.dig.pose.heading));
    for (double a : s.action.a) out << ',' << fmt(a);
    out << ',' << fmt(s.perf_load.mass) << ',' << fmt(s.perf_load.time) << ','
        << fmt(s.perf_load.work) << ',' << fmt(s.perf_v1.time) << ','
        << fmt(s.perf_v1.work) << ',' << fmt(s.perf_v2.time) << ','
        << fmt(s.perf_v2.work) << ',' << fmt(s.perf_total.time) << ','
        << fmt(s.perf_total.work) << ',' << fmt(s.objective) << ','
        << s.predictions << '\n';
  }
}

std::string plan_stats_json(const PlanResult& result, const Normalization& norm) {
  nlohmann::ordered_json j;
  double mass = 0.0;
  double time = 0.0;
  double work = 0.0;
  for (const PlanStep& s : result.steps) {
    mass += s.perf_total.mass;
    time += s.perf_total.time;
    work += s.perf_total.work;
  }
  j["cycles"] = result.steps.size();
  j["termination"] = std::string(termination_name(result.stats.termination));
  j["total_objective"] = result.total_objective();
  j["mass_kg"] = mass;
  j["time_s"] = time;
  j["work_J"] = work;
  j["normalization"] = {{"M0_kg", norm.m0}, {"T0_s", norm.t0},
                        {"W0_J", norm.w0}, {"w", norm.w}};
  j["predictions_total"] = result.stats.predictions_total;
  j["predictions_per_cycle"] = result.stats.predictions_per_cycle;
  j["wall_time_s"] = result.stats.wall_time;
  return j.dump(2) + "\n";
}

}  // namespace loadplan
