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

#include "loadplan/worldmodel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include "loadplan/errors.hpp"

namespace loadplan {
namespace {

constexpr double kHeightSmoothing = 0.01;   // smooth-min sharpness, heights
constexpr double kVolumeSmoothing = 1e-3;   // smooth-min sharpness, bucket cap
constexpr double kMaxCutDepth = 1.2;        // m
constexpr double kGeomTol = 1e-9;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Two independent 64-bit lanes over the bit patterns of the inputs.
class Digest {
 public:
  void add(std::uint64_t v) {
    a_ = splitmix64(a_ ^ v);
    b_ = (b_ ^ v) * 0x100000001b3ULL;
    b_ ^= b_ >> 29;
  }
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  std::array<std::uint64_t, 2> value() const { return {a_, splitmix64(b_)}; }

 private:
  std::uint64_t a_ = 0x243f6a8885a308d3ULL;
  std::uint64_t b_ = 0xcbf29ce484222325ULL;
};

// Smooth minimum of two non-negative values: zero when either is zero,
// never above min(a, b), C-infinity away from the origin.
double smooth_min(double a, double b, double eps) {
  a = std::max(a, 0.0);
  b = std::max(b, 0.0);
  const double d = a - b;
  const double r = d * d + 4.0 * eps * a * b;
  if (r <= 0.0) return 0.0;
  return 0.5 * (a + b - std::sqrt(r));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// Mean of the taper max(0, 1 - u/L) on u >= 0 under a Gaussian window of
// width sigma centred on the column.
double column_profile(double u_c, double length, double sigma) {
  if (length <= kGeomTol) return 0.0;
  // Beyond ten window widths the window mass is below 1e-23.
  if (u_c - length > 10.0 * sigma || u_c < -10.0 * sigma) return 0.0;
  const double a = (0.0 - u_c) / sigma;
  const double b = (length - u_c) / sigma;
  // Tails beyond ten widths are below 1e-23 and dropped.
  const double cdf_a = a < -10.0 ? 0.0 : normal_cdf(a);
  const double cdf_b = b > 10.0 ? 1.0 : normal_cdf(b);
  const double pdf_a = a < -10.0 ? 0.0 : normal_pdf(a);
  const double pdf_b = b > 10.0 ? 0.0 : normal_pdf(b);
  const double mass = cdf_b - cdf_a;
  const double first = pdf_a - pdf_b;
  return std::max(0.0, (1.0 - u_c / length) * mass - (sigma / length) * first);
}

// Cells of a patch under the bucket footprint, with columns along the
// heading.
struct SweepGeometry {
  double cell_area = 0.0;
  double sigma = 0.0;
  double local_height = 0.0;        // min(1.2 m, mean footprint height)
  std::vector<double> column_u;     // distance ahead of the dig point
  std::vector<int> rows;            // patch row index of each masked row
  std::vector<double> heights;      // column-major: column_u.size() x rows
  // Positive heights only, column by column: column k owns
  // [column_start[k], column_start[k + 1]) of positive / positive_slot.
  std::vector<std::size_t> column_start;
  std::vector<double> positive;
  std::vector<std::size_t> positive_slot;  // index into heights
};

SweepGeometry build_geometry(const LocalPatch& patch,
                             const SurrogateParams& p) {
  SweepGeometry g;
  const double spacing = patch.spacing();
  g.cell_area = spacing * spacing;
  g.sigma = 0.5 * spacing;
  const double half_width = 0.5 * p.bucket_width + kGeomTol;
  for (int l = 0; l < patch.n; ++l) {
    if (std::abs(patch.local_coord(l)) <= half_width) g.rows.push_back(l);
  }
  g.column_u.resize(patch.n);
  g.heights.resize(static_cast<std::size_t>(patch.n) * g.rows.size());
  double sum = 0.0;
  int count = 0;
  for (int k = 0; k < patch.n; ++k) {
    const double u = patch.local_coord(k) + p.patch_offset;
    g.column_u[k] = u;
    const bool in_reach = u >= -kGeomTol && u <= p.max_penetration + kGeomTol;
    for (std::size_t r = 0; r < g.rows.size(); ++r) {
      const double h = std::max(0.0, patch(k, g.rows[r]));
      g.heights[k * g.rows.size() + r] = h;
      if (in_reach) {
        sum += h;
        ++count;
      }
    }
  }
  g.local_height = count > 0 ? std::min(kMaxCutDepth, sum / count) : 0.0;
  g.column_start.reserve(g.column_u.size() + 1);
  for (std::size_t slot = 0; slot < g.heights.size(); ++slot) {
    if (slot % g.rows.size() == 0) g.column_start.push_back(g.positive.size());
    if (g.heights[slot] > 0.0) {
      g.positive.push_back(g.heights[slot]);
      g.positive_slot.push_back(slot);
    }
  }
  g.column_start.resize(g.column_u.size(), g.positive.size());
  g.column_start.push_back(g.positive.size());
  return g;
}

struct Sweep {
  double length = 0.0;        // m
  double swept_volume = 0.0;  // m^3
};

// Swept volume of an action; optionally the per-cell removal (same layout as
// SweepGeometry::heights).
Sweep sweep(const SweepGeometry& g, const LoadAction& action,
            const SurrogateParams& p, std::vector<double>* removal) {
  Sweep s;
  s.length = action.a[0] * p.max_penetration;
  const double cut_depth = (0.3 + 0.7 * action.a[2]) * g.local_height;
  if (removal) removal->assign(g.heights.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < g.column_u.size(); ++k) {
    const std::size_t begin = g.column_start[k];
    const std::size_t end = g.column_start[k + 1];
    if (begin == end) continue;
    const double depth = cut_depth * column_profile(g.column_u[k], s.length, g.sigma);
    if (depth <= 0.0) continue;
    // smooth_min(h, depth) for h > 0, written out so the loop vectorizes.
    const double* h = g.positive.data();
    const double four_eps_depth = 4.0 * kHeightSmoothing * depth;
    double column = 0.0;
    if (removal) {
      for (std::size_t q = begin; q < end; ++q) {
        const double d = h[q] - depth;
        const double cut =
            0.5 * (h[q] + depth - std::sqrt(d * d + four_eps_depth * h[q]));
        column += cut;
        (*removal)[g.positive_slot[q]] = cut;
      }
    } else {
      for (std::size_t q = begin; q < end; ++q) {
        const double d = h[q] - depth;
        column += 0.5 * (h[q] + depth - std::sqrt(d * d + four_eps_depth * h[q]));
      }
    }
    total += column;
  }
  s.swept_volume = total * g.cell_area;
  return s;
}

LoadingOutcome outcome_from_sweep(const Sweep& s, const LoadAction& action,
                                  const SurrogateParams& p) {
  LoadingOutcome out;
  const double cap = p.bucket_capacity * (0.6 + 0.4 * action.a[1]);
  out.swept_volume = s.swept_volume;
  out.bucket_volume = smooth_min(s.swept_volume, cap, kVolumeSmoothing);
  const double mass = p.soil_density * out.bucket_volume;
  out.zero_mass = mass < p.min_mass;
  out.mass = out.zero_mass ? p.min_mass : mass;
  const double lift_height = 0.5 + action.a[1];
  out.time = p.t0 + p.c_len * s.length * (1.25 - 0.5 * action.a[3]) +
             p.c_fill * out.bucket_volume / p.bucket_capacity;
  out.work = p.c_cut * s.swept_volume * (0.75 + 0.5 * action.a[3]) +
             p.c_lift * mass * lift_height;
  return out;
}

class SurrogatePerformanceModel final : public PerformanceModel {
 public:
  SurrogatePerformanceModel(SweepGeometry geometry, SurrogateParams params)
      : geometry_(std::move(geometry)), params_(params) {}

  LoadingOutcome evaluate(const LoadAction& action) const override {
    const LoadAction a = LoadAction::clamped(action.a);
    return outcome_from_sweep(cached_sweep(a), a, params_);
  }

  std::optional<std::array<std::uint64_t, 2>> fingerprint() const override {
    Digest d;
    d.add(static_cast<std::uint64_t>(geometry_.column_u.size()));
    d.add(static_cast<std::uint64_t>(geometry_.rows.size()));
    d.add(geometry_.local_height);
    d.add(geometry_.cell_area);
    for (double u : geometry_.column_u) d.add(u);
    for (double h : geometry_.heights) d.add(h);
    return d.value();
  }

 private:
  // The sweep depends on penetration and tilt only; finite differences in
  // the other two components reuse it.
  Sweep cached_sweep(const LoadAction& a) const {
    for (const Memo& m : memo_) {
      if (m.valid && m.a0 == a.a[0] && m.a2 == a.a[2]) return m.sweep;
    }
    Memo& slot = memo_[next_];
    next_ = (next_ + 1) % memo_.size();
    slot = {true, a.a[0], a.a[2], sweep(geometry_, a, params_, nullptr)};
    return slot.sweep;
  }

  struct Memo {
    bool valid = false;
    double a0 = 0.0;
    double a2 = 0.0;
    Sweep sweep;
  };

  SweepGeometry geometry_;
  SurrogateParams params_;
  mutable std::array<Memo, 4> memo_{};
  mutable std::size_t next_ = 0;
};

}  // namespace

LoadAction LoadAction::clamped(const std::array<double, 4>& values) {
  LoadAction out;
  for (std::size_t i = 0; i < 4; ++i) out.a[i] = std::clamp(values[i], 0.0, 1.0);
  return out;
}

void Normalization::validate() const {
  if (!(m0 > 0.0 && t0 > 0.0 && w0 > 0.0)) {
    throw ConfigError("normalization constants must be positive");
  }
  for (double wi : w) {
    if (!(wi > 0.0)) throw ConfigError("objective weights must be positive");
  }
}

PerformanceTriple make_performance(double mass, double time, double work,
                                   const Normalization& norm) {
  PerformanceTriple p;
  p.mass = mass;
  p.time = time;
  p.work = work;
  p.normalized = {mass > 0.0 ? norm.m0 / mass : 0.0, time / norm.t0,
                  work / norm.w0};
  return p;
}

double objective(const PerformanceTriple& perf, const Normalization& norm) {
  return norm.w[0] * perf.normalized[0] + norm.w[1] * perf.normalized[1] +
         norm.w[2] * perf.normalized[2];
}

double objective(std::span<const PerformanceTriple> cycles,
                 const Normalization& norm) {
  double sum = 0.0;
  for (const PerformanceTriple& c : cycles) sum += objective(c, norm);
  return sum;
}

void SurrogateParams::validate() const {
  const double values[] = {bucket_width, bucket_capacity, soil_density,
                           repose,       max_penetration, t0,
                           c_len,        c_fill,          c_cut,
                           c_lift,       g,               berm_width,
                           min_mass};
  for (double v : values) {
    if (!(v > 0.0)) throw ConfigError("surrogate parameters must be positive");
  }
  if (!(repose < 0.5 * std::numbers::pi)) {
    throw ConfigError("surrogate repose must be below 90 degrees");
  }
}

SurrogateWorldModel::SurrogateWorldModel(SurrogateParams params)
    : params_(params) {
  params_.validate();
}

Pose2 SurrogateWorldModel::patch_pose(const DigPose& dig) const {
  return {dig.x + params_.patch_offset * std::cos(dig.heading),
          dig.y + params_.patch_offset * std::sin(dig.heading), dig.heading};
}

std::unique_ptr<PerformanceModel> SurrogateWorldModel::bind(
    const HeightField& field, const DigPose& dig) const {
  const LocalPatch patch = cutout(field, patch_pose(dig), kPerformancePatchCells,
                                  kPerformancePatchSide);
  return std::make_unique<SurrogatePerformanceModel>(
      build_geometry(patch, params_), params_);
}

PileOutcome SurrogateWorldModel::predict_pile(const HeightField& field,
                                              const DigPose& dig,
                                              const LoadAction& action) const {
  const LoadAction a = LoadAction::clamped(action.a);
  LocalPatch patch = cutout(field, patch_pose(dig), kPileStatePatchCells,
                            kPileStatePatchSide);
  const SweepGeometry g = build_geometry(patch, params_);
  std::vector<double> removal;
  const Sweep s = sweep(g, a, params_, &removal);
  const LoadingOutcome out = outcome_from_sweep(s, a, params_);

  PileOutcome result{field, 0.0, out.zero_mass, {-1, -1, -1, -1}};
  if (out.zero_mass) return result;
  result.bucket_volume = out.bucket_volume;

  // Only the change is written back, so cells away from the cut keep their
  // exact values.
  LocalPatch& delta = patch;
  std::fill(delta.heights.begin(), delta.heights.end(), 0.0);
  const std::size_t nrows = g.rows.size();
  for (std::size_t k = 0; k < g.column_u.size(); ++k) {
    for (std::size_t r = 0; r < nrows; ++r) {
      delta(static_cast<int>(k), g.rows[r]) -= removal[k * nrows + r];
    }
  }

  // Soil beyond the bucket cap is pushed into strips on both sides of the
  // cut.
  const double excess = s.swept_volume - out.bucket_volume;
  if (excess > 0.0) {
    const double inner = 0.5 * params_.bucket_width + kGeomTol;
    const double outer = inner + params_.berm_width;
    const double reach = std::max(s.length, 0.5);
    std::vector<std::pair<int, int>> berm;
    for (int l = 0; l < patch.n; ++l) {
      const double v = std::abs(patch.local_coord(l));
      if (v <= inner || v > outer) continue;
      for (int k = 0; k < patch.n; ++k) {
        const double u = g.column_u[k];
        if (u >= -kGeomTol && u <= reach + kGeomTol) berm.emplace_back(k, l);
      }
    }
    if (!berm.empty()) {
      const double lift = excess / (berm.size() * g.cell_area);
      for (const auto& [k, l] : berm) delta(k, l) += lift;
    }
  }

  result.touched = add_patch_in_place(result.field, delta);
  settle_region(result.field, params_.repose, result.touched);
  return result;
}

std::array<double, 4> objective_gradient(const PerformanceModel& model,
                                         const LoadAction& action,
                                         const Normalization& norm,
                                         double step, int* evaluations) {
  std::array<double, 4> grad{};
  for (std::size_t i = 0; i < 4; ++i) {
    LoadAction hi = action;
    LoadAction lo = action;
    hi.a[i] = std::min(1.0, action.a[i] + step);
    lo.a[i] = std::max(0.0, action.a[i] - step);
    const double span = hi.a[i] - lo.a[i];
    if (span <= 0.0) continue;
    const double f_hi = objective(model.evaluate(hi).performance(norm), norm);
    const double f_lo = objective(model.evaluate(lo).performance(norm), norm);
    if (evaluations) *evaluations += 2;
    grad[i] = (f_hi - f_lo) / span;
  }
  return grad;
}

ActionResult evaluate_action(const PerformanceModel& model,
                             const Normalization& norm,
                             const LoadAction& action) {
  ActionResult r;
  r.action = LoadAction::clamped(action.a);
  r.outcome = model.evaluate(r.action);
  r.objective = objective(r.outcome.performance(norm), norm);
  r.evaluations = 1;
  return r;
}

ActionResult optimize_action(const PerformanceModel& model,
                             const Normalization& norm,
                             const OptimizerOptions& options) {
  ActionResult best = evaluate_action(model, norm, options.initial);
  LoadAction current = best.action;
  int evaluations = best.evaluations;
  int stall = 0;
  int iterations = 0;
  while (iterations < options.max_iterations) {
    ++iterations;
    const std::array<double, 4> grad =
        objective_gradient(model, current, norm, options.fd_step, &evaluations);
    std::array<double, 4> next{};
    for (std::size_t i = 0; i < 4; ++i) {
      next[i] = current.a[i] - options.step_length * grad[i];
    }
    current = LoadAction::clamped(next);
    const LoadingOutcome outcome = model.evaluate(current);
    ++evaluations;
    const double f = objective(outcome.performance(norm), norm);
    const double improvement = best.objective - f;
    if (f < best.objective) {
      best.action = current;
      best.outcome = outcome;
      best.objective = f;
    }
    stall = improvement < options.tolerance ? stall + 1 : 0;
    if (stall >= options.patience) break;
  }
  best.iterations = iterations;
  best.evaluations = evaluations;
  return best;
}

}  // namespace loadplan
