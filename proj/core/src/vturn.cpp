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

#include "loadplan/vturn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "loadplan/errors.hpp"
#include "loadplan/io.hpp"
#include "loadplan/parallel.hpp"

namespace loadplan {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Vector2d unit(double heading) {
  return {std::cos(heading), std::sin(heading)};
}

double leg_quality(const LegSamples& leg, const PathWeights& gamma) {
  double bending = 0.0;
  double rate = 0.0;
  for (std::size_t i = 0; i < leg.segment_length.size(); ++i) {
    const double ds = leg.segment_length[i];
    bending += 0.5 * (leg.curvature[i] * leg.curvature[i] +
                      leg.curvature[i + 1] * leg.curvature[i + 1]) * ds;
    rate += 0.5 * (leg.curvature_rate[i] * leg.curvature_rate[i] +
                   leg.curvature_rate[i + 1] * leg.curvature_rate[i + 1]) * ds;
  }
  return gamma[0] * bending + gamma[1] * rate + gamma[2] * leg.length;
}

}  // namespace

double path_quality(std::span<const LegSamples> legs, const PathWeights& gamma) {
  double total = 0.0;
  for (const LegSamples& leg : legs) total += leg_quality(leg, gamma);
  return total;
}

double path_quality(const VTurnPath& path, const PathWeights& gamma) {
  return path_quality(std::span<const LegSamples>(path.legs), gamma);
}

VTurnPath build_vturn(const Pose2& from, const Pose2& to,
                      const Eigen::Vector2d& switch_back, double heading,
                      const LegMagnitudes& mags, int samples_per_leg) {
  VTurnPath path;
  const Eigen::Vector2d start(from.x, from.y);
  const Eigen::Vector2d goal(to.x, to.y);
  const Eigen::Vector2d h = unit(heading);
  // Reversing: the path tangent is opposite to the vehicle heading.
  path.leg_a = solve_spline(start, -unit(from.heading), switch_back, -h,
                            mags.from, mags.switch_back_in);
  path.leg_b = solve_spline(switch_back, h, goal, unit(to.heading),
                            mags.switch_back_out, mags.to);
  path.switch_back = switch_back;
  path.switch_back_heading = wrap_angle(heading);
  path.legs[0] = sample_leg(path.leg_a, samples_per_leg);
  path.legs[1] = sample_leg(path.leg_b, samples_per_leg);
  path.total_length = path.legs[0].length + path.legs[1].length;
  return path;
}

VTurnPath plan_vturn(const Pose2& from, const Pose2& to,
                     const PathWeights& gamma, const SwitchBackBox& box,
                     const LegMagnitudes& mags,
                     const VTurnPlanOptions& options) {
  if (from.x == to.x && from.y == to.y) {
    throw PlanningError("V-turn endpoints coincide");
  }
  if (options.starts < 1 || options.samples_per_leg < 3) {
    throw PlanningError("invalid V-turn planner options");
  }
  const Eigen::Vector2d start(from.x, from.y);
  const Eigen::Vector2d goal(to.x, to.y);
  const Eigen::Vector2d back = -unit(from.heading);
  const Eigen::Vector2d side(-back.y(), back.x());
  const Eigen::Vector2d centre = start + (box.l1 + 0.5 * box.l2) * back;

  auto position = [&](double p, double q) -> Eigen::Vector2d {
    return centre + p * box.l2 * back + q * box.l2 * side;
  };

  int evaluations = 0;
  auto score = [&](const std::array<double, 3>& x) {
    ++evaluations;
    try {
      const VTurnPath path = build_vturn(from, to, position(x[0], x[1]), x[2],
                                         mags, options.samples_per_leg);
      const double q = path_quality(path, gamma);
      return std::isfinite(q) ? q : std::numeric_limits<double>::infinity();
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const int per_start = std::max(1, options.max_evaluations / options.starts);
  std::array<double, 3> best_x{};
  double best_f = std::numeric_limits<double>::infinity();

  for (int k = 0; k < options.starts; ++k) {
    const double t = options.starts == 1
                         ? 0.0
                         : -0.4 + 0.8 * static_cast<double>(k) / (options.starts - 1);
    const Eigen::Vector2d sb = position(t, t);
    // Face the bisector of the directions back to both endpoints.
    Eigen::Vector2d bisector = Eigen::Vector2d::Zero();
    if ((start - sb).norm() > 0.0) bisector += (start - sb).normalized();
    if ((goal - sb).norm() > 0.0) bisector += (goal - sb).normalized();
    const double psi0 = bisector.norm() > 1e-12
                            ? std::atan2(bisector.y(), bisector.x())
                            : from.heading;

    const int budget_end = evaluations + per_start;
    std::array<double, 3> x{t, t, psi0};
    double f = score(x);
    // Also try keeping the dig heading.
    const std::array<double, 3> keep{t, t, from.heading};
    if (const double fk = score(keep); fk < f) {
      x = keep;
      f = fk;
    }
    std::array<double, 3> step{0.25, 0.25, 0.5};
    while (evaluations < budget_end) {
      bool improved = false;
      for (std::size_t c = 0; c < 3 && !improved; ++c) {
        if (step[c] < options.min_step) continue;
        for (double sign : {1.0, -1.0}) {
          std::array<double, 3> cand = x;
          cand[c] += sign * step[c];
          if (c < 2) cand[c] = std::clamp(cand[c], -0.5, 0.5);
          if (cand[c] == x[c]) continue;
          const double fc = score(cand);
          if (fc < f) {
            x = cand;
            f = fc;
            improved = true;
            break;
          }
          if (evaluations >= budget_end) break;
        }
      }
      if (!improved) {
        for (double& s : step) s *= 0.5;
        if (std::all_of(step.begin(), step.end(),
                        [&](double s) { return s < options.min_step; })) {
          break;
        }
      }
    }
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }

  if (!std::isfinite(best_f)) {
    throw PlanningError("V-turn search found no finite path within " +
                        std::to_string(evaluations) + " evaluations");
  }
  VTurnPath path = build_vturn(from, to, position(best_x[0], best_x[1]),
                               best_x[2], mags, options.samples_per_leg);
  path.evaluations = evaluations;
  return path;
}

void VehicleParams::validate() const {
  const double values[] = {mass_vehicle,   mu_r,          g,
                           target_speed,   approach_speed, approach_window,
                           throttle_rate,  max_traction,  brake_decel,
                           dt};
  for (double v : values) {
    if (!(v > 0.0)) throw ConfigError("vehicle parameters must be positive");
  }
}

VTurnCost integrate_leg(double length, double load_mass,
                        const VehicleParams& vp, bool approach_at_end) {
  VTurnCost cost;
  if (!(length > 1e-9)) return cost;
  const double mass = vp.mass_vehicle + std::max(0.0, load_mass);
  const double c_r = vp.mu_r * mass * vp.g;
  const double cruise_hold = c_r / vp.max_traction;
  cost.speed_capped = length < vp.target_speed * vp.target_speed / vp.brake_decel;

  double v = 0.0;
  double s = 0.0;
  double throttle = 0.0;
  constexpr long kMaxSteps = 10'000'000;
  for (long step = 0; step < kMaxSteps; ++step) {
    const double remaining = length - s;
    if (remaining <= 1e-4) break;
    const double target = approach_at_end && remaining <= vp.approach_window
                              ? vp.approach_speed
                              : vp.target_speed;
    double force = 0.0;
    const bool braking = v > 0.0 && v * v / (2.0 * remaining) >= vp.brake_decel;
    if (braking) {
      // Deceleration that stops exactly at the leg end.
      const double decel = v * v / (2.0 * remaining);
      force = std::min(0.0, c_r * v - mass * decel);
      throttle = 0.0;
    } else {
      if (v < target) {
        throttle = std::min(1.0, throttle + vp.throttle_rate * vp.dt);
      } else {
        throttle = std::min(throttle, cruise_hold * target);
      }
      force = throttle * vp.max_traction;
    }
    cost.work += std::max(0.0, force) * v * vp.dt;
    const double v_next = std::max(0.0, step_velocity(v, force, mass, c_r, vp.dt));
    s += 0.5 * (v + v_next) * vp.dt;
    v = v_next;
    cost.time += vp.dt;
    if (braking && v <= 1e-3) break;
  }
  return cost;
}

VTurnCost integrate_motion(const VTurnPath& path, double load_mass,
                           const VehicleParams& vp) {
  VTurnCost total;
  for (int leg = 0; leg < 2; ++leg) {
    const VTurnCost c = integrate_leg(path.legs[leg].length, load_mass, vp,
                                      path.approach_leg == leg);
    total.time += c.time;
    total.work += c.work;
    total.speed_capped = total.speed_capped || c.speed_capped;
  }
  return total;
}

CycleVTurns plan_cycle_vturns(const Pose2& dump, const Pose2& dig,
                              const VTurnSettings& settings) {
  const auto& m = settings.magnitudes;
  CycleVTurns out;
  out.to_dig = plan_vturn(dump, dig, settings.gamma, settings.box,
                          {m[0], m[1], m[2], m[2]}, settings.plan);
  out.to_dig.approach_leg = 1;
  out.to_dump = plan_vturn(dig, dump, settings.gamma, settings.box,
                           {m[1], m[0], m[3], m[3]}, settings.plan);
  return out;
}

bool VTurnLut::heading_periodic() const {
  return std::abs(axes[2].step * axes[2].count - kTwoPi) < 1e-9;
}

std::array<LutAxis, 3> default_lut_axes(double x_min, double x_max,
                                        double y_min, double y_max) {
  auto span = [](double lo, double hi) {
    const double n = std::ceil((hi - lo) / 1.0 - 1e-9);
    return static_cast<std::uint32_t>(std::max(0.0, n)) + 1;
  };
  return {LutAxis{x_min, 1.0, span(x_min, x_max)},
          LutAxis{y_min, 1.0, span(y_min, y_max)},
          LutAxis{0.0, kTwoPi / 24.0, 24}};
}

std::array<float, 5> vturn_node_value(const Pose2& dump, const Pose2& dig,
                                      const VTurnSettings& settings,
                                      const VehicleParams& vp,
                                      double reference_mass) {
  const CycleVTurns v = plan_cycle_vturns(dump, dig, settings);
  const VTurnCost v1 = integrate_motion(v.to_dig, 0.0, vp);
  const VTurnCost v2_empty = integrate_motion(v.to_dump, 0.0, vp);
  const VTurnCost v2_ref = integrate_motion(v.to_dump, reference_mass, vp);
  const double slope = (v2_ref.work - v2_empty.work) / reference_mass;
  return {static_cast<float>(v1.time), static_cast<float>(v1.work),
          static_cast<float>(v2_empty.time), static_cast<float>(v2_empty.work),
          static_cast<float>(slope)};
}

VTurnLut build_lut(const Pose2& dump, const std::array<LutAxis, 3>& axes,
                   const VTurnSettings& settings, const VehicleParams& vp,
                   int jobs, double reference_mass) {
  vp.validate();
  for (const LutAxis& a : axes) {
    if (a.count < 1 || !(a.step > 0.0)) throw ConfigError("invalid LUT axis");
  }
  VTurnLut lut;
  lut.dump = dump;
  lut.axes = axes;
  const std::size_t total =
      static_cast<std::size_t>(axes[0].count) * axes[1].count * axes[2].count;
  lut.nodes.resize(total);
  parallel_for(total, jobs, [&](std::size_t idx) {
    const std::uint32_t ix = static_cast<std::uint32_t>(idx % axes[0].count);
    const std::uint32_t iy =
        static_cast<std::uint32_t>((idx / axes[0].count) % axes[1].count);
    const std::uint32_t ih =
        static_cast<std::uint32_t>(idx / (static_cast<std::size_t>(axes[0].count) * axes[1].count));
    const Pose2 dig{axes[0].min + ix * axes[0].step, axes[1].min + iy * axes[1].step,
                    axes[2].min + ih * axes[2].step};
    lut.nodes[lut.node_index(ix, iy, ih)] =
        vturn_node_value(dump, dig, settings, vp, reference_mass);
  });
  return lut;
}

namespace {

struct AxisWeights {
  std::uint32_t i0 = 0;
  std::uint32_t i1 = 0;
  double t = 0.0;
};

AxisWeights linear_axis(const LutAxis& axis, double value, const char* name) {
  const double f = (value - axis.min) / axis.step;
  const double tol = 1e-9;
  if (f < -tol || f > (axis.count - 1) + tol) {
    std::ostringstream os;
    os << "V-turn table query " << name << " = " << value << " outside ["
       << axis.min << ", " << axis.max() << "]";
    throw BoundsError(os.str());
  }
  if (axis.count == 1) return {0, 0, 0.0};
  const double fc = std::clamp(f, 0.0, static_cast<double>(axis.count - 1));
  const std::uint32_t i0 =
      std::min(static_cast<std::uint32_t>(std::floor(fc)), axis.count - 2);
  return {i0, i0 + 1, fc - i0};
}

AxisWeights periodic_axis(const LutAxis& axis, double value) {
  double rel = std::fmod(value - axis.min, kTwoPi);
  if (rel < 0.0) rel += kTwoPi;
  double f = rel / axis.step;
  if (f >= axis.count) f -= axis.count;
  std::uint32_t i0 = static_cast<std::uint32_t>(std::floor(f));
  if (i0 >= axis.count) i0 = axis.count - 1;
  const double t = f - i0;
  return {i0, (i0 + 1) % axis.count, t};
}

}  // namespace

std::pair<VTurnCost, VTurnCost> lut_lookup(const VTurnLut& lut, const Pose2& dig,
                                           double load_mass) {
  const AxisWeights ax = linear_axis(lut.axes[0], dig.x, "x");
  const AxisWeights ay = linear_axis(lut.axes[1], dig.y, "y");
  const AxisWeights ah = lut.heading_periodic()
                             ? periodic_axis(lut.axes[2], dig.heading)
                             : linear_axis(lut.axes[2], dig.heading, "heading");
  std::array<double, 5> acc{};
  for (int cx = 0; cx < 2; ++cx) {
    const double wx = cx ? ax.t : 1.0 - ax.t;
    if (wx == 0.0) continue;
    for (int cy = 0; cy < 2; ++cy) {
      const double wy = cy ? ay.t : 1.0 - ay.t;
      if (wy == 0.0) continue;
      for (int ch = 0; ch < 2; ++ch) {
        const double wh = ch ? ah.t : 1.0 - ah.t;
        if (wh == 0.0) continue;
        const auto& node = lut.nodes[lut.node_index(cx ? ax.i1 : ax.i0,
                                                    cy ? ay.i1 : ay.i0,
                                                    ch ? ah.i1 : ah.i0)];
        const double w = wx * wy * wh;
        for (std::size_t k = 0; k < 5; ++k) acc[k] += w * node[k];
      }
    }
  }
  const double mass = std::max(0.0, load_mass);
  VTurnCost v1{acc[0], acc[1], false};
  VTurnCost v2{acc[2], acc[3] + acc[4] * mass, false};
  return {v1, v2};
}

void write_vlut(std::ostream& out, const VTurnLut& lut) {
  out.write("VLUT", 4);
  le::put_u16(out, 1);
  le::put_f64(out, lut.dump.x);
  le::put_f64(out, lut.dump.y);
  le::put_f64(out, lut.dump.heading);
  for (const LutAxis& a : lut.axes) {
    le::put_f64(out, a.min);
    le::put_f64(out, a.step);
    le::put_u32(out, a.count);
  }
  for (const auto& node : lut.nodes) {
    for (float v : node) le::put_f32(out, v);
  }
}

VTurnLut read_vlut(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || std::string_view(magic.data(), 4) != "VLUT") {
    throw FormatError("not a VLUT table (bad magic)");
  }
  const std::uint16_t version = le::get_u16(in);
  if (version != 1) {
    throw FormatError("unsupported VLUT version " + std::to_string(version));
  }
  VTurnLut lut;
  lut.dump.x = le::get_f64(in);
  lut.dump.y = le::get_f64(in);
  lut.dump.heading = le::get_f64(in);
  std::size_t total = 1;
  for (LutAxis& a : lut.axes) {
    a.min = le::get_f64(in);
    a.step = le::get_f64(in);
    a.count = le::get_u32(in);
    if (a.count < 1 || a.count > 100000 || !(a.step > 0.0)) {
      throw FormatError("VLUT axis descriptor out of range");
    }
    total *= a.count;
  }
  if (total > 50'000'000) throw FormatError("VLUT lattice too large");
  lut.nodes.resize(total);
  for (auto& node : lut.nodes) {
    for (float& v : node) v = le::get_f32(in);
  }
  return lut;
}

void save_vlut(const std::filesystem::path& path, const VTurnLut& lut) {
  std::ostringstream os(std::ios::binary);
  write_vlut(os, lut);
  write_file_atomic(path, os.str());
}

VTurnLut load_vlut(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return read_vlut(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace loadplan
