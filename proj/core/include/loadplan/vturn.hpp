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
/// \brief V-turn planning: two spline legs through an optimized switch-back
/// point, longitudinal dynamics for time and work, and the precomputed
/// V-turn cost table.

#ifndef LOADPLAN_VTURN_HPP_
#define LOADPLAN_VTURN_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "loadplan/pose.hpp"
#include "loadplan/spline.hpp"

namespace loadplan {

/// Weights of the curvature, curvature-rate and length terms.
using PathWeights = std::array<double, 3>;
inline constexpr PathWeights kDefaultPathWeights{10.0, 10.0, 1.0};

/// Switch-back search square: side l2, starting l1 behind the reversing
/// endpoint along its backward axis and centred on that axis.
struct SwitchBackBox {
  double l1 = 5.0;
  double l2 = 10.0;
};

/// Tangent magnitudes at the reversing start, the forward end, and on both
/// sides of the switch-back.
struct LegMagnitudes {
  double from = 10.0;
  double to = 30.0;
  double switch_back_in = 5.0;
  double switch_back_out = 5.0;
};

struct VTurnPlanOptions {
  int starts = 5;              // multi-start points on the box diagonal
  int samples_per_leg = 200;
  int max_evaluations = 500;
  double min_step = 1e-3;      // compass-search stop size (box units, rad)
};

/// Reversing leg from the start pose to the switch-back, then a forward leg
/// to the goal pose. The vehicle heading is continuous at the switch-back;
/// only the direction of travel flips.
struct VTurnPath {
  SplineSegment leg_a;
  SplineSegment leg_b;
  Eigen::Vector2d switch_back = Eigen::Vector2d::Zero();
  double switch_back_heading = 0.0;
  std::array<LegSamples, 2> legs;
  double total_length = 0.0;
  /// Leg whose end is approached at the approach speed (-1: none).
  int approach_leg = -1;
  int evaluations = 0;
};

/// Discrete curve energy and length over the sampled legs:
/// g1 sum k^2 ds + g2 sum (dk/ds)^2 ds + g3 sum ds (trapezoidal in k).
double path_quality(std::span<const LegSamples> legs, const PathWeights& gamma);
double path_quality(const VTurnPath& path, const PathWeights& gamma);

/// Builds both legs for a given switch-back pose.
VTurnPath build_vturn(const Pose2& from, const Pose2& to,
                      const Eigen::Vector2d& switch_back, double heading,
                      const LegMagnitudes& mags, int samples_per_leg);

/// Derivative-free search over the switch-back position (inside the box)
/// and heading, minimizing path_quality. Deterministic. Throws
/// PlanningError when no finite score is found within the budget.
VTurnPath plan_vturn(const Pose2& from, const Pose2& to,
                     const PathWeights& gamma, const SwitchBackBox& box,
                     const LegMagnitudes& mags,
                     const VTurnPlanOptions& options = {});

struct VehicleParams {
  double mass_vehicle = 15200.0;       // kg
  double mu_r = 0.01;
  double g = 9.81;                     // m/s^2
  double target_speed = 8.0 / 3.6;     // m/s
  double approach_speed = 11.4 / 3.6;  // m/s
  double approach_window = 5.0;        // m before the dig point
  double throttle_rate = 2.0;          // throttle units per s
  double max_traction = 60000.0;       // N at full throttle
  double brake_decel = 1.5;            // m/s^2
  double dt = 0.01;                    // s

  void validate() const;
};

struct VTurnCost {
  double time = 0.0;  // s
  double work = 0.0;  // J, positive traction work only
  bool speed_capped = false;
};

/// One explicit-Euler step of (M) dv/dt + C_r v = f.
inline double step_velocity(double v, double force, double total_mass,
                            double c_r, double dt) {
  return v + dt * (force - c_r * v) / total_mass;
}

/// Drives one leg of the given length from and to standstill.
VTurnCost integrate_leg(double length, double load_mass,
                        const VehicleParams& vp, bool approach_at_end);

/// Sums integrate_leg over both legs (the vehicle stops at the switch-back).
VTurnCost integrate_motion(const VTurnPath& path, double load_mass,
                           const VehicleParams& vp);

/// Shared V-turn settings of a scenario.
struct VTurnSettings {
  PathWeights gamma = kDefaultPathWeights;
  SwitchBackBox box;
  /// Magnitudes at (dump, dig, first switch-back, second switch-back).
  std::array<double, 4> magnitudes{10.0, 30.0, 5.0, 5.0};
  VTurnPlanOptions plan;
};

struct CycleVTurns {
  VTurnPath to_dig;    // V-turn-1: dump -> dig, unloaded
  VTurnPath to_dump;   // V-turn-2: dig -> dump, loaded
};

CycleVTurns plan_cycle_vturns(const Pose2& dump, const Pose2& dig,
                              const VTurnSettings& settings);

/// One lattice axis: count nodes at min + k * step.
struct LutAxis {
  double min = 0.0;
  double step = 1.0;
  std::uint32_t count = 1;

  double max() const { return min + step * (count - 1); }
};

/// V-turn costs over a (x, y, heading) lattice of dig poses for a fixed
/// dump pose. Node values: V-turn-1 time and work, unloaded V-turn-2 time,
/// and V-turn-2 work as base + slope * load mass. The heading axis is
/// periodic when it spans a full turn.
struct VTurnLut {
  Pose2 dump;
  std::array<LutAxis, 3> axes;
  std::vector<std::array<float, 5>> nodes;

  std::size_t node_index(std::uint32_t ix, std::uint32_t iy,
                         std::uint32_t ih) const {
    return (static_cast<std::size_t>(ih) * axes[1].count + iy) * axes[0].count + ix;
  }
  bool heading_periodic() const;
};

/// Default lattice: 1 m in x and y over the dig region, 15 deg headings
/// over the full turn.
std::array<LutAxis, 3> default_lut_axes(double x_min, double x_max,
                                        double y_min, double y_max);

/// Node value for a dig pose; used by build_lut.
std::array<float, 5> vturn_node_value(const Pose2& dump, const Pose2& dig,
                                      const VTurnSettings& settings,
                                      const VehicleParams& vp,
                                      double reference_mass);

VTurnLut build_lut(const Pose2& dump, const std::array<LutAxis, 3>& axes,
                   const VTurnSettings& settings, const VehicleParams& vp,
                   int jobs = 1, double reference_mass = 4800.0);

/// Trilinear lookup; returns (V-turn-1, V-turn-2) costs. Throws BoundsError
/// when (x, y) is outside the lattice hull, or the heading is outside a
/// non-periodic heading axis.
std::pair<VTurnCost, VTurnCost> lut_lookup(const VTurnLut& lut, const Pose2& dig,
                                           double load_mass);

/// VLUT layout, little-endian: "VLUT", u16 version = 1, dump 3 x f64
/// (x, y, heading rad), per axis (f64 min, f64 step, u32 count) for x, y,
/// heading, then per node 5 x f32 (t_v1, w_v1, t_v2_empty, w_v2_base,
/// w_v2_slope) with x fastest, then y, then heading.
void write_vlut(std::ostream& out, const VTurnLut& lut);
VTurnLut read_vlut(std::istream& in);
void save_vlut(const std::filesystem::path& path, const VTurnLut& lut);
VTurnLut load_vlut(const std::filesystem::path& path);

}  // namespace loadplan

#endif  // LOADPLAN_VTURN_HPP_
