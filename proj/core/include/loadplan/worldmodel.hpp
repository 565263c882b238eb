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
/// \brief World-model interface for a single loading (next pile state and
/// loading performance), the analytic bucket-sweep surrogate that backs it,
/// and the per-dig projected-gradient loading-action optimizer.

#ifndef LOADPLAN_WORLDMODEL_HPP_
#define LOADPLAN_WORLDMODEL_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>

#include "loadplan/heightfield.hpp"
#include "loadplan/pose.hpp"

namespace loadplan {

/// Bucket-filling controller parameters, each in [0, 1]:
/// penetration, lift reactivity, tilt reactivity, throttle aggressiveness.
struct LoadAction {
  std::array<double, 4> a{1.0, 0.0, 0.5, 0.5};

  /// Clamps every component into [0, 1].
  static LoadAction clamped(const std::array<double, 4>& values);

  friend bool operator==(const LoadAction&, const LoadAction&) = default;
};

/// Thrust deep, little lifting: the starting point of every optimization
/// and the fixed action of the nominal strategy.
inline constexpr LoadAction kNominalAction{{1.0, 0.0, 0.5, 0.5}};

/// Characteristic values M0, T0, W0 and the objective weights.
struct Normalization {
  double m0 = 4800.0;
  double t0 = 25.0;
  double w0 = 1.0e6;
  std::array<double, 3> w{1.0, 1.0, 1.0};

  void validate() const;
};

/// Raw mass (kg), time (s), work (J) and the normalized vector
/// [M0/M, T/T0, W/W0]. A contribution without a mass measurement (V-turns,
/// dumping) has mass 0 and a zero first normalized component.
struct PerformanceTriple {
  double mass = 0.0;
  double time = 0.0;
  double work = 0.0;
  std::array<double, 3> normalized{0.0, 0.0, 0.0};
};

PerformanceTriple make_performance(double mass, double time, double work,
                                   const Normalization& norm);

/// w . normalized; lower is better.
double objective(const PerformanceTriple& perf, const Normalization& norm);

/// Sum of per-cycle objectives.
double objective(std::span<const PerformanceTriple> cycles,
                 const Normalization& norm);

/// Dig location with heading into the pile, normal to its contour.
struct DigPose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // (-pi, pi]

  static DigPose make(double x, double y, double heading) {
    return {x, y, wrap_angle(heading)};
  }
  Pose2 pose() const { return {x, y, heading}; }

  friend bool operator==(const DigPose&, const DigPose&) = default;
};

/// Constants of the analytic surrogate. Coefficients are internal to the
/// surrogate; swap the WorldModel implementation to use a trained model.
struct SurrogateParams {
  double bucket_width = 2.7;       // m
  double bucket_capacity = 3.0;    // m^3
  double soil_density = 1600.0;    // kg/m^3
  double repose = 0.5235987755982988;  // rad (30 deg)
  double max_penetration = 2.5;    // m
  double t0 = 8.0;                 // s
  double c_len = 3.0;              // s/m
  double c_fill = 6.0;             // s per full bucket
  double c_cut = 4000.0;           // J/m^3
  double c_lift = 9.81 * 1.5;      // J/(kg m)
  double g = 9.81;                 // m/s^2
  double berm_width = 0.5;         // m, each side of the cut
  double patch_offset = 1.25;      // m, patch centre ahead of the dig point
  double min_mass = 1.0;           // kg, zero-mass floor

  void validate() const;
};

/// One loading as predicted by a performance model.
struct LoadingOutcome {
  double mass = 0.0;           // kg, floored at min_mass
  double time = 0.0;           // s
  double work = 0.0;           // J
  double swept_volume = 0.0;   // m^3 under the bucket path
  double bucket_volume = 0.0;  // m^3 retained in the bucket
  bool zero_mass = false;

  PerformanceTriple performance(const Normalization& norm) const {
    return make_performance(mass, time, work, norm);
  }
};

/// Next pile state of one loading.
struct PileOutcome {
  HeightField field;
  double bucket_volume = 0.0;  // m^3 removed into the bucket
  bool zero_mass = false;
  std::array<int, 4> touched{-1, -1, -1, -1};  // modified cell box
};

/// Performance predictor bound to one (pile, dig pose): the local heightmap
/// is cut out once and any number of actions can then be evaluated.
/// Implementations may memoize internally, so one instance must not be
/// evaluated from several threads at once.
class PerformanceModel {
 public:
  virtual ~PerformanceModel() = default;
  virtual LoadingOutcome evaluate(const LoadAction& action) const = 0;

  /// 128-bit digest of everything evaluate() depends on, when the model can
  /// provide one. Equal digests from the same WorldModel promise equal
  /// outcomes for every action, which lets callers reuse results.
  virtual std::optional<std::array<std::uint64_t, 2>> fingerprint() const {
    return std::nullopt;
  }
};

/// Pile-state and performance predictors for one loading.
class WorldModel {
 public:
  virtual ~WorldModel() = default;

  virtual PileOutcome predict_pile(const HeightField& field,
                                   const DigPose& dig,
                                   const LoadAction& action) const = 0;

  virtual std::unique_ptr<PerformanceModel> bind(const HeightField& field,
                                                 const DigPose& dig) const = 0;

  PerformanceTriple predict_performance(const HeightField& field,
                                        const DigPose& dig,
                                        const LoadAction& action,
                                        const Normalization& norm) const {
    return bind(field, dig)->evaluate(action).performance(norm);
  }
};

/// Deterministic bucket-sweep surrogate.
///
/// The bucket (width bucket_width) penetrates L = a0 * max_penetration along
/// the heading. The removed layer tapers linearly from
/// d_c = (0.3 + 0.7 a2) * min(1.2 m, mean footprint height) at the entry to
/// zero at L, clipped by the soil present (smooth minimum). The bucket keeps
/// at most capacity * (0.6 + 0.4 a1); the rest is pushed into side berms.
/// Throttle aggressiveness a3 trades penetration time against cutting work.
/// The depth profile is averaged over each lattice column with a Gaussian
/// window, making every output C-infinity in the action.
class SurrogateWorldModel final : public WorldModel {
 public:
  explicit SurrogateWorldModel(SurrogateParams params = {});

  const SurrogateParams& params() const { return params_; }

  PileOutcome predict_pile(const HeightField& field, const DigPose& dig,
                           const LoadAction& action) const override;

  std::unique_ptr<PerformanceModel> bind(const HeightField& field,
                                         const DigPose& dig) const override;

  /// Pose of the patch centre for a dig pose.
  Pose2 patch_pose(const DigPose& dig) const;

 private:
  SurrogateParams params_;
};

struct OptimizerOptions {
  double step_length = 0.05;  // eta
  double fd_step = 1e-3;
  int max_iterations = 30;
  int patience = 3;
  double tolerance = 1e-4;
  LoadAction initial = kNominalAction;
};

struct ActionResult {
  LoadAction action;
  LoadingOutcome outcome;
  double objective = 0.0;  // w . normalized loading performance
  int iterations = 0;
  int evaluations = 0;
};

/// Central-difference gradient of w . normalized(performance) with respect
/// to the action; falls back to a one-sided difference at the box bounds.
std::array<double, 4> objective_gradient(const PerformanceModel& model,
                                         const LoadAction& action,
                                         const Normalization& norm,
                                         double step, int* evaluations = nullptr);

/// Projected gradient descent over [0, 1]^4 with early stopping. Returns the
/// best iterate seen, which is never worse than the initial action.
ActionResult optimize_action(const PerformanceModel& model,
                             const Normalization& norm,
                             const OptimizerOptions& options = {});

/// Evaluates a fixed action without optimizing.
ActionResult evaluate_action(const PerformanceModel& model,
                             const Normalization& norm,
                             const LoadAction& action);

}  // namespace loadplan

#endif  // LOADPLAN_WORLDMODEL_HPP_
