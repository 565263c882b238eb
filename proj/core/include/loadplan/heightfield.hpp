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
/// \brief Uniform-grid pile heightfield: sampling, rotated cutout/replace,
/// synthetic pile generation and angle-of-repose settling.

#ifndef LOADPLAN_HEIGHTFIELD_HPP_
#define LOADPLAN_HEIGHTFIELD_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "loadplan/pose.hpp"

namespace loadplan {

/// Elevation grid over the ground plane. Cell (i, j) has its center at
/// (origin_x + i * cell, origin_y + j * cell); storage is row-major with
/// rows along y, so index = j * nx + i.
class HeightField {
 public:
  HeightField(int nx, int ny, double cell, double origin_x, double origin_y);
  HeightField(int nx, int ny, double cell, double origin_x, double origin_y,
              std::vector<double> heights);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell() const { return cell_; }
  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  double max_x() const { return origin_x_ + (nx_ - 1) * cell_; }
  double max_y() const { return origin_y_ + (ny_ - 1) * cell_; }

  double operator()(int i, int j) const { return heights_[index(i, j)]; }
  double& operator()(int i, int j) { return heights_[index(i, j)]; }

  std::span<const double> heights() const { return heights_; }
  std::span<double> heights() { return heights_; }

  double cell_x(int i) const { return origin_x_ + i * cell_; }
  double cell_y(int j) const { return origin_y_ + j * cell_; }

  bool contains(double x, double y) const;

  /// Sum of heights times cell area (m^3).
  double volume() const;

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) +
           static_cast<std::size_t>(i);
  }

  friend bool operator==(const HeightField&, const HeightField&) = default;

 private:
  int nx_;
  int ny_;
  double cell_;
  double origin_x_;
  double origin_y_;
  std::vector<double> heights_;
};

/// Square heightmap cut out of a HeightField on a lattice rotated to the
/// pose heading. Sample (k, l) sits at local coordinates
/// u = (k - (n-1)/2) * side/n along the heading and
/// v = (l - (n-1)/2) * side/n to its left; index = l * n + k.
struct LocalPatch {
  int n = 0;
  double side = 0.0;
  Pose2 pose;
  std::vector<double> heights;

  double spacing() const { return side / n; }
  double local_coord(int k) const { return (k - 0.5 * (n - 1)) * spacing(); }
  double operator()(int k, int l) const {
    return heights[static_cast<std::size_t>(l) * n + k];
  }
  double& operator()(int k, int l) {
    return heights[static_cast<std::size_t>(l) * n + k];
  }
};

/// Pile-state and performance patch geometries.
inline constexpr int kPileStatePatchCells = 52;
inline constexpr double kPileStatePatchSide = 5.2;
inline constexpr int kPerformancePatchCells = 36;
inline constexpr double kPerformancePatchSide = 3.6;

/// Trapezoidal prism with gradient noise on its body. The front toe runs
/// along y = toe_y with the pile rising towards +y; side toes at x_min and
/// x_max; back toe at toe_y + footprint_depth. All faces share front_slope.
struct PileSpec {
  double crest_height = 1.8;
  double front_slope = 0.5235987755982988;  // 30 deg
  double noise_amplitude = 0.1;
  double noise_frequency = 0.5;
  int noise_octaves = 2;
  std::uint64_t seed = 0;

  double toe_y = 1.0;
  double x_min = -12.0;
  double x_max = 15.0;
  double footprint_depth = 11.0;

  void validate() const;
};

/// Grid geometry for a generated field.
struct FieldDims {
  int nx = 330;
  int ny = 200;
  double cell = 0.1;
  double origin_x = -14.0;
  double origin_y = -5.0;
};

/// Bilinear elevation at (x, y). Throws BoundsError outside the cell-center
/// hull.
double sample(const HeightField& field, double x, double y);

/// Same as sample() but clamps the query to the grid hull.
double sample_clamped(const HeightField& field, double x, double y);

/// Samples an n x n patch of the given side length centered at pose with
/// its first axis along pose.heading. Throws BoundsError naming the
/// offending corner when the rotated footprint leaves the field.
LocalPatch cutout(const HeightField& field, const Pose2& pose, int n,
                  double side);

/// Writes the patch back into a copy of field. Every cell whose center lies
/// in the patch footprint (side x side, half-open on the far edges) takes
/// the bilinear patch value at its inverse-rotated position, extrapolated
/// linearly in the outer half tile and floored at zero; other cells keep
/// their value. Throws BoundsError when the footprint leaves the field.
HeightField replace(const HeightField& field, const LocalPatch& patch);

/// In-place variant of replace(). Returns the touched cell bounds as
/// {i0, j0, i1, j1} (inclusive), or all -1 when nothing was touched.
std::array<int, 4> replace_in_place(HeightField& field,
                                    const LocalPatch& patch);

/// Adds a patch of height changes to the field (bilinear at each cell
/// inside the patch footprint, as in replace()), flooring heights at zero. Cells that receive an
/// exact zero keep their value bit for bit. Returns the inclusive box of
/// changed cells, or all -1.
std::array<int, 4> add_patch_in_place(HeightField& field,
                                      const LocalPatch& delta);

HeightField generate_pile(const PileSpec& spec, const FieldDims& dims);

struct SettleOptions {
  /// Relative slack on the repose slope cap before material moves.
  double slack = 1e-6;
  /// Relaxed pairs are brought this fraction below the cap, which bounds
  /// the number of passes a steep cut needs.
  double overshoot = 1e-3;
  /// Over-relaxation factor on each transfer, in [1, 2).
  double over_relaxation = 1.9;
  /// Work cap in full-grid sweep equivalents.
  int max_sweeps = 10000;
};

/// Relaxes every inter-cell slope (8-connected, diagonal distance
/// cell * sqrt(2)) to at most tan(repose). Volume is conserved. Throws
/// ConvergenceError when the sweep cap is exhausted.
HeightField settle(const HeightField& field, double repose,
                   const SettleOptions& options = {});

/// Settles in place, seeding the work list with the cells of the inclusive
/// box {i0, j0, i1, j1} (grown by one cell). Cells outside the box are
/// visited only when material reaches them. Returns the number of cell
/// relaxations performed.
std::int64_t settle_region(HeightField& field, double repose,
                           std::array<int, 4> box,
                           const SettleOptions& options = {});

/// Largest height difference over distance between any two 8-neighbours.
double max_slope(const HeightField& field);

}  // namespace loadplan

#endif  // LOADPLAN_HEIGHTFIELD_HPP_
