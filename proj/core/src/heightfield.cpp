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

#include "loadplan/heightfield.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include "gradient_noise.hpp"
#include "loadplan/errors.hpp"

namespace loadplan {
namespace {

constexpr double kEdgeTolerance = 1e-9;

struct Neighbour {
  int di;
  int dj;
  double distance_factor;  // multiples of the cell size
};

constexpr std::array<Neighbour, 8> kNeighbours = {{
    {1, 0, 1.0},
    {-1, 0, 1.0},
    {0, 1, 1.0},
    {0, -1, 1.0},
    {1, 1, std::numbers::sqrt2},
    {-1, 1, std::numbers::sqrt2},
    {1, -1, std::numbers::sqrt2},
    {-1, -1, std::numbers::sqrt2},
}};

// Bilinear interpolation on a regular lattice given fractional indices that
// are already known to lie inside [0, n-1].
template <typename At>
double bilinear(At at, int nx, int ny, double fx, double fy) {
  int i0 = static_cast<int>(std::floor(fx));
  int j0 = static_cast<int>(std::floor(fy));
  i0 = std::clamp(i0, 0, nx - 2);
  j0 = std::clamp(j0, 0, ny - 2);
  const double tx = fx - i0;
  const double ty = fy - j0;
  const double h00 = at(i0, j0);
  const double h10 = at(i0 + 1, j0);
  const double h01 = at(i0, j0 + 1);
  const double h11 = at(i0 + 1, j0 + 1);
  return (1.0 - ty) * ((1.0 - tx) * h00 + tx * h10) +
         ty * ((1.0 - tx) * h01 + tx * h11);
}

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace

HeightField::HeightField(int nx, int ny, double cell, double origin_x,
                         double origin_y)
    : HeightField(nx, ny, cell, origin_x, origin_y,
                  std::vector<double>(static_cast<std::size_t>(
                                          std::max(nx, 0)) *
                                          static_cast<std::size_t>(
                                              std::max(ny, 0)),
                                      0.0)) {}

HeightField::HeightField(int nx, int ny, double cell, double origin_x,
                         double origin_y, std::vector<double> heights)
    : nx_(nx),
      ny_(ny),
      cell_(cell),
      origin_x_(origin_x),
      origin_y_(origin_y),
      heights_(std::move(heights)) {
  if (nx < 2 || ny < 2) throw Error("heightfield needs at least 2x2 cells");
  if (!(cell > 0.0)) throw Error("heightfield cell size must be positive");
  if (heights_.size() !=
      static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
    throw Error("heightfield storage does not match nx*ny");
  }
  for (double h : heights_) {
    if (!std::isfinite(h)) throw Error("heightfield contains a non-finite height");
  }
}

bool HeightField::contains(double x, double y) const {
  const double tol = kEdgeTolerance * cell_;
  return x >= origin_x_ - tol && x <= max_x() + tol && y >= origin_y_ - tol &&
         y <= max_y() + tol;
}

double HeightField::volume() const {
  double sum = 0.0;
  for (double h : heights_) sum += h;
  return sum * cell_ * cell_;
}

double sample(const HeightField& field, double x, double y) {
  if (!field.contains(x, y)) {
    std::ostringstream os;
    os << "sample (" << x << ", " << y << ") outside heightfield ["
       << field.origin_x() << ", " << field.max_x() << "] x ["
       << field.origin_y() << ", " << field.max_y() << "]";
    throw BoundsError(os.str());
  }
  return sample_clamped(field, x, y);
}

double sample_clamped(const HeightField& field, double x, double y) {
  const double fx = std::clamp((x - field.origin_x()) / field.cell(), 0.0,
                               static_cast<double>(field.nx() - 1));
  const double fy = std::clamp((y - field.origin_y()) / field.cell(), 0.0,
                               static_cast<double>(field.ny() - 1));
  return bilinear([&](int i, int j) { return field(i, j); }, field.nx(),
                  field.ny(), fx, fy);
}

LocalPatch cutout(const HeightField& field, const Pose2& pose, int n,
                  double side) {
  if (n < 2 || !(side > 0.0)) throw Error("patch needs n >= 2 and side > 0");
  LocalPatch patch;
  patch.n = n;
  patch.side = side;
  patch.pose = pose;
  patch.heights.resize(static_cast<std::size_t>(n) * n);

  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  const double half = 0.5 * (n - 1) * patch.spacing();
  for (double cu : {-half, half}) {
    for (double cv : {-half, half}) {
      const double wx = pose.x + cu * c - cv * s;
      const double wy = pose.y + cu * s + cv * c;
      if (!field.contains(wx, wy)) {
        std::ostringstream os;
        os << "cutout footprint corner (" << wx << ", " << wy
           << ") outside heightfield";
        throw BoundsError(os.str());
      }
    }
  }

  const double inv_cell = 1.0 / field.cell();
  for (int l = 0; l < n; ++l) {
    const double v = patch.local_coord(l);
    for (int k = 0; k < n; ++k) {
      const double u = patch.local_coord(k);
      const double wx = pose.x + u * c - v * s;
      const double wy = pose.y + u * s + v * c;
      const double fx = std::clamp((wx - field.origin_x()) * inv_cell, 0.0,
                                   static_cast<double>(field.nx() - 1));
      const double fy = std::clamp((wy - field.origin_y()) * inv_cell, 0.0,
                                   static_cast<double>(field.ny() - 1));
      patch(k, l) = bilinear([&](int i, int j) { return field(i, j); },
                             field.nx(), field.ny(), fx, fy);
    }
  }
  return patch;
}

namespace {

// Visits every field cell inside the patch sample hull with the bilinear
// patch value at its position. write(value, cell) returns whether the cell
// changed.
template <typename Write>
std::array<int, 4> apply_patch(HeightField& field, const LocalPatch& patch,
                               const char* what, Write write) {
  const int n = patch.n;
  const double spacing = patch.spacing();
  // Each sample owns one spacing-sized tile, so the footprint is side wide.
  const double half = 0.5 * patch.side;
  const double c = std::cos(patch.pose.heading);
  const double s = std::sin(patch.pose.heading);

  double min_x = patch.pose.x, max_x = patch.pose.x;
  double min_y = patch.pose.y, max_y = patch.pose.y;
  for (double cu : {-half, half}) {
    for (double cv : {-half, half}) {
      const double wx = patch.pose.x + cu * c - cv * s;
      const double wy = patch.pose.y + cu * s + cv * c;
      if (!field.contains(wx, wy)) {
        std::ostringstream os;
        os << what << " footprint corner (" << wx << ", " << wy
           << ") outside heightfield";
        throw BoundsError(os.str());
      }
      min_x = std::min(min_x, wx);
      max_x = std::max(max_x, wx);
      min_y = std::min(min_y, wy);
      max_y = std::max(max_y, wy);
    }
  }

  const double inv_cell = 1.0 / field.cell();
  const int i0 = std::max(
      0, static_cast<int>(std::floor((min_x - field.origin_x()) * inv_cell)));
  const int i1 = std::min(field.nx() - 1,
                          static_cast<int>(std::ceil(
                              (max_x - field.origin_x()) * inv_cell)));
  const int j0 = std::max(
      0, static_cast<int>(std::floor((min_y - field.origin_y()) * inv_cell)));
  const int j1 = std::min(field.ny() - 1,
                          static_cast<int>(std::ceil(
                              (max_y - field.origin_y()) * inv_cell)));

  const double tol = kEdgeTolerance * spacing;
  const double inv_spacing = 1.0 / spacing;
  const double centre = 0.5 * (n - 1);
  std::array<int, 4> touched = {-1, -1, -1, -1};
  for (int j = j0; j <= j1; ++j) {
    const double dy = field.cell_y(j) - patch.pose.y;
    for (int i = i0; i <= i1; ++i) {
      const double dx = field.cell_x(i) - patch.pose.x;
      const double u = dx * c + dy * s;
      const double v = -dx * s + dy * c;
      if (u < -half - tol || u >= half - tol || v < -half - tol ||
          v >= half - tol) {
        continue;
      }
      // Linear extrapolation across the outer half tile.
      const double fk = u * inv_spacing + centre;
      const double fl = v * inv_spacing + centre;
      const double value =
          bilinear([&](int k, int l) { return patch(k, l); }, n, n, fk, fl);
      if (!write(value, field(i, j))) continue;
      if (touched[0] < 0) {
        touched = {i, j, i, j};
      } else {
        touched[0] = std::min(touched[0], i);
        touched[1] = std::min(touched[1], j);
        touched[2] = std::max(touched[2], i);
        touched[3] = std::max(touched[3], j);
      }
    }
  }
  return touched;
}

}  // namespace

std::array<int, 4> replace_in_place(HeightField& field,
                                    const LocalPatch& patch) {
  return apply_patch(field, patch, "replace", [](double value, double& cell) {
    cell = std::max(0.0, value);
    return true;
  });
}

std::array<int, 4> add_patch_in_place(HeightField& field,
                                      const LocalPatch& delta) {
  return apply_patch(field, delta, "add", [](double value, double& cell) {
    if (value == 0.0) return false;
    cell = std::max(0.0, cell + value);
    return true;
  });
}

HeightField replace(const HeightField& field, const LocalPatch& patch) {
  HeightField out = field;
  replace_in_place(out, patch);
  return out;
}

void PileSpec::validate() const {
  if (!(crest_height > 0.0)) throw ConfigError("pile crest_height must be > 0");
  if (!(front_slope > 0.0 && front_slope < 0.5 * std::numbers::pi)) {
    throw ConfigError("pile front_slope must lie in (0, pi/2)");
  }
  if (noise_amplitude < 0.0 || noise_frequency < 0.0 || noise_octaves < 0) {
    throw ConfigError("pile noise parameters must be non-negative");
  }
  if (!(x_max > x_min) || !(footprint_depth > 0.0)) {
    throw ConfigError("pile footprint is empty");
  }
}

HeightField generate_pile(const PileSpec& spec, const FieldDims& dims) {
  spec.validate();
  HeightField field(dims.nx, dims.ny, dims.cell, dims.origin_x, dims.origin_y);
  const double back_y = spec.toe_y + spec.footprint_depth;
  if (!field.contains(spec.x_min, spec.toe_y) ||
      !field.contains(spec.x_max, back_y)) {
    throw BoundsError("pile footprint does not fit inside the field");
  }

  const double t = std::tan(spec.front_slope);
  const detail::GradientNoise noise(spec.seed);
  const bool noisy = spec.noise_amplitude > 0.0 && spec.noise_octaves > 0;
  // Noise fades in over the lowest 0.3 m so flat ground stays at zero.
  constexpr double kBodyFade = 0.3;

  for (int j = 0; j < field.ny(); ++j) {
    const double y = field.cell_y(j);
    for (int i = 0; i < field.nx(); ++i) {
      const double x = field.cell_x(i);
      double h = spec.crest_height;
      h = std::min(h, t * (y - spec.toe_y));
      h = std::min(h, t * (back_y - y));
      h = std::min(h, t * (x - spec.x_min));
      h = std::min(h, t * (spec.x_max - x));
      h = std::max(h, 0.0);
      if (noisy && h > 0.0) {
        const double n = noise.fractal(x * spec.noise_frequency,
                                       y * spec.noise_frequency,
                                       spec.noise_octaves);
        h = std::max(0.0, h + spec.noise_amplitude * smoothstep(h / kBodyFade) * n);
      }
      field(i, j) = h;
    }
  }
  return field;
}

std::int64_t settle_region(HeightField& field, double repose,
                           std::array<int, 4> box,
                           const SettleOptions& options) {
  if (!(repose > 0.0 && repose < 0.5 * std::numbers::pi)) {
    throw Error("repose angle must lie in (0, pi/2)");
  }
  const int nx = field.nx();
  const int ny = field.ny();
  if (box[0] < 0) return 0;

  const double tan_r = std::tan(repose);
  std::array<double, 8> cap{};
  std::array<double, 8> trigger{};
  std::array<double, 8> target{};
  std::array<std::ptrdiff_t, 8> offset{};
  for (std::size_t k = 0; k < kNeighbours.size(); ++k) {
    cap[k] = kNeighbours[k].distance_factor * field.cell() * tan_r;
    trigger[k] = cap[k] * (1.0 + options.slack);
    target[k] = cap[k] * (1.0 - options.overshoot);
    offset[k] = static_cast<std::ptrdiff_t>(kNeighbours[k].dj) * nx +
                kNeighbours[k].di;
  }

  std::span<double> h = field.heights();
  std::vector<std::uint8_t> queued(h.size(), 0);
  std::deque<std::int32_t> work;
  auto push = [&](int i, int j) {
    const std::size_t idx = field.index(i, j);
    if (!queued[idx]) {
      queued[idx] = 1;
      work.push_back(static_cast<std::int32_t>(idx));
    }
  };

  const int bi0 = std::max(0, box[0] - 1);
  const int bj0 = std::max(0, box[1] - 1);
  const int bi1 = std::min(nx - 1, box[2] + 1);
  const int bj1 = std::min(ny - 1, box[3] + 1);
  for (int j = bj0; j <= bj1; ++j) {
    for (int i = bi0; i <= bi1; ++i) push(i, j);
  }

  const std::int64_t budget =
      static_cast<std::int64_t>(options.max_sweeps) * nx * ny;
  std::int64_t processed = 0;
  std::int64_t relaxations = 0;
  std::array<double, 8> excess{};
  std::array<bool, 8> valid{};

  while (!work.empty()) {
    const std::int32_t idx = work.front();
    work.pop_front();
    queued[idx] = 0;
    if (++processed > budget) {
      const double residual = max_slope(field);
      std::ostringstream os;
      os << "settle did not converge within " << options.max_sweeps
         << " sweeps; max residual slope " << residual;
      throw ConvergenceError(os.str(), residual);
    }
    const int i = idx % nx;
    const int j = idx / nx;
    const double hc = h[idx];
    double total = 0.0;
    int violating = 0;
    for (std::size_t k = 0; k < kNeighbours.size(); ++k) {
      const int ni = i + kNeighbours[k].di;
      const int nj = j + kNeighbours[k].dj;
      valid[k] = ni >= 0 && ni < nx && nj >= 0 && nj < ny;
      excess[k] = 0.0;
      if (!valid[k]) continue;
      const double diff = hc - h[idx + offset[k]];
      if (diff > trigger[k]) {
        excess[k] = diff - target[k];
        total += excess[k];
        ++violating;
      }
    }
    if (violating == 0) continue;

    // Each violating neighbour receives excess/(m+1), which with m equal
    // excesses lands every pair exactly on the cap, scaled by an
    // over-relaxation factor. Capping the factor at (m+1)/m keeps the total
    // moved below the largest excess, so heights stay non-negative.
    const double omega =
        std::min(options.over_relaxation,
                 static_cast<double>(violating + 1) / violating);
    const double share = omega / (violating + 1);
    double moved = 0.0;
    for (std::size_t k = 0; k < kNeighbours.size(); ++k) {
      if (excess[k] <= 0.0) continue;
      const double m = excess[k] * share;
      h[idx + offset[k]] += m;
      moved += m;
    }
    h[idx] = hc - moved;
    ++relaxations;

    push(i, j);
    for (std::size_t k = 0; k < kNeighbours.size(); ++k) {
      if (valid[k]) push(i + kNeighbours[k].di, j + kNeighbours[k].dj);
    }
  }
  return relaxations;
}

HeightField settle(const HeightField& field, double repose,
                   const SettleOptions& options) {
  HeightField out = field;
  settle_region(out, repose, {0, 0, field.nx() - 1, field.ny() - 1}, options);
  return out;
}

double max_slope(const HeightField& field) {
  double worst = 0.0;
  for (int j = 0; j < field.ny(); ++j) {
    for (int i = 0; i < field.nx(); ++i) {
      for (const Neighbour& nb : kNeighbours) {
        const int ni = i + nb.di;
        const int nj = j + nb.dj;
        if (ni < 0 || ni >= field.nx() || nj < 0 || nj >= field.ny()) continue;
        const double slope = std::abs(field(i, j) - field(ni, nj)) /
                             (nb.distance_factor * field.cell());
        worst = std::max(worst, slope);
      }
    }
  }
  return worst;
}

}  // namespace loadplan
