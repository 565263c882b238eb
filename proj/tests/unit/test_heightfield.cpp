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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "loadplan/errors.hpp"
#include "loadplan/heightfield.hpp"

namespace loadplan {
namespace {

using testing::make_field;
constexpr double kPi = std::numbers::pi;

// Oracle: largest 8-neighbour slope, computed directly.
double slope_oracle(const HeightField& f) {
  double worst = 0.0;
  for (int j = 0; j < f.ny(); ++j) {
    for (int i = 0; i < f.nx(); ++i) {
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int a = i + di;
          const int b = j + dj;
          if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= f.nx() || b >= f.ny()) {
            continue;
          }
          const double d = f.cell() * std::hypot(di, dj);
          worst = std::max(worst, std::abs(f(i, j) - f(a, b)) / d);
        }
      }
    }
  }
  return worst;
}

double sum_volume(const HeightField& f) {
  long double s = 0.0;
  for (double h : f.heights()) s += h;
  return static_cast<double>(s) * f.cell() * f.cell();
}

TEST(Sample, ConstantField) {
  const HeightField f = make_field(20, 20, 0.1, 0.0, 0.0, [](double, double) { return 1.8; });
  EXPECT_DOUBLE_EQ(sample(f, 0.73, 1.21), 1.8);
}

TEST(Sample, CellCentreIdentity) {
  const HeightField f =
      make_field(10, 8, 0.1, -0.5, 0.2, [](double x, double y) { return std::sin(3 * x) + y * y; });
  EXPECT_EQ(sample(f, f.cell_x(3), f.cell_y(5)), f(3, 5));
}

TEST(Sample, AffineReproducedAtMidpoints) {
  const HeightField f = make_field(30, 30, 0.1, 0.0, 0.0, [](double x, double) { return 0.1 * x; });
  for (int i = 0; i + 1 < 30; ++i) {
    const double x = 0.5 * (f.cell_x(i) + f.cell_x(i + 1));
    EXPECT_NEAR(sample(f, x, 1.05), 0.1 * x, 1e-12);
  }
}

TEST(Sample, OutsideThrows) {
  const HeightField f = make_field(5, 5, 0.1, 0.0, 0.0, [](double, double) { return 0.0; });
  EXPECT_THROW(sample(f, -0.2, 0.1), BoundsError);
  EXPECT_DOUBLE_EQ(sample_clamped(f, -0.2, 0.1), 0.0);
}

TEST(Cutout, ZeroRotationIsSubGrid) {
  const HeightField f =
      make_field(60, 60, 0.1, 0.0, 0.0, [](double x, double y) { return x * x + std::cos(y); });
  // Patch centre on a cell corner so samples land on cell centres.
  const LocalPatch p = cutout(f, {3.05, 2.95, 0.0}, 10, 1.0);
  for (int l = 0; l < 10; ++l) {
    for (int k = 0; k < 10; ++k) EXPECT_NEAR(p(k, l), f(26 + k, 25 + l), 1e-12);
  }
}

TEST(Cutout, ConeIsRotationInvariant) {
  const HeightField f = make_field(81, 81, 0.1, -4.0, -4.0, [](double x, double y) {
    return std::max(0.0, 2.0 - std::hypot(x, y));
  });
  const LocalPatch a = cutout(f, {0.0, 0.0, 0.0}, 36, 3.6);
  const LocalPatch b = cutout(f, {0.0, 0.0, kPi / 2}, 36, 3.6);
  for (std::size_t k = 0; k < a.heights.size(); ++k) {
    EXPECT_NEAR(a.heights[k], b.heights[k], 1e-9);
  }
}

TEST(Cutout, ConstantFieldGivesConstantPatch) {
  const HeightField f = make_field(80, 80, 0.1, 0.0, 0.0, [](double, double) { return 0.7; });
  const LocalPatch p = cutout(f, {4.0, 4.0, 0.4}, 52, 5.2);
  for (double h : p.heights) EXPECT_NEAR(h, 0.7, 1e-12);
}

TEST(Cutout, FootprintOutsideThrows) {
  const HeightField f = make_field(40, 40, 0.1, 0.0, 0.0, [](double, double) { return 0.0; });
  EXPECT_THROW(cutout(f, {0.5, 2.0, 0.0}, 36, 3.6), BoundsError);
}

TEST(Replace, AffineRoundTripAtRotations) {
  const auto plane = [](double x, double y) { return 1.0 + 0.1 * x - 0.05 * y; };
  const HeightField f = make_field(100, 100, 0.1, 0.0, 0.0, plane);
  for (double th : {0.0, kPi / 6, kPi / 4}) {
    const HeightField g = replace(f, cutout(f, {5.0, 5.0, th}, 52, 5.2));
    for (std::size_t k = 0; k < f.heights().size(); ++k) {
      EXPECT_NEAR(g.heights()[k], f.heights()[k], 1e-6) << "theta " << th;
    }
  }
}

TEST(Replace, GridAlignedRoundTripIsExact) {
  const HeightField f =
      make_field(80, 80, 0.1, 0.0, 0.0, [](double x, double y) { return std::sin(x) * std::cos(y) + 1; });
  const HeightField g = replace(f, cutout(f, {4.05, 3.95, 0.0}, 20, 2.0));
  for (std::size_t k = 0; k < f.heights().size(); ++k) {
    EXPECT_NEAR(g.heights()[k], f.heights()[k], 1e-12);
  }
}

TEST(Replace, LoweredPatchVolume) {
  const HeightField f = make_field(120, 120, 0.1, 0.0, 0.0, [](double, double) { return 1.0; });
  for (double th : {0.0, 0.3, kPi / 4}) {
    LocalPatch p = cutout(f, {6.0, 6.0, th}, 52, 5.2);
    for (double& h : p.heights) h -= 0.2;
    const double drop = sum_volume(f) - sum_volume(replace(f, p));
    EXPECT_NEAR(drop, 0.2 * 5.2 * 5.2, 0.02 * 0.2 * 5.2 * 5.2) << "theta " << th;
  }
}

TEST(Replace, AddZeroDeltaIsBitwiseNoop) {
  const HeightField f =
      make_field(80, 80, 0.1, 0.0, 0.0, [](double x, double y) { return std::abs(std::sin(x * y)); });
  HeightField g = f;
  LocalPatch zero = cutout(f, {4.0, 4.0, 0.7}, 36, 3.6);
  for (double& h : zero.heights) h = 0.0;
  const auto box = add_patch_in_place(g, zero);
  EXPECT_EQ(box[0], -1);
  EXPECT_TRUE(g == f);
}

TEST(GeneratePile, NoiseFreeGeometry) {
  PileSpec spec;
  spec.noise_amplitude = 0.0;
  const FieldDims dims;
  const HeightField f = generate_pile(spec, dims);
  const double run = spec.crest_height / std::tan(spec.front_slope);
  EXPECT_NEAR(run, 3.118, 1e-3);
  // Column through x = 0 (i = 140).
  const int i = 140;
  ASSERT_NEAR(f.cell_x(i), 0.0, 1e-12);
  for (int j = 0; j < f.ny(); ++j) {
    const double y = f.cell_y(j);
    double expect = 0.0;
    if (y >= spec.toe_y && y <= spec.toe_y + run) {
      expect = (y - spec.toe_y) * std::tan(spec.front_slope);
    } else if (y > spec.toe_y + run && y < spec.toe_y + spec.footprint_depth - run) {
      expect = spec.crest_height;
    }
    if (y <= spec.toe_y + spec.footprint_depth / 2) {
      EXPECT_NEAR(f(i, j), expect, 1e-9) << "y " << y;
    }
  }
  EXPECT_DOUBLE_EQ(*std::max_element(f.heights().begin(), f.heights().end()),
                   spec.crest_height);
}

TEST(GeneratePile, Deterministic) {
  PileSpec spec;
  spec.seed = 7;
  const FieldDims dims;
  EXPECT_TRUE(generate_pile(spec, dims) == generate_pile(spec, dims));
  PileSpec other = spec;
  other.seed = 8;
  EXPECT_FALSE(generate_pile(spec, dims) == generate_pile(other, dims));
  spec.noise_amplitude = 0.0;
  other.noise_amplitude = 0.0;
  EXPECT_TRUE(generate_pile(spec, dims) == generate_pile(other, dims));
}

TEST(Settle, FeasibleFieldUnchanged) {
  const HeightField f = make_field(50, 50, 0.1, 0.0, 0.0, [](double x, double y) {
    return 0.2 * std::sin(x) + 0.3 * std::cos(0.5 * y) + 1.0;
  });
  ASSERT_LT(slope_oracle(f), std::tan(kPi / 6));
  EXPECT_TRUE(settle(f, kPi / 6) == f);
}

TEST(Settle, SpikeBecomesCone) {
  HeightField f(61, 61, 0.1, 0.0, 0.0);
  f(30, 30) = 2.0;
  const double v0 = sum_volume(f);
  const HeightField g = settle(f, kPi / 6);
  EXPECT_NEAR(sum_volume(g), v0, 1e-9 * v0);
  EXPECT_LE(slope_oracle(g), std::tan(kPi / 6) + 1e-6);
  EXPECT_NEAR(max_slope(g), slope_oracle(g), 1e-12);
  for (double h : g.heights()) EXPECT_GE(h, 0.0);
}

TEST(Settle, StepBecomesRamp) {
  const HeightField f =
      make_field(80, 20, 0.1, 0.0, 0.0, [](double x, double) { return x >= 4.0 ? 1.0 : 0.0; });
  const double v0 = sum_volume(f);
  const HeightField g = settle(f, kPi / 6);
  EXPECT_LE(slope_oracle(g), std::tan(kPi / 6) + 1e-6);
  EXPECT_NEAR(sum_volume(g), v0, 1e-9 * v0);
}

TEST(Settle, RegionMatchesInvariants) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  HeightField f(40, 40, 0.1, 0.0, 0.0);
  for (double& h : f.heights()) h = u(rng);
  const double v0 = sum_volume(f);
  settle_region(f, kPi / 6, {10, 10, 20, 20});
  EXPECT_LE(slope_oracle(f), std::tan(kPi / 6) + 1e-6);
  EXPECT_NEAR(sum_volume(f), v0, 1e-9 * v0);
}

TEST(Settle, SweepCapThrows) {
  HeightField f(61, 61, 0.1, 0.0, 0.0);
  f(30, 30) = 50.0;
  SettleOptions opts;
  opts.max_sweeps = 1;
  EXPECT_THROW(settle(f, kPi / 6, opts), ConvergenceError);
}

}  // namespace
}  // namespace loadplan
