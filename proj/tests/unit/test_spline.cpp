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
#include <random>
#include <vector>

#include "loadplan/spline.hpp"

namespace loadplan {
namespace {

const std::vector<double> kKnots{0, 0, 0, 0, 1.0 / 3, 2.0 / 3, 1, 1, 1, 1};

// Cox-de Boor recursion, right end closed.
double cox_de_boor(int i, int p, double s) {
  if (p == 0) {
    const bool last = s == 1.0 && kKnots[i] < 1.0 && kKnots[i + 1] == 1.0;
    return (kKnots[i] <= s && s < kKnots[i + 1]) || last ? 1.0 : 0.0;
  }
  double out = 0.0;
  const double a = kKnots[i + p] - kKnots[i];
  const double b = kKnots[i + p + 1] - kKnots[i + 1];
  if (a > 0) out += (s - kKnots[i]) / a * cox_de_boor(i, p - 1, s);
  if (b > 0) out += (kKnots[i + p + 1] - s) / b * cox_de_boor(i + 1, p - 1, s);
  return out;
}

Eigen::Vector2d oracle_point(const SplineSegment& seg, double s) {
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  for (int i = 0; i < 6; ++i) p += cox_de_boor(i, 3, s) * seg.control[i];
  return p;
}

TEST(Basis, MatchesCoxDeBoor) {
  const BSplineBasis& basis = cubic_six_point_basis();
  ASSERT_EQ(basis.size(), 6);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double s = t == 0 ? 0.0 : t == 1 ? 1.0 : u(rng);
    const Eigen::MatrixXd d = basis.derivatives(s, 0);
    double sum = 0.0;
    for (int i = 0; i < 6; ++i) {
      EXPECT_NEAR(d(0, i), cox_de_boor(i, 3, s), 1e-12) << "s " << s;
      sum += d(0, i);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Spline, CurveMatchesOracle) {
  const SplineSegment seg = solve_spline({0, 0}, {1, 0}, {6, 3}, {0, 1}, 8.0, 5.0);
  for (double s : {0.0, 0.1, 0.33, 0.5, 0.9, 1.0}) {
    EXPECT_LT((seg.point(s) - oracle_point(seg, s)).norm(), 1e-12);
  }
}

TEST(Spline, EndConditionsOnRandomDraws) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-20.0, 20.0);
  std::uniform_real_distribution<double> ang(-3.14159, 3.14159);
  std::uniform_real_distribution<double> mag(1.0, 30.0);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Vector2d q0(pos(rng), pos(rng));
    const Eigen::Vector2d q1(pos(rng), pos(rng));
    const double h0 = ang(rng);
    const double h1 = ang(rng);
    const Eigen::Vector2d d0(std::cos(h0), std::sin(h0));
    const Eigen::Vector2d d1(std::cos(h1), std::sin(h1));
    const double a = mag(rng);
    const double b = mag(rng);
    const SplineSegment seg = solve_spline(q0, d0, q1, d1, a, b);
    const auto& P = seg.control;
    // Clamped cubic end derivatives from the control polygon.
    const Eigen::Vector2d c1_0 = 9.0 * (P[1] - P[0]);
    const Eigen::Vector2d c1_1 = 9.0 * (P[5] - P[4]);
    const Eigen::Vector2d c2_0 = 18.0 * (1.5 * (P[2] - P[1]) - 3.0 * (P[1] - P[0]));
    const Eigen::Vector2d c2_1 = 18.0 * (3.0 * (P[5] - P[4]) - 1.5 * (P[4] - P[3]));
    const double scale = 1.0 + q0.norm() + q1.norm() + a + b;
    EXPECT_LT((P[0] - q0).norm(), 1e-9 * scale);
    EXPECT_LT((P[5] - q1).norm(), 1e-9 * scale);
    EXPECT_LT((c1_0 - a * d0).norm(), 1e-9 * scale);
    EXPECT_LT((c1_1 - b * d1).norm(), 1e-9 * scale);
    EXPECT_LT(c2_0.norm(), 1e-9 * scale);
    EXPECT_LT(c2_1.norm(), 1e-9 * scale);
    EXPECT_LT((seg.derivative(0.0, 1) - a * d0).norm(), 1e-9 * scale);
    EXPECT_LT((seg.derivative(1.0, 1) - b * d1).norm(), 1e-9 * scale);
  }
}

TEST(Spline, StraightLine) {
  const SplineSegment seg = solve_spline({0, 0}, {1, 0}, {10, 0}, {1, 0}, 10.0, 10.0);
  for (const auto& p : seg.control) EXPECT_NEAR(p.y(), 0.0, 1e-12);
  for (int k = 0; k <= 100; ++k) EXPECT_LE(std::abs(seg.curvature(k / 100.0)), 1e-9);
}

TEST(Spline, DerivativeMatchesFiniteDifference) {
  const SplineSegment seg = solve_spline({1, 2}, {0, 1}, {-4, 7}, {-1, 0}, 6.0, 9.0);
  const double h = 1e-5;
  for (double s : {0.2, 0.4, 0.6, 0.8}) {
    const Eigen::Vector2d fd = (oracle_point(seg, s + h) - oracle_point(seg, s - h)) / (2 * h);
    EXPECT_LT((seg.derivative(s, 1) - fd).norm(), 1e-6);
  }
}

}  // namespace
}  // namespace loadplan
