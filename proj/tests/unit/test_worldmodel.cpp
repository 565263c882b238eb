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
#include "loadplan/worldmodel.hpp"

namespace loadplan {
namespace {

constexpr double kPi = std::numbers::pi;

double volume_of(const HeightField& f) {
  long double s = 0.0;
  for (double h : f.heights()) s += h;
  return static_cast<double>(s) * f.cell() * f.cell();
}

// Separable quadratic in the action with its minimum at `centre`.
class QuadraticModel final : public PerformanceModel {
 public:
  explicit QuadraticModel(std::array<double, 4> centre) : centre_(centre) {}
  LoadingOutcome evaluate(const LoadAction& action) const override {
    double q = 0.0;
    for (std::size_t i = 0; i < 4; ++i) q += (action.a[i] - centre_[i]) * (action.a[i] - centre_[i]);
    LoadingOutcome out;
    out.mass = norm.m0;
    out.time = norm.t0 * (1.0 + q);
    out.work = norm.w0;
    return out;
  }
  std::array<double, 4> centre_;
  Normalization norm;
};

TEST(Objective, NormalizationIdentity) {
  const Normalization n;
  const PerformanceTriple p = make_performance(n.m0, n.t0, n.w0, n);
  EXPECT_DOUBLE_EQ(p.normalized[0], 1.0);
  EXPECT_DOUBLE_EQ(p.normalized[1], 1.0);
  EXPECT_DOUBLE_EQ(p.normalized[2], 1.0);
  EXPECT_DOUBLE_EQ(objective(p, n), 3.0);
}

TEST(Objective, DoublingMassHalvesFirstTerm) {
  const Normalization n;
  const PerformanceTriple a = make_performance(3000, 20, 4e5, n);
  const PerformanceTriple b = make_performance(6000, 20, 4e5, n);
  EXPECT_DOUBLE_EQ(b.normalized[0], 0.5 * a.normalized[0]);
  EXPECT_DOUBLE_EQ(b.normalized[1], a.normalized[1]);
}

TEST(Objective, SumOverCycles) {
  const Normalization n;
  const std::vector<PerformanceTriple> cycles{make_performance(3000, 20, 4e5, n),
                                              make_performance(4000, 30, 5e5, n)};
  const double expect = n.m0 / 3000 + 20 / n.t0 + 4e5 / n.w0 + n.m0 / 4000 + 30 / n.t0 + 5e5 / n.w0;
  EXPECT_NEAR(objective(cycles, n), expect, 1e-12);
}

TEST(Objective, ArgminInvariantUnderWeightScaling) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> m(1000, 6000), t(10, 60), w(1e5, 1e6);
  Normalization n;
  n.w = {1.0, 0.7, 1.3};
  std::vector<PerformanceTriple> cands;
  for (int k = 0; k < 30; ++k) cands.push_back(make_performance(m(rng), t(rng), w(rng), n));
  auto argmin = [&](const Normalization& nn) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < cands.size(); ++k) {
      if (objective(cands[k], nn) < objective(cands[best], nn)) best = k;
    }
    return best;
  };
  Normalization scaled = n;
  for (double lambda : {0.01, 3.0, 250.0}) {
    for (std::size_t i = 0; i < 3; ++i) scaled.w[i] = lambda * n.w[i];
    EXPECT_EQ(argmin(scaled), argmin(n));
  }
}

TEST(Gradient, ExactOnQuadratic) {
  const QuadraticModel model({0.3, 0.7, 0.2, 0.9});
  const LoadAction a{{0.5, 0.4, 0.6, 0.1}};
  const auto g = objective_gradient(model, a, model.norm, 1e-3);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(g[i], 2.0 * (a.a[i] - model.centre_[i]), 1e-8);
  }
}

TEST(Optimizer, StationaryStartReturnsInitial) {
  const QuadraticModel model({1.0, 0.0, 0.5, 0.5});
  const ActionResult r = optimize_action(model, model.norm);
  EXPECT_EQ(r.action, kNominalAction);
  EXPECT_LE(r.iterations, 4);
}

TEST(Optimizer, DescendsAndProjects) {
  const QuadraticModel model({1.5, 0.6, 0.2, 0.9});
  const ActionResult start = evaluate_action(model, model.norm, kNominalAction);
  const ActionResult r = optimize_action(model, model.norm);
  EXPECT_LE(r.objective, start.objective);
  EXPECT_LE(r.iterations, 30);
  EXPECT_DOUBLE_EQ(r.action.a[0], 1.0);
  for (double v : r.action.a) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_LT(std::abs(r.action.a[1] - 0.6), std::abs(0.0 - 0.6));
}

class SurrogateTest : public ::testing::Test {
 protected:
  SurrogateWorldModel model{};
  Normalization norm{};
  HeightField pile = testing::straight_prism();
};

TEST_F(SurrogateTest, FlatGroundIsZeroMass) {
  const HeightField flat(330, 200, 0.1, -14.0, -5.0);
  const DigPose dig = DigPose::make(0.0, 1.0, kPi / 2);
  const PileOutcome out = model.predict_pile(flat, dig, kNominalAction);
  EXPECT_TRUE(out.zero_mass);
  EXPECT_TRUE(out.field == flat);
  const LoadingOutcome perf = model.bind(flat, dig)->evaluate(kNominalAction);
  EXPECT_TRUE(perf.zero_mass);
  EXPECT_DOUBLE_EQ(perf.mass, model.params().min_mass);
}

TEST_F(SurrogateTest, ZeroPenetrationIsZeroMass) {
  const DigPose dig = DigPose::make(0.0, 1.2, kPi / 2);
  const LoadingOutcome out = model.bind(pile, dig)->evaluate(LoadAction{{0.0, 0.5, 0.5, 0.5}});
  EXPECT_TRUE(out.zero_mass);
}

TEST_F(SurrogateTest, MassNonDecreasingInPenetration) {
  const DigPose dig = DigPose::make(1.0, 1.2, kPi / 2);
  const auto bound = model.bind(pile, dig);
  double last = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double m = bound->evaluate(LoadAction{{k / 20.0, 0.3, 0.5, 0.5}}).mass;
    EXPECT_GE(m, last - 1e-9);
    last = m;
  }
}

TEST_F(SurrogateTest, RemovedVolumeEqualsBucketVolume) {
  const DigPose dig = DigPose::make(0.5, 1.2, kPi / 2);
  for (const LoadAction& a : {kNominalAction, LoadAction{{0.6, 0.2, 0.4, 0.3}},
                              LoadAction{{0.9, 1.0, 0.8, 0.1}}}) {
    const PileOutcome out = model.predict_pile(pile, dig, a);
    const double removed = volume_of(pile) - volume_of(out.field);
    ASSERT_GT(out.bucket_volume, 0.0);
    EXPECT_NEAR(removed, out.bucket_volume, 0.02 * out.bucket_volume);
    const LoadingOutcome perf = model.bind(pile, dig)->evaluate(a);
    EXPECT_NEAR(perf.mass, out.bucket_volume * model.params().soil_density,
                0.02 * perf.mass);
  }
}

TEST_F(SurrogateTest, RepeatedDigYieldsLess) {
  const DigPose dig = DigPose::make(0.5, 1.2, kPi / 2);
  const LoadAction a{{0.5, 1.0, 0.5, 0.5}};
  const LoadingOutcome first = model.bind(pile, dig)->evaluate(a);
  const HeightField after = model.predict_pile(pile, dig, a).field;
  const LoadingOutcome second = model.bind(after, dig)->evaluate(a);
  EXPECT_LT(second.mass, first.mass);
}

TEST_F(SurrogateTest, FingerprintTracksInputs) {
  const DigPose dig = DigPose::make(0.5, 1.2, kPi / 2);
  const auto a = model.bind(pile, dig)->fingerprint();
  const auto b = model.bind(pile, dig)->fingerprint();
  const auto c = model.bind(pile, DigPose::make(0.5, 1.3, kPi / 2))->fingerprint();
  ASSERT_TRUE(a && b && c);
  EXPECT_EQ(*a, *b);
  EXPECT_NE(*a, *c);
}

TEST_F(SurrogateTest, OutcomeIsSmoothInAction) {
  const DigPose dig = DigPose::make(0.5, 1.2, kPi / 2);
  const auto bound = model.bind(pile, dig);
  // Second differences shrink quadratically with the step.
  const LoadAction base{{0.55, 0.4, 0.5, 0.5}};
  for (std::size_t i = 0; i < 4; ++i) {
    double prev = 0.0;
    for (double h : {1e-2, 5e-3}) {
      LoadAction lo = base, hi = base;
      lo.a[i] -= h;
      hi.a[i] += h;
      const double f0 = objective(bound->evaluate(base).performance(norm), norm);
      const double second = objective(bound->evaluate(hi).performance(norm), norm) - 2 * f0 +
                            objective(bound->evaluate(lo).performance(norm), norm);
      if (prev != 0.0) EXPECT_NEAR(second / prev, 0.25, 0.05) << "component " << i;
      prev = second;
    }
  }
}

TEST(SurrogateParamsTest, InvalidRejected) {
  SurrogateParams p;
  p.bucket_capacity = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

}  // namespace
}  // namespace loadplan
