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
/// \brief Clamped cubic B-spline segments fixed by end positions, end
/// tangents and zero end curvature.

#ifndef LOADPLAN_SPLINE_HPP_
#define LOADPLAN_SPLINE_HPP_

#include <array>
#include <vector>

#include <Eigen/Core>

namespace loadplan {

/// B-spline basis of a given degree over a knot vector. derivatives(s, m)
/// returns an (m+1) x (number of control points) matrix whose row j holds
/// the j-th derivative of every basis function at s.
class BSplineBasis {
 public:
  BSplineBasis(int degree, std::vector<double> knots);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
  const std::vector<double>& knots() const { return knots_; }

  Eigen::MatrixXd derivatives(double s, int max_order) const;

 private:
  int find_span(double s) const;

  int degree_;
  std::vector<double> knots_;
};

/// Clamped cubic knot vector for six control points on s in [0, 1]:
/// {0,0,0,0,1/3,2/3,1,1,1,1}.
const BSplineBasis& cubic_six_point_basis();

/// One spline leg p0..p5.
struct SplineSegment {
  std::array<Eigen::Vector2d, 6> control;

  Eigen::Vector2d point(double s) const;
  /// order-th derivative with respect to s (order 0..3).
  Eigen::Vector2d derivative(double s, int order) const;
  /// Signed curvature at s.
  double curvature(double s) const;
};

/// Solves the 6x6 basis system with rows: position at s=0, first and second
/// derivative at s=0, second and first derivative at s=1, position at s=1.
/// The right-hand side is [q0, alpha*d0, 0, 0, beta*d1, q1] (second
/// derivatives vanish at both ends). Throws Error on a singular system.
SplineSegment solve_spline(const Eigen::Vector2d& q0, const Eigen::Vector2d& d0,
                           const Eigen::Vector2d& q1, const Eigen::Vector2d& d1,
                           double alpha, double beta);

/// Uniform-s samples of one leg with curvature, its arc-length derivative
/// and the chord length of each of the samples-1 segments.
struct LegSamples {
  std::vector<Eigen::Vector2d> positions;
  std::vector<double> curvature;
  std::vector<double> curvature_rate;  // d kappa / ds
  std::vector<double> segment_length;
  double length = 0.0;
};

/// Samples a leg at count uniform parameter values (count >= 3). Basis
/// tables are cached per count.
LegSamples sample_leg(const SplineSegment& leg, int count);

}  // namespace loadplan

#endif  // LOADPLAN_SPLINE_HPP_
