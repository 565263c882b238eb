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
#include "loadplan/spline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/LU>

#include "loadplan/errors.hpp"

namespace loadplan {

BSplineBasis::BSplineBasis(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
  if (degree_ < 1 || static_cast<int>(knots_.size()) < 2 * (degree_ + 1)) {
    throw Error("B-spline basis needs at least 2*(degree+1) knots");
  }
  if (!std::is_sorted(knots_.begin(), knots_.end())) {
    throw Error("B-spline knots must be non-decreasing");
  }
}

int BSplineBasis::find_span(double s) const {
  const int n = size() - 1;
  if (s >= knots_[n + 1]) return n;
  if (s <= knots_[degree_]) return degree_;
  int low = degree_;
  int high = n + 1;
  int mid = (low + high) / 2;
  while (s < knots_[mid] || s >= knots_[mid + 1]) {
    if (s < knots_[mid]) {
      high = mid;
    } else {
      low = mid;
    }
    mid = (low + high) / 2;
  }
  return mid;
}

// Basis functions and derivatives (Piegl & Tiller, A2.3), scattered into
// the full control-point width.
Eigen::MatrixXd BSplineBasis::derivatives(double s, int max_order) const {
  const int p = degree_;
  const int span = find_span(s);
  const std::vector<double>& U = knots_;

  Eigen::MatrixXd ndu(p + 1, p + 1);
  std::vector<double> left(p + 1), right(p + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = s - U[span + 1 - j];
    right[j] = U[span + j] - s;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }

  const int n = std::min(max_order, p);
  Eigen::MatrixXd ders = Eigen::MatrixXd::Zero(max_order + 1, p + 1);
  for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);

  Eigen::MatrixXd a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0;
    int s2 = 1;
    a(0, 0) = 1.0;
    for (int k = 1; k <= n; ++k) {
      double d = 0.0;
      const int rk = r - k;
      const int pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      ders(k, r) = d;
      std::swap(s1, s2);
    }
  }
  int factor = p;
  for (int k = 1; k <= n; ++k) {
    for (int j = 0; j <= p; ++j) ders(k, j) *= factor;
    factor *= (p - k);
  }

  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(max_order + 1, size());
  for (int k = 0; k <= max_order; ++k) {
    for (int j = 0; j <= p; ++j) full(k, span - p + j) = ders(k, j);
  }
  return full;
}

const BSplineBasis& cubic_six_point_basis() {
  static const BSplineBasis basis(
      3, {0.0, 0.0, 0.0, 0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0, 1.0, 1.0, 1.0});
  return basis;
}

Eigen::Vector2d SplineSegment::derivative(double s, int order) const {
  const Eigen::MatrixXd d = cubic_six_point_basis().derivatives(s, order);
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int i = 0; i < 6; ++i) out += d(order, i) * control[i];
  return out;
}

Eigen::Vector2d SplineSegment::point(double s) const { return derivative(s, 0); }

double SplineSegment::curvature(double s) const {
  const Eigen::MatrixXd d = cubic_six_point_basis().derivatives(s, 2);
  Eigen::Vector2d d1 = Eigen::Vector2d::Zero();
  Eigen::Vector2d d2 = Eigen::Vector2d::Zero();
  for (int i = 0; i < 6; ++i) {
    d1 += d(1, i) * control[i];
    d2 += d(2, i) * control[i];
  }
  const double speed = d1.norm();
  if (speed <= 0.0) return 0.0;
  return (d1.x() * d2.y() - d1.y() * d2.x()) / (speed * speed * speed);
}

SplineSegment solve_spline(const Eigen::Vector2d& q0, const Eigen::Vector2d& d0,
                           const Eigen::Vector2d& q1, const Eigen::Vector2d& d1,
                           double alpha, double beta) {
  const BSplineBasis& basis = cubic_six_point_basis();
  const Eigen::MatrixXd at0 = basis.derivatives(0.0, 2);
  const Eigen::MatrixXd at1 = basis.derivatives(1.0, 2);

  Eigen::Matrix<double, 6, 6> A = Eigen::Matrix<double, 6, 6>::Zero();
  A.row(0) = at0.row(0);
  A.row(1) = at0.row(1);
  A.row(2) = at0.row(2);
  A.row(3) = at1.row(2);
  A.row(4) = at1.row(1);
  A.row(5) = at1.row(0);

  Eigen::Matrix<double, 6, 2> rhs = Eigen::Matrix<double, 6, 2>::Zero();
  rhs.row(0) = q0.transpose();
  rhs.row(1) = (alpha * d0).transpose();
  rhs.row(4) = (beta * d1).transpose();
  rhs.row(5) = q1.transpose();

  const Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(A);
  if (!lu.isInvertible()) throw Error("singular spline basis system");
  const Eigen::Matrix<double, 6, 2> p = lu.solve(rhs);

  SplineSegment seg;
  for (int i = 0; i < 6; ++i) seg.control[i] = p.row(i).transpose();
  return seg;
}

namespace {

// Basis values and first/second derivatives at count uniform s values.
struct SampleTable {
  int count = 0;
  std::vector<std::array<std::array<double, 6>, 3>> rows;
};

const SampleTable& sample_table(int count) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<SampleTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[count];
  if (!slot) {
    auto table = std::make_unique<SampleTable>();
    table->count = count;
    table->rows.resize(count);
    const BSplineBasis& basis = cubic_six_point_basis();
    for (int k = 0; k < count; ++k) {
      const double s = static_cast<double>(k) / (count - 1);
      const Eigen::MatrixXd d = basis.derivatives(s, 2);
      for (int o = 0; o < 3; ++o) {
        for (int i = 0; i < 6; ++i) table->rows[k][o][i] = d(o, i);
      }
    }
    slot = std::move(table);
  }
  return *slot;
}

}  // namespace

LegSamples sample_leg(const SplineSegment& leg, int count) {
  if (count < 3) throw Error("a leg needs at least 3 samples");
  const SampleTable& table = sample_table(count);
  LegSamples out;
  out.positions.resize(count);
  out.curvature.resize(count);
  out.curvature_rate.resize(count);
  out.segment_length.resize(count - 1);
  for (int k = 0; k < count; ++k) {
    Eigen::Vector2d p = Eigen::Vector2d::Zero();
    Eigen::Vector2d d1 = Eigen::Vector2d::Zero();
    Eigen::Vector2d d2 = Eigen::Vector2d::Zero();
    for (int i = 0; i < 6; ++i) {
      p += table.rows[k][0][i] * leg.control[i];
      d1 += table.rows[k][1][i] * leg.control[i];
      d2 += table.rows[k][2][i] * leg.control[i];
    }
    out.positions[k] = p;
    const double speed = d1.norm();
    out.curvature[k] = speed > 0.0 ? (d1.x() * d2.y() - d1.y() * d2.x()) /
                                         (speed * speed * speed)
                                   : 0.0;
  }
  std::vector<double> arc(count, 0.0);
  for (int k = 0; k + 1 < count; ++k) {
    out.segment_length[k] = (out.positions[k + 1] - out.positions[k]).norm();
    arc[k + 1] = arc[k] + out.segment_length[k];
  }
  out.length = arc.back();
  for (int k = 0; k < count; ++k) {
    const int lo = std::max(0, k - 1);
    const int hi = std::min(count - 1, k + 1);
    const double ds = arc[hi] - arc[lo];
    out.curvature_rate[k] =
        ds > 0.0 ? (out.curvature[hi] - out.curvature[lo]) / ds : 0.0;
  }
  return out;
}

}  // namespace loadplan
