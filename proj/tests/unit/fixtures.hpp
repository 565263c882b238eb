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

#ifndef LOADPLAN_TESTS_FIXTURES_HPP_
#define LOADPLAN_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>

#include "loadplan/heightfield.hpp"

namespace loadplan::testing {

template <typename Fn>
HeightField make_field(int nx, int ny, double cell, double ox, double oy, Fn fn) {
  HeightField f(nx, ny, cell, ox, oy);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) f(i, j) = fn(f.cell_x(i), f.cell_y(j));
  }
  return f;
}

/// Noise-free straight-front pile: zero below y = toe, rising at the given
/// slope towards +y and capped at crest.
inline HeightField straight_prism(double toe = 1.0, double crest = 1.8,
                                  double slope_deg = 30.0) {
  const double t = std::tan(slope_deg * std::numbers::pi / 180.0);
  return make_field(330, 200, 0.1, -14.0, -5.0, [&](double, double y) {
    return std::clamp((y - toe) * t, 0.0, crest);
  });
}

}  // namespace loadplan::testing

#endif  // LOADPLAN_TESTS_FIXTURES_HPP_
