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
#ifndef LOADPLAN_SRC_GRADIENT_NOISE_HPP_
#define LOADPLAN_SRC_GRADIENT_NOISE_HPP_

#include <array>
#include <cstdint>

namespace loadplan::detail {

/// 2-D Perlin gradient noise with a seeded permutation table. Output is
/// roughly in [-1, 1]. The permutation is built with mt19937_64 and an
/// explicit Fisher-Yates draw so it is identical on every standard library.
class GradientNoise {
 public:
  explicit GradientNoise(std::uint64_t seed);

  double operator()(double x, double y) const;

  /// Sum of octaves, each doubling frequency and halving amplitude,
  /// normalized so the octave amplitudes sum to one.
  double fractal(double x, double y, int octaves) const;

 private:
  std::array<std::uint8_t, 512> perm_{};
};

}  // namespace loadplan::detail

#endif  // LOADPLAN_SRC_GRADIENT_NOISE_HPP_
