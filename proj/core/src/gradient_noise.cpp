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
#include "gradient_noise.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace loadplan::detail {
namespace {

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double lerp(double a, double b, double t) { return a + t * (b - a); }

// Eight unit-ish gradient directions.
double grad(std::uint8_t hash, double x, double y) {
  switch (hash & 7u) {
    case 0: return x + y;
    case 1: return -x + y;
    case 2: return x - y;
    case 3: return -x - y;
    case 4: return x;
    case 5: return -x;
    case 6: return y;
    default: return -y;
  }
}

}  // namespace

GradientNoise::GradientNoise(std::uint64_t seed) {
  std::array<std::uint8_t, 256> p{};
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  std::mt19937_64 rng(seed);
  for (int i = 255; i > 0; --i) {
    // Unbiased draw in [0, i] by rejection; avoids the implementation-defined
    // std::uniform_int_distribution.
    const std::uint64_t bound = static_cast<std::uint64_t>(i) + 1;
    const std::uint64_t limit = std::mt19937_64::max() -
                                (std::mt19937_64::max() % bound) - 1;
    std::uint64_t r = rng();
    while (r > limit) r = rng();
    std::swap(p[i], p[r % bound]);
  }
  for (int i = 0; i < 512; ++i) perm_[i] = p[i & 255];
}

double GradientNoise::operator()(double x, double y) const {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int xi = static_cast<int>(static_cast<long long>(fx) & 255);
  const int yi = static_cast<int>(static_cast<long long>(fy) & 255);
  const double dx = x - fx;
  const double dy = y - fy;
  const double u = fade(dx);
  const double v = fade(dy);

  const std::uint8_t aa = perm_[perm_[xi] + yi];
  const std::uint8_t ab = perm_[perm_[xi] + yi + 1];
  const std::uint8_t ba = perm_[perm_[xi + 1] + yi];
  const std::uint8_t bb = perm_[perm_[xi + 1] + yi + 1];

  const double x1 = lerp(grad(aa, dx, dy), grad(ba, dx - 1.0, dy), u);
  const double x2 = lerp(grad(ab, dx, dy - 1.0), grad(bb, dx - 1.0, dy - 1.0), u);
  return lerp(x1, x2, v);
}

double GradientNoise::fractal(double x, double y, int octaves) const {
  double sum = 0.0;
  double norm = 0.0;
  double amp = 1.0;
  double freq = 1.0;
  for (int o = 0; o < octaves; ++o) {
    sum += amp * (*this)(x * freq, y * freq);
    norm += amp;
    amp *= 0.5;
    freq *= 2.0;
  }
  return norm > 0.0 ? sum / norm : 0.0;
}

}  // namespace loadplan::detail
