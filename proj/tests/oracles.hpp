// Copyright 2026 The rtlsim Authors
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

#ifndef RTLSIM__TESTS__ORACLES_HPP_
#define RTLSIM__TESTS__ORACLES_HPP_

// Brute-force references used by the unit tests and the acceptance binary.

#include "rtlsim/core.hpp"
#include "rtlsim/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace rtlsim::oracle
{

inline bool inside_ellipse(Vec2 p, const OccluderEllipse & e)
{
  const Vec2 r = p - e.center;
  const double ca = std::cos(-e.orientation);
  const double sa = std::sin(-e.orientation);
  const double u = (ca * r.x - sa * r.y) / e.semi_major;
  const double v = (sa * r.x + ca * r.y) / e.semi_minor;
  return u * u + v * v < 1.0;
}

inline bool ellipse_blocks_sampled(Vec2 a, Vec2 b, const OccluderEllipse & e, std::size_t samples)
{
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(samples);
    if (inside_ellipse(a + (b - a) * t, e)) {
      return true;
    }
  }
  return false;
}

/// 1,000 samples along the open segment; a disagreement with the analytic test
/// is re-sampled at 1,000,000 points before being counted.
inline bool ellipse_blocks(Vec2 a, Vec2 b, const OccluderEllipse & e, bool analytic)
{
  const bool coarse = ellipse_blocks_sampled(a, b, e, 1000);
  if (coarse == analytic) {
    return coarse;
  }
  return ellipse_blocks_sampled(a, b, e, 1000000);
}

/// Within 1e-9 m of an edge. Sample points are rounded, so exact tests would
/// misread a segment running along an edge.
inline bool on_boundary(Vec2 p, std::span<const Vec2> ring)
{
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec2 a = ring[i];
    const Vec2 b = ring[(i + 1) % ring.size()];
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    const Vec2 q = a + ab * t;
    if (std::hypot(p.x - q.x, p.y - q.y) <= 1e-9) {
      return true;
    }
  }
  return false;
}

/// Winding number; boundary points are outside.
inline bool inside_polygon(Vec2 p, std::span<const Vec2> ring)
{
  if (on_boundary(p, ring)) {
    return false;
  }
  int winding = 0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec2 a = ring[i];
    const Vec2 b = ring[(i + 1) % ring.size()];
    const double side = cross(b - a, p - a);
    if (a.y <= p.y) {
      if (b.y > p.y && side > 0.0) {
        ++winding;
      }
    } else if (b.y <= p.y && side < 0.0) {
      --winding;
    }
  }
  return winding != 0;
}

inline bool polygon_blocks_sampled(Vec2 a, Vec2 b, std::span<const Vec2> ring, std::size_t samples)
{
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(samples);
    if (inside_polygon(a + (b - a) * t, ring)) {
      return true;
    }
  }
  return false;
}

/// Same escalation rule as ellipse_blocks.
inline bool polygon_blocks(Vec2 a, Vec2 b, std::span<const Vec2> ring, bool analytic)
{
  const bool coarse = polygon_blocks_sampled(a, b, ring, 1000);
  if (coarse == analytic) {
    return coarse;
  }
  return polygon_blocks_sampled(a, b, ring, 1000000);
}

/// Star-shaped simple polygon around `c` with `n` vertices on an integer grid
/// (collinear and grazing configurations are common and exact).
inline std::vector<Vec2> random_star(std::mt19937_64 & rng, Vec2 c, int n, double r_min, double r_max)
{
  std::uniform_real_distribution<double> radius(r_min, r_max);
  std::vector<Vec2> ring;
  for (int k = 0; k < n; ++k) {
    const double ang = 2.0 * 3.141592653589793 * k / n;
    const double r = radius(rng);
    const Vec2 v{std::round(c.x + r * std::cos(ang)), std::round(c.y + r * std::sin(ang))};
    if (ring.empty() || !(ring.back() == v)) {
      ring.push_back(v);
    }
  }
  if (ring.size() > 1 && ring.front() == ring.back()) {
    ring.pop_back();
  }
  return ring;
}

}  // namespace rtlsim::oracle

#endif  // RTLSIM__TESTS__ORACLES_HPP_
