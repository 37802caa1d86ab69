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

#include "rtlsim/geometry.hpp"

#include <algorithm>
#include <limits>

namespace rtlsim::geometry
{

double signed_area(std::span<const Vec2> ring)
{
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(ring[i], ring[(i + 1) % n]);
  }
  return 0.5 * twice;
}

Box bounds(std::span<const Vec2> pts)
{
  constexpr double inf = std::numeric_limits<double>::infinity();
  Box b{{inf, inf}, {-inf, -inf}};
  for (const auto & p : pts) {
    b.lo.x = std::min(b.lo.x, p.x);
    b.lo.y = std::min(b.lo.y, p.y);
    b.hi.x = std::max(b.hi.x, p.x);
    b.hi.y = std::max(b.hi.y, p.y);
  }
  return b;
}

Box segment_bounds(Vec2 a, Vec2 b)
{
  return {{std::min(a.x, b.x), std::min(a.y, b.y)}, {std::max(a.x, b.x), std::max(a.y, b.y)}};
}

bool point_on_segment(Vec2 p, Vec2 a, Vec2 b)
{
  if (orientation(a, b, p) != 0.0) {
    return false;
  }
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool point_strictly_inside(std::span<const Vec2> ring, Vec2 p)
{
  const std::size_t n = ring.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = ring[j];
    const Vec2 b = ring[i];
    if (point_on_segment(p, a, b)) {
      return false;
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

bool segments_properly_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d)
{
  const double o1 = orientation(a, b, c);
  const double o2 = orientation(a, b, d);
  const double o3 = orientation(c, d, a);
  const double o4 = orientation(c, d, b);
  return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d)
{
  if (segments_properly_intersect(a, b, c, d)) {
    return true;
  }
  return point_on_segment(c, a, b) || point_on_segment(d, a, b) || point_on_segment(a, c, d) ||
         point_on_segment(b, c, d);
}

bool is_simple(std::span<const Vec2> ring)
{
  const std::size_t n = ring.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (ring[i] == ring[j]) {
        return false;
      }
    }
  }
  if (signed_area(ring) == 0.0) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = ring[i];
    const Vec2 b = ring[(i + 1) % n];
    // Adjacent edge must not fold back over this one.
    const Vec2 c = ring[(i + 2) % n];
    if (point_on_segment(c, a, b) || point_on_segment(a, b, c)) {
      return false;
    }
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) {
        continue;  // shares vertex 0
      }
      if (segments_intersect(a, b, ring[j], ring[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts)
{
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) {
    return pts;
  }
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto & p : pts) {
    while (k >= 2 && orientation(hull[k - 2], hull[k - 1], p) <= 0.0) {
      --k;
    }
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2 p = pts[i];
    while (k >= lower && orientation(hull[k - 2], hull[k - 1], p) <= 0.0) {
      --k;
    }
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

namespace
{

// True when some edge normal of `a` separates the two polygons with a strict gap.
bool has_separating_axis(std::span<const Vec2> a, std::span<const Vec2> b)
{
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 edge = a[(i + 1) % n] - a[i];
    const Vec2 axis{-edge.y, edge.x};
    if (axis == Vec2{}) {
      continue;
    }
    double a_min = std::numeric_limits<double>::infinity();
    double a_max = -a_min;
    for (const auto & p : a) {
      const double t = dot(p, axis);
      a_min = std::min(a_min, t);
      a_max = std::max(a_max, t);
    }
    double b_min = std::numeric_limits<double>::infinity();
    double b_max = -b_min;
    for (const auto & p : b) {
      const double t = dot(p, axis);
      b_min = std::min(b_min, t);
      b_max = std::max(b_max, t);
    }
    if (a_max < b_min || b_max < a_min) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool convex_polygons_overlap(std::span<const Vec2> a, std::span<const Vec2> b)
{
  if (a.empty() || b.empty()) {
    return false;
  }
  return !has_separating_axis(a, b) && !has_separating_axis(b, a);
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b)
{
  const Vec2 ab = b - a;
  const double len2 = squared_norm(ab);
  if (len2 == 0.0) {
    return distance(p, a);
  }
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

double point_convex_distance(std::span<const Vec2> poly, Vec2 p)
{
  const std::size_t n = poly.size();
  if (n == 0) {
    return std::numeric_limits<double>::infinity();
  }
  if (n >= 3) {
    // Counter-clockwise ring: inside when left of (or on) every edge.
    bool inside = true;
    for (std::size_t i = 0; i < n && inside; ++i) {
      inside = orientation(poly[i], poly[(i + 1) % n], p) >= 0.0;
    }
    if (inside) {
      return 0.0;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
  }
  return best;
}

}  // namespace rtlsim::geometry
