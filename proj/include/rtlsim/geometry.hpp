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

#ifndef RTLSIM__GEOMETRY_HPP_
#define RTLSIM__GEOMETRY_HPP_

#include "rtlsim/core.hpp"

#include <span>
#include <vector>

/// \file
/// Planar primitives shared by the visibility and reachability code.

namespace rtlsim::geometry
{

/// Twice the signed area of triangle (a, b, c); positive when counter-clockwise.
inline double orientation(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

double signed_area(std::span<const Vec2> ring);
inline double area(std::span<const Vec2> ring) { return std::abs(signed_area(ring)); }

/// Axis-aligned bounds.
struct Box
{
  Vec2 lo;
  Vec2 hi;
  bool intersects(const Box & o) const
  {
    return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y;
  }
};
Box bounds(std::span<const Vec2> pts);
Box segment_bounds(Vec2 a, Vec2 b);

bool point_on_segment(Vec2 p, Vec2 a, Vec2 b);

/// Crossing-number test; points on the boundary are reported as not inside.
bool point_strictly_inside(std::span<const Vec2> ring, Vec2 p);

/// Segments intersect at a single point interior to both.
bool segments_properly_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// Closed segments share at least one point.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// At least three distinct vertices, non-zero area, no self-intersection.
bool is_simple(std::span<const Vec2> ring);

/// Counter-clockwise hull without collinear points (monotone chain).
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

/// Separating-axis test for two convex polygons. Touching counts as overlap.
bool convex_polygons_overlap(std::span<const Vec2> a, std::span<const Vec2> b);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// Distance from `p` to a convex polygon; zero when `p` is inside or on it.
double point_convex_distance(std::span<const Vec2> poly, Vec2 p);

}  // namespace rtlsim::geometry

#endif  // RTLSIM__GEOMETRY_HPP_
