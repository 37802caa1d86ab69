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

#include "rtlsim/visibility.hpp"

#include "rtlsim/geometry.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numbers>

namespace rtlsim
{

bool within_fov_angle(const AgentState & observer, Vec2 target, double fov)
{
  if (fov >= kTwoPi) {
    return true;
  }
  const Vec2 rel = target - observer.position;
  if (rel == Vec2{}) {
    return true;
  }
  double bearing = std::atan2(rel.y, rel.x) - observer.heading;
  bearing = std::remainder(bearing, kTwoPi);  // (-pi, pi]
  return std::abs(bearing) <= 0.5 * fov;
}

namespace
{

// Cheap reject: the segment stays farther from the center than the major axis.
bool may_touch(Vec2 a, Vec2 b, const OccluderEllipse & e)
{
  return geometry::point_segment_distance(e.center, a, b) < std::max(e.semi_major, e.semi_minor);
}

bool blocked_by_vehicles(
  Vec2 a, Vec2 b, std::span<const AgentState> states, AgentIndex skip1, AgentIndex skip2)
{
  for (const auto & s : states) {
    if (s.agent == skip1 || s.agent == skip2 || !is_vehicle(s.agent_class)) {
      continue;
    }
    const OccluderEllipse e = occluder_of(s);
    if (may_touch(a, b, e) && segment_blocked_by_ellipse(a, b, e)) {
      return true;
    }
  }
  return false;
}

struct MapIndex
{
  std::span<const Polygon> polygons;
  std::vector<geometry::Box> boxes;

  explicit MapIndex(std::span<const Polygon> polys) : polygons(polys)
  {
    boxes.reserve(polys.size());
    for (const auto & p : polys) {
      boxes.push_back(geometry::bounds(p.vertices));
    }
  }

  bool blocks(Vec2 a, Vec2 b) const
  {
    const auto sb = geometry::segment_bounds(a, b);
    for (std::size_t i = 0; i < polygons.size(); ++i) {
      if (boxes[i].intersects(sb) && segment_blocked_by_polygon(a, b, polygons[i].vertices)) {
        return true;
      }
    }
    return false;
  }
};

}  // namespace

OccluderEllipse occluder_of(const AgentState & state)
{
  return {state.position, 0.5 * state.length, 0.5 * state.width, state.heading};
}

bool in_fov(const AgentState & observer, Vec2 target, double fov, double range)
{
  if (distance(observer.position, target) > range) {
    return false;
  }
  return within_fov_angle(observer, target, fov);
}

bool segment_blocked_by_ellipse(Vec2 a, Vec2 b, const OccluderEllipse & e)
{
  if (!(e.semi_major > 0.0) || !(e.semi_minor > 0.0)) {
    return false;
  }
  // Into the frame where the ellipse is the unit circle.
  const double c = std::cos(e.orientation);
  const double s = std::sin(e.orientation);
  auto to_unit = [&](Vec2 p) {
    const Vec2 r = p - e.center;
    return Vec2{(c * r.x + s * r.y) / e.semi_major, (-s * r.x + c * r.y) / e.semi_minor};
  };
  const Vec2 p0 = to_unit(a);
  const Vec2 dir = to_unit(b) - p0;

  const double qa = squared_norm(dir);
  const double qb = 2.0 * dot(p0, dir);
  const double qc = squared_norm(p0) - 1.0;
  if (qa == 0.0) {
    return qc < 0.0;
  }
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc <= 0.0) {
    return false;  // misses or grazes
  }
  const double root = std::sqrt(disc);
  const double t1 = (-qb - root) / (2.0 * qa);
  const double t2 = (-qb + root) / (2.0 * qa);
  return t1 < 1.0 && t2 > 0.0;
}

bool segment_blocked_by_polygon(Vec2 a, Vec2 b, std::span<const Vec2> ring)
{
  const std::size_t n = ring.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (geometry::segments_properly_intersect(a, b, ring[i], ring[(i + 1) % n])) {
      return true;
    }
  }
  // No transversal crossing: the segment is split only at vertex or collinear
  // contacts, so each piece between contacts lies wholly inside or outside.
  std::vector<double> cuts{0.0, 1.0};
  const Vec2 ab = b - a;
  const double len2 = squared_norm(ab);
  if (len2 == 0.0) {
    return geometry::point_strictly_inside(ring, a);
  }
  for (const auto & v : ring) {
    if (geometry::point_on_segment(v, a, b)) {
      cuts.push_back(dot(v - a, ab) / len2);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 c = ring[i];
    const Vec2 d = ring[(i + 1) % n];
    if (geometry::point_on_segment(a, c, d)) {
      cuts.push_back(0.0);
    }
    if (geometry::point_on_segment(b, c, d)) {
      cuts.push_back(1.0);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    if (cuts[k] > cuts[k - 1]) {
      const Vec2 mid = a + ab * (0.5 * (cuts[k] + cuts[k - 1]));
      if (geometry::point_strictly_inside(ring, mid)) {
        return true;
      }
    }
  }
  return false;
}

bool can_observe(
  AgentIndex observer, AgentIndex target, std::size_t frame_pos, const Scenario & scenario,
  double fov, const RiskConfig & config)
{
  const auto * o = scenario.find_state(frame_pos, observer);
  const auto * t = scenario.find_state(frame_pos, target);
  for (auto [ptr, idx] : {std::pair{o, observer}, std::pair{t, target}}) {
    if (ptr == nullptr) {
      throw InputError(fmt::format(
        "agent {} is absent at frame {}",
        idx < scenario.agent_count() ? scenario.agent(idx).id : std::to_string(idx),
        scenario.frames()[frame_pos]));
    }
  }
  if (observer == target) {
    return false;
  }
  if (!in_fov(*o, t->position, fov, config.perception_range)) {
    return false;
  }
  const Vec2 a = o->position;
  const Vec2 b = t->position;
  if (blocked_by_vehicles(a, b, scenario.states_at(frame_pos), observer, target)) {
    return false;
  }
  for (const auto & poly : scenario.map()) {
    if (segment_blocked_by_polygon(a, b, poly.vertices)) {
      return false;
    }
  }
  return true;
}

VisibilityRelation::VisibilityRelation(std::int64_t frame, std::vector<AgentIndex> present)
: frame_(frame), present_(std::move(present)), bits_(present_.size() * present_.size(), 0)
{
  if (!std::is_sorted(present_.begin(), present_.end()) ||
      std::adjacent_find(present_.begin(), present_.end()) != present_.end()) {
    throw InvariantError("visibility relation agents must be sorted and unique");
  }
}

std::optional<std::size_t> VisibilityRelation::local_index(AgentIndex agent) const
{
  auto it = std::lower_bound(present_.begin(), present_.end(), agent);
  if (it == present_.end() || *it != agent) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - present_.begin());
}

bool VisibilityRelation::sees(AgentIndex observer, AgentIndex target) const
{
  const auto o = local_index(observer);
  const auto t = local_index(target);
  return o && t && sees_local(*o, *t);
}

void VisibilityRelation::set(AgentIndex observer, AgentIndex target, bool value)
{
  const auto o = local_index(observer);
  const auto t = local_index(target);
  if (!o || !t) {
    throw InputError(fmt::format("agents {} -> {} not both present at frame {}", observer, target, frame_));
  }
  if (*o == *t) {
    throw InputError("an agent cannot observe itself");
  }
  set_local(*o, *t, value);
}

void VisibilityRelation::merge_row(std::size_t dst, std::span<const std::uint8_t> src)
{
  const std::size_t n = present_.size();
  std::uint8_t * out = bits_.data() + dst * n;
  for (std::size_t t = 0; t < n; ++t) {
    out[t] |= src[t];
  }
  out[dst] = 0;
}

std::vector<std::pair<AgentIndex, AgentIndex>> VisibilityRelation::pairs() const
{
  std::vector<std::pair<AgentIndex, AgentIndex>> out;
  const std::size_t n = present_.size();
  for (std::size_t o = 0; o < n; ++o) {
    for (std::size_t t = 0; t < n; ++t) {
      if (sees_local(o, t)) {
        out.emplace_back(present_[o], present_[t]);
      }
    }
  }
  return out;
}

std::size_t VisibilityRelation::pair_count() const
{
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool VisibilityRelation::is_subset_of(const VisibilityRelation & other) const
{
  const std::size_t n = present_.size();
  for (std::size_t o = 0; o < n; ++o) {
    for (std::size_t t = 0; t < n; ++t) {
      if (sees_local(o, t) && !other.sees(present_[o], present_[t])) {
        return false;
      }
    }
  }
  return true;
}

LineOfSight::LineOfSight(std::size_t frame_pos, const Scenario & scenario, const RiskConfig & config)
: frame_pos_(frame_pos), frame_(scenario.frames()[frame_pos]), states_(scenario.states_at(frame_pos))
{
  const std::size_t n = states_.size();
  bits_.assign(n * n, 0);
  const MapIndex map(scenario.map());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 a = states_[i].position;
      const Vec2 b = states_[j].position;
      if (distance(a, b) > config.perception_range) {
        continue;
      }
      if (blocked_by_vehicles(a, b, states_, states_[i].agent, states_[j].agent)) {
        continue;
      }
      if (map.blocks(a, b)) {
        continue;
      }
      bits_[i * n + j] = 1;
      bits_[j * n + i] = 1;
    }
  }
}

VisibilityRelation LineOfSight::with_fov(std::span<const double> fov_by_agent) const
{
  std::vector<AgentIndex> present;
  present.reserve(states_.size());
  for (const auto & s : states_) {
    present.push_back(s.agent);
  }
  VisibilityRelation rel(frame_, std::move(present));
  const std::size_t n = states_.size();
  for (std::size_t o = 0; o < n; ++o) {
    const double fov = fov_by_agent[states_[o].agent];
    for (std::size_t t = 0; t < n; ++t) {
      if (clear_local(o, t) && within_fov_angle(states_[o], states_[t].position, fov)) {
        rel.set_local(o, t, true);
      }
    }
  }
  return rel;
}

VisibilityRelation visibility_relation(
  std::size_t frame_pos, const Scenario & scenario, std::span<const double> fov_by_agent,
  const RiskConfig & config)
{
  if (fov_by_agent.size() < scenario.agent_count()) {
    throw InputError("field-of-view assignment does not cover every agent");
  }
  return LineOfSight(frame_pos, scenario, config).with_fov(fov_by_agent);
}

}  // namespace rtlsim
