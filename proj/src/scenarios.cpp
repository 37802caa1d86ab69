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

#include "rtlsim/scenarios.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <optional>
#include <random>

namespace rtlsim
{

namespace
{

constexpr double kTick = 0.1;
constexpr double kHalfBox = 65.0;
constexpr double kPi = std::numbers::pi;
constexpr double kNever = 1e9;

constexpr std::array<std::string_view, 6> kTemplates{
  "crossing", "merging", "car_following", "occluding_truck", "dense_intersection", "unobserved_agent"};

class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi)
  {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }

private:
  std::mt19937_64 engine_;
};

struct Body
{
  AgentClass cls = AgentClass::Car;
  double length = 4.5;
  double width = 1.8;
};

Body random_vehicle(Rng & rng, double heavy_share)
{
  if (rng.chance(heavy_share)) {
    return rng.chance(0.5) ? Body{AgentClass::Truck, rng.uniform(9.0, 12.0), 2.5}
                           : Body{AgentClass::Bus, 12.0, 2.55};
  }
  return {AgentClass::Car, rng.uniform(4.2, 4.9), rng.uniform(1.75, 1.9)};
}

/// Longitudinal cruise / brake / wait / accelerate profile along a lane.
struct Motion
{
  double s0 = 0.0;
  double cruise = 0.0;
  std::optional<double> stop_at;
  double go_time = 0.0;
  double accel = 2.5;

  // (arc position, speed) at time t.
  std::pair<double, double> at(double t) const
  {
    if (!stop_at) {
      return {s0 + cruise * t, cruise};
    }
    const double a = accel;
    double b = a;
    double brake_len = cruise * cruise / (2.0 * b);
    double t1 = (*stop_at - brake_len - s0) / cruise;
    if (s0 >= *stop_at) {
      brake_len = 0.0;
      t1 = 0.0;
    } else if (t1 < 0.0) {
      brake_len = *stop_at - s0;
      b = cruise * cruise / (2.0 * brake_len);
      t1 = 0.0;
    }
    const double t2 = s0 >= *stop_at ? 0.0 : t1 + cruise / b;
    const double go = std::max(go_time, t2);
    if (t < t1) {
      return {s0 + cruise * t, cruise};
    }
    if (t < t2) {
      const double tau = t - t1;
      return {*stop_at - brake_len + cruise * tau - 0.5 * b * tau * tau, cruise - b * tau};
    }
    if (t < go) {
      return {*stop_at, 0.0};
    }
    const double tau = t - go;
    const double ramp = cruise / a;
    if (tau < ramp) {
      return {*stop_at + 0.5 * a * tau * tau, a * tau};
    }
    return {*stop_at + 0.5 * a * ramp * ramp + cruise * (tau - ramp), cruise};
  }
};

/// Straight or bent path; arc position maps to a point and a heading.
struct Path
{
  std::vector<Vec2> points;

  std::pair<Vec2, double> at(double s) const
  {
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
      const Vec2 d = points[k + 1] - points[k];
      const double len = norm(d);
      if (s <= len || k + 2 == points.size()) {
        return {points[k] + d * (s / len), std::atan2(d.y, d.x)};
      }
      s -= len;
    }
    return {points.front(), 0.0};
  }
};

struct Clip
{
  double half = kHalfBox;
  bool contains(Vec2 p) const { return std::abs(p.x) <= half && std::abs(p.y) <= half; }
};

class Builder
{
public:
  explicit Builder(std::size_t frames) : frames_(frames) {}

  void add(const std::string & id, const Body & body, const Path & path, const Motion & motion)
  {
    for (std::size_t f = 0; f < frames_; ++f) {
      const double t = static_cast<double>(f) * kTick;
      const auto [s, speed] = motion.at(t);
      const auto [p, heading] = path.at(s);
      if (s < 0.0 || !clip_.contains(p)) {
        continue;
      }
      TrajectoryRecord r;
      r.frame = static_cast<std::int64_t>(f);
      r.agent_id = id;
      r.agent_class = body.cls;
      r.position = p;
      r.velocity = direction(heading) * speed;
      r.heading = heading;
      r.length = body.length;
      r.width = body.width;
      records_.push_back(std::move(r));
    }
  }

  void wall(const std::string & name, std::vector<Vec2> ring) { map_.push_back({name, std::move(ring)}); }

  std::string next_vehicle_id() { return fmt::format("v{}", ++vehicles_); }
  std::string next_vru_id() { return fmt::format("p{}", ++vrus_); }

  Scenario build() { return Scenario::from_records(std::move(records_), std::move(map_), kTick); }

private:
  std::size_t frames_;
  Clip clip_;
  std::vector<TrajectoryRecord> records_;
  std::vector<Polygon> map_;
  std::size_t vehicles_ = 0;
  std::size_t vrus_ = 0;
};

std::vector<Vec2> rect(double x0, double y0, double x1, double y1)
{
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

/// Lane through the origin; arc position 0 sits `offset` meters before the box edge.
Path lane_path(double heading, double lateral, double offset = 0.0)
{
  const Vec2 dir = direction(heading);
  const Vec2 left{-dir.y, dir.x};
  const Vec2 start = dir * -(kHalfBox + offset) + left * lateral;
  return {{start, start + dir * (2.0 * kHalfBox + offset + 200.0)}};
}

struct LaneSpec
{
  double heading = 0.0;
  double lateral = 0.0;  // signed offset to the left of travel direction
  double red_start = kNever;
  double red_end = kNever;
  std::size_t initial_queue = 0;
  double cruise = 9.0;
  double gap_lo = 8.0;
  double gap_hi = 20.0;
  double heavy_share = 0.1;
};

/// Fills one signalized lane. The stop line sits `stop_line` meters before
/// the intersection center.
void fill_lane(Builder & b, Rng & rng, const LaneSpec & lane, double stop_line, double duration)
{
  constexpr double kUpstream = 200.0;  // arc length before the box available for spawning
  constexpr double kQueueGap = 2.5;
  constexpr double kDischarge = 1.2;
  const Path path = lane_path(lane.heading, lane.lateral, kUpstream);
  const double line = kUpstream + kHalfBox - stop_line;

  double spot = line;  // front-of-queue position for the next queued vehicle
  std::size_t rank = 0;
  double cursor = line;  // rear bumper of the previously placed vehicle

  for (std::size_t q = 0; q < lane.initial_queue; ++q) {
    const Body body = random_vehicle(rng, lane.heavy_share);
    const double centre = spot - body.length / 2.0;
    Motion m;
    m.s0 = centre;
    m.cruise = lane.cruise;
    m.stop_at = centre;
    m.go_time = lane.red_end + static_cast<double>(rank) * kDischarge;
    b.add(b.next_vehicle_id(), body, path, m);
    spot = centre - body.length / 2.0 - kQueueGap;
    cursor = spot;
    ++rank;
  }

  if (lane.initial_queue == 0) {
    cursor = kUpstream + kHalfBox + rng.uniform(-50.0, 60.0);
  }
  const double last_entry = kUpstream - lane.cruise * duration;
  while (cursor > last_entry) {
    const Body body = random_vehicle(rng, lane.heavy_share);
    const double centre = cursor - rng.uniform(lane.gap_lo, lane.gap_hi) - body.length / 2.0;
    cursor = centre - body.length / 2.0;
    Motion m;
    m.s0 = centre;
    m.cruise = lane.cruise;
    const double target = spot - body.length / 2.0;
    const double brake_len = lane.cruise * lane.cruise / (2.0 * m.accel);
    const double reach = (target - brake_len - centre) / lane.cruise;
    const double go = lane.red_end + static_cast<double>(rank) * kDischarge;
    if (centre < target && reach >= lane.red_start && reach < go + kDischarge) {
      m.stop_at = target;
      m.go_time = go;
      spot = target - body.length / 2.0 - kQueueGap;
      ++rank;
    }
    b.add(b.next_vehicle_id(), body, path, m);
  }
}

void add_pedestrian(Builder & b, Rng & rng, Vec2 from, Vec2 to, double start_time)
{
  const double speed = rng.uniform(1.1, 1.5);
  Motion m;
  m.cruise = speed;
  m.s0 = -speed * start_time;
  const Vec2 d = to - from;
  b.add(b.next_vru_id(), {AgentClass::Pedestrian, 0.5, 0.5}, Path{{from, to, to + d * 10.0}}, m);
}

Scenario intersection(std::uint64_t seed, bool dense)
{
  Rng rng(seed);
  const double duration = 20.0;
  Builder b(static_cast<std::size_t>(duration / kTick));
  const double road = dense ? 7.0 : 3.5;
  const double block = road + 3.0;
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      const double x0 = sx * block;
      const double x1 = sx * (kHalfBox - 3.0);
      const double y0 = sy * block;
      const double y1 = sy * (kHalfBox - 3.0);
      b.wall(
        fmt::format("block_{}{}", sx > 0 ? 'e' : 'w', sy > 0 ? 'n' : 's'),
        rect(std::min(x0, x1), std::min(y0, y1), std::max(x0, x1), std::max(y0, y1)));
    }
  }
  const std::vector<double> laterals = dense ? std::vector<double>{-1.75, -5.25} : std::vector<double>{-1.75};
  const double stop_line = road + 2.0;
  for (double heading : {0.0, kPi / 2.0, kPi, -kPi / 2.0}) {
    const bool east_west = std::abs(std::sin(heading)) < 0.5;
    for (double lateral : laterals) {
      LaneSpec lane;
      lane.heading = heading;
      lane.lateral = lateral;
      lane.cruise = rng.uniform(8.0, 10.0);
      lane.heavy_share = dense ? 0.15 : 0.05;
      lane.gap_lo = dense ? 6.0 : 15.0;
      lane.gap_hi = dense ? 16.0 : 35.0;
      if (east_west) {
        lane.red_start = duration / 2.0;
      } else {
        lane.red_start = -1.0;
        lane.red_end = duration / 2.0;
        lane.initial_queue = dense ? 3 : 1;
      }
      fill_lane(b, rng, lane, stop_line, duration);
    }
  }
  const double walk = road + 1.5;
  const std::size_t peds = dense ? 6 : 4;
  for (std::size_t k = 0; k < peds; ++k) {
    const double side = (k % 2 == 0) ? 1.0 : -1.0;
    const double start = rng.uniform(0.0, 8.0);
    const double from = rng.uniform(-40.0, -15.0);
    if (k % 4 < 2) {
      add_pedestrian(b, rng, {from, side * walk}, {-from, side * walk}, start);
    } else {
      add_pedestrian(b, rng, {side * walk, from}, {side * walk, -from}, start);
    }
  }
  return b.build();
}

Scenario merging(std::uint64_t seed)
{
  Rng rng(seed);
  const double duration = 15.0;
  Builder b(static_cast<std::size_t>(duration / kTick));
  b.wall("barrier", {{-60.0, -6.0}, {-15.0, -4.5}, {-15.0, -4.0}, {-60.0, -5.5}});
  for (double lateral : {1.75, -1.75}) {
    LaneSpec lane;
    lane.lateral = lateral;
    lane.cruise = rng.uniform(11.0, 14.0);
    lane.gap_lo = 12.0;
    lane.gap_hi = 30.0;
    fill_lane(b, rng, lane, 0.0, duration);
  }
  const Path ramp{{{-kHalfBox, -20.0}, {0.0, -1.75}, {400.0, -1.75}}};
  double s = rng.uniform(5.0, 20.0);
  for (int k = 0; k < 5; ++k) {
    Motion m;
    m.cruise = rng.uniform(9.0, 11.0);
    m.s0 = s;
    b.add(b.next_vehicle_id(), random_vehicle(rng, 0.1), ramp, m);
    s -= rng.uniform(25.0, 45.0);
  }
  add_pedestrian(b, rng, {-50.0, 9.0}, {50.0, 9.0}, 0.0);
  return b.build();
}

Scenario car_following(std::uint64_t seed)
{
  Rng rng(seed);
  const double duration = 20.0;
  Builder b(static_cast<std::size_t>(duration / kTick));
  LaneSpec platoon;
  platoon.lateral = -1.75;
  platoon.cruise = rng.uniform(9.0, 11.0);
  platoon.red_start = 3.0;
  platoon.red_end = 9.0;
  platoon.gap_lo = 6.0;
  platoon.gap_hi = 14.0;
  platoon.heavy_share = 0.0;
  fill_lane(b, rng, platoon, -30.0, duration);

  Motion slow;
  slow.cruise = 5.0;
  slow.s0 = rng.uniform(10.0, 30.0);
  b.add(b.next_vehicle_id(), {AgentClass::Truck, 11.0, 2.5}, lane_path(0.0, 1.75), slow);

  Motion parked;
  parked.s0 = kHalfBox + rng.uniform(-10.0, 10.0);
  b.add(b.next_vehicle_id(), {AgentClass::Bus, 12.0, 2.55}, lane_path(0.0, 5.0), parked);

  add_pedestrian(b, rng, {40.0, 7.5}, {-40.0, 7.5}, 0.0);
  add_pedestrian(b, rng, {rng.uniform(0.0, 20.0), 7.5}, {rng.uniform(0.0, 20.0), -8.0}, 6.0);
  return b.build();
}

Scenario occluding_truck(std::uint64_t seed)
{
  Rng rng(seed);
  const double duration = 10.0;
  Builder b(static_cast<std::size_t>(duration / kTick));
  Motion parked;
  parked.s0 = kHalfBox;
  b.add(b.next_vehicle_id(), {AgentClass::Truck, 12.0, 2.5}, lane_path(0.0, 2.0), parked);

  double s = rng.uniform(0.0, 10.0);
  for (int k = 0; k < 3; ++k) {
    Motion m;
    m.cruise = rng.uniform(9.0, 12.0);
    m.s0 = s;
    b.add(b.next_vehicle_id(), random_vehicle(rng, 0.0), lane_path(0.0, -1.75), m);
    s -= rng.uniform(20.0, 30.0);
  }
  Motion oncoming;
  oncoming.cruise = rng.uniform(8.0, 10.0);
  oncoming.s0 = rng.uniform(0.0, 20.0);
  b.add(b.next_vehicle_id(), random_vehicle(rng, 0.0), lane_path(kPi, -5.25), oncoming);

  const double x = rng.uniform(6.5, 7.5);
  add_pedestrian(b, rng, {x, 3.8}, {x, -8.0}, rng.uniform(2.0, 3.0));
  return b.build();
}

Scenario unobserved_agent(std::uint64_t seed)
{
  Rng rng(seed);
  const double duration = 10.0;
  Builder b(static_cast<std::size_t>(duration / kTick));
  b.wall("wall", rect(-kHalfBox - 5.0, 5.0, kHalfBox + 5.0, 6.0));
  for (double heading : {0.0, kPi}) {
    LaneSpec lane;
    lane.heading = heading;
    lane.lateral = -1.75;
    lane.cruise = rng.uniform(8.0, 12.0);
    lane.gap_lo = 15.0;
    lane.gap_hi = 30.0;
    fill_lane(b, rng, lane, 0.0, duration);
  }
  add_pedestrian(b, rng, {-30.0, 8.0}, {30.0, 8.0}, 0.0);
  return b.build();
}

}  // namespace

std::span<const std::string_view> scenario_templates() { return kTemplates; }

Scenario generate_scenario(std::string_view name, std::uint64_t seed)
{
  if (name == "crossing") {
    return intersection(seed, false);
  }
  if (name == "dense_intersection") {
    return intersection(seed, true);
  }
  if (name == "merging") {
    return merging(seed);
  }
  if (name == "car_following") {
    return car_following(seed);
  }
  if (name == "occluding_truck") {
    return occluding_truck(seed);
  }
  if (name == "unobserved_agent") {
    return unobserved_agent(seed);
  }
  throw InputError(fmt::format("unknown scenario template '{}'", name));
}

}  // namespace rtlsim
