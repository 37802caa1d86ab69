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

#include "rtlsim/risk.hpp"

#include "rtlsim/geometry.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

namespace rtlsim
{

Vec2 predicted_displacement(const AgentState & state, Vec2 acceleration, const RiskConfig & config)
{
  const double t = config.prediction_horizon;
  return state.velocity * t + acceleration * (0.5 * t * t);
}

ReachableRegion reachable_region(
  const AgentState & state, Vec2 acceleration, const RiskConfig & config)
{
  const Vec2 shift = predicted_displacement(state, acceleration, config);
  const double margin = config.safety_margin();
  if (is_vru(state.agent_class)) {
    return Disc{state.position, norm(shift) + margin};
  }
  const Vec2 along = direction(state.heading);
  const Vec2 across{-along.y, along.x};
  const double half_len = 0.5 * state.length + margin;
  const double half_wid = 0.5 * state.width + config.lateral_sway_coeff * state.width + margin;

  std::vector<Vec2> corners;
  corners.reserve(8);
  for (const Vec2 c : {state.position, state.position + shift}) {
    for (const double sl : {-1.0, 1.0}) {
      for (const double sw : {-1.0, 1.0}) {
        corners.push_back(c + along * (sl * half_len) + across * (sw * half_wid));
      }
    }
  }
  return geometry::convex_hull(std::move(corners));
}

namespace
{

struct OverlapVisitor
{
  bool operator()(const std::vector<Vec2> & a, const std::vector<Vec2> & b) const
  {
    return geometry::bounds(a).intersects(geometry::bounds(b)) &&
           geometry::convex_polygons_overlap(a, b);
  }
  bool operator()(const std::vector<Vec2> & poly, const Disc & d) const
  {
    return geometry::point_convex_distance(poly, d.center) <= d.radius;
  }
  bool operator()(const Disc & d, const std::vector<Vec2> & poly) const { return (*this)(poly, d); }
  bool operator()(const Disc & a, const Disc & b) const
  {
    return distance(a.center, b.center) <= a.radius + b.radius;
  }
};

bool is_side_on(Vec2 vi, Vec2 vj)
{
  // theta in (45, 135) deg  <=>  cos^2(theta) < 1/2
  const double c = dot(vi, vj);
  const double mag = squared_norm(vi) * squared_norm(vj);
  return mag > 0.0 && 2.0 * c * c < mag;
}

}  // namespace

bool overlap_indicator(const ReachableRegion & a, const ReachableRegion & b)
{
  return std::visit(OverlapVisitor{}, a, b);
}

PairKinematics pair_kinematics(
  const AgentState & i, const AgentState & j, const ReachableRegion & region_i,
  const ReachableRegion & region_j, const RiskConfig & config)
{
  PairKinematics k;
  const Vec2 dp = i.position - j.position;
  const Vec2 dv = i.velocity - j.velocity;
  k.d = norm(dp);
  k.delta_v = norm(dv);
  k.v_rel = k.d > 0.0 ? dot(dp, dv) / std::max(k.d, config.min_distance_clamp) : 0.0;
  const double si = i.speed();
  const double sj = j.speed();
  if (si > 0.0 && sj > 0.0) {
    k.theta = std::acos(std::clamp(dot(i.velocity, j.velocity) / (si * sj), -1.0, 1.0));
  }
  k.i_side = is_side_on(i.velocity, j.velocity);
  k.i_over = overlap_indicator(region_i, region_j);
  return k;
}

double select_k(const PairKinematics & kin, double speed_i, double speed_j, const RiskConfig & config)
{
  const bool approaching = kin.v_rel < 0.0;
  if (speed_i <= config.motion_threshold || speed_j <= config.motion_threshold) {
    return approaching ? config.k_static_approach : config.k_static_separate;
  }
  if (kin.i_over) {
    return kin.i_side ? config.k_overlap_side : config.k_overlap_noside;
  }
  if (approaching) {
    return kin.i_side ? config.k_approach_side : config.k_approach_noside;
  }
  return config.k_separate;
}

double instantaneous_weight(double k, double delta_v, double d, double min_distance_clamp)
{
  const double dd = std::max(d, min_distance_clamp);
  return std::clamp(k * delta_v / (dd * dd), 0.0, 1.0);
}

double instantaneous_weight(const PairKinematics & kin, double k, const RiskConfig & config)
{
  return instantaneous_weight(k, kin.delta_v, kin.d, config.min_distance_clamp);
}

AccelerationTable::AccelerationTable(const Scenario & scenario)
{
  const std::size_t nf = scenario.frame_count();
  accel_.resize(nf);
  // (frame_pos, offset) of every appearance, per agent, in frame order.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> tracks(scenario.agent_count());
  for (std::size_t f = 0; f < nf; ++f) {
    const auto states = scenario.states_at(f);
    accel_[f].assign(states.size(), Vec2{});
    for (std::size_t k = 0; k < states.size(); ++k) {
      tracks[states[k].agent].emplace_back(f, k);
    }
  }
  const auto frames = scenario.frames();
  const double tick = scenario.tick_seconds();
  auto state_at = [&](const std::pair<std::size_t, std::size_t> & a) -> const AgentState & {
    return scenario.states_at(a.first)[a.second];
  };
  for (const auto & track : tracks) {
    if (track.size() < 2) {
      continue;
    }
    for (std::size_t n = 0; n < track.size(); ++n) {
      const auto & lo = track[n == 0 ? 0 : n - 1];
      const auto & hi = track[n + 1 == track.size() ? n : n + 1];
      const double dt = static_cast<double>(frames[hi.first] - frames[lo.first]) * tick;
      accel_[track[n].first][track[n].second] = (state_at(hi).velocity - state_at(lo).velocity) * (1.0 / dt);
    }
  }
}

Vec2 AccelerationTable::of(const Scenario & scenario, std::size_t frame_pos, AgentIndex agent) const
{
  const auto states = scenario.states_at(frame_pos);
  const auto * st = scenario.find_state(frame_pos, agent);
  if (st == nullptr) {
    throw InputError(fmt::format("agent {} absent at frame position {}", agent, frame_pos));
  }
  return at(frame_pos, static_cast<std::size_t>(st - states.data()));
}

double pair_weight(
  const AgentState & i, Vec2 accel_i, const AgentState & j, Vec2 accel_j, const RiskConfig & config)
{
  const double si = i.speed();
  const double sj = j.speed();
  PairKinematics kin;
  if (si <= config.motion_threshold || sj <= config.motion_threshold) {
    // Static branch never consults the overlap flag.
    const Vec2 dp = i.position - j.position;
    const Vec2 dv = i.velocity - j.velocity;
    kin.d = norm(dp);
    kin.delta_v = norm(dv);
    kin.v_rel = kin.d > 0.0 ? dot(dp, dv) / std::max(kin.d, config.min_distance_clamp) : 0.0;
  } else {
    kin = pair_kinematics(
      i, j, reachable_region(i, accel_i, config), reachable_region(j, accel_j, config), config);
  }
  return instantaneous_weight(kin, select_k(kin, si, sj, config), config);
}

RiskSeries risk_series(
  AgentIndex i, AgentIndex j, const Scenario & scenario,
  std::span<const VisibilityRelation> effective, const AccelerationTable & accel,
  const RiskConfig & config)
{
  if (effective.size() != scenario.frame_count()) {
    throw InputError("risk_series needs one visibility relation per frame");
  }
  RiskSeries s;
  s.i = i;
  s.j = j;
  s.tick_seconds = scenario.tick_seconds();
  s.frames.assign(scenario.frames().begin(), scenario.frames().end());
  s.values.assign(scenario.frame_count(), 0.0);
  for (std::size_t f = 0; f < scenario.frame_count(); ++f) {
    const auto * si = scenario.find_state(f, i);
    const auto * sj = scenario.find_state(f, j);
    if (si == nullptr || sj == nullptr || i == j) {
      continue;
    }
    if (effective[f].sees(j, i)) {
      continue;
    }
    s.values[f] = pair_weight(*si, accel.of(scenario, f, i), *sj, accel.of(scenario, f, j), config);
  }
  return s;
}

std::vector<EventIntegral> event_integrals(const RiskSeries & series)
{
  std::vector<EventIntegral> out;
  const auto & v = series.values;
  const double scale = series.tick_seconds * 1000.0;
  auto frame_of = [&](std::size_t p) {
    return p < series.frames.size() ? series.frames[p] : static_cast<std::int64_t>(p);
  };
  std::size_t p = 0;
  while (p < v.size()) {
    if (!(v[p] > 0.0)) {
      ++p;
      continue;
    }
    EventIntegral e;
    e.start = p;
    double sum = 0.0;
    e.peak = p;
    e.peak_value = v[p];
    while (p < v.size() && v[p] > 0.0) {
      sum += v[p];
      if (v[p] > e.peak_value) {
        e.peak_value = v[p];
        e.peak = p;
      }
      ++p;
    }
    e.end = p - 1;
    e.start_frame = frame_of(e.start);
    e.end_frame = frame_of(e.end);
    e.area_ms = sum * scale;
    out.push_back(e);
  }
  return out;
}

double pair_F(std::span<const EventIntegral> events)
{
  double best = 0.0;
  for (const auto & e : events) {
    best = std::max(best, e.area_ms);
  }
  return best;
}

double agent_rtl(std::span<const double> pair_values)
{
  double best = 0.0;
  for (double v : pair_values) {
    best = std::max(best, v);
  }
  return best;
}

RiskLevel risk_level(double rtl_ms, const RiskConfig & config)
{
  if (rtl_ms < config.medium_risk_threshold) {
    return RiskLevel::Low;
  }
  if (rtl_ms > config.high_risk_threshold) {
    return RiskLevel::High;
  }
  return RiskLevel::Medium;
}

std::string_view to_string(RiskLevel level)
{
  switch (level) {
    case RiskLevel::Low:
      return "low";
    case RiskLevel::Medium:
      return "medium";
    case RiskLevel::High:
      return "high";
  }
  return "low";
}

std::vector<AgentRtl> RiskReport::agent_rtls(std::optional<PairType> group) const
{
  std::map<AgentIndex, double> best;
  for (const auto & p : pairs) {
    if (group && p.type != *group) {
      continue;
    }
    auto [it, inserted] = best.emplace(p.i, p.f_ms);
    if (!inserted) {
      it->second = std::max(it->second, p.f_ms);
    }
  }
  std::vector<AgentRtl> out;
  out.reserve(best.size());
  for (const auto & [agent, rtl] : best) {
    out.push_back({agent, rtl});
  }
  return out;
}

}  // namespace rtlsim
