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

#ifndef RTLSIM__RISK_HPP_
#define RTLSIM__RISK_HPP_

#include "rtlsim/core.hpp"
#include "rtlsim/visibility.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rtlsim
{

/// Relative motion of target i with respect to observer j at one frame.
struct PairKinematics
{
  double d = 0.0;        // |p_i - p_j|, meters
  double delta_v = 0.0;  // |v_i - v_j|, m/s
  double v_rel = 0.0;    // radial relative velocity, negative when approaching
  double theta = 0.0;    // angle between velocity vectors, [0, pi]
  bool i_side = false;
  bool i_over = false;
};

struct Disc
{
  Vec2 center;
  double radius = 0.0;
};

/// Convex polygon (counter-clockwise) for vehicles, disc for VRUs.
using ReachableRegion = std::variant<std::vector<Vec2>, Disc>;

/// Constant-acceleration displacement over the prediction horizon.
Vec2 predicted_displacement(const AgentState & state, Vec2 acceleration, const RiskConfig & config);

/// Vehicles: hull of the current and predicted footprints, grown laterally by
/// sway (coefficient x width) plus the safety margin and longitudinally by the
/// safety margin. VRUs: disc of radius |displacement| + safety margin.
ReachableRegion reachable_region(
  const AgentState & state, Vec2 acceleration, const RiskConfig & config);

/// Intersection test; boundary contact counts as overlap.
bool overlap_indicator(const ReachableRegion & a, const ReachableRegion & b);

PairKinematics pair_kinematics(
  const AgentState & i, const AgentState & j, const ReachableRegion & region_i,
  const ReachableRegion & region_j, const RiskConfig & config);

/// Static branch when either speed is at or below the motion threshold,
/// otherwise the overlap / approach / side-on decision tree.
double select_k(const PairKinematics & kin, double speed_i, double speed_j, const RiskConfig & config);

/// clamp(k * delta_v / max(d, min_distance_clamp)^2, 0, 1)
double instantaneous_weight(double k, double delta_v, double d, double min_distance_clamp);
double instantaneous_weight(const PairKinematics & kin, double k, const RiskConfig & config);

/// Per-frame velocity derivative for every state, aligned with Scenario::states_at.
/// Central difference between the agent's neighbouring appearances, one-sided
/// at track ends, zero for single-frame tracks.
class AccelerationTable
{
public:
  explicit AccelerationTable(const Scenario & scenario);
  Vec2 at(std::size_t frame_pos, std::size_t state_offset) const { return accel_[frame_pos][state_offset]; }
  Vec2 of(const Scenario & scenario, std::size_t frame_pos, AgentIndex agent) const;

private:
  std::vector<std::vector<Vec2>> accel_;
};

/// P for target i and observer j, ignoring visibility.
double pair_weight(
  const AgentState & i, Vec2 accel_i, const AgentState & j, Vec2 accel_j, const RiskConfig & config);

struct RiskSeries
{
  AgentIndex i = 0;  // at-risk target
  AgentIndex j = 0;  // observer
  std::vector<std::int64_t> frames;
  std::vector<double> values;
  double tick_seconds = 0.1;
};

/// f_{i,j} over every scenario frame: zero when j perceives i in `effective`
/// (one relation per scenario frame) or when either agent is absent.
RiskSeries risk_series(
  AgentIndex i, AgentIndex j, const Scenario & scenario,
  std::span<const VisibilityRelation> effective, const AccelerationTable & accel,
  const RiskConfig & config);

/// One maximal run of strictly positive risk.
struct EventIntegral
{
  std::size_t start = 0;  // positions into the series
  std::size_t end = 0;    // inclusive
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;
  double area_ms = 0.0;
  std::size_t peak = 0;  // position of the maximum value, first on ties
  double peak_value = 0.0;
  bool operator==(const EventIntegral &) const = default;
};

std::vector<EventIntegral> event_integrals(const RiskSeries & series);
double pair_F(std::span<const EventIntegral> events);
double agent_rtl(std::span<const double> pair_values);

enum class RiskLevel : std::uint8_t { Low, Medium, High };
/// Below medium threshold is low, above high threshold is high, both
/// boundaries fall into medium.
RiskLevel risk_level(double rtl_ms, const RiskConfig & config);
std::string_view to_string(RiskLevel level);

/// Outcome of one (i, j) pair over a run.
struct PairResult
{
  AgentIndex i = 0;
  AgentIndex j = 0;
  PairType type = PairType::VehVeh;
  double f_ms = 0.0;
  std::size_t event_count = 0;
  /// Worst event; peak position is meaningful only when event_count > 0.
  EventIntegral worst;
  std::vector<EventIntegral> events;  // filled only when requested
};

struct RunMetadata
{
  double penetration = 0.0;
  Paradigm paradigm = Paradigm::None;
  FovMode fov_mode = FovMode::All120;
  std::uint64_t seed = 0;
  std::string config_hash;
};

struct AgentRtl
{
  AgentIndex agent = 0;
  double rtl_ms = 0.0;
};

/// Pair-level results of one run; per-agent RTL is derived on demand.
struct RiskReport
{
  std::vector<PairResult> pairs;  // sorted by (i, j)
  RunMetadata meta;

  /// RTL of every agent that is the at-risk member of at least one evaluated
  /// pair (restricted to `group` when given), sorted by agent.
  std::vector<AgentRtl> agent_rtls(std::optional<PairType> group = std::nullopt) const;
};

}  // namespace rtlsim

#endif  // RTLSIM__RISK_HPP_
