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

#ifndef RTLSIM__VISIBILITY_HPP_
#define RTLSIM__VISIBILITY_HPP_

#include "rtlsim/core.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace rtlsim
{

/// Vehicle body used for line-of-sight blocking.
struct OccluderEllipse
{
  Vec2 center;
  double semi_major = 0.0;  // along orientation
  double semi_minor = 0.0;
  double orientation = 0.0;
};

/// Ellipse spanning the agent's footprint (length/2 along heading, width/2 across).
OccluderEllipse occluder_of(const AgentState & state);

/// Range and angular check. A target at the observer's own position is visible;
/// `fov` >= 2*pi disables the angular test.
bool in_fov(const AgentState & observer, Vec2 target, double fov, double range);

/// Angular part of in_fov only.
bool within_fov_angle(const AgentState & observer, Vec2 target, double fov);

/// True iff the open segment (a, b) passes through the strict interior of `e`.
/// A degenerate segment (a == b) tests whether `a` is strictly inside.
bool segment_blocked_by_ellipse(Vec2 a, Vec2 b, const OccluderEllipse & e);

/// True iff the open segment (a, b) passes through the strict interior of the
/// simple polygon. Grazing a vertex or running along an edge does not block.
bool segment_blocked_by_polygon(Vec2 a, Vec2 b, std::span<const Vec2> ring);

/// Direct single-pair check: FoV and range, vehicle ellipses other than the
/// observer's and target's own, and every map polygon. VRUs never occlude.
/// Throws InputError if either agent is absent at `frame_pos`.
bool can_observe(
  AgentIndex observer, AgentIndex target, std::size_t frame_pos, const Scenario & scenario,
  double fov, const RiskConfig & config);

/// Directed observer -> target perceivability over the agents present at one frame.
class VisibilityRelation
{
public:
  VisibilityRelation() = default;
  VisibilityRelation(std::int64_t frame, std::vector<AgentIndex> present);

  std::int64_t frame() const { return frame_; }
  std::span<const AgentIndex> present() const { return present_; }
  std::size_t size() const { return present_.size(); }
  std::optional<std::size_t> local_index(AgentIndex agent) const;

  bool sees(AgentIndex observer, AgentIndex target) const;
  /// Throws InputError when either agent is absent or observer == target.
  void set(AgentIndex observer, AgentIndex target, bool value = true);

  bool sees_local(std::size_t o, std::size_t t) const { return bits_[o * present_.size() + t] != 0; }
  void set_local(std::size_t o, std::size_t t, bool value)
  {
    if (o != t) {
      bits_[o * present_.size() + t] = value ? 1 : 0;
    }
  }
  std::span<const std::uint8_t> row(std::size_t o) const
  {
    return std::span<const std::uint8_t>(bits_).subspan(o * present_.size(), present_.size());
  }
  /// row(dst) |= src, never setting the diagonal.
  void merge_row(std::size_t dst, std::span<const std::uint8_t> src);

  std::vector<std::pair<AgentIndex, AgentIndex>> pairs() const;
  std::size_t pair_count() const;
  bool is_subset_of(const VisibilityRelation & other) const;

  bool operator==(const VisibilityRelation &) const = default;

private:
  std::int64_t frame_ = 0;
  std::vector<AgentIndex> present_;
  std::vector<std::uint8_t> bits_;
};

/// Symmetric range + line-of-sight relation at one frame, without the FoV test.
/// Computed once per frame and shared by every FoV assignment.
class LineOfSight
{
public:
  LineOfSight(std::size_t frame_pos, const Scenario & scenario, const RiskConfig & config);

  std::size_t frame_pos() const { return frame_pos_; }
  std::span<const AgentState> states() const { return states_; }
  bool clear_local(std::size_t a, std::size_t b) const { return bits_[a * states_.size() + b] != 0; }

  /// Applies per-agent FoV (indexed by AgentIndex) to produce a directed relation.
  VisibilityRelation with_fov(std::span<const double> fov_by_agent) const;

private:
  std::size_t frame_pos_ = 0;
  std::int64_t frame_ = 0;
  std::span<const AgentState> states_;
  std::vector<std::uint8_t> bits_;
};

/// All ordered pairs passing can_observe at one frame. `fov_by_agent` is indexed
/// by AgentIndex and must cover every agent of the scenario.
VisibilityRelation visibility_relation(
  std::size_t frame_pos, const Scenario & scenario, std::span<const double> fov_by_agent,
  const RiskConfig & config);

}  // namespace rtlsim

#endif  // RTLSIM__VISIBILITY_HPP_
