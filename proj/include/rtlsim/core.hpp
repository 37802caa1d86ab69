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

#ifndef RTLSIM__CORE_HPP_
#define RTLSIM__CORE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rtlsim
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid input (files, configuration, arguments).
class InputError : public Error
{
public:
  using Error::Error;
};

/// A result violated an internal invariant; indicates a bug, not bad input.
class InvariantError : public Error
{
public:
  using Error::Error;
};

struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 & operator+=(Vec2 o)
  {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2 &) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
constexpr double squared_norm(Vec2 v) { return dot(v, v); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Unit vector at angle `theta` (radians, counter-clockwise from +x).
inline Vec2 direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

enum class AgentClass : std::uint8_t {
  Car,
  Truck,
  Bus,
  Pedestrian,
  Bicycle,
  Motorcycle,
  Tricycle,
};

constexpr bool is_vehicle(AgentClass c)
{
  return c == AgentClass::Car || c == AgentClass::Truck || c == AgentClass::Bus;
}
constexpr bool is_vru(AgentClass c) { return !is_vehicle(c); }

std::string_view class_label(AgentClass c);
std::optional<AgentClass> parse_class_label(std::string_view label);

/// Interaction pair classes. VRU-VRU pairs are never evaluated.
enum class PairType : std::uint8_t { VehVeh, VehVru };
enum class PairFilter : std::uint8_t { VehVeh, VehVru, Both };

std::optional<PairType> classify_pair(AgentClass a, AgentClass b);
bool pair_filter_accepts(PairFilter filter, PairType type);

/// How perception is shared between agents.
enum class Paradigm : std::uint8_t { None, Symmetric, Asymmetric };

/// Per-agent field-of-view policy.
enum class FovMode : std::uint8_t { Homogeneous360, Heterogeneous120_360, All120 };

std::string_view to_string(PairType v);
std::string_view to_string(PairFilter v);
std::string_view to_string(Paradigm v);
std::string_view to_string(FovMode v);
std::optional<PairFilter> parse_pair_filter(std::string_view s);
std::optional<Paradigm> parse_paradigm(std::string_view s);
std::optional<FovMode> parse_fov_mode(std::string_view s);

/// Dense index of an agent inside one Scenario. Stable for the scenario's lifetime.
using AgentIndex = std::uint32_t;

struct AgentState
{
  AgentIndex agent = 0;
  std::int64_t frame = 0;
  Vec2 position;
  Vec2 velocity;
  double heading = 0.0;
  double length = 0.0;
  double width = 0.0;
  AgentClass agent_class = AgentClass::Car;

  double speed() const { return norm(velocity); }
  bool operator==(const AgentState &) const = default;
};

struct AgentInfo
{
  std::string id;
  AgentClass agent_class = AgentClass::Car;
  bool operator==(const AgentInfo &) const = default;
};

/// Simple polygon, vertices in order, closed implicitly.
struct Polygon
{
  std::string name;
  std::vector<Vec2> vertices;
  bool operator==(const Polygon &) const = default;
};

/// Heading from velocity when moving faster than `motion_threshold`, else `fallback`.
double derive_heading(Vec2 velocity, double fallback, double motion_threshold);

/// One raw trajectory sample before indexing. `heading` empty means "derive it".
struct TrajectoryRecord
{
  std::int64_t frame = 0;
  std::string agent_id;
  AgentClass agent_class = AgentClass::Car;
  Vec2 position;
  Vec2 velocity;
  std::optional<double> heading;
  double length = 0.0;
  double width = 0.0;
};

/// Frame-indexed agent states plus the static occluder map.
///
/// States at each frame are stored sorted by agent index. Agents are indexed in
/// natural id order (numeric ids numerically, others lexicographically), so the
/// same input always yields the same indices.
class Scenario
{
public:
  Scenario() = default;

  /// Builds a scenario from unordered records. Throws InputError when an agent
  /// changes class, appears twice in one frame, or carries invalid numerics.
  static Scenario from_records(
    std::vector<TrajectoryRecord> records, std::vector<Polygon> map = {},
    double tick_seconds = 0.1, double motion_threshold = 0.05);

  std::span<const std::int64_t> frames() const { return frames_; }
  std::size_t frame_count() const { return frames_.size(); }
  std::span<const AgentInfo> agents() const { return agents_; }
  std::size_t agent_count() const { return agents_.size(); }
  const AgentInfo & agent(AgentIndex i) const { return agents_.at(i); }
  std::optional<AgentIndex> find_agent(std::string_view id) const;

  /// States present at the frame at position `frame_pos` in frames().
  std::span<const AgentState> states_at(std::size_t frame_pos) const;
  const AgentState * find_state(std::size_t frame_pos, AgentIndex agent) const;
  std::optional<std::size_t> frame_position(std::int64_t frame) const;

  /// All states of one agent in frame order, as (frame_pos, state) pairs.
  std::vector<std::pair<std::size_t, const AgentState *>> track(AgentIndex agent) const;

  const std::vector<Polygon> & map() const { return map_; }
  void set_map(std::vector<Polygon> map) { map_ = std::move(map); }
  double tick_seconds() const { return tick_seconds_; }

  std::vector<AgentIndex> vehicle_indices() const;

  /// Re-checks every core invariant; throws InvariantError on violation.
  void validate() const;

  bool operator==(const Scenario & o) const;

private:
  std::vector<std::int64_t> frames_;
  std::vector<std::size_t> frame_offsets_;  // size frames_+1, into states_
  std::vector<AgentState> states_;
  std::vector<AgentInfo> agents_;
  std::vector<Polygon> map_;
  double tick_seconds_ = 0.1;
};

/// Every tunable coefficient of the risk pipeline. Units: meters, seconds,
/// radians, milliseconds for the risk-level thresholds.
struct RiskConfig
{
  double k_overlap_side = 3.0;
  double k_overlap_noside = 1.0;
  double k_approach_side = 0.4;
  double k_approach_noside = 0.2;
  double k_separate = 0.01;
  double k_static_approach = 0.05;
  double k_static_separate = 0.01;
  double prediction_horizon = 0.6;
  double lateral_sway_coeff = 0.05;
  double base_lateral_margin = 0.7;
  double buffer_margin = 0.3;
  double perception_range = 75.0;
  double comm_range = 200.0;
  double fov_connected = kTwoPi;
  double fov_nonconnected = 2.0 * std::numbers::pi / 3.0;
  double motion_threshold = 0.05;
  double min_distance_clamp = 0.1;
  double high_risk_threshold = 200.0;
  double medium_risk_threshold = 50.0;

  double safety_margin() const { return base_lateral_margin + buffer_margin; }

  /// Throws InputError naming the first offending field.
  void validate() const;

  bool operator==(const RiskConfig &) const = default;
};

}  // namespace rtlsim

#endif  // RTLSIM__CORE_HPP_
