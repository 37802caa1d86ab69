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

#include "rtlsim/core.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <utility>

namespace rtlsim
{

namespace
{

constexpr std::array<std::pair<std::string_view, AgentClass>, 7> kClassLabels{{
  {"car", AgentClass::Car},
  {"truck", AgentClass::Truck},
  {"bus", AgentClass::Bus},
  {"pedestrian", AgentClass::Pedestrian},
  {"bicycle", AgentClass::Bicycle},
  {"motorcycle", AgentClass::Motorcycle},
  {"tricycle", AgentClass::Tricycle},
}};

std::optional<long long> as_integer(std::string_view s)
{
  long long v = 0;
  const auto * end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    return std::nullopt;
  }
  return v;
}

// Numeric ids sort numerically and before non-numeric ids.
bool natural_less(const std::string & a, const std::string & b)
{
  const auto na = as_integer(a);
  const auto nb = as_integer(b);
  if (na && nb) {
    return *na != *nb ? *na < *nb : a < b;
  }
  if (na != std::nullopt || nb != std::nullopt) {
    return na.has_value();
  }
  return a < b;
}

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace

std::string_view class_label(AgentClass c)
{
  for (const auto & [label, cls] : kClassLabels) {
    if (cls == c) {
      return label;
    }
  }
  return "unknown";
}

std::optional<AgentClass> parse_class_label(std::string_view label)
{
  for (const auto & [name, cls] : kClassLabels) {
    if (name == label) {
      return cls;
    }
  }
  return std::nullopt;
}

std::optional<PairType> classify_pair(AgentClass a, AgentClass b)
{
  if (is_vehicle(a) && is_vehicle(b)) {
    return PairType::VehVeh;
  }
  if (is_vehicle(a) != is_vehicle(b)) {
    return PairType::VehVru;
  }
  return std::nullopt;
}

bool pair_filter_accepts(PairFilter filter, PairType type)
{
  switch (filter) {
    case PairFilter::VehVeh:
      return type == PairType::VehVeh;
    case PairFilter::VehVru:
      return type == PairType::VehVru;
    case PairFilter::Both:
      return true;
  }
  return false;
}

std::string_view to_string(PairType v) { return v == PairType::VehVeh ? "veh_veh" : "veh_vru"; }

std::string_view to_string(PairFilter v)
{
  switch (v) {
    case PairFilter::VehVeh:
      return "veh_veh";
    case PairFilter::VehVru:
      return "veh_vru";
    case PairFilter::Both:
      return "both";
  }
  return "both";
}

std::string_view to_string(Paradigm v)
{
  switch (v) {
    case Paradigm::None:
      return "none";
    case Paradigm::Symmetric:
      return "symmetric";
    case Paradigm::Asymmetric:
      return "asymmetric";
  }
  return "none";
}

std::string_view to_string(FovMode v)
{
  switch (v) {
    case FovMode::Homogeneous360:
      return "homogeneous_360";
    case FovMode::Heterogeneous120_360:
      return "heterogeneous_120_360";
    case FovMode::All120:
      return "all_120";
  }
  return "all_120";
}

std::optional<PairFilter> parse_pair_filter(std::string_view s)
{
  for (auto v : {PairFilter::VehVeh, PairFilter::VehVru, PairFilter::Both}) {
    if (to_string(v) == s) {
      return v;
    }
  }
  return std::nullopt;
}

std::optional<Paradigm> parse_paradigm(std::string_view s)
{
  for (auto v : {Paradigm::None, Paradigm::Symmetric, Paradigm::Asymmetric}) {
    if (to_string(v) == s) {
      return v;
    }
  }
  return std::nullopt;
}

std::optional<FovMode> parse_fov_mode(std::string_view s)
{
  for (auto v : {FovMode::Homogeneous360, FovMode::Heterogeneous120_360, FovMode::All120}) {
    if (to_string(v) == s) {
      return v;
    }
  }
  return std::nullopt;
}

double derive_heading(Vec2 velocity, double fallback, double motion_threshold)
{
  if (norm(velocity) > motion_threshold) {
    return std::atan2(velocity.y, velocity.x);
  }
  return fallback;
}

Scenario Scenario::from_records(
  std::vector<TrajectoryRecord> records, std::vector<Polygon> map, double tick_seconds,
  double motion_threshold)
{
  if (!(tick_seconds > 0.0) || !std::isfinite(tick_seconds)) {
    throw InputError(fmt::format("tick_seconds must be positive, got {}", tick_seconds));
  }

  std::map<std::string, AgentClass> classes;
  for (const auto & r : records) {
    if (r.agent_id.empty()) {
      throw InputError(fmt::format("empty agent id at frame {}", r.frame));
    }
    if (!finite(r.position) || !finite(r.velocity) || !std::isfinite(r.length) ||
        !std::isfinite(r.width) || (r.heading && !std::isfinite(*r.heading))) {
      throw InputError(fmt::format(
        "non-finite value for agent {} at frame {}", r.agent_id, r.frame));
    }
    const bool vehicle = is_vehicle(r.agent_class);
    if (vehicle ? (r.length <= 0.0 || r.width <= 0.0) : (r.length < 0.0 || r.width < 0.0)) {
      throw InputError(fmt::format(
        "invalid footprint {}x{} for agent {} at frame {}", r.length, r.width, r.agent_id,
        r.frame));
    }
    auto [it, inserted] = classes.emplace(r.agent_id, r.agent_class);
    if (!inserted && it->second != r.agent_class) {
      throw InputError(fmt::format(
        "agent {} changes class from {} to {} at frame {}", r.agent_id,
        class_label(it->second), class_label(r.agent_class), r.frame));
    }
  }

  Scenario s;
  s.tick_seconds_ = tick_seconds;
  s.map_ = std::move(map);

  std::vector<std::string> ids;
  ids.reserve(classes.size());
  for (const auto & [id, cls] : classes) {
    ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end(), natural_less);
  std::map<std::string, AgentIndex> index_of;
  for (const auto & id : ids) {
    index_of.emplace(id, static_cast<AgentIndex>(s.agents_.size()));
    s.agents_.push_back({id, classes.at(id)});
  }

  std::vector<std::pair<AgentIndex, const TrajectoryRecord *>> keyed;
  keyed.reserve(records.size());
  for (const auto & r : records) {
    keyed.emplace_back(index_of.at(r.agent_id), &r);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto & a, const auto & b) {
    return a.second->frame != b.second->frame ? a.second->frame < b.second->frame
                                              : a.first < b.first;
  });
  for (std::size_t k = 1; k < keyed.size(); ++k) {
    if (keyed[k].first == keyed[k - 1].first &&
        keyed[k].second->frame == keyed[k - 1].second->frame) {
      throw InputError(fmt::format(
        "agent {} appears twice in frame {}", keyed[k].second->agent_id,
        keyed[k].second->frame));
    }
  }

  // Headings follow frame order per agent, so the last known value is the fallback.
  std::vector<double> last_heading(s.agents_.size(), 0.0);
  s.states_.reserve(keyed.size());
  for (const auto & [idx, rec] : keyed) {
    if (s.frames_.empty() || s.frames_.back() != rec->frame) {
      s.frames_.push_back(rec->frame);
      s.frame_offsets_.push_back(s.states_.size());
    }
    AgentState st;
    st.agent = idx;
    st.frame = rec->frame;
    st.position = rec->position;
    st.velocity = rec->velocity;
    st.heading = rec->heading ? *rec->heading
                              : derive_heading(rec->velocity, last_heading[idx], motion_threshold);
    last_heading[idx] = st.heading;
    st.length = rec->length;
    st.width = rec->width;
    st.agent_class = rec->agent_class;
    s.states_.push_back(st);
  }
  s.frame_offsets_.push_back(s.states_.size());
  return s;
}

std::optional<AgentIndex> Scenario::find_agent(std::string_view id) const
{
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i].id == id) {
      return static_cast<AgentIndex>(i);
    }
  }
  return std::nullopt;
}

std::span<const AgentState> Scenario::states_at(std::size_t frame_pos) const
{
  if (frame_pos >= frames_.size()) {
    throw InputError(fmt::format("frame position {} out of range", frame_pos));
  }
  return std::span<const AgentState>(states_).subspan(
    frame_offsets_[frame_pos], frame_offsets_[frame_pos + 1] - frame_offsets_[frame_pos]);
}

const AgentState * Scenario::find_state(std::size_t frame_pos, AgentIndex agent) const
{
  const auto states = states_at(frame_pos);
  auto it = std::lower_bound(
    states.begin(), states.end(), agent,
    [](const AgentState & s, AgentIndex a) { return s.agent < a; });
  if (it == states.end() || it->agent != agent) {
    return nullptr;
  }
  return &*it;
}

std::optional<std::size_t> Scenario::frame_position(std::int64_t frame) const
{
  auto it = std::lower_bound(frames_.begin(), frames_.end(), frame);
  if (it == frames_.end() || *it != frame) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - frames_.begin());
}

std::vector<std::pair<std::size_t, const AgentState *>> Scenario::track(AgentIndex agent) const
{
  std::vector<std::pair<std::size_t, const AgentState *>> out;
  for (std::size_t f = 0; f < frames_.size(); ++f) {
    if (const auto * st = find_state(f, agent)) {
      out.emplace_back(f, st);
    }
  }
  return out;
}

std::vector<AgentIndex> Scenario::vehicle_indices() const
{
  std::vector<AgentIndex> out;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (is_vehicle(agents_[i].agent_class)) {
      out.push_back(static_cast<AgentIndex>(i));
    }
  }
  return out;
}

void Scenario::validate() const
{
  if (!(tick_seconds_ > 0.0)) {
    throw InvariantError("tick_seconds must be positive");
  }
  if (!frames_.empty() && frame_offsets_.size() != frames_.size() + 1) {
    throw InvariantError("frame offset table inconsistent");
  }
  for (std::size_t f = 0; f < frames_.size(); ++f) {
    if (f > 0 && frames_[f] <= frames_[f - 1]) {
      throw InvariantError("frame indices not strictly increasing");
    }
    const auto states = states_at(f);
    for (std::size_t k = 0; k < states.size(); ++k) {
      const auto & st = states[k];
      if (k > 0 && states[k - 1].agent >= st.agent) {
        throw InvariantError(fmt::format("states at frame {} not sorted by agent", frames_[f]));
      }
      if (st.frame != frames_[f] || st.agent >= agents_.size()) {
        throw InvariantError(fmt::format("state misfiled at frame {}", frames_[f]));
      }
      if (st.agent_class != agents_[st.agent].agent_class) {
        throw InvariantError(fmt::format("agent {} changes class", agents_[st.agent].id));
      }
      if (!std::isfinite(st.heading)) {
        throw InvariantError(fmt::format("non-finite heading for {}", agents_[st.agent].id));
      }
      const bool bad_dims = is_vehicle(st.agent_class) ? (st.length <= 0.0 || st.width <= 0.0)
                                                       : (st.length < 0.0 || st.width < 0.0);
      if (bad_dims) {
        throw InvariantError(fmt::format("invalid footprint for {}", agents_[st.agent].id));
      }
    }
  }
}

bool Scenario::operator==(const Scenario & o) const
{
  return frames_ == o.frames_ && states_ == o.states_ && agents_ == o.agents_ &&
         map_ == o.map_ && tick_seconds_ == o.tick_seconds_;
}

void RiskConfig::validate() const
{
  const std::array<std::pair<std::string_view, double>, 19> fields{{
    {"k_overlap_side", k_overlap_side},
    {"k_overlap_noside", k_overlap_noside},
    {"k_approach_side", k_approach_side},
    {"k_approach_noside", k_approach_noside},
    {"k_separate", k_separate},
    {"k_static_approach", k_static_approach},
    {"k_static_separate", k_static_separate},
    {"prediction_horizon", prediction_horizon},
    {"lateral_sway_coeff", lateral_sway_coeff},
    {"base_lateral_margin", base_lateral_margin},
    {"buffer_margin", buffer_margin},
    {"perception_range", perception_range},
    {"comm_range", comm_range},
    {"fov_connected", fov_connected},
    {"fov_nonconnected", fov_nonconnected},
    {"motion_threshold", motion_threshold},
    {"min_distance_clamp", min_distance_clamp},
    {"high_risk_threshold", high_risk_threshold},
    {"medium_risk_threshold", medium_risk_threshold},
  }};
  for (const auto & [name, value] : fields) {
    if (!std::isfinite(value) || value < 0.0) {
      throw InputError(fmt::format("{} must be a finite non-negative number, got {}", name, value));
    }
  }
  if (prediction_horizon <= 0.0) {
    throw InputError("prediction_horizon must be positive");
  }
  if (perception_range <= 0.0 || comm_range <= 0.0) {
    throw InputError("perception_range and comm_range must be positive");
  }
  if (min_distance_clamp <= 0.0) {
    throw InputError("min_distance_clamp must be positive");
  }
  for (double fov : {fov_connected, fov_nonconnected}) {
    if (fov <= 0.0 || fov > kTwoPi + 1e-12) {
      throw InputError(fmt::format("field of view must lie in (0, 2*pi], got {}", fov));
    }
  }
  if (medium_risk_threshold > high_risk_threshold) {
    throw InputError("medium_risk_threshold must not exceed high_risk_threshold");
  }
}

}  // namespace rtlsim
