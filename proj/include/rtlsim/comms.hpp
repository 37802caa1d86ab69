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

#ifndef RTLSIM__COMMS_HPP_
#define RTLSIM__COMMS_HPP_

#include "rtlsim/core.hpp"
#include "rtlsim/visibility.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace rtlsim
{

/// Vehicles equipped with V2X for a whole run.
struct ConnectivityAssignment
{
  std::vector<AgentIndex> connected;  // sorted, vehicles only
  double penetration = 0.0;
  std::uint64_t seed = 0;

  bool is_connected(AgentIndex agent) const;
  /// Byte mask indexed by AgentIndex.
  std::vector<std::uint8_t> mask(std::size_t agent_count) const;
};

/// round-half-up of penetration * vehicle_count.
std::size_t connected_count(double penetration, std::size_t vehicle_count);

/// Uniform sample without replacement of connected_count() vehicles.
///
/// The sample is the prefix of one seeded permutation of the vehicle set, so
/// for a fixed seed a higher penetration always connects a superset.
ConnectivityAssignment sample_connected(
  const Scenario & scenario, double penetration, std::uint64_t seed);

struct CommGraph
{
  std::int64_t frame = 0;
  std::vector<AgentIndex> nodes;  // connected vehicles present, sorted
  std::vector<std::pair<AgentIndex, AgentIndex>> edges;  // first < second
  std::vector<std::vector<AgentIndex>> components;  // each sorted, ordered by first member
};

/// Range-limited graph over connected vehicles; components are multi-hop closures.
CommGraph comm_graph(
  std::size_t frame_pos, const Scenario & scenario, const ConnectivityAssignment & assignment,
  const RiskConfig & config);

/// Every connected vehicle perceives the union of its component's raw views.
/// Non-connected rows are untouched.
VisibilityRelation fuse_symmetric(const VisibilityRelation & raw, const CommGraph & graph);

/// Symmetric fusion, then each non-connected vehicle within comm_range of a
/// connected vehicle also receives that vehicle's fused view. Receivers never
/// relay; VRUs receive nothing.
VisibilityRelation fuse_asymmetric(
  const VisibilityRelation & raw, const CommGraph & graph, std::size_t frame_pos,
  const Scenario & scenario, const ConnectivityAssignment & assignment, const RiskConfig & config);

}  // namespace rtlsim

#endif  // RTLSIM__COMMS_HPP_
