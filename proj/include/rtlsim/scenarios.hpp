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

#ifndef RTLSIM__SCENARIOS_HPP_
#define RTLSIM__SCENARIOS_HPP_

#include "rtlsim/core.hpp"

#include <cstdint>
#include <span>
#include <string_view>

namespace rtlsim
{

/// Names accepted by generate_scenario:
///   crossing            single-lane signalized crossroads with corner buildings
///   merging             on-ramp joining a two-lane road behind a noise barrier
///   car_following       stop-and-go platoon beside a slow truck and a parked bus
///   occluding_truck     pedestrian stepping out from behind a parked truck
///   dense_intersection  two-lane signalized crossroads, 30+ vehicles, queues
///   unobserved_agent    pedestrian hidden from every vehicle by a wall
std::span<const std::string_view> scenario_templates();

/// Deterministic in (name, seed). All agents stay inside a 140 m square, so
/// every pair of vehicles is within the default communication range.
Scenario generate_scenario(std::string_view name, std::uint64_t seed);

}  // namespace rtlsim

#endif  // RTLSIM__SCENARIOS_HPP_
