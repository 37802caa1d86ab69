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

#ifndef RTLSIM__TESTS__SUPPORT_HPP_
#define RTLSIM__TESTS__SUPPORT_HPP_

#include "rtlsim/core.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace rtlsim::test
{

inline TrajectoryRecord car(
  std::int64_t frame, std::string id, Vec2 p, Vec2 v = {}, std::optional<double> heading = 0.0,
  double length = 4.5, double width = 1.8)
{
  return {frame, std::move(id), AgentClass::Car, p, v, heading, length, width};
}

inline TrajectoryRecord of_class(
  AgentClass cls, std::int64_t frame, std::string id, Vec2 p, Vec2 v = {},
  std::optional<double> heading = 0.0)
{
  double length = 0.5;
  double width = 0.5;
  if (cls == AgentClass::Car) {
    length = 4.5;
    width = 1.8;
  } else if (cls == AgentClass::Truck || cls == AgentClass::Bus) {
    length = 12.0;
    width = 2.5;
  } else if (cls == AgentClass::Bicycle || cls == AgentClass::Motorcycle) {
    length = 1.8;
    width = 0.6;
  }
  return {frame, std::move(id), cls, p, v, heading, length, width};
}

/// Random scene: `n` agents wandering for `frames` frames inside a square, with
/// random class, some dropouts, and optional rectangular buildings.
inline Scenario random_scene(
  std::mt19937_64 & rng, std::size_t n, std::size_t frames, double half_extent,
  std::size_t buildings = 0)
{
  std::uniform_real_distribution<double> pos(-half_extent, half_extent);
  std::uniform_real_distribution<double> vel(-12.0, 12.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> cls(0, 6);
  std::vector<TrajectoryRecord> records;
  for (std::size_t a = 0; a < n; ++a) {
    const auto c = static_cast<AgentClass>(cls(rng));
    Vec2 p{pos(rng), pos(rng)};
    Vec2 v{vel(rng), vel(rng)};
    if (is_vru(c)) {
      v = v * 0.2;
    }
    if (unit(rng) < 0.15) {
      v = {};
    }
    const std::size_t first = static_cast<std::size_t>(unit(rng) * frames / 3);
    const std::size_t last = frames - static_cast<std::size_t>(unit(rng) * frames / 3);
    for (std::size_t f = first; f < last; ++f) {
      if (unit(rng) < 0.03) {
        continue;
      }
      const Vec2 at = p + v * (0.1 * static_cast<double>(f));
      records.push_back(of_class(c, static_cast<std::int64_t>(f), std::to_string(a), at, v, std::nullopt));
    }
  }
  std::vector<Polygon> map;
  for (std::size_t b = 0; b < buildings; ++b) {
    const Vec2 lo{pos(rng), pos(rng)};
    const double w = 3.0 + 8.0 * unit(rng);
    const double h = 3.0 + 8.0 * unit(rng);
    map.push_back({"b" + std::to_string(b), {lo, {lo.x + w, lo.y}, {lo.x + w, lo.y + h}, {lo.x, lo.y + h}}});
  }
  return Scenario::from_records(std::move(records), std::move(map));
}

}  // namespace rtlsim::test

#endif  // RTLSIM__TESTS__SUPPORT_HPP_
