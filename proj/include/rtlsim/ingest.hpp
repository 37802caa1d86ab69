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

#ifndef RTLSIM__INGEST_HPP_
#define RTLSIM__INGEST_HPP_

#include "rtlsim/core.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

/// \file
/// Trajectory CSV, map JSON and run-config JSON readers and writers.
///
/// Trajectory header: `frame,agent_id,class,x,y,vx,vy,heading,length,width`.
/// Columns may appear in any order; `heading` may be omitted or left empty.
/// Row numbers in error messages count the header as row 1.
///
/// Map: `{"polygons": [{"name": "...", "vertices": [[x, y], ...]}, ...]}`.

namespace rtlsim
{

/// Everything a run needs besides the scenario itself.
struct RunConfig
{
  RiskConfig risk;
  std::vector<double> penetration_rates{0.25, 0.5, 0.75, 0.9, 1.0};
  std::size_t repetitions = 20;
  std::uint64_t seed = 0;
  std::optional<Paradigm> paradigm;  // experiment default when empty
  std::optional<FovMode> fov_mode;   // experiment default when empty
  PairFilter pair_filter = PairFilter::Both;
  std::string output_dir = "rtlsim_out";
  double tick_seconds = 0.1;
  double heatmap_radius = 5.0;
  double heatmap_cell = 1.0;
  unsigned threads = 1;

  bool operator==(const RunConfig &) const = default;
};

Scenario parse_trajectory_text(
  std::string_view text, double tick_seconds = 0.1, double motion_threshold = 0.05);
Scenario parse_trajectory(
  const std::filesystem::path & path, double tick_seconds = 0.1, double motion_threshold = 0.05);

std::vector<Polygon> parse_map_text(std::string_view text);
std::vector<Polygon> parse_map(const std::filesystem::path & path);

/// Parses a config document on top of `base`. Unknown keys are rejected.
/// FoV fields accept radians or a `_deg` suffixed variant in degrees.
RunConfig parse_config_text(std::string_view text, const RunConfig & base = {});
RunConfig parse_config(const std::filesystem::path & path, const RunConfig & base = {});

/// Normalizes the penetration list (sort, dedup) and checks every field.
void validate_run_config(RunConfig & config);

/// Lossless writers; parsing their output reproduces the input exactly.
std::string write_trajectory(const Scenario & scenario);
std::string write_map(const std::vector<Polygon> & map);

/// Canonical JSON of every resolved field, stable across runs.
std::string config_to_json(const RunConfig & config);
/// FNV-1a 64 of config_to_json, 16 lowercase hex digits.
std::string config_hash(const RunConfig & config);

std::string read_file(const std::filesystem::path & path, std::string_view what);

}  // namespace rtlsim

#endif  // RTLSIM__INGEST_HPP_
