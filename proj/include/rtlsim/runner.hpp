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

#ifndef RTLSIM__RUNNER_HPP_
#define RTLSIM__RUNNER_HPP_

#include "rtlsim/core.hpp"
#include "rtlsim/ingest.hpp"
#include "rtlsim/risk.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

/// \file
/// Experiment orchestration and report writers.
///
/// A plan is a JSON document:
///
///     {
///       "name": "tianjin",                  // label used in tables
///       "scenario": "tracks.csv",           // or "template" + "template_seed"
///       "map": "map.json",                  // optional
///       "config": "config.json",            // optional
///       "experiment": "penetration_sweep",  // baseline | penetration_sweep |
///                                           // paradigm_compare | sensitivity
///       "overrides": { ... },               // config fields, applied last
///       "dump_visibility": false
///     }
///
/// Relative paths resolve against the plan's directory. Precedence is
/// config file < plan overrides < set_plan_option.

namespace rtlsim
{

enum class Experiment : std::uint8_t { Baseline, PenetrationSweep, ParadigmCompare, Sensitivity };

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view s);

struct SweepPlan
{
  std::string name = "scenario";
  std::filesystem::path scenario_path;
  std::optional<std::filesystem::path> map_path;
  std::string template_name;  // used when scenario_path is empty
  std::uint64_t template_seed = 0;
  Experiment experiment = Experiment::Baseline;
  RunConfig config;
  bool dump_visibility = false;
};

SweepPlan load_plan(const std::filesystem::path & path);
SweepPlan parse_plan_text(std::string_view text, const std::filesystem::path & base_dir);

/// Command-line style override. Keys: penetration (comma list), seed, reps,
/// paradigm, fov_mode, pair_filter, out, threads, dump_visibility.
void set_plan_option(SweepPlan & plan, std::string_view key, std::string_view value);

Scenario load_scenario(const SweepPlan & plan);

/// Experiment defaults for settings the config leaves open.
Paradigm effective_paradigm(const SweepPlan & plan);
FovMode effective_fov_mode(const SweepPlan & plan);

/// Per-agent mean RTL across repetitions. Every report must expose the same
/// agent sample for `group`; throws InvariantError otherwise.
std::vector<AgentRtl> mean_agent_rtls(
  std::span<const RiskReport> reports, std::optional<PairType> group);

std::vector<double> rtl_values(std::span<const AgentRtl> rtls);

/// One named parameter set of the sensitivity study.
struct SensitivityCase
{
  std::string label;
  RiskConfig config;
};

/// Baseline, K1-K5, M_s, M_l, D_s, D_l, then Ks_alt (k_static 0.4 / 0.2),
/// each relative to `base`.
std::vector<SensitivityCase> sensitivity_cases(const RiskConfig & base);

struct RunSummary
{
  std::vector<std::filesystem::path> files;  // relative to the output directory
  std::string config_hash;
};

/// Runs the plan's experiment and writes every report into config.output_dir.
/// Throws InputError for bad inputs and InvariantError when a result breaks
/// a guaranteed property.
RunSummary run_plan(const SweepPlan & plan);

}  // namespace rtlsim

#endif  // RTLSIM__RUNNER_HPP_
