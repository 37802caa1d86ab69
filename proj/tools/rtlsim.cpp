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

// Command-line front end. Talks to the library only through the C API.

#include "rtlsim/rtlsim.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace
{

int exit_code(rtl_status s)
{
  switch (s) {
    case RTL_OK:
      return 0;
    case RTL_ERR_INVARIANT:
      return 2;
    default:
      return 1;
  }
}

int fail(rtl_status s)
{
  std::fprintf(stderr, "rtlsim: %s\n", rtl_last_error());
  return exit_code(s);
}

struct RunArgs
{
  std::string plan;
  std::vector<std::pair<std::string, std::optional<std::string>>> overrides{
    {"penetration", {}}, {"seed", {}},        {"reps", {}}, {"paradigm", {}},
    {"fov_mode", {}},    {"pair_filter", {}}, {"out", {}},  {"threads", {}},
  };
  bool dump_visibility = false;
};

int run(const RunArgs & args)
{
  rtl_plan * plan = nullptr;
  if (rtl_status s = rtl_plan_load(args.plan.c_str(), &plan); s != RTL_OK) {
    return fail(s);
  }
  for (const auto & [key, value] : args.overrides) {
    if (value) {
      if (rtl_status s = rtl_plan_set(plan, key.c_str(), value->c_str()); s != RTL_OK) {
        rtl_plan_free(plan);
        return fail(s);
      }
    }
  }
  if (args.dump_visibility) {
    rtl_plan_set(plan, "dump_visibility", "true");
  }
  std::size_t files = 0;
  const rtl_status s = rtl_plan_run(plan, &files);
  if (s != RTL_OK) {
    rtl_plan_free(plan);
    return fail(s);
  }
  char dir[4096];
  char hash[64];
  rtl_plan_output_dir(plan, dir, sizeof(dir));
  rtl_plan_config_hash(plan, hash, sizeof(hash));
  std::printf("wrote %zu files to %s (config %s)\n", files, dir, hash);
  rtl_plan_free(plan);
  return 0;
}

int generate(const std::string & name, std::uint64_t seed, const std::string & out, const std::string & experiment)
{
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) {
    std::fprintf(stderr, "rtlsim: cannot create '%s': %s\n", out.c_str(), ec.message().c_str());
    return 1;
  }
  rtl_scenario * scenario = nullptr;
  if (rtl_status s = rtl_scenario_generate(name.c_str(), seed, &scenario); s != RTL_OK) {
    return fail(s);
  }
  const auto dir = std::filesystem::path(out);
  const rtl_status s = rtl_scenario_save(
    scenario, (dir / "trajectory.csv").string().c_str(), (dir / "map.json").string().c_str());
  std::size_t frames = 0;
  std::size_t agents = 0;
  std::size_t vehicles = 0;
  rtl_scenario_counts(scenario, &frames, &agents, &vehicles);
  rtl_scenario_free(scenario);
  if (s != RTL_OK) {
    return fail(s);
  }
  std::ofstream plan(dir / "plan.json", std::ios::trunc);
  plan << "{\n"
       << "  \"name\": \"" << name << "\",\n"
       << "  \"scenario\": \"trajectory.csv\",\n"
       << "  \"map\": \"map.json\",\n"
       << "  \"experiment\": \"" << experiment << "\",\n"
       << "  \"overrides\": {\"seed\": " << seed << ", \"output_dir\": \"results\"}\n"
       << "}\n";
  if (!plan) {
    std::fprintf(stderr, "rtlsim: cannot write plan.json in '%s'\n", out.c_str());
    return 1;
  }
  std::printf(
    "%s: %zu frames, %zu agents (%zu vehicles) written to %s\n", name.c_str(), frames, agents, vehicles,
    out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Risk of Tracking Loss simulator"};
  app.set_version_flag("--version", std::string(rtl_version()));
  app.require_subcommand(1);

  RunArgs run_args;
  auto * run_cmd = app.add_subcommand("run", "Execute an experiment plan");
  run_cmd->add_option("plan", run_args.plan, "Plan file (JSON)")->required();
  auto opt = [&](const char * flag, std::size_t slot, const char * help) {
    run_cmd->add_option_function<std::string>(
      flag, [&run_args, slot](const std::string & v) { run_args.overrides[slot].second = v; }, help);
  };
  opt("--penetration", 0, "Comma-separated penetration rates in [0, 1]");
  opt("--seed", 1, "Base seed; repetition r uses seed + r");
  opt("--reps", 2, "Monte Carlo repetitions");
  opt("--paradigm", 3, "none | symmetric | asymmetric");
  opt("--fov-mode", 4, "homogeneous_360 | heterogeneous_120_360 | all_120");
  opt("--pair-filter", 5, "veh_veh | veh_vru | both");
  opt("--out", 6, "Output directory");
  opt("--threads", 7, "Worker threads");
  run_cmd->add_flag("--dump-visibility", run_args.dump_visibility, "Write visibility.csv (baseline only)");

  std::string name;
  std::uint64_t seed = 1;
  std::string out;
  std::string experiment = "baseline";
  auto * gen_cmd = app.add_subcommand("generate", "Write a synthetic scenario, map and plan");
  gen_cmd->add_option("template", name, "Scenario template")->required();
  gen_cmd->add_option("--seed", seed, "Generator seed");
  gen_cmd->add_option("--out", out, "Output directory")->required();
  gen_cmd->add_option("--experiment", experiment, "Experiment written into plan.json")
    ->check(CLI::IsMember({"baseline", "penetration_sweep", "paradigm_compare", "sensitivity"}));

  auto * list_cmd = app.add_subcommand("templates", "List scenario templates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (run_cmd->parsed()) {
    return run(run_args);
  }
  if (gen_cmd->parsed()) {
    return generate(name, seed, out, experiment);
  }
  if (list_cmd->parsed()) {
    for (std::size_t k = 0; k < rtl_template_count(); ++k) {
      std::printf("%s\n", rtl_template_name(k));
    }
  }
  return 0;
}
