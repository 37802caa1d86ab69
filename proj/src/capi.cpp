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

#include "rtlsim/rtlsim.h"

#include "rtlsim/comms.hpp"
#include "rtlsim/engine.hpp"
#include "rtlsim/ingest.hpp"
#include "rtlsim/risk.hpp"
#include "rtlsim/runner.hpp"
#include "rtlsim/scenarios.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <string>

struct rtl_scenario
{
  rtlsim::Scenario scenario;
};

struct rtl_plan
{
  rtlsim::SweepPlan plan;
};

struct rtl_report
{
  struct Agent
  {
    std::string id;
    double rtl_ms = 0.0;
    rtl_risk_level level = RTL_RISK_LOW;
  };
  struct Pair
  {
    std::size_t i = 0;
    std::size_t j = 0;
    double f_ms = 0.0;
    std::size_t events = 0;
  };
  std::vector<Agent> agents;
  std::vector<Pair> pairs;
};

namespace
{

thread_local std::string g_last_error;

template <typename F>
rtl_status guarded(F && body)
{
  g_last_error.clear();
  try {
    body();
    return RTL_OK;
  } catch (const rtlsim::InvariantError & e) {
    g_last_error = e.what();
    return RTL_ERR_INVARIANT;
  } catch (const rtlsim::InputError & e) {
    g_last_error = e.what();
    return RTL_ERR_INPUT;
  } catch (const std::filesystem::filesystem_error & e) {
    g_last_error = e.what();
    return RTL_ERR_IO;
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
    return RTL_ERR_IO;
  } catch (const std::exception & e) {
    g_last_error = e.what();
    return RTL_ERR_INVARIANT;
  } catch (...) {
    g_last_error = "unknown error";
    return RTL_ERR_INVARIANT;
  }
}

rtl_status argument_error(const char * what)
{
  g_last_error = what;
  return RTL_ERR_ARGUMENT;
}

rtl_status copy_out(const std::string & value, char * buffer, std::size_t size)
{
  if (buffer == nullptr || size <= value.size()) {
    return argument_error("buffer too small");
  }
  std::memcpy(buffer, value.c_str(), value.size() + 1);
  g_last_error.clear();
  return RTL_OK;
}

void write_text(const std::filesystem::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    throw std::filesystem::filesystem_error(
      "cannot write file", path, std::make_error_code(std::errc::io_error));
  }
}

}  // namespace

extern "C" {

const char * rtl_version(void) { return "0.1.0"; }

const char * rtl_last_error(void) { return g_last_error.c_str(); }

rtl_status rtl_scenario_load(const char * trajectory_path, const char * map_path, rtl_scenario ** out)
{
  if (trajectory_path == nullptr || out == nullptr) {
    return argument_error("trajectory_path and out must not be null");
  }
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<rtl_scenario>();
    s->scenario = rtlsim::parse_trajectory(trajectory_path);
    if (map_path != nullptr) {
      s->scenario.set_map(rtlsim::parse_map(map_path));
    }
    *out = s.release();
  });
}

rtl_status rtl_scenario_generate(const char * template_name, uint64_t seed, rtl_scenario ** out)
{
  if (template_name == nullptr || out == nullptr) {
    return argument_error("template_name and out must not be null");
  }
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<rtl_scenario>();
    s->scenario = rtlsim::generate_scenario(template_name, seed);
    *out = s.release();
  });
}

rtl_status rtl_scenario_save(const rtl_scenario * scenario, const char * trajectory_path, const char * map_path)
{
  if (scenario == nullptr || trajectory_path == nullptr) {
    return argument_error("scenario and trajectory_path must not be null");
  }
  return guarded([&] {
    write_text(trajectory_path, rtlsim::write_trajectory(scenario->scenario));
    if (map_path != nullptr) {
      write_text(map_path, rtlsim::write_map(scenario->scenario.map()));
    }
  });
}

rtl_status rtl_scenario_counts(const rtl_scenario * scenario, size_t * frames, size_t * agents, size_t * vehicles)
{
  if (scenario == nullptr) {
    return argument_error("scenario must not be null");
  }
  if (frames != nullptr) {
    *frames = scenario->scenario.frame_count();
  }
  if (agents != nullptr) {
    *agents = scenario->scenario.agent_count();
  }
  if (vehicles != nullptr) {
    *vehicles = scenario->scenario.vehicle_indices().size();
  }
  g_last_error.clear();
  return RTL_OK;
}

void rtl_scenario_free(rtl_scenario * scenario) { delete scenario; }

size_t rtl_template_count(void) { return rtlsim::scenario_templates().size(); }

const char * rtl_template_name(size_t k)
{
  const auto names = rtlsim::scenario_templates();
  return k < names.size() ? names[k].data() : nullptr;
}

rtl_status rtl_plan_load(const char * path, rtl_plan ** out)
{
  if (path == nullptr || out == nullptr) {
    return argument_error("path and out must not be null");
  }
  *out = nullptr;
  return guarded([&] {
    auto p = std::make_unique<rtl_plan>();
    p->plan = rtlsim::load_plan(path);
    *out = p.release();
  });
}

rtl_status rtl_plan_set(rtl_plan * plan, const char * key, const char * value)
{
  if (plan == nullptr || key == nullptr || value == nullptr) {
    return argument_error("plan, key and value must not be null");
  }
  return guarded([&] {
    rtlsim::SweepPlan copy = plan->plan;
    rtlsim::set_plan_option(copy, key, value);
    plan->plan = std::move(copy);
  });
}

rtl_status rtl_plan_run(const rtl_plan * plan, size_t * files_written)
{
  if (plan == nullptr) {
    return argument_error("plan must not be null");
  }
  return guarded([&] {
    const auto summary = rtlsim::run_plan(plan->plan);
    if (files_written != nullptr) {
      *files_written = summary.files.size();
    }
  });
}

rtl_status rtl_plan_output_dir(const rtl_plan * plan, char * buffer, size_t size)
{
  if (plan == nullptr) {
    return argument_error("plan must not be null");
  }
  return copy_out(plan->plan.config.output_dir, buffer, size);
}

rtl_status rtl_plan_config_hash(const rtl_plan * plan, char * buffer, size_t size)
{
  if (plan == nullptr) {
    return argument_error("plan must not be null");
  }
  return copy_out(rtlsim::config_hash(plan->plan.config), buffer, size);
}

void rtl_plan_free(rtl_plan * plan) { delete plan; }

void rtl_run_options_init(rtl_run_options * options)
{
  if (options == nullptr) {
    return;
  }
  options->penetration = 0.0;
  options->seed = 0;
  options->paradigm = "none";
  options->fov_mode = "all_120";
  options->pair_filter = "both";
  options->threads = 1;
}

rtl_status rtl_report_compute(
  const rtl_scenario * scenario, const char * config_json, const rtl_run_options * options, rtl_report ** out)
{
  if (scenario == nullptr || out == nullptr) {
    return argument_error("scenario and out must not be null");
  }
  *out = nullptr;
  rtl_run_options opts;
  rtl_run_options_init(&opts);
  if (options != nullptr) {
    opts = *options;
  }
  return guarded([&] {
    using namespace rtlsim;
    const RunConfig rc = config_json != nullptr ? parse_config_text(config_json) : RunConfig{};
    const auto paradigm = parse_paradigm(opts.paradigm != nullptr ? opts.paradigm : "");
    const auto fov = parse_fov_mode(opts.fov_mode != nullptr ? opts.fov_mode : "");
    const auto filter = parse_pair_filter(opts.pair_filter != nullptr ? opts.pair_filter : "");
    if (!paradigm || !fov || !filter) {
      throw InputError("unknown paradigm, fov_mode or pair_filter in run options");
    }
    const Scenario & s = scenario->scenario;
    Variant v;
    v.assignment = sample_connected(s, opts.penetration, opts.seed);
    v.paradigm = *paradigm;
    v.fov_mode = *fov;
    EngineOptions eo;
    eo.pair_filter = *filter;
    eo.threads = opts.threads == 0 ? 1 : opts.threads;
    const RiskReport report = simulate(s, rc.risk, std::span(&v, 1), eo).front();

    auto r = std::make_unique<rtl_report>();
    r->agents.resize(s.agent_count());
    for (std::size_t a = 0; a < s.agent_count(); ++a) {
      r->agents[a].id = s.agent(static_cast<AgentIndex>(a)).id;
    }
    for (const auto & a : report.agent_rtls()) {
      r->agents[a.agent].rtl_ms = a.rtl_ms;
    }
    for (auto & a : r->agents) {
      a.level = static_cast<rtl_risk_level>(risk_level(a.rtl_ms, rc.risk));
    }
    for (const auto & p : report.pairs) {
      r->pairs.push_back({p.i, p.j, p.f_ms, p.event_count});
    }
    *out = r.release();
  });
}

size_t rtl_report_agent_count(const rtl_report * report) { return report != nullptr ? report->agents.size() : 0; }

rtl_status rtl_report_agent(
  const rtl_report * report, size_t k, const char ** agent_id, double * rtl_ms, rtl_risk_level * level)
{
  if (report == nullptr || k >= report->agents.size()) {
    return argument_error("report is null or index out of range");
  }
  const auto & a = report->agents[k];
  if (agent_id != nullptr) {
    *agent_id = a.id.c_str();
  }
  if (rtl_ms != nullptr) {
    *rtl_ms = a.rtl_ms;
  }
  if (level != nullptr) {
    *level = a.level;
  }
  g_last_error.clear();
  return RTL_OK;
}

size_t rtl_report_pair_count(const rtl_report * report) { return report != nullptr ? report->pairs.size() : 0; }

rtl_status rtl_report_pair(
  const rtl_report * report, size_t k, const char ** target_id, const char ** observer_id, double * f_ms,
  size_t * event_count)
{
  if (report == nullptr || k >= report->pairs.size()) {
    return argument_error("report is null or index out of range");
  }
  const auto & p = report->pairs[k];
  if (target_id != nullptr) {
    *target_id = report->agents[p.i].id.c_str();
  }
  if (observer_id != nullptr) {
    *observer_id = report->agents[p.j].id.c_str();
  }
  if (f_ms != nullptr) {
    *f_ms = p.f_ms;
  }
  if (event_count != nullptr) {
    *event_count = p.events;
  }
  g_last_error.clear();
  return RTL_OK;
}

void rtl_report_free(rtl_report * report) { delete report; }

rtl_status rtl_instantaneous_weight(double k, double delta_v, double d, double min_distance, double * out)
{
  if (out == nullptr) {
    return argument_error("out must not be null");
  }
  return guarded([&] {
    for (double v : {k, delta_v, d, min_distance}) {
      if (!std::isfinite(v)) {
        throw rtlsim::InputError("instantaneous weight arguments must be finite");
      }
    }
    if (min_distance <= 0.0) {
      throw rtlsim::InputError("min_distance must be positive");
    }
    *out = rtlsim::instantaneous_weight(k, delta_v, d, min_distance);
  });
}

}  // extern "C"
