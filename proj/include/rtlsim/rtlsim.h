/* Copyright 2026 The rtlsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RTLSIM__RTLSIM_H_
#define RTLSIM__RTLSIM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RTL_BUILDING_LIBRARY)
#    define RTL_API __declspec(dllexport)
#  else
#    define RTL_API __declspec(dllimport)
#  endif
#else
#  define RTL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returning rtl_status leaves a message for rtl_last_error()
 * on failure. Handles are not thread-safe; distinct handles may be used from
 * different threads. */
typedef enum rtl_status {
  RTL_OK = 0,
  RTL_ERR_INPUT = 1,     /* malformed or invalid input */
  RTL_ERR_INVARIANT = 2, /* internal property violated */
  RTL_ERR_ARGUMENT = 3,  /* null pointer, bad index, unknown key */
  RTL_ERR_IO = 4         /* filesystem failure */
} rtl_status;

typedef enum rtl_risk_level { RTL_RISK_LOW = 0, RTL_RISK_MEDIUM = 1, RTL_RISK_HIGH = 2 } rtl_risk_level;

typedef struct rtl_scenario rtl_scenario;
typedef struct rtl_plan rtl_plan;
typedef struct rtl_report rtl_report;

RTL_API const char * rtl_version(void);

/* Message of the last failed call on this thread; empty after success. */
RTL_API const char * rtl_last_error(void);

/* Scenarios ------------------------------------------------------------- */

/* map_path may be NULL. */
RTL_API rtl_status rtl_scenario_load(
  const char * trajectory_path, const char * map_path, rtl_scenario ** out);
RTL_API rtl_status rtl_scenario_generate(const char * template_name, uint64_t seed, rtl_scenario ** out);
/* Writes trajectory CSV and map JSON; map_path may be NULL. */
RTL_API rtl_status rtl_scenario_save(
  const rtl_scenario * scenario, const char * trajectory_path, const char * map_path);
RTL_API rtl_status rtl_scenario_counts(
  const rtl_scenario * scenario, size_t * frames, size_t * agents, size_t * vehicles);
RTL_API void rtl_scenario_free(rtl_scenario * scenario);

/* Number of generator templates, and the name at index k. */
RTL_API size_t rtl_template_count(void);
RTL_API const char * rtl_template_name(size_t k);

/* Plans ------------------------------------------------------------------ */

RTL_API rtl_status rtl_plan_load(const char * path, rtl_plan ** out);
/* Keys: penetration, seed, reps, paradigm, fov_mode, pair_filter, out,
 * threads, dump_visibility. */
RTL_API rtl_status rtl_plan_set(rtl_plan * plan, const char * key, const char * value);
/* Runs the experiment and writes its reports; files_written may be NULL. */
RTL_API rtl_status rtl_plan_run(const rtl_plan * plan, size_t * files_written);
/* Copies the resolved output directory or config hash, NUL-terminated. */
RTL_API rtl_status rtl_plan_output_dir(const rtl_plan * plan, char * buffer, size_t size);
RTL_API rtl_status rtl_plan_config_hash(const rtl_plan * plan, char * buffer, size_t size);
RTL_API void rtl_plan_free(rtl_plan * plan);

/* Single runs ------------------------------------------------------------ */

typedef struct rtl_run_options {
  double penetration;      /* fraction of vehicles connected */
  uint64_t seed;           /* connectivity sampling seed */
  const char * paradigm;   /* "none", "symmetric", "asymmetric" */
  const char * fov_mode;   /* "all_120", "homogeneous_360", "heterogeneous_120_360" */
  const char * pair_filter; /* "both", "veh_veh", "veh_vru" */
  unsigned threads;
} rtl_run_options;

/* No connectivity, no sharing, 120 degree FoV for everyone, all pairs, one thread. */
RTL_API void rtl_run_options_init(rtl_run_options * options);

/* config_json may be NULL for defaults; options may be NULL. */
RTL_API rtl_status rtl_report_compute(
  const rtl_scenario * scenario, const char * config_json, const rtl_run_options * options,
  rtl_report ** out);
/* Every agent of the scenario, in scenario order. */
RTL_API size_t rtl_report_agent_count(const rtl_report * report);
RTL_API rtl_status rtl_report_agent(
  const rtl_report * report, size_t k, const char ** agent_id, double * rtl_ms, rtl_risk_level * level);
RTL_API size_t rtl_report_pair_count(const rtl_report * report);
RTL_API rtl_status rtl_report_pair(
  const rtl_report * report, size_t k, const char ** target_id, const char ** observer_id,
  double * f_ms, size_t * event_count);
RTL_API void rtl_report_free(rtl_report * report);

/* clamp(k * delta_v / max(d, min_distance)^2, 0, 1) */
RTL_API rtl_status rtl_instantaneous_weight(
  double k, double delta_v, double d, double min_distance, double * out);

#ifdef __cplusplus
}
#endif

#endif /* RTLSIM__RTLSIM_H_ */
