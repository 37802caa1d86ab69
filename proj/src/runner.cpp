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

#include "rtlsim/runner.hpp"

#include "rtlsim/analytics.hpp"
#include "rtlsim/comms.hpp"
#include "rtlsim/engine.hpp"
#include "rtlsim/scenarios.hpp"
#include "rtlsim/visibility.hpp"

#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>

namespace rtlsim
{

namespace
{

using Json = nlohmann::ordered_json;

std::shared_ptr<spdlog::logger> logger()
{
  static const std::shared_ptr<spdlog::logger> log = [] {
    auto l = spdlog::stderr_logger_mt("rtlsim");
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::warn);
    if (const char * env = std::getenv("RTLSIM_LOG")) {
      l->set_level(spdlog::level::from_str(env));
    }
    return l;
  }();
  return log;
}

std::string num(double v)
{
  if (std::isnan(v)) {
    return "nan";
  }
  return fmt::format("{:.6f}", v);
}

std::string p_label(double p) { return fmt::format("p{}", p); }

std::vector<PairType> groups_of(PairFilter filter)
{
  std::vector<PairType> out;
  for (PairType t : {PairType::VehVeh, PairType::VehVru}) {
    if (pair_filter_accepts(filter, t)) {
      out.push_back(t);
    }
  }
  return out;
}

/// Collects output files and writes them under one directory.
class Outputs
{
public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir))
  {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) {
      throw InputError(fmt::format("cannot create output directory '{}': {}", dir_.string(), ec.message()));
    }
  }

  void write(const std::filesystem::path & rel, const std::string & content)
  {
    const auto full = dir_ / rel;
    if (rel.has_parent_path()) {
      std::filesystem::create_directories(full.parent_path());
    }
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw InputError(fmt::format("cannot write '{}'", full.string()));
    }
    out << content;
    if (!out) {
      throw InputError(fmt::format("write failed for '{}'", full.string()));
    }
    files_.push_back(rel);
    logger()->debug("wrote {}", full.string());
  }

  std::vector<std::filesystem::path> files() const
  {
    auto f = files_;
    std::sort(f.begin(), f.end());
    return f;
  }

private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
};

struct GroupStats
{
  std::string group;
  Statistic cqd;
  Statistic cv_mad;
  double top10 = std::numeric_limits<double>::quiet_NaN();
  std::size_t n = 0;
};

GroupStats describe(std::string group, const std::vector<double> & values)
{
  GroupStats s;
  s.group = std::move(group);
  s.n = values.size();
  if (values.empty()) {
    s.cqd = Statistic::undefined("empty sample");
    s.cv_mad = Statistic::undefined("empty sample");
    return s;
  }
  s.cqd = cqd(values);
  s.cv_mad = cv_mad(values);
  s.top10 = top_decile_mean(values);
  return s;
}

std::string stats_csv(const std::vector<GroupStats> & rows)
{
  std::string out = "group,cqd,cv_mad,top10_mean_ms,n\n";
  for (const auto & r : rows) {
    out += fmt::format("{},{},{},{},{}\n", r.group, num(r.cqd.value), num(r.cv_mad.value), num(r.top10), r.n);
  }
  return out;
}

std::string ccdf_csv(const std::vector<double> & values)
{
  std::string out = "value_ms,fraction\n";
  if (values.empty()) {
    return out;
  }
  for (const auto & [v, frac] : build_ccdf(values).points) {
    out += fmt::format("{},{}\n", num(v), num(frac));
  }
  return out;
}

std::string heatmap_csv(const HeatmapGrid & h)
{
  std::string out = "row,col,raw_ms,normalized\n";
  for (std::size_t r = 0; r < h.spec.rows; ++r) {
    for (std::size_t c = 0; c < h.spec.cols; ++c) {
      out += fmt::format("{},{},{},{}\n", r, c, num(h.raw_at(r, c)), num(h.normalized_at(r, c)));
    }
  }
  return out;
}

std::string assignment_csv(const Scenario & scenario, const ConnectivityAssignment & a)
{
  std::string out = "agent_id,connected\n";
  for (AgentIndex v : scenario.vehicle_indices()) {
    out += fmt::format("{},{}\n", scenario.agent(v).id, a.is_connected(v) ? 1 : 0);
  }
  return out;
}

void check_dominance(
  const RiskReport & lower, const RiskReport & upper, const Scenario & scenario, std::string_view what)
{
  const auto lo = lower.agent_rtls();
  const auto hi = upper.agent_rtls();
  if (lo.size() != hi.size()) {
    throw InvariantError(fmt::format("{}: agent samples differ", what));
  }
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (lo[k].agent != hi[k].agent || lo[k].rtl_ms > hi[k].rtl_ms) {
      throw InvariantError(fmt::format(
        "{}: agent {} has RTL {} above {}", what, scenario.agent(lo[k].agent).id, lo[k].rtl_ms,
        hi[k].rtl_ms));
    }
  }
}

Variant make_variant(ConnectivityAssignment a, Paradigm paradigm, FovMode fov, bool keep = false)
{
  Variant v;
  v.assignment = std::move(a);
  v.paradigm = paradigm;
  v.fov_mode = fov;
  v.keep_events = keep;
  return v;
}

ConnectivityAssignment no_connectivity(std::uint64_t seed)
{
  ConnectivityAssignment a;
  a.seed = seed;
  return a;
}

EngineOptions engine_options(const RunConfig & c)
{
  EngineOptions o;
  o.pair_filter = c.pair_filter;
  o.threads = c.threads;
  return o;
}

/// Mean-aggregated agent sample of one (p, paradigm) cell.
struct Cell
{
  double p = 0.0;
  Paradigm paradigm = Paradigm::None;
  std::vector<RiskReport> reps;
};

/// Runs every (p, repetition) for the given paradigms with shared assignments.
/// Index 0 of the result is the p = 0 cell, shared by every paradigm.
std::vector<Cell> sweep(
  const Scenario & scenario, const RiskConfig & risk, const RunConfig & rc,
  std::span<const Paradigm> paradigms, FovMode fov, Outputs * assignments_out)
{
  std::vector<Variant> variants;
  variants.push_back(make_variant(no_connectivity(rc.seed), Paradigm::None, fov));
  std::vector<double> rates;
  for (double p : rc.penetration_rates) {
    if (p > 0.0) {
      rates.push_back(p);
    }
  }
  for (double p : rates) {
    for (std::size_t r = 0; r < rc.repetitions; ++r) {
      const std::uint64_t seed = rc.seed + r;
      auto a = sample_connected(scenario, p, seed);
      if (assignments_out) {
        assignments_out->write(
          std::filesystem::path("assignments") / fmt::format("{}_r{}.csv", p_label(p), r),
          assignment_csv(scenario, a));
      }
      for (Paradigm par : paradigms) {
        variants.push_back(make_variant(a, par, fov));
      }
    }
  }
  logger()->info("simulating {} variants over {} frames", variants.size(), scenario.frame_count());
  auto reports = simulate(scenario, risk, variants, engine_options(rc));

  std::vector<Cell> cells;
  cells.push_back({0.0, Paradigm::None, {std::move(reports[0])}});
  std::size_t next = 1;
  for (double p : rates) {
    const std::size_t first = cells.size();
    for (Paradigm par : paradigms) {
      cells.push_back({p, par, {}});
    }
    for (std::size_t r = 0; r < rc.repetitions; ++r) {
      for (std::size_t k = 0; k < paradigms.size(); ++k) {
        cells[first + k].reps.push_back(std::move(reports[next++]));
      }
    }
  }
  return cells;
}

/// Same assignment, weaker paradigm first: each must dominate the next.
void check_paradigm_order(const std::vector<Cell> & cells, const Scenario & scenario)
{
  for (std::size_t k = 1; k < cells.size(); ++k) {
    if (cells[k].paradigm != Paradigm::Asymmetric) {
      continue;
    }
    for (std::size_t m = 1; m < cells.size(); ++m) {
      if (cells[m].paradigm == Paradigm::Symmetric && cells[m].p == cells[k].p) {
        for (std::size_t r = 0; r < cells[k].reps.size(); ++r) {
          check_dominance(
            cells[k].reps[r], cells[m].reps[r], scenario,
            fmt::format("asymmetric vs symmetric at p={} r={}", cells[k].p, r));
        }
      }
    }
  }
}

std::string manifest(
  const SweepPlan & plan, const Scenario & scenario, const std::string & hash,
  const std::vector<std::filesystem::path> & files)
{
  Json doc;
  doc["tool"] = "rtlsim";
  doc["experiment"] = std::string(to_string(plan.experiment));
  doc["name"] = plan.name;
  doc["scenario"] = plan.scenario_path.empty() ? Json(nullptr) : Json(plan.scenario_path.generic_string());
  doc["template"] = plan.template_name.empty() ? Json(nullptr) : Json(plan.template_name);
  if (!plan.template_name.empty()) {
    doc["template_seed"] = plan.template_seed;
  }
  doc["map"] = plan.map_path ? Json(plan.map_path->generic_string()) : Json(nullptr);
  doc["paradigm"] = std::string(to_string(effective_paradigm(plan)));
  doc["fov_mode"] = std::string(to_string(effective_fov_mode(plan)));
  doc["frames"] = scenario.frame_count();
  doc["agents"] = scenario.agent_count();
  doc["vehicles"] = scenario.vehicle_indices().size();
  doc["config"] = Json::parse(config_to_json(plan.config));
  doc["config_hash"] = hash;
  Json list = Json::array();
  for (const auto & f : files) {
    list.push_back(f.generic_string());
  }
  doc["files"] = list;
  return doc.dump(2) + "\n";
}

double top_decile_or_zero(const Cell & cell, PairType g)
{
  const auto values = rtl_values(mean_agent_rtls(cell.reps, g));
  return values.empty() ? 0.0 : top_decile_mean(values);
}

void run_baseline(const SweepPlan & plan, const Scenario & scenario, Outputs & out)
{
  const RunConfig & rc = plan.config;
  const Variant v = make_variant(no_connectivity(rc.seed), effective_paradigm(plan), effective_fov_mode(plan));
  const RiskReport report = simulate(scenario, rc.risk, std::span(&v, 1), engine_options(rc)).front();

  std::vector<double> rtl(scenario.agent_count(), 0.0);
  for (const auto & a : report.agent_rtls()) {
    rtl[a.agent] = a.rtl_ms;
  }
  std::string rtl_csv = "agent_id,rtl_ms,risk_level\n";
  for (std::size_t a = 0; a < rtl.size(); ++a) {
    rtl_csv += fmt::format(
      "{},{},{}\n", scenario.agent(static_cast<AgentIndex>(a)).id, num(rtl[a]), to_string(risk_level(rtl[a], rc.risk)));
  }
  out.write("rtl.csv", rtl_csv);

  std::string pairs_csv = "i,j,F_ms,event_count\n";
  for (const auto & p : report.pairs) {
    pairs_csv += fmt::format("{},{},{},{}\n", scenario.agent(p.i).id, scenario.agent(p.j).id, num(p.f_ms), p.event_count);
  }
  out.write("pairs.csv", pairs_csv);

  std::vector<GroupStats> stats;
  const GridSpec grid = grid_covering(scenario, rc.heatmap_cell, rc.heatmap_radius);
  for (PairType g : groups_of(rc.pair_filter)) {
    const auto values = rtl_values(report.agent_rtls(g));
    stats.push_back(describe(std::string(to_string(g)), values));
    out.write(fmt::format("ccdf_{}.csv", to_string(g)), ccdf_csv(values));
    const auto events = high_risk_events(report, scenario, rc.risk.high_risk_threshold, g);
    out.write(fmt::format("heatmap_{}.csv", to_string(g)), heatmap_csv(accumulate_heatmap(events, rc.heatmap_radius, grid)));
  }
  out.write("stats.csv", stats_csv(stats));

  if (plan.dump_visibility) {
    std::string vis = "frame,observer,target\n";
    for (std::size_t f = 0; f < scenario.frame_count(); ++f) {
      const auto rel = effective_visibility(f, scenario, v, rc.risk);
      for (const auto & [o, t] : rel.pairs()) {
        vis += fmt::format("{},{},{}\n", rel.frame(), scenario.agent(o).id, scenario.agent(t).id);
      }
    }
    out.write("visibility.csv", vis);
  }
}

void run_penetration(const SweepPlan & plan, const Scenario & scenario, Outputs & out)
{
  const RunConfig & rc = plan.config;
  const Paradigm par = effective_paradigm(plan);
  const auto cells = sweep(scenario, rc.risk, rc, std::span(&par, 1), effective_fov_mode(plan), &out);

  std::string table = "scenario,pair_type,p,normalized_pct\n";
  std::vector<GroupStats> stats;
  for (PairType g : groups_of(rc.pair_filter)) {
    const double base = top_decile_or_zero(cells.front(), g);
    for (const auto & cell : cells) {
      const auto rtls = mean_agent_rtls(cell.reps, g);
      const auto values = rtl_values(rtls);
      const auto st = describe(fmt::format("{}@{}", to_string(g), p_label(cell.p)), values);
      const double top = values.empty() ? 0.0 : st.top10;
      table += fmt::format("{},{},{},{}\n", plan.name, to_string(g), num(cell.p), num(normalized_reduction(top, base).value));
      stats.push_back(st);
      out.write(fmt::format("ccdf_{}_{}.csv", p_label(cell.p), to_string(g)), ccdf_csv(values));
    }
  }
  out.write("penetration.csv", table);
  out.write("stats.csv", stats_csv(stats));

  std::string rtl_csv = "p,agent_id,rtl_ms,risk_level\n";
  for (const auto & cell : cells) {
    for (const auto & a : mean_agent_rtls(cell.reps, std::nullopt)) {
      rtl_csv += fmt::format(
        "{},{},{},{}\n", num(cell.p), scenario.agent(a.agent).id, num(a.rtl_ms), to_string(risk_level(a.rtl_ms, rc.risk)));
    }
  }
  out.write("rtl.csv", rtl_csv);
}

void run_paradigms(const SweepPlan & plan, const Scenario & scenario, Outputs & out)
{
  const RunConfig & rc = plan.config;
  const std::array<Paradigm, 2> pars{Paradigm::Symmetric, Paradigm::Asymmetric};
  const auto cells = sweep(scenario, rc.risk, rc, pars, effective_fov_mode(plan), &out);
  check_paradigm_order(cells, scenario);

  std::string table = "scenario,pair_type,paradigm,p,top10_mean_ms,normalized_pct\n";
  std::vector<GroupStats> stats;
  for (PairType g : groups_of(rc.pair_filter)) {
    const double base = top_decile_or_zero(cells.front(), g);
    for (Paradigm par : pars) {
      for (const auto & cell : cells) {
        if (cell.paradigm != par && cell.paradigm != Paradigm::None) {
          continue;
        }
        const auto values = rtl_values(mean_agent_rtls(cell.reps, g));
        const auto st = describe(fmt::format("{}@{}@{}", to_string(g), to_string(par), p_label(cell.p)), values);
        const double top = values.empty() ? 0.0 : st.top10;
        table += fmt::format(
          "{},{},{},{},{},{}\n", plan.name, to_string(g), to_string(par), num(cell.p), num(top),
          num(normalized_reduction(top, base).value));
        stats.push_back(st);
        out.write(fmt::format("ccdf_{}_{}_{}.csv", to_string(par), p_label(cell.p), to_string(g)), ccdf_csv(values));
      }
    }
  }
  out.write("paradigm.csv", table);
  out.write("stats.csv", stats_csv(stats));
}

void run_sensitivity_study(const SweepPlan & plan, const Scenario & scenario, Outputs & out)
{
  const RunConfig & rc = plan.config;
  const std::array<Paradigm, 2> pars{Paradigm::Symmetric, Paradigm::Asymmetric};
  std::string table = "parameter,pair_type,paradigm,p,top10_mean_ms\n";
  bool first = true;
  for (const auto & sc : sensitivity_cases(rc.risk)) {
    logger()->info("sensitivity case {}", sc.label);
    const auto cells = sweep(scenario, sc.config, rc, pars, effective_fov_mode(plan), first ? &out : nullptr);
    first = false;
    check_paradigm_order(cells, scenario);
    for (PairType g : groups_of(rc.pair_filter)) {
      for (Paradigm par : pars) {
        for (const auto & cell : cells) {
          if (cell.paradigm != par && cell.paradigm != Paradigm::None) {
            continue;
          }
          const auto values = rtl_values(mean_agent_rtls(cell.reps, g));
          table += fmt::format(
            "{},{},{},{},{}\n", sc.label, to_string(g), to_string(par), num(cell.p),
            num(values.empty() ? 0.0 : top_decile_mean(values)));
        }
      }
    }
  }
  out.write("sensitivity.csv", table);
}

std::filesystem::path resolve(const std::filesystem::path & base, const std::string & p)
{
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value)
{
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
    throw InputError(fmt::format("option '{}' expects a non-negative integer, got '{}'", key, value));
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value)
{
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
    throw InputError(fmt::format("option '{}' expects a number, got '{}'", key, value));
  }
  return out;
}

}  // namespace

std::string_view to_string(Experiment e)
{
  switch (e) {
    case Experiment::Baseline:
      return "baseline";
    case Experiment::PenetrationSweep:
      return "penetration_sweep";
    case Experiment::ParadigmCompare:
      return "paradigm_compare";
    case Experiment::Sensitivity:
      return "sensitivity";
  }
  return "baseline";
}

std::optional<Experiment> parse_experiment(std::string_view s)
{
  for (Experiment e : {Experiment::Baseline, Experiment::PenetrationSweep, Experiment::ParadigmCompare,
                       Experiment::Sensitivity}) {
    if (to_string(e) == s) {
      return e;
    }
  }
  return std::nullopt;
}

SweepPlan parse_plan_text(std::string_view text, const std::filesystem::path & base_dir)
{
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error & e) {
    throw InputError(fmt::format("plan: invalid JSON: {}", e.what()));
  }
  if (!doc.is_object()) {
    throw InputError("plan must be a JSON object");
  }
  auto str = [&](const char * key) -> std::optional<std::string> {
    if (!doc.contains(key)) {
      return std::nullopt;
    }
    if (!doc[key].is_string()) {
      throw InputError(fmt::format("plan field '{}' must be a string", key));
    }
    return doc[key].get<std::string>();
  };
  for (const auto & [key, value] : doc.items()) {
    static const std::array<std::string_view, 9> known{
      "name", "scenario", "template", "template_seed", "map", "config", "experiment", "overrides", "dump_visibility"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InputError(fmt::format("unknown plan field '{}'", key));
    }
  }

  SweepPlan plan;
  if (auto n = str("name")) {
    plan.name = *n;
  }
  const auto scenario = str("scenario");
  const auto tmpl = str("template");
  if (scenario.has_value() == tmpl.has_value()) {
    throw InputError("plan needs exactly one of 'scenario' or 'template'");
  }
  if (scenario) {
    plan.scenario_path = resolve(base_dir, *scenario);
  } else {
    plan.template_name = *tmpl;
    if (doc.contains("template_seed")) {
      if (!doc["template_seed"].is_number_unsigned()) {
        throw InputError("plan field 'template_seed' must be a non-negative integer");
      }
      plan.template_seed = doc["template_seed"].get<std::uint64_t>();
    }
  }
  if (auto m = str("map")) {
    plan.map_path = resolve(base_dir, *m);
  }
  if (auto e = str("experiment")) {
    const auto exp = parse_experiment(*e);
    if (!exp) {
      throw InputError(fmt::format("unknown experiment '{}'", *e));
    }
    plan.experiment = *exp;
  }
  if (auto c = str("config")) {
    plan.config = parse_config(resolve(base_dir, *c));
  }
  if (doc.contains("overrides")) {
    if (!doc["overrides"].is_object()) {
      throw InputError("plan field 'overrides' must be an object");
    }
    plan.config = parse_config_text(doc["overrides"].dump(), plan.config);
  }
  if (doc.contains("dump_visibility")) {
    if (!doc["dump_visibility"].is_boolean()) {
      throw InputError("plan field 'dump_visibility' must be a boolean");
    }
    plan.dump_visibility = doc["dump_visibility"].get<bool>();
  }
  const std::filesystem::path out(plan.config.output_dir);
  if (out.is_relative()) {
    plan.config.output_dir = (base_dir / out).lexically_normal().string();
  }
  return plan;
}

SweepPlan load_plan(const std::filesystem::path & path)
{
  const std::string text = read_file(path, "plan file");
  try {
    return parse_plan_text(text, path.parent_path());
  } catch (const InputError & e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void set_plan_option(SweepPlan & plan, std::string_view key, std::string_view value)
{
  RunConfig & c = plan.config;
  if (key == "penetration") {
    std::vector<double> rates;
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto comma = value.find(',', start);
      const auto item = value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      rates.push_back(parse_real(key, item));
      if (comma == std::string_view::npos) {
        break;
      }
      start = comma + 1;
    }
    c.penetration_rates = rates;
  } else if (key == "seed") {
    c.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "reps") {
    c.repetitions = parse_integer<std::size_t>(key, value);
  } else if (key == "threads") {
    c.threads = parse_integer<unsigned>(key, value);
  } else if (key == "paradigm") {
    c.paradigm = parse_paradigm(value);
    if (!c.paradigm) {
      throw InputError(fmt::format("unknown paradigm '{}'", value));
    }
  } else if (key == "fov_mode") {
    c.fov_mode = parse_fov_mode(value);
    if (!c.fov_mode) {
      throw InputError(fmt::format("unknown fov_mode '{}'", value));
    }
  } else if (key == "pair_filter") {
    const auto f = parse_pair_filter(value);
    if (!f) {
      throw InputError(fmt::format("unknown pair_filter '{}'", value));
    }
    c.pair_filter = *f;
  } else if (key == "out") {
    c.output_dir = std::string(value);
  } else if (key == "dump_visibility") {
    if (value != "true" && value != "false") {
      throw InputError("option 'dump_visibility' expects true or false");
    }
    plan.dump_visibility = value == "true";
  } else {
    throw InputError(fmt::format("unknown option '{}'", key));
  }
  validate_run_config(c);
}

Scenario load_scenario(const SweepPlan & plan)
{
  const RunConfig & c = plan.config;
  Scenario s = plan.scenario_path.empty()
                 ? generate_scenario(plan.template_name, plan.template_seed)
                 : parse_trajectory(plan.scenario_path, c.tick_seconds, c.risk.motion_threshold);
  if (plan.map_path) {
    s.set_map(parse_map(*plan.map_path));
  }
  return s;
}

Paradigm effective_paradigm(const SweepPlan & plan)
{
  if (plan.config.paradigm) {
    return *plan.config.paradigm;
  }
  return plan.experiment == Experiment::Baseline ? Paradigm::None : Paradigm::Symmetric;
}

FovMode effective_fov_mode(const SweepPlan & plan)
{
  if (plan.config.fov_mode) {
    return *plan.config.fov_mode;
  }
  switch (plan.experiment) {
    case Experiment::Baseline:
      return FovMode::All120;
    case Experiment::PenetrationSweep:
      return FovMode::Homogeneous360;
    case Experiment::ParadigmCompare:
    case Experiment::Sensitivity:
      return FovMode::Heterogeneous120_360;
  }
  return FovMode::All120;
}

std::vector<AgentRtl> mean_agent_rtls(std::span<const RiskReport> reports, std::optional<PairType> group)
{
  if (reports.empty()) {
    return {};
  }
  std::vector<AgentRtl> acc = reports.front().agent_rtls(group);
  std::vector<std::vector<double>> samples(acc.size());
  for (const auto & report : reports) {
    const auto next = report.agent_rtls(group);
    if (next.size() != acc.size()) {
      throw InvariantError("repetitions disagree on the agent sample");
    }
    for (std::size_t k = 0; k < acc.size(); ++k) {
      if (next[k].agent != acc[k].agent) {
        throw InvariantError("repetitions disagree on the agent sample");
      }
      samples[k].push_back(next[k].rtl_ms);
    }
  }
  // Summing in sorted order makes the mean independent of repetition order.
  for (std::size_t k = 0; k < acc.size(); ++k) {
    std::sort(samples[k].begin(), samples[k].end());
    double sum = 0.0;
    for (double v : samples[k]) {
      sum += v;
    }
    acc[k].rtl_ms = sum / static_cast<double>(reports.size());
  }
  return acc;
}

std::vector<double> rtl_values(std::span<const AgentRtl> rtls)
{
  std::vector<double> v;
  v.reserve(rtls.size());
  for (const auto & a : rtls) {
    v.push_back(a.rtl_ms);
  }
  return v;
}

std::vector<SensitivityCase> sensitivity_cases(const RiskConfig & base)
{
  std::vector<SensitivityCase> out;
  auto add = [&](std::string label, auto edit) {
    RiskConfig c = base;
    edit(c);
    out.push_back({std::move(label), c});
  };
  add("Baseline", [](RiskConfig &) {});
  add("K1", [](RiskConfig & c) { c.k_overlap_side = 0.8; c.k_overlap_noside = 0.6; });
  add("K2", [](RiskConfig & c) { c.k_overlap_side = 5.0; c.k_overlap_noside = 3.0; });
  add("K3", [](RiskConfig & c) { c.k_approach_side = 0.1; c.k_approach_noside = 0.08; });
  add("K4", [](RiskConfig & c) { c.k_approach_side = 0.8; c.k_approach_noside = 0.6; });
  add("K5", [](RiskConfig & c) { c.k_static_approach = 0.08; c.k_static_separate = 0.05; });
  add("M_s", [](RiskConfig & c) { c.buffer_margin = 0.1; });
  add("M_l", [](RiskConfig & c) { c.buffer_margin = 0.5; });
  add("D_s", [](RiskConfig & c) { c.prediction_horizon = 0.1; });
  add("D_l", [](RiskConfig & c) { c.prediction_horizon = 1.0; });
  add("Ks_alt", [](RiskConfig & c) { c.k_static_approach = 0.4; c.k_static_separate = 0.2; });
  return out;
}

RunSummary run_plan(const SweepPlan & plan)
{
  RunConfig checked = plan.config;
  validate_run_config(checked);
  const Scenario scenario = load_scenario(plan);
  scenario.validate();
  logger()->info(
    "{}: {} frames, {} agents, experiment {}", plan.name, scenario.frame_count(), scenario.agent_count(),
    to_string(plan.experiment));

  Outputs out(plan.config.output_dir);
  switch (plan.experiment) {
    case Experiment::Baseline:
      run_baseline(plan, scenario, out);
      break;
    case Experiment::PenetrationSweep:
      run_penetration(plan, scenario, out);
      break;
    case Experiment::ParadigmCompare:
      run_paradigms(plan, scenario, out);
      break;
    case Experiment::Sensitivity:
      run_sensitivity_study(plan, scenario, out);
      break;
  }
  RunSummary summary;
  summary.config_hash = config_hash(plan.config);
  summary.files = out.files();
  out.write("manifest.json", manifest(plan, scenario, summary.config_hash, summary.files));
  summary.files = out.files();
  return summary;
}

}  // namespace rtlsim
