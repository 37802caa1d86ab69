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

#include "rtlsim/ingest.hpp"

#include "rtlsim/geometry.hpp"

#include <fmt/format.h>

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace rtlsim
{

namespace
{

using Json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 10> kColumns{
  "frame", "agent_id", "class", "x", "y", "vx", "vy", "heading", "length", "width"};

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) {
      return out;
    }
    start = pos + 1;
  }
}

template <typename T>
T parse_number(std::string_view field, std::string_view column, std::size_t row)
{
  T value{};
  const char * end = field.data() + field.size();
  if (!field.empty() && field.front() == '+') {
    field.remove_prefix(1);
  }
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw InputError(fmt::format("malformed value '{}' in column '{}' at row {}", field, column, row));
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw InputError(fmt::format("non-finite value in column '{}' at row {}", column, row));
    }
  }
  return value;
}

double json_number(const Json & v, std::string_view key)
{
  if (!v.is_number()) {
    throw InputError(fmt::format("config field '{}' must be a number", key));
  }
  return v.get<double>();
}

Json parse_json(std::string_view text, std::string_view what)
{
  if (trim(text).empty()) {
    return Json::object();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error & e) {
    throw InputError(fmt::format("{}: invalid JSON: {}", what, e.what()));
  }
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

std::uint64_t fnv1a64(std::string_view bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string read_file(const std::filesystem::path & path, std::string_view what)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError(fmt::format("cannot open {} '{}'", what, path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario parse_trajectory_text(std::string_view text, double tick_seconds, double motion_threshold)
{
  std::vector<TrajectoryRecord> records;
  std::array<std::optional<std::size_t>, kColumns.size()> col;
  std::size_t width = 0;
  bool header_seen = false;
  std::size_t row = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const std::string_view line =
      text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++row;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      width = fields.size();
      for (std::size_t f = 0; f < fields.size(); ++f) {
        const auto it = std::find(kColumns.begin(), kColumns.end(), fields[f]);
        if (it == kColumns.end()) {
          throw InputError(fmt::format("unknown column '{}' in header at row {}", fields[f], row));
        }
        auto & slot = col[static_cast<std::size_t>(it - kColumns.begin())];
        if (slot) {
          throw InputError(fmt::format("duplicate column '{}' in header at row {}", fields[f], row));
        }
        slot = f;
      }
      for (std::size_t c = 0; c < kColumns.size(); ++c) {
        if (!col[c] && kColumns[c] != "heading") {
          throw InputError(fmt::format("missing column '{}' in header", kColumns[c]));
        }
      }
      continue;
    }
    if (fields.size() != width) {
      throw InputError(
        fmt::format("expected {} fields but found {} at row {}", width, fields.size(), row));
    }
    auto field = [&](std::size_t c) { return fields[*col[c]]; };
    TrajectoryRecord r;
    r.frame = parse_number<std::int64_t>(field(0), kColumns[0], row);
    r.agent_id = std::string(field(1));
    if (r.agent_id.empty()) {
      throw InputError(fmt::format("empty agent_id at row {}", row));
    }
    const auto cls = parse_class_label(field(2));
    if (!cls) {
      throw InputError(fmt::format("unknown class '{}' at row {}", field(2), row));
    }
    r.agent_class = *cls;
    r.position = {parse_number<double>(field(3), kColumns[3], row), parse_number<double>(field(4), kColumns[4], row)};
    r.velocity = {parse_number<double>(field(5), kColumns[5], row), parse_number<double>(field(6), kColumns[6], row)};
    if (col[7] && !field(7).empty()) {
      r.heading = parse_number<double>(field(7), kColumns[7], row);
    }
    r.length = parse_number<double>(field(8), kColumns[8], row);
    r.width = parse_number<double>(field(9), kColumns[9], row);
    records.push_back(std::move(r));
  }
  if (!header_seen) {
    throw InputError("trajectory file is empty (header row required)");
  }
  Scenario s = Scenario::from_records(std::move(records), {}, tick_seconds, motion_threshold);
  s.validate();
  return s;
}

Scenario parse_trajectory(const std::filesystem::path & path, double tick_seconds, double motion_threshold)
{
  const std::string text = read_file(path, "trajectory file");
  try {
    return parse_trajectory_text(text, tick_seconds, motion_threshold);
  } catch (const InputError & e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::vector<Polygon> parse_map_text(std::string_view text)
{
  const Json doc = parse_json(text, "map");
  std::vector<Polygon> out;
  if (doc.empty()) {
    return out;
  }
  if (!doc.is_object() || !doc.contains("polygons") || !doc["polygons"].is_array()) {
    throw InputError("map must be an object with a 'polygons' array");
  }
  for (const auto & p : doc["polygons"]) {
    Polygon poly;
    poly.name = fmt::format("polygon_{}", out.size());
    if (!p.is_object() || !p.contains("vertices") || !p["vertices"].is_array()) {
      throw InputError(fmt::format("polygon '{}' needs a 'vertices' array", poly.name));
    }
    if (p.contains("name")) {
      if (!p["name"].is_string()) {
        throw InputError(fmt::format("polygon '{}' has a non-string name", poly.name));
      }
      poly.name = p["name"].get<std::string>();
    }
    for (const auto & v : p["vertices"]) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw InputError(fmt::format("polygon '{}': each vertex must be [x, y]", poly.name));
      }
      const Vec2 pt{v[0].get<double>(), v[1].get<double>()};
      if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) {
        throw InputError(fmt::format("polygon '{}': non-finite vertex", poly.name));
      }
      poly.vertices.push_back(pt);
    }
    std::vector<Vec2> distinct = poly.vertices;
    std::sort(distinct.begin(), distinct.end(), [](Vec2 a, Vec2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) {
      throw InputError(fmt::format("degenerate polygon '{}'", poly.name));
    }
    if (!geometry::is_simple(poly.vertices)) {
      throw InputError(fmt::format("self-intersecting polygon '{}'", poly.name));
    }
    if (geometry::area(poly.vertices) == 0.0) {
      throw InputError(fmt::format("degenerate polygon '{}'", poly.name));
    }
    out.push_back(std::move(poly));
  }
  return out;
}

std::vector<Polygon> parse_map(const std::filesystem::path & path)
{
  const std::string text = read_file(path, "map file");
  try {
    return parse_map_text(text);
  } catch (const InputError & e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

RunConfig parse_config_text(std::string_view text, const RunConfig & base)
{
  const Json doc = parse_json(text, "config");
  if (!doc.is_object()) {
    throw InputError("config must be a JSON object");
  }
  RunConfig c = base;
  RiskConfig & r = c.risk;
  const std::map<std::string_view, double *> risk_fields{
    {"k_overlap_side", &r.k_overlap_side},
    {"k_overlap_noside", &r.k_overlap_noside},
    {"k_approach_side", &r.k_approach_side},
    {"k_approach_noside", &r.k_approach_noside},
    {"k_separate", &r.k_separate},
    {"k_static_approach", &r.k_static_approach},
    {"k_static_separate", &r.k_static_separate},
    {"prediction_horizon", &r.prediction_horizon},
    {"lateral_sway_coeff", &r.lateral_sway_coeff},
    {"base_lateral_margin", &r.base_lateral_margin},
    {"buffer_margin", &r.buffer_margin},
    {"perception_range", &r.perception_range},
    {"comm_range", &r.comm_range},
    {"fov_connected", &r.fov_connected},
    {"fov_nonconnected", &r.fov_nonconnected},
    {"motion_threshold", &r.motion_threshold},
    {"min_distance_clamp", &r.min_distance_clamp},
    {"high_risk_threshold", &r.high_risk_threshold},
    {"medium_risk_threshold", &r.medium_risk_threshold},
    {"tick_seconds", &c.tick_seconds},
    {"heatmap_radius", &c.heatmap_radius},
    {"heatmap_cell", &c.heatmap_cell},
  };
  for (const auto & [key, value] : doc.items()) {
    if (auto it = risk_fields.find(key); it != risk_fields.end()) {
      *it->second = json_number(value, key);
    } else if (key == "fov_connected_deg") {
      r.fov_connected = deg_to_rad(json_number(value, key));
    } else if (key == "fov_nonconnected_deg") {
      r.fov_nonconnected = deg_to_rad(json_number(value, key));
    } else if (key == "penetration_rates") {
      if (!value.is_array()) {
        throw InputError("config field 'penetration_rates' must be an array");
      }
      c.penetration_rates.clear();
      for (const auto & p : value) {
        c.penetration_rates.push_back(json_number(p, key));
      }
    } else if (key == "repetitions") {
      if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0) {
        throw InputError("config field 'repetitions' must be a positive integer");
      }
      c.repetitions = value.get<std::size_t>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        throw InputError("config field 'seed' must be a non-negative integer");
      }
      c.seed = value.get<std::uint64_t>();
    } else if (key == "threads") {
      if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0) {
        throw InputError("config field 'threads' must be a positive integer");
      }
      c.threads = value.get<unsigned>();
    } else if ((key == "paradigm" || key == "fov_mode") && value.is_null()) {
      if (key == "paradigm") {
        c.paradigm.reset();
      } else {
        c.fov_mode.reset();
      }
    } else if (key == "paradigm" || key == "fov_mode" || key == "pair_filter" || key == "output_dir") {
      if (!value.is_string()) {
        throw InputError(fmt::format("config field '{}' must be a string", key));
      }
      const auto s = value.get<std::string>();
      if (key == "output_dir") {
        c.output_dir = s;
      } else if (key == "paradigm") {
        c.paradigm = parse_paradigm(s);
        if (!c.paradigm) {
          throw InputError(fmt::format("unknown paradigm '{}'", s));
        }
      } else if (key == "fov_mode") {
        c.fov_mode = parse_fov_mode(s);
        if (!c.fov_mode) {
          throw InputError(fmt::format("unknown fov_mode '{}'", s));
        }
      } else {
        const auto f = parse_pair_filter(s);
        if (!f) {
          throw InputError(fmt::format("unknown pair_filter '{}'", s));
        }
        c.pair_filter = *f;
      }
    } else {
      throw InputError(fmt::format("unknown config field '{}'", key));
    }
  }
  validate_run_config(c);
  return c;
}

RunConfig parse_config(const std::filesystem::path & path, const RunConfig & base)
{
  const std::string text = read_file(path, "config file");
  try {
    return parse_config_text(text, base);
  } catch (const InputError & e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void validate_run_config(RunConfig & c)
{
  c.risk.validate();
  for (double p : c.penetration_rates) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InputError(fmt::format("penetration rate must lie in [0, 1], got {}", p));
    }
  }
  std::sort(c.penetration_rates.begin(), c.penetration_rates.end());
  c.penetration_rates.erase(
    std::unique(c.penetration_rates.begin(), c.penetration_rates.end()), c.penetration_rates.end());
  if (c.repetitions == 0) {
    throw InputError("repetitions must be at least 1");
  }
  if (c.threads == 0) {
    throw InputError("threads must be at least 1");
  }
  if (!(c.tick_seconds > 0.0) || !std::isfinite(c.tick_seconds)) {
    throw InputError("tick_seconds must be positive");
  }
  if (!(c.heatmap_radius >= 0.0) || !std::isfinite(c.heatmap_radius)) {
    throw InputError("heatmap_radius must be non-negative");
  }
  if (!(c.heatmap_cell > 0.0) || !std::isfinite(c.heatmap_cell)) {
    throw InputError("heatmap_cell must be positive");
  }
}

std::string write_trajectory(const Scenario & scenario)
{
  std::string out = "frame,agent_id,class,x,y,vx,vy,heading,length,width\n";
  for (std::size_t f = 0; f < scenario.frame_count(); ++f) {
    for (const auto & s : scenario.states_at(f)) {
      const auto & info = scenario.agent(s.agent);
      out += fmt::format(
        "{},{},{},{},{},{},{},{},{},{}\n", s.frame, info.id, class_label(info.agent_class),
        s.position.x, s.position.y, s.velocity.x, s.velocity.y, s.heading, s.length, s.width);
    }
  }
  return out;
}

std::string write_map(const std::vector<Polygon> & map)
{
  Json doc;
  doc["polygons"] = Json::array();
  for (const auto & p : map) {
    Json verts = Json::array();
    for (const auto & v : p.vertices) {
      verts.push_back({v.x, v.y});
    }
    doc["polygons"].push_back({{"name", p.name}, {"vertices", verts}});
  }
  return doc.dump(2) + "\n";
}

std::string config_to_json(const RunConfig & c)
{
  const RiskConfig & r = c.risk;
  Json doc;
  doc["k_overlap_side"] = r.k_overlap_side;
  doc["k_overlap_noside"] = r.k_overlap_noside;
  doc["k_approach_side"] = r.k_approach_side;
  doc["k_approach_noside"] = r.k_approach_noside;
  doc["k_separate"] = r.k_separate;
  doc["k_static_approach"] = r.k_static_approach;
  doc["k_static_separate"] = r.k_static_separate;
  doc["prediction_horizon"] = r.prediction_horizon;
  doc["lateral_sway_coeff"] = r.lateral_sway_coeff;
  doc["base_lateral_margin"] = r.base_lateral_margin;
  doc["buffer_margin"] = r.buffer_margin;
  doc["perception_range"] = r.perception_range;
  doc["comm_range"] = r.comm_range;
  doc["fov_connected"] = r.fov_connected;
  doc["fov_nonconnected"] = r.fov_nonconnected;
  doc["motion_threshold"] = r.motion_threshold;
  doc["min_distance_clamp"] = r.min_distance_clamp;
  doc["high_risk_threshold"] = r.high_risk_threshold;
  doc["medium_risk_threshold"] = r.medium_risk_threshold;
  doc["penetration_rates"] = c.penetration_rates;
  doc["repetitions"] = c.repetitions;
  doc["seed"] = c.seed;
  doc["paradigm"] = c.paradigm ? Json(std::string(to_string(*c.paradigm))) : Json(nullptr);
  doc["fov_mode"] = c.fov_mode ? Json(std::string(to_string(*c.fov_mode))) : Json(nullptr);
  doc["pair_filter"] = std::string(to_string(c.pair_filter));
  doc["output_dir"] = c.output_dir;
  doc["tick_seconds"] = c.tick_seconds;
  doc["heatmap_radius"] = c.heatmap_radius;
  doc["heatmap_cell"] = c.heatmap_cell;
  return doc.dump(2);
}

std::string config_hash(const RunConfig & config)
{
  RunConfig c = config;
  c.output_dir.clear();
  return hex64(fnv1a64(config_to_json(c)));
}

}  // namespace rtlsim
