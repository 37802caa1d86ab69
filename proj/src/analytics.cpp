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

#include "rtlsim/analytics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>

namespace rtlsim
{

namespace
{

constexpr double kMadToSigma = 1.4826;

std::vector<double> sorted_copy(std::span<const double> samples)
{
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  return v;
}

double sorted_quantile(const std::vector<double> & v, double q)
{
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

double quantile(std::span<const double> samples, double q)
{
  if (samples.empty()) {
    throw InputError("quantile of an empty sample");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw InputError(fmt::format("quantile level must lie in [0, 1], got {}", q));
  }
  return sorted_quantile(sorted_copy(samples), q);
}

double median(std::span<const double> samples) { return quantile(samples, 0.5); }

Statistic cqd(std::span<const double> samples)
{
  const auto v = sorted_copy(samples);
  if (v.empty()) {
    return Statistic::undefined("empty sample");
  }
  const double q1 = sorted_quantile(v, 0.25);
  const double q3 = sorted_quantile(v, 0.75);
  if (!(q3 + q1 > 0.0)) {
    return Statistic::undefined("Q1 + Q3 is zero");
  }
  return Statistic::of((q3 - q1) / (q3 + q1));
}

Statistic cv_mad(std::span<const double> samples)
{
  if (samples.empty()) {
    return Statistic::undefined("empty sample");
  }
  const double med = median(samples);
  if (!(med > 0.0)) {
    return Statistic::undefined("median is zero");
  }
  std::vector<double> dev;
  dev.reserve(samples.size());
  for (double x : samples) {
    dev.push_back(std::abs(x - med));
  }
  return Statistic::of(100.0 * kMadToSigma * median(dev) / med);
}

double top_decile_mean(std::span<const double> samples)
{
  if (samples.empty()) {
    throw InputError("top-decile mean of an empty sample");
  }
  auto v = sorted_copy(samples);
  const std::size_t k = (v.size() + 9) / 10;
  double sum = 0.0;
  for (std::size_t n = v.size() - k; n < v.size(); ++n) {
    sum += v[n];
  }
  return sum / static_cast<double>(k);
}

Statistic normalized_reduction(double value, double baseline)
{
  if (!(baseline > 0.0)) {
    return Statistic::undefined("baseline is zero");
  }
  return Statistic::of(100.0 * value / baseline);
}

Ccdf build_ccdf(std::span<const double> samples)
{
  if (samples.empty()) {
    throw InputError("CCDF of an empty sample");
  }
  Ccdf c;
  c.sorted = sorted_copy(samples);
  const auto n = static_cast<double>(c.sorted.size());
  for (std::size_t k = 0; k < c.sorted.size(); ++k) {
    if (k + 1 < c.sorted.size() && c.sorted[k + 1] == c.sorted[k]) {
      continue;  // emit once, at the last copy of a tied value
    }
    const auto greater = static_cast<double>(c.sorted.size() - k - 1);
    c.points.emplace_back(c.sorted[k], greater / n);
  }
  return c;
}

GridSpec grid_covering(const Scenario & scenario, double cell_size, double padding)
{
  if (!(cell_size > 0.0)) {
    throw InputError("heatmap cell size must be positive");
  }
  double lo_x = 0.0;
  double lo_y = 0.0;
  double hi_x = 0.0;
  double hi_y = 0.0;
  bool first = true;
  for (std::size_t f = 0; f < scenario.frame_count(); ++f) {
    for (const auto & s : scenario.states_at(f)) {
      if (first) {
        lo_x = hi_x = s.position.x;
        lo_y = hi_y = s.position.y;
        first = false;
      }
      lo_x = std::min(lo_x, s.position.x);
      lo_y = std::min(lo_y, s.position.y);
      hi_x = std::max(hi_x, s.position.x);
      hi_y = std::max(hi_y, s.position.y);
    }
  }
  GridSpec g;
  g.cell_size = cell_size;
  g.origin = {std::floor((lo_x - padding) / cell_size) * cell_size,
              std::floor((lo_y - padding) / cell_size) * cell_size};
  g.cols = static_cast<std::size_t>(std::ceil((hi_x + padding - g.origin.x) / cell_size)) + 1;
  g.rows = static_cast<std::size_t>(std::ceil((hi_y + padding - g.origin.y) / cell_size)) + 1;
  return g;
}

HeatmapGrid accumulate_heatmap(std::span<const HeatEvent> events, double radius, const GridSpec & spec)
{
  HeatmapGrid h;
  h.spec = spec;
  h.raw.assign(spec.rows * spec.cols, 0.0);
  h.normalized.assign(spec.rows * spec.cols, 0.0);
  if (spec.rows == 0 || spec.cols == 0) {
    return h;
  }
  auto clamp_index = [](double v, std::size_t n) {
    return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(n - 1)));
  };
  for (const auto & e : events) {
    const double cs = spec.cell_size;
    const std::size_t c0 = clamp_index(std::floor((e.position.x - radius - spec.origin.x) / cs), spec.cols);
    const std::size_t c1 = clamp_index(std::ceil((e.position.x + radius - spec.origin.x) / cs), spec.cols);
    const std::size_t r0 = clamp_index(std::floor((e.position.y - radius - spec.origin.y) / cs), spec.rows);
    const std::size_t r1 = clamp_index(std::ceil((e.position.y + radius - spec.origin.y) / cs), spec.rows);
    for (std::size_t r = r0; r <= r1; ++r) {
      for (std::size_t c = c0; c <= c1; ++c) {
        if (distance(spec.cell_center(r, c), e.position) <= radius) {
          h.raw[r * spec.cols + c] += e.rtl_ms;
        }
      }
    }
  }
  const double peak = *std::max_element(h.raw.begin(), h.raw.end());
  if (peak > 0.0) {
    for (std::size_t k = 0; k < h.raw.size(); ++k) {
      h.normalized[k] = h.raw[k] / peak;
    }
  }
  return h;
}

std::vector<HeatEvent> high_risk_events(
  const RiskReport & report, const Scenario & scenario, double threshold_ms,
  std::optional<PairType> group)
{
  std::vector<HeatEvent> out;
  for (const auto & p : report.pairs) {
    if ((group && p.type != *group) || p.event_count == 0 || !(p.f_ms > threshold_ms)) {
      continue;
    }
    for (AgentIndex a : {p.i, p.j}) {
      if (const auto * st = scenario.find_state(p.worst.peak, a)) {
        out.push_back({st->position, 0.5 * p.f_ms});
      }
    }
  }
  return out;
}

}  // namespace rtlsim
