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

#ifndef RTLSIM__ANALYTICS_HPP_
#define RTLSIM__ANALYTICS_HPP_

#include "rtlsim/core.hpp"
#include "rtlsim/risk.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rtlsim
{

/// A statistic that may be undefined for degenerate samples (zero denominators).
struct Statistic
{
  double value = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::string> undefined_reason;

  bool defined() const { return !undefined_reason.has_value(); }
  static Statistic of(double v) { return {v, std::nullopt}; }
  static Statistic undefined(std::string why)
  {
    return {std::numeric_limits<double>::quiet_NaN(), std::move(why)};
  }
};

/// Linear interpolation between order statistics at rank q(N-1) (type 7).
double quantile(std::span<const double> samples, double q);
double median(std::span<const double> samples);

/// (Q3 - Q1) / (Q3 + Q1)
Statistic cqd(std::span<const double> samples);

/// 100 * 1.4826 * MAD / median, in percent.
Statistic cv_mad(std::span<const double> samples);

/// Mean of the ceil(N/10) largest values.
double top_decile_mean(std::span<const double> samples);

/// 100 * value / baseline, in percent.
Statistic normalized_reduction(double value, double baseline);

struct Ccdf
{
  std::vector<double> sorted;
  /// One point per distinct value: fraction of samples strictly greater.
  std::vector<std::pair<double, double>> points;
};

Ccdf build_ccdf(std::span<const double> samples);

struct GridSpec
{
  Vec2 origin;  // lower-left corner of cell (0, 0)
  double cell_size = 1.0;
  std::size_t cols = 0;
  std::size_t rows = 0;

  Vec2 cell_center(std::size_t row, std::size_t col) const
  {
    return {origin.x + (static_cast<double>(col) + 0.5) * cell_size,
            origin.y + (static_cast<double>(row) + 0.5) * cell_size};
  }
};

/// Grid covering every agent position of the scenario plus `padding` meters.
GridSpec grid_covering(const Scenario & scenario, double cell_size, double padding);

struct HeatmapGrid
{
  GridSpec spec;
  std::vector<double> raw;         // row-major, ms
  std::vector<double> normalized;  // raw / max(raw), or zeros

  double raw_at(std::size_t row, std::size_t col) const { return raw[row * spec.cols + col]; }
  double normalized_at(std::size_t row, std::size_t col) const
  {
    return normalized[row * spec.cols + col];
  }
};

struct HeatEvent
{
  Vec2 position;
  double rtl_ms = 0.0;
};

/// Each cell whose center lies within `radius` of an event adds that event's
/// RTL; the result is normalized by the grid maximum.
HeatmapGrid accumulate_heatmap(std::span<const HeatEvent> events, double radius, const GridSpec & spec);

/// Heat events for pairs whose F exceeds `threshold_ms`: both agents' positions
/// at the worst event's peak frame, each carrying half of F.
std::vector<HeatEvent> high_risk_events(
  const RiskReport & report, const Scenario & scenario, double threshold_ms,
  std::optional<PairType> group = std::nullopt);

}  // namespace rtlsim

#endif  // RTLSIM__ANALYTICS_HPP_
