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

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace rtlsim;
using rtlsim::test::car;

namespace
{

double oracle_quantile(std::vector<double> v, double q)
{
  std::sort(v.begin(), v.end());
  double whole = 0.0;
  const double frac = std::modf(q * static_cast<double>(v.size() - 1), &whole);
  const auto k = static_cast<std::size_t>(whole);
  if (k + 1 >= v.size()) {
    return v.back();
  }
  return (1.0 - frac) * v[k] + frac * v[k + 1];
}

std::vector<double> iota_samples(int lo, int hi)
{
  std::vector<double> v;
  for (int k = lo; k <= hi; ++k) {
    v.push_back(k);
  }
  return v;
}

}  // namespace

TEST_CASE("quantiles")
{
  CHECK(quantile(std::vector<double>{0, 10}, 0.25) == 2.5);
  CHECK(quantile(std::vector<double>{5}, 0.9) == 5.0);
  CHECK(quantile(iota_samples(1, 7), 0.5) == 4.0);
  CHECK(median(std::vector<double>{4, 1, 3, 2}) == 2.5);
  CHECK_THROWS_AS(quantile({}, 0.5), InputError);
  CHECK_THROWS_AS(quantile(std::vector<double>{1}, 1.5), InputError);
}

TEST_CASE("quantile matches sort-and-interpolate")
{
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-100, 100);
  std::uniform_int_distribution<int> n(1, 60);
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> v(static_cast<std::size_t>(n(rng)));
    for (auto & x : v) {
      x = u(rng);
    }
    const double q = std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(quantile(v, q) == doctest::Approx(oracle_quantile(v, q)).epsilon(1e-12));
  }
}

TEST_CASE("quartile coefficient of dispersion")
{
  CHECK(cqd(std::vector<double>{0, 10}).value == doctest::Approx(0.5));
  CHECK(cqd(std::vector<double>{3, 3, 3}).value == 0.0);
  const auto zero = cqd(std::vector<double>{0, 0, 0});
  CHECK_FALSE(zero.defined());
  CHECK(std::isnan(zero.value));
  CHECK_FALSE(cqd({}).defined());
}

TEST_CASE("robust coefficient of variation")
{
  CHECK(cv_mad(std::vector<double>{1, 2, 3, 4, 100}).value == doctest::Approx(49.42).epsilon(0.0002));
  CHECK(std::abs(cv_mad(std::vector<double>{1, 2, 3, 4, 100}).value - 49.42) < 0.01);
  CHECK(cv_mad(std::vector<double>{7, 7, 7}).value == 0.0);
  CHECK_FALSE(cv_mad(std::vector<double>{0, 0, 0}).defined());
  CHECK(cv_mad(std::vector<double>{0, 0, 0}).undefined_reason->find("median") != std::string::npos);
}

TEST_CASE("dispersion is scale invariant")
{
  std::mt19937_64 rng(6);
  std::exponential_distribution<double> e(0.01);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> v(25);
    for (auto & x : v) {
      x = e(rng);
    }
    const double c = cqd(v).value;
    const double m = cv_mad(v).value;
    for (double lambda : {0.1, 3.0, 1000.0}) {
      std::vector<double> s(v);
      for (auto & x : s) {
        x *= lambda;
      }
      CHECK(std::abs(cqd(s).value - c) <= 1e-9);
      CHECK(std::abs(cv_mad(s).value - m) <= 1e-9);
    }
  }
}

TEST_CASE("top decile mean")
{
  CHECK(top_decile_mean(iota_samples(1, 10)) == 10.0);
  CHECK(top_decile_mean(iota_samples(1, 20)) == 19.5);
  CHECK(top_decile_mean(iota_samples(1, 11)) == 10.5);
  CHECK(top_decile_mean(std::vector<double>{4, 4, 4}) == 4.0);
  CHECK_THROWS_AS(top_decile_mean({}), InputError);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 500);
  for (int k = 0; k < 500; ++k) {
    std::vector<double> v(1 + k % 37);
    for (auto & x : v) {
      x = u(rng);
    }
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    CHECK(top_decile_mean(v) >= mean - 1e-9);
  }
}

TEST_CASE("normalized reduction")
{
  CHECK(normalized_reduction(42.6, 124.33).value == doctest::Approx(34.27).epsilon(0.0002));
  CHECK(normalized_reduction(124.33, 124.33).value == 100.0);
  CHECK(normalized_reduction(0.0, 124.33).value == 0.0);
  CHECK_FALSE(normalized_reduction(5.0, 0.0).defined());
}

TEST_CASE("empirical CCDF")
{
  const auto c = build_ccdf(std::vector<double>{3, 1, 2});
  REQUIRE(c.points.size() == 3);
  CHECK(c.points[0] == std::pair<double, double>{1.0, 2.0 / 3.0});
  CHECK(c.points[1] == std::pair<double, double>{2.0, 1.0 / 3.0});
  CHECK(c.points[2] == std::pair<double, double>{3.0, 0.0});
  const auto tie = build_ccdf(std::vector<double>{5, 5});
  REQUIRE(tie.points.size() == 1);
  CHECK(tie.points[0] == std::pair<double, double>{5.0, 0.0});
  CHECK_THROWS_AS(build_ccdf({}), InputError);
}

TEST_CASE("CCDF is non-increasing and ends at zero")
{
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> u(0, 30);
  for (int k = 0; k < 500; ++k) {
    std::vector<double> v(1 + k % 50);
    for (auto & x : v) {
      x = u(rng) * 10.0;
    }
    const auto c = build_ccdf(v);
    for (std::size_t p = 1; p < c.points.size(); ++p) {
      CHECK(c.points[p].first > c.points[p - 1].first);
      CHECK(c.points[p].second <= c.points[p - 1].second);
    }
    CHECK(c.points.back().second == 0.0);
    for (const auto & [value, fraction] : c.points) {
      const auto greater = std::count_if(v.begin(), v.end(), [&](double x) { return x > value; });
      CHECK(fraction == static_cast<double>(greater) / static_cast<double>(v.size()));
    }
  }
}

TEST_CASE("heatmap accumulation")
{
  GridSpec spec;
  spec.origin = {0, 0};
  spec.cell_size = 1.0;
  spec.cols = 5;
  spec.rows = 5;
  const Vec2 center = spec.cell_center(2, 2);
  {
    const std::vector<HeatEvent> one{{center, 100.0}};
    const auto h = accumulate_heatmap(one, 0.5, spec);
    CHECK(h.normalized_at(2, 2) == 1.0);
    CHECK(h.raw_at(2, 2) == 100.0);
    CHECK(std::accumulate(h.raw.begin(), h.raw.end(), 0.0) == 100.0);
  }
  {
    const std::vector<HeatEvent> two{{center, 100.0}, {center, 50.0}};
    const auto h = accumulate_heatmap(two, 0.5, spec);
    CHECK(h.raw_at(2, 2) == 150.0);
    CHECK(h.normalized_at(2, 2) == 1.0);
  }
  {
    const auto h = accumulate_heatmap({}, 5.0, spec);
    CHECK(std::all_of(h.raw.begin(), h.raw.end(), [](double x) { return x == 0.0; }));
    CHECK(std::all_of(h.normalized.begin(), h.normalized.end(), [](double x) { return x == 0.0; }));
  }
  {
    // Radius 1 reaches the four edge neighbours but not the diagonals.
    const std::vector<HeatEvent> one{{center, 10.0}};
    const auto h = accumulate_heatmap(one, 1.0, spec);
    CHECK(h.raw_at(1, 2) == 10.0);
    CHECK(h.raw_at(2, 3) == 10.0);
    CHECK(h.raw_at(3, 3) == 0.0);
    const std::vector<HeatEvent> far{{center, 10.0}, {spec.cell_center(0, 0), 40.0}};
    const auto g = accumulate_heatmap(far, 1.0, spec);
    CHECK(g.normalized_at(2, 2) == 0.25);
  }
}

TEST_CASE("heatmap matches a per-cell brute force")
{
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-3, 23);
  GridSpec spec;
  spec.origin = {-2, -1};
  spec.cell_size = 0.7;
  spec.cols = 30;
  spec.rows = 28;
  for (int k = 0; k < 20; ++k) {
    std::vector<HeatEvent> events(8);
    for (auto & e : events) {
      e = {{u(rng), u(rng)}, 50.0 + u(rng)};
    }
    const auto h = accumulate_heatmap(events, 3.0, spec);
    for (std::size_t r = 0; r < spec.rows; ++r) {
      for (std::size_t c = 0; c < spec.cols; ++c) {
        double expected = 0.0;
        for (const auto & e : events) {
          if (distance(spec.cell_center(r, c), e.position) <= 3.0) {
            expected += e.rtl_ms;
          }
        }
        CHECK(h.raw_at(r, c) == doctest::Approx(expected));
      }
    }
  }
}

TEST_CASE("grid covers every position")
{
  std::mt19937_64 rng(23);
  const auto s = test::random_scene(rng, 10, 20, 40.0);
  const auto g = grid_covering(s, 1.0, 5.0);
  for (std::size_t f = 0; f < s.frame_count(); ++f) {
    for (const auto & st : s.states_at(f)) {
      CHECK(st.position.x - 5.0 >= g.origin.x);
      CHECK(st.position.y - 5.0 >= g.origin.y);
      CHECK(st.position.x + 5.0 <= g.origin.x + g.cell_size * static_cast<double>(g.cols));
      CHECK(st.position.y + 5.0 <= g.origin.y + g.cell_size * static_cast<double>(g.rows));
    }
  }
}

TEST_CASE("high-risk events mark both agents with half the value")
{
  const auto s = Scenario::from_records({
    car(0, "a", {0, 0}), car(1, "a", {1, 0}), car(0, "b", {10, 0}), car(1, "b", {11, 0}),
    car(0, "c", {20, 0}), car(1, "c", {21, 0})});
  RiskReport r;
  PairResult big{0, 1, PairType::VehVeh, 300.0, 1, {}, {}};
  big.worst.peak = 1;
  PairResult small{2, 1, PairType::VehVeh, 150.0, 1, {}, {}};
  r.pairs = {big, small};
  const auto events = high_risk_events(r, s, 200.0);
  REQUIRE(events.size() == 2);
  CHECK(events[0].position == Vec2{1, 0});
  CHECK(events[1].position == Vec2{11, 0});
  CHECK(events[0].rtl_ms == 150.0);
  CHECK(high_risk_events(r, s, 100.0).size() == 4);
  CHECK(high_risk_events(r, s, 100.0, PairType::VehVru).empty());
}
