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

#include "rtlsim/risk.hpp"

#include "rtlsim/geometry.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rtlsim;
using rtlsim::test::car;
using rtlsim::test::of_class;

namespace
{

AgentState state(AgentClass cls, Vec2 p, Vec2 v, double heading = 0.0, double length = 4.5, double width = 1.8)
{
  AgentState s;
  s.agent_class = cls;
  s.position = p;
  s.velocity = v;
  s.heading = heading;
  s.length = length;
  s.width = width;
  return s;
}

RiskSeries series_of(std::vector<double> values)
{
  RiskSeries s;
  s.values = std::move(values);
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    s.frames.push_back(static_cast<std::int64_t>(k));
  }
  return s;
}

// Every maximal positive run, found by checking all (start, end) intervals.
std::vector<double> brute_force_areas(const std::vector<double> & v, double tick)
{
  std::vector<double> out;
  for (std::size_t a = 0; a < v.size(); ++a) {
    for (std::size_t b = a; b < v.size(); ++b) {
      bool positive = true;
      for (std::size_t k = a; k <= b; ++k) {
        positive = positive && v[k] > 0.0;
      }
      const bool left_closed = a == 0 || v[a - 1] == 0.0;
      const bool right_closed = b + 1 == v.size() || v[b + 1] == 0.0;
      if (positive && left_closed && right_closed) {
        double sum = 0.0;
        for (std::size_t k = a; k <= b; ++k) {
          sum += v[k];
        }
        out.push_back(sum * tick * 1000.0);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("instantaneous weight")
{
  CHECK(instantaneous_weight(3.0, 5.0, 10.0, 0.1) == 0.15);
  CHECK(instantaneous_weight(3.0, 10.0, 1.0, 0.1) == 1.0);
  CHECK(instantaneous_weight(3.0, 0.0, 10.0, 0.1) == 0.0);
  CHECK(instantaneous_weight(-1.0, 5.0, 10.0, 0.1) == 0.0);
  CHECK(instantaneous_weight(0.01, 1.0, 0.0, 0.1) == doctest::Approx(1.0));
  CHECK(instantaneous_weight(0.001, 1.0, 0.05, 0.1) == doctest::Approx(0.1));
}

TEST_CASE("pair kinematics")
{
  const RiskConfig cfg;
  const auto i = state(AgentClass::Car, {10, 0}, {-2, 0});
  const auto j = state(AgentClass::Car, {0, 0}, {0, 0});
  const auto k = pair_kinematics(i, j, reachable_region(i, {}, cfg), reachable_region(j, {}, cfg), cfg);
  CHECK(k.d == 10.0);
  CHECK(k.delta_v == 2.0);
  CHECK(k.v_rel == -2.0);
  CHECK(std::abs(k.v_rel) <= k.delta_v);

  auto side = [&](Vec2 vi, Vec2 vj) {
    const auto a = state(AgentClass::Car, {0, 0}, vi);
    const auto b = state(AgentClass::Car, {50, 0}, vj);
    return pair_kinematics(a, b, reachable_region(a, {}, cfg), reachable_region(b, {}, cfg), cfg);
  };
  CHECK(side({1, 0}, {0, 1}).i_side);
  CHECK(side({1, 0}, {0, 1}).theta == doctest::Approx(std::numbers::pi / 2));
  CHECK_FALSE(side({1, 0}, {-1, 1}).i_side);
  CHECK(side({1, 0}, {-1, 1}).theta == doctest::Approx(3 * std::numbers::pi / 4));
  CHECK_FALSE(side({1, 0}, {1, 1}).i_side);
  CHECK(side({1, 0}, {-1, 1.01}).i_side);
  CHECK_FALSE(side({1, 0}, {-1, 0}).i_side);
  CHECK_FALSE(side({0, 0}, {0, 1}).i_side);
}

TEST_CASE("kinematic invariants on random pairs")
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-30, 30);
  const RiskConfig cfg;
  for (int n = 0; n < 2000; ++n) {
    const auto i = state(AgentClass::Car, {u(rng), u(rng)}, {u(rng), u(rng)}, u(rng));
    const auto j = state(AgentClass::Bus, {u(rng), u(rng)}, {u(rng), u(rng)}, u(rng), 12.0, 2.5);
    const auto k = pair_kinematics(i, j, reachable_region(i, {}, cfg), reachable_region(j, {}, cfg), cfg);
    CHECK(k.d >= 0.0);
    CHECK(k.delta_v >= 0.0);
    CHECK(std::abs(k.v_rel) <= k.delta_v + 1e-12);
    CHECK(k.theta >= 0.0);
    CHECK(k.theta <= std::numbers::pi);
    const double deg = k.theta * 180.0 / std::numbers::pi;
    if (std::abs(deg - 45.0) > 1e-6 && std::abs(deg - 135.0) > 1e-6) {
      CHECK(k.i_side == (deg > 45.0 && deg < 135.0));
    }
  }
}

TEST_CASE("coefficient decision table")
{
  const RiskConfig cfg;
  auto pick = [&](bool over, bool side, double v_rel, double si = 5.0, double sj = 5.0) {
    PairKinematics k;
    k.i_over = over;
    k.i_side = side;
    k.v_rel = v_rel;
    return select_k(k, si, sj, cfg);
  };
  CHECK(pick(true, true, -1) == 3.0);
  CHECK(pick(true, true, 1) == 3.0);
  CHECK(pick(true, false, -1) == 1.0);
  CHECK(pick(true, false, 1) == 1.0);
  CHECK(pick(false, true, -1) == 0.4);
  CHECK(pick(false, false, -1) == 0.2);
  CHECK(pick(false, true, 2) == 0.01);
  CHECK(pick(false, false, 2) == 0.01);
  CHECK(pick(false, false, 0) == 0.01);
  CHECK(pick(true, true, -1, 0.0, 5.0) == 0.05);
  CHECK(pick(true, true, 1, 5.0, 0.0) == 0.01);
  CHECK(pick(false, false, -1, 0.05, 5.0) == 0.05);
  CHECK(pick(false, false, -1, 0.051, 5.0) == 0.2);

  RiskConfig custom;
  custom.k_overlap_side = 7.0;
  PairKinematics k;
  k.i_over = true;
  k.i_side = true;
  CHECK(select_k(k, 1, 1, custom) == 7.0);
}

TEST_CASE("reachable regions")
{
  RiskConfig cfg;
  const double m = cfg.safety_margin();
  {
    const auto c = state(AgentClass::Car, {0, 0}, {10, 0});
    const auto region = std::get<std::vector<Vec2>>(reachable_region(c, {}, cfg));
    const auto box = geometry::bounds(region);
    CHECK(box.lo.x == doctest::Approx(-2.25 - m));
    CHECK(box.hi.x == doctest::Approx(6.0 + 2.25 + m));
    const double half_w = 0.9 + cfg.lateral_sway_coeff * 1.8 + m;
    CHECK(box.lo.y == doctest::Approx(-half_w));
    CHECK(box.hi.y == doctest::Approx(half_w));
    CHECK(region.size() == 4);
  }
  {
    const auto c = state(AgentClass::Car, {0, 0}, {0, 0});
    const auto region = std::get<std::vector<Vec2>>(reachable_region(c, {}, cfg));
    CHECK(geometry::area(region) == doctest::Approx((4.5 + 2 * m) * (1.8 + 2 * 0.09 + 2 * m)));
  }
  {
    const auto c = state(AgentClass::Car, {0, 0}, {0, 0});
    const auto accel = predicted_displacement(c, {2, 0}, cfg);
    CHECK(accel.x == doctest::Approx(0.36));
  }
  {
    const auto p = state(AgentClass::Pedestrian, {3, 4}, {0, 0}, 0, 0.5, 0.5);
    const auto d = std::get<Disc>(reachable_region(p, {}, cfg));
    CHECK(d.radius == doctest::Approx(1.0));
    CHECK(d.center == Vec2{3, 4});
    const auto w = state(AgentClass::Pedestrian, {3, 4}, {1, 0}, 0, 0.5, 0.5);
    CHECK(std::get<Disc>(reachable_region(w, {}, cfg)).radius == doctest::Approx(1.6));
  }
}

TEST_CASE("overlap indicator")
{
  const RiskConfig cfg;
  const auto a = state(AgentClass::Car, {0, 0}, {10, 0});
  const auto b = state(AgentClass::Car, {10, 0}, {-10, 0}, std::numbers::pi);
  CHECK(overlap_indicator(reachable_region(a, {}, cfg), reachable_region(b, {}, cfg)));
  const auto c = state(AgentClass::Car, {0, 20}, {10, 0});
  CHECK_FALSE(overlap_indicator(reachable_region(a, {}, cfg), reachable_region(c, {}, cfg)));

  const ReachableRegion disc = Disc{{0, 0}, 1.0};
  const ReachableRegion square = std::vector<Vec2>{{5, 5}, {6, 5}, {6, 6}, {5, 6}};
  CHECK_FALSE(overlap_indicator(disc, square));
  CHECK_FALSE(overlap_indicator(square, disc));
  const ReachableRegion touching = std::vector<Vec2>{{1, -1}, {2, -1}, {2, 1}, {1, 1}};
  CHECK(overlap_indicator(disc, touching));
  CHECK(overlap_indicator(Disc{{0, 0}, 1.0}, Disc{{2, 0}, 1.0}));
  CHECK_FALSE(overlap_indicator(Disc{{0, 0}, 1.0}, Disc{{2.01, 0}, 1.0}));
}

TEST_CASE("pair weight uses the static branch for a parked partner")
{
  const RiskConfig cfg;
  const auto i = state(AgentClass::Car, {10, 0}, {-2, 0});
  const auto j = state(AgentClass::Car, {0, 0}, {0, 0});
  CHECK(pair_weight(i, {}, j, {}, cfg) == doctest::Approx(0.05 * 2 / 100));
  const auto away = state(AgentClass::Car, {10, 0}, {2, 0});
  CHECK(pair_weight(away, {}, j, {}, cfg) == doctest::Approx(0.01 * 2 / 100));
}

TEST_CASE("larger coefficients never lower the weight")
{
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-20, 20);
  RiskConfig k1;
  k1.k_overlap_side = 0.8;
  k1.k_overlap_noside = 0.6;
  RiskConfig k2;
  k2.k_overlap_side = 5.0;
  k2.k_overlap_noside = 3.0;
  for (int n = 0; n < 1000; ++n) {
    const auto i = state(AgentClass::Car, {u(rng), u(rng)}, {u(rng), u(rng)}, u(rng));
    const auto j = state(AgentClass::Car, {u(rng), u(rng)}, {u(rng), u(rng)}, u(rng));
    CHECK(pair_weight(i, {}, j, {}, k2) >= pair_weight(i, {}, j, {}, k1));
  }
}

TEST_CASE("acceleration table")
{
  const auto s = Scenario::from_records({
    car(0, "a", {0, 0}, {0, 0}), car(1, "a", {0, 0}, {1, 0}), car(2, "a", {0, 0}, {3, 0}),
    car(4, "a", {0, 0}, {3, 2}), car(0, "b", {5, 5}, {1, 1})});
  const AccelerationTable acc(s);
  CHECK(acc.of(s, 0, 0).x == doctest::Approx(10.0));
  CHECK(acc.of(s, 1, 0).x == doctest::Approx(15.0));
  CHECK(acc.of(s, 2, 0).x == doctest::Approx(2.0 / 0.3));
  CHECK(acc.of(s, 2, 0).y == doctest::Approx(2.0 / 0.3));
  CHECK(acc.of(s, 3, 0).y == doctest::Approx(10.0));
  CHECK(acc.of(s, 0, 1) == Vec2{});
  CHECK_THROWS_AS(acc.of(s, 1, 1), InputError);
}

TEST_CASE("risk series")
{
  RiskConfig cfg;
  cfg.k_static_separate = 1.0;
  // i circles j at a fixed 2 m with speed 2, j parked: P = 1 * 2 / 4 = 0.5.
  std::vector<TrajectoryRecord> recs;
  for (int f = 0; f < 8; ++f) {
    if (f != 5) {
      recs.push_back(car(f, "i", {2, 0}, {0, 2}));
    }
    recs.push_back(car(f, "j", {0, 0}, {0, 0}));
  }
  const auto s = Scenario::from_records(recs);
  const AccelerationTable acc(s);
  std::vector<VisibilityRelation> always;
  std::vector<VisibilityRelation> blind_first_two;
  std::vector<VisibilityRelation> never;
  for (std::size_t f = 0; f < s.frame_count(); ++f) {
    std::vector<AgentIndex> present;
    for (const auto & st : s.states_at(f)) {
      present.push_back(st.agent);
    }
    VisibilityRelation yes(s.frames()[f], present);
    if (f != 5) {
      yes.set(1, 0);
    }
    always.push_back(yes);
    blind_first_two.push_back(f < 2 ? VisibilityRelation(s.frames()[f], present) : yes);
    never.emplace_back(s.frames()[f], present);
  }
  const auto zero = risk_series(0, 1, s, always, acc, cfg);
  CHECK(zero.values == std::vector<double>(8, 0.0));
  const auto two = risk_series(0, 1, s, blind_first_two, acc, cfg);
  CHECK(two.values == std::vector<double>{0.5, 0.5, 0, 0, 0, 0, 0, 0});
  const auto split = risk_series(0, 1, s, never, acc, cfg);
  CHECK(split.values == std::vector<double>{0.5, 0.5, 0.5, 0.5, 0.5, 0, 0.5, 0.5});
  const auto events = event_integrals(split);
  REQUIRE(events.size() == 2);
  CHECK(events[0].end_frame == 4);
  CHECK(events[1].start_frame == 6);
  CHECK(events[0].area_ms == doctest::Approx(250.0));
  // The observer direction matters: j seen by i does not protect i.
  const auto reverse = risk_series(1, 0, s, always, acc, cfg);
  CHECK(reverse.values[0] == 0.5);
  CHECK_THROWS_AS(risk_series(0, 1, s, std::span(always).first(3), acc, cfg), InputError);
}

TEST_CASE("event integrals")
{
  const auto events = event_integrals(series_of({0, .5, .5, 0, .2, .2, .2, 0}));
  REQUIRE(events.size() == 2);
  CHECK(events[0].area_ms == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(events[1].area_ms == doctest::Approx(60.0).epsilon(1e-12));
  CHECK(events[0].start == 1);
  CHECK(events[0].end == 2);
  CHECK(events[1].peak == 4);
  CHECK(pair_F(events) == doctest::Approx(100.0));
  CHECK(event_integrals(series_of({0, 0, 0})).empty());
  const auto single = event_integrals(series_of({1.0}));
  REQUIRE(single.size() == 1);
  CHECK(single[0].area_ms == 100.0);
  CHECK(pair_F({}) == 0.0);
  const std::vector<EventIntegral> one{{0, 0, 0, 0, 42.0, 0, 0.42}};
  CHECK(pair_F(one) == 42.0);
}

TEST_CASE("event integrals match brute-force interval enumeration")
{
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> len(0, 40);
  for (int n = 0; n < 1000; ++n) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    for (auto & x : v) {
      x = u(rng) < 0.35 ? 0.0 : u(rng);
    }
    const auto got = event_integrals(series_of(v));
    const auto expected = brute_force_areas(v, 0.1);
    REQUIRE(got.size() == expected.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      CHECK(std::abs(got[k].area_ms - expected[k]) <= 1e-9);
      CHECK(v[got[k].peak] == *std::max_element(v.begin() + static_cast<long>(got[k].start), v.begin() + static_cast<long>(got[k].end) + 1));
    }
  }
}

TEST_CASE("agent RTL and levels")
{
  CHECK(agent_rtl(std::vector<double>{100, 60, 0}) == 100.0);
  CHECK(agent_rtl({}) == 0.0);
  CHECK(agent_rtl(std::vector<double>{42}) == 42.0);
  const RiskConfig cfg;
  CHECK(risk_level(30, cfg) == RiskLevel::Low);
  CHECK(risk_level(120, cfg) == RiskLevel::Medium);
  CHECK(risk_level(500, cfg) == RiskLevel::High);
  CHECK(risk_level(50, cfg) == RiskLevel::Medium);
  CHECK(risk_level(200, cfg) == RiskLevel::Medium);
  CHECK(risk_level(49.999, cfg) == RiskLevel::Low);
  CHECK(to_string(RiskLevel::High) == "high");
}

TEST_CASE("report reduction per group")
{
  RiskReport r;
  r.pairs.push_back({0, 1, PairType::VehVeh, 80.0, 1, {}, {}});
  r.pairs.push_back({0, 2, PairType::VehVru, 120.0, 1, {}, {}});
  r.pairs.push_back({1, 0, PairType::VehVeh, 0.0, 0, {}, {}});
  r.pairs.push_back({2, 0, PairType::VehVru, 10.0, 1, {}, {}});
  const auto all = r.agent_rtls();
  REQUIRE(all.size() == 3);
  CHECK(all[0].rtl_ms == 120.0);
  CHECK(all[1].rtl_ms == 0.0);
  const auto veh = r.agent_rtls(PairType::VehVeh);
  REQUIRE(veh.size() == 2);
  CHECK(veh[0].rtl_ms == 80.0);
  CHECK(r.agent_rtls(PairType::VehVru).size() == 2);
}
