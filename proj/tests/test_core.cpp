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

#include "rtlsim/core.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rtlsim;
using rtlsim::test::car;
using rtlsim::test::of_class;

TEST_CASE("derive_heading")
{
  CHECK(derive_heading({1, 0}, 3.0, 0.05) == 0.0);
  CHECK(derive_heading({0, 0}, 1.57, 0.05) == 1.57);
  CHECK(derive_heading({1, 1}, 0.0, 0.05) == doctest::Approx(std::numbers::pi / 4));
  CHECK(derive_heading({0.05, 0}, 2.0, 0.05) == 2.0);
}

TEST_CASE("derived heading follows velocity above the motion threshold")
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int k = 0; k < 1000; ++k) {
    const Vec2 v{u(rng), u(rng)};
    if (norm(v) <= 0.05) {
      continue;
    }
    const double h = derive_heading(v, 0.0, 0.05);
    const Vec2 d = direction(h);
    const double gap = std::abs(std::atan2(cross(d, v), dot(d, v)));
    CHECK(gap < 1e-6);
  }
}

TEST_CASE("class labels and pair classes")
{
  for (int c = 0; c < 7; ++c) {
    const auto cls = static_cast<AgentClass>(c);
    CHECK(parse_class_label(class_label(cls)) == cls);
  }
  CHECK_FALSE(parse_class_label("boat"));
  CHECK(is_vehicle(AgentClass::Bus));
  CHECK(is_vru(AgentClass::Tricycle));
  CHECK(classify_pair(AgentClass::Car, AgentClass::Truck) == PairType::VehVeh);
  CHECK(classify_pair(AgentClass::Pedestrian, AgentClass::Bus) == PairType::VehVru);
  CHECK(classify_pair(AgentClass::Car, AgentClass::Bicycle) == PairType::VehVru);
  CHECK_FALSE(classify_pair(AgentClass::Pedestrian, AgentClass::Bicycle));
  CHECK(pair_filter_accepts(PairFilter::Both, PairType::VehVru));
  CHECK_FALSE(pair_filter_accepts(PairFilter::VehVeh, PairType::VehVru));
}

TEST_CASE("enum labels round-trip")
{
  for (auto p : {Paradigm::None, Paradigm::Symmetric, Paradigm::Asymmetric}) {
    CHECK(parse_paradigm(to_string(p)) == p);
  }
  for (auto m : {FovMode::Homogeneous360, FovMode::Heterogeneous120_360, FovMode::All120}) {
    CHECK(parse_fov_mode(to_string(m)) == m);
  }
  for (auto f : {PairFilter::VehVeh, PairFilter::VehVru, PairFilter::Both}) {
    CHECK(parse_pair_filter(to_string(f)) == f);
  }
  CHECK_FALSE(parse_paradigm("broadcast"));
}

TEST_CASE("scenario indexing")
{
  const auto s = Scenario::from_records({
    car(5, "10", {0, 0}),
    car(3, "2", {1, 0}),
    car(5, "2", {2, 0}),
    of_class(AgentClass::Pedestrian, 3, "ped", {3, 0}),
    car(3, "10", {4, 0}),
  });
  REQUIRE(s.frame_count() == 2);
  CHECK(s.frames()[0] == 3);
  CHECK(s.frames()[1] == 5);
  REQUIRE(s.agent_count() == 3);
  CHECK(s.agent(0).id == "2");
  CHECK(s.agent(1).id == "10");
  CHECK(s.agent(2).id == "ped");
  CHECK(s.find_agent("10") == AgentIndex{1});
  CHECK_FALSE(s.find_agent("11"));
  CHECK(s.states_at(0).size() == 3);
  CHECK(s.states_at(1).size() == 2);
  CHECK(s.states_at(0)[1].position.x == 4.0);
  CHECK(s.find_state(1, 2) == nullptr);
  CHECK(s.find_state(1, 1)->position.x == 0.0);
  CHECK(s.frame_position(5) == std::size_t{1});
  CHECK_FALSE(s.frame_position(4));
  CHECK(s.track(0).size() == 2);
  CHECK(s.vehicle_indices() == std::vector<AgentIndex>{0, 1});
  CHECK_THROWS_AS(s.states_at(2), InputError);
  s.validate();
}

TEST_CASE("missing headings use the agent's last known heading")
{
  const auto s = Scenario::from_records({
    car(0, "a", {0, 0}, {0, 2}, std::nullopt),
    car(1, "a", {0, 0.2}, {0, 0}, std::nullopt),
    car(2, "a", {0, 0.2}, {0, 0}, 1.0),
    car(3, "a", {0, 0.2}, {0, 0}, std::nullopt),
    car(0, "b", {5, 0}, {0, 0}, std::nullopt),
  });
  CHECK(s.find_state(0, 0)->heading == doctest::Approx(std::numbers::pi / 2));
  CHECK(s.find_state(1, 0)->heading == doctest::Approx(std::numbers::pi / 2));
  CHECK(s.find_state(2, 0)->heading == 1.0);
  CHECK(s.find_state(3, 0)->heading == 1.0);
  CHECK(s.find_state(0, 1)->heading == 0.0);
}

TEST_CASE("scenario construction rejects inconsistent records")
{
  CHECK_THROWS_WITH_AS(
    Scenario::from_records({car(0, "a", {0, 0}), of_class(AgentClass::Truck, 1, "a", {0, 0})}),
    doctest::Contains("changes class"), InputError);
  CHECK_THROWS_WITH_AS(
    Scenario::from_records({car(0, "a", {0, 0}), car(0, "a", {1, 0})}),
    doctest::Contains("twice"), InputError);
  CHECK_THROWS_AS(Scenario::from_records({car(0, "a", {NAN, 0})}), InputError);
  CHECK_THROWS_AS(Scenario::from_records({car(0, "", {0, 0})}), InputError);
  CHECK_THROWS_AS(Scenario::from_records({car(0, "a", {0, 0}, {}, 0.0, 0.0, 1.0)}), InputError);
  CHECK_THROWS_AS(Scenario::from_records({car(0, "a", {0, 0})}, {}, 0.0), InputError);
}

TEST_CASE("random scenarios satisfy the core invariants")
{
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto s = test::random_scene(rng, 15, 40, 50.0, 2);
    CHECK_NOTHROW(s.validate());
    CHECK(s == s);
  }
}

TEST_CASE("risk config defaults and validation")
{
  RiskConfig c;
  CHECK(c.k_overlap_side == 3.0);
  CHECK(c.prediction_horizon == 0.6);
  CHECK(c.safety_margin() == doctest::Approx(1.0));
  CHECK(c.fov_nonconnected == doctest::Approx(deg_to_rad(120.0)));
  CHECK_NOTHROW(c.validate());
  c.buffer_margin = -0.1;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("buffer_margin"), InputError);
  c = {};
  c.fov_connected = 7.0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = {};
  c.medium_risk_threshold = 300.0;
  CHECK_THROWS_AS(c.validate(), InputError);
}
