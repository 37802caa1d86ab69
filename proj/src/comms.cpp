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

#include "rtlsim/comms.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace rtlsim
{

namespace
{

// Unbiased draw in [0, n) by rejection.
std::uint64_t bounded(std::mt19937_64 & rng, std::uint64_t n)
{
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) {
      return r % n;
    }
  }
}

struct DisjointSets
{
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x)
  {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b)
  {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
    }
  }
};

}  // namespace

bool ConnectivityAssignment::is_connected(AgentIndex agent) const
{
  return std::binary_search(connected.begin(), connected.end(), agent);
}

std::vector<std::uint8_t> ConnectivityAssignment::mask(std::size_t agent_count) const
{
  std::vector<std::uint8_t> m(agent_count, 0);
  for (AgentIndex a : connected) {
    if (a < agent_count) {
      m[a] = 1;
    }
  }
  return m;
}

std::size_t connected_count(double penetration, std::size_t vehicle_count)
{
  if (!(penetration >= 0.0 && penetration <= 1.0)) {
    throw InputError(fmt::format("penetration rate must lie in [0, 1], got {}", penetration));
  }
  const auto n = static_cast<std::size_t>(std::floor(penetration * static_cast<double>(vehicle_count) + 0.5));
  return std::min(n, vehicle_count);
}

ConnectivityAssignment sample_connected(
  const Scenario & scenario, double penetration, std::uint64_t seed)
{
  std::vector<AgentIndex> vehicles = scenario.vehicle_indices();
  const std::size_t count = connected_count(penetration, vehicles.size());

  std::mt19937_64 rng(seed);
  // Forward Fisher-Yates; the first `k` slots are a uniform k-subset for every k.
  for (std::size_t k = 0; k + 1 < vehicles.size(); ++k) {
    const std::size_t pick = k + bounded(rng, vehicles.size() - k);
    std::swap(vehicles[k], vehicles[pick]);
  }

  ConnectivityAssignment a;
  a.penetration = penetration;
  a.seed = seed;
  a.connected.assign(vehicles.begin(), vehicles.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(a.connected.begin(), a.connected.end());
  return a;
}

CommGraph comm_graph(
  std::size_t frame_pos, const Scenario & scenario, const ConnectivityAssignment & assignment,
  const RiskConfig & config)
{
  CommGraph g;
  g.frame = scenario.frames()[frame_pos];
  std::vector<const AgentState *> nodes;
  for (const auto & s : scenario.states_at(frame_pos)) {
    if (is_vehicle(s.agent_class) && assignment.is_connected(s.agent)) {
      nodes.push_back(&s);
      g.nodes.push_back(s.agent);
    }
  }
  DisjointSets sets(nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if (distance(nodes[a]->position, nodes[b]->position) <= config.comm_range) {
        g.edges.emplace_back(nodes[a]->agent, nodes[b]->agent);
        sets.unite(a, b);
      }
    }
  }
  std::vector<std::size_t> slot(nodes.size(), SIZE_MAX);
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    const std::size_t root = sets.find(a);
    if (slot[root] == SIZE_MAX) {
      slot[root] = g.components.size();
      g.components.emplace_back();
    }
    g.components[slot[root]].push_back(nodes[a]->agent);
  }
  return g;
}

VisibilityRelation fuse_symmetric(const VisibilityRelation & raw, const CommGraph & graph)
{
  VisibilityRelation fused = raw;
  const std::size_t n = raw.size();
  std::vector<std::uint8_t> shared(n);
  std::vector<std::size_t> members;
  for (const auto & component : graph.components) {
    if (component.size() < 2) {
      continue;
    }
    std::fill(shared.begin(), shared.end(), std::uint8_t{0});
    members.clear();
    for (AgentIndex agent : component) {
      const auto local = raw.local_index(agent);
      if (!local) {
        throw InvariantError(fmt::format("comm node {} absent from visibility frame {}", agent, raw.frame()));
      }
      members.push_back(*local);
      const auto row = raw.row(*local);
      for (std::size_t t = 0; t < n; ++t) {
        shared[t] |= row[t];
      }
    }
    for (std::size_t m : members) {
      fused.merge_row(m, shared);
    }
  }
  return fused;
}

VisibilityRelation fuse_asymmetric(
  const VisibilityRelation & raw, const CommGraph & graph, std::size_t frame_pos,
  const Scenario & scenario, const ConnectivityAssignment & assignment, const RiskConfig & config)
{
  const VisibilityRelation sym = fuse_symmetric(raw, graph);
  VisibilityRelation fused = sym;
  const auto states = scenario.states_at(frame_pos);
  std::vector<const AgentState *> broadcasters;
  for (const auto & s : states) {
    if (is_vehicle(s.agent_class) && assignment.is_connected(s.agent)) {
      broadcasters.push_back(&s);
    }
  }
  if (broadcasters.empty()) {
    return fused;
  }
  for (const auto & s : states) {
    if (!is_vehicle(s.agent_class) || assignment.is_connected(s.agent)) {
      continue;
    }
    const auto receiver = sym.local_index(s.agent);
    if (!receiver) {
      continue;
    }
    for (const auto * b : broadcasters) {
      if (distance(s.position, b->position) <= config.comm_range) {
        fused.merge_row(*receiver, sym.row(*sym.local_index(b->agent)));
      }
    }
  }
  return fused;
}

}  // namespace rtlsim
