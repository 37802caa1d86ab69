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

#include "rtlsim/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace rtlsim
{

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> & body)
{
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), n);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) {
      body(k);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        body(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    pool.emplace_back(run);
  }
  run();
  for (auto & t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

std::vector<double> fov_assignment(
  const Scenario & scenario, FovMode mode, const ConnectivityAssignment & assignment,
  const RiskConfig & config)
{
  std::vector<double> fov(scenario.agent_count(), config.fov_nonconnected);
  for (std::size_t a = 0; a < fov.size(); ++a) {
    switch (mode) {
      case FovMode::Homogeneous360:
        fov[a] = config.fov_connected;
        break;
      case FovMode::All120:
        break;
      case FovMode::Heterogeneous120_360:
        if (is_vehicle(scenario.agent(static_cast<AgentIndex>(a)).agent_class) &&
            assignment.is_connected(static_cast<AgentIndex>(a))) {
          fov[a] = config.fov_connected;
        }
        break;
    }
  }
  return fov;
}

namespace
{

VisibilityRelation fuse(
  const VisibilityRelation & raw, std::size_t frame_pos, const Scenario & scenario,
  const Variant & variant, const RiskConfig & config)
{
  if (variant.paradigm == Paradigm::None || variant.assignment.connected.empty()) {
    return raw;
  }
  const CommGraph graph = comm_graph(frame_pos, scenario, variant.assignment, config);
  if (variant.paradigm == Paradigm::Symmetric) {
    return fuse_symmetric(raw, graph);
  }
  return fuse_asymmetric(raw, graph, frame_pos, scenario, variant.assignment, config);
}

struct OrderedPair
{
  std::uint32_t target = 0;    // local index of i
  std::uint32_t observer = 0;  // local index of j
  PairType type = PairType::VehVeh;
};

// Everything about one frame that does not depend on the variant.
struct FrameData
{
  std::size_t frame_pos = 0;
  std::optional<LineOfSight> los;
  std::vector<OrderedPair> pairs;
  std::vector<double> weight;  // n*n, [target*n + observer], NaN when never needed
};

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

void prepare_frame(
  FrameData & fd, const Scenario & scenario, const AccelerationTable & accel,
  const RiskConfig & config, PairFilter filter, double narrowest_fov)
{
  fd.los.emplace(fd.frame_pos, scenario, config);
  const auto states = fd.los->states();
  const std::size_t n = states.size();
  fd.pairs.clear();
  fd.weight.assign(n * n, kUnset);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto type = classify_pair(states[a].agent_class, states[b].agent_class);
      if (!type || !pair_filter_accepts(filter, *type)) {
        continue;
      }
      fd.pairs.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), *type});
      fd.pairs.push_back({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(a), *type});
      // Seen in both directions by every variant: no variant can need the weight.
      const bool always_seen =
        fd.los->clear_local(a, b) &&
        within_fov_angle(states[a], states[b].position, narrowest_fov) &&
        within_fov_angle(states[b], states[a].position, narrowest_fov);
      if (always_seen) {
        continue;
      }
      const double p = pair_weight(
        states[a], accel.at(fd.frame_pos, a), states[b], accel.at(fd.frame_pos, b), config);
      fd.weight[a * n + b] = p;
      fd.weight[b * n + a] = p;
    }
  }
}

struct PairAccumulator
{
  PairType type = PairType::VehVeh;
  bool open = false;
  std::size_t last_pos = 0;
  double sum = 0.0;
  EventIntegral current;
  EventIntegral worst;
  std::size_t count = 0;
  std::vector<EventIntegral> events;
};

class VariantState
{
public:
  VariantState(const Scenario & scenario, const Variant & variant) : scenario_(scenario), variant_(variant)
  {
  }

  void observe(AgentIndex i, AgentIndex j, PairType type, std::size_t pos, double f)
  {
    const std::uint64_t key = (static_cast<std::uint64_t>(i) << 32) | j;
    auto [it, inserted] = acc_.try_emplace(key);
    PairAccumulator & a = it->second;
    if (inserted) {
      a.type = type;
    }
    if (a.open && (!(f > 0.0) || a.last_pos + 1 != pos)) {
      close(a);
    }
    if (!(f > 0.0)) {
      return;
    }
    if (!a.open) {
      a.open = true;
      a.sum = 0.0;
      a.current = EventIntegral{};
      a.current.start = pos;
      a.current.peak = pos;
      a.current.peak_value = f;
    }
    a.sum += f;
    if (f > a.current.peak_value) {
      a.current.peak_value = f;
      a.current.peak = pos;
    }
    a.last_pos = pos;
  }

  RiskReport finish()
  {
    std::vector<std::pair<std::uint64_t, PairAccumulator *>> ordered;
    ordered.reserve(acc_.size());
    for (auto & [key, a] : acc_) {
      if (a.open) {
        close(a);
      }
      ordered.emplace_back(key, &a);
    }
    std::sort(ordered.begin(), ordered.end(), [](const auto & x, const auto & y) { return x.first < y.first; });
    RiskReport r;
    r.pairs.reserve(ordered.size());
    for (auto & [key, a] : ordered) {
      PairResult p;
      p.i = static_cast<AgentIndex>(key >> 32);
      p.j = static_cast<AgentIndex>(key & 0xffffffffu);
      p.type = a->type;
      p.f_ms = a->count > 0 ? a->worst.area_ms : 0.0;
      p.event_count = a->count;
      p.worst = a->worst;
      p.events = std::move(a->events);
      r.pairs.push_back(std::move(p));
    }
    r.meta.penetration = variant_.assignment.penetration;
    r.meta.seed = variant_.assignment.seed;
    r.meta.paradigm = variant_.paradigm;
    r.meta.fov_mode = variant_.fov_mode;
    return r;
  }

private:
  void close(PairAccumulator & a)
  {
    const auto frames = scenario_.frames();
    a.open = false;
    a.current.end = a.last_pos;
    a.current.start_frame = frames[a.current.start];
    a.current.end_frame = frames[a.current.end];
    a.current.area_ms = a.sum * (scenario_.tick_seconds() * 1000.0);
    if (a.count == 0 || a.current.area_ms > a.worst.area_ms) {
      a.worst = a.current;
    }
    ++a.count;
    if (variant_.keep_events) {
      a.events.push_back(a.current);
    }
  }

  const Scenario & scenario_;
  const Variant & variant_;
  std::unordered_map<std::uint64_t, PairAccumulator> acc_;
};

}  // namespace

VisibilityRelation effective_visibility(
  std::size_t frame_pos, const Scenario & scenario, const Variant & variant,
  const RiskConfig & config)
{
  const auto fov = fov_assignment(scenario, variant.fov_mode, variant.assignment, config);
  return fuse(visibility_relation(frame_pos, scenario, fov, config), frame_pos, scenario, variant, config);
}

std::vector<RiskReport> simulate(
  const Scenario & scenario, const RiskConfig & config, std::span<const Variant> variants,
  const EngineOptions & options)
{
  config.validate();
  const AccelerationTable accel(scenario);
  const double narrowest_fov = std::min(config.fov_connected, config.fov_nonconnected);

  std::vector<std::vector<double>> fovs;
  fovs.reserve(variants.size());
  std::vector<VariantState> states;
  states.reserve(variants.size());
  for (const auto & v : variants) {
    fovs.push_back(fov_assignment(scenario, v.fov_mode, v.assignment, config));
    states.emplace_back(scenario, v);
  }

  const std::size_t block = std::max<std::size_t>(options.block_frames, 1);
  std::vector<FrameData> frames;
  for (std::size_t b0 = 0; b0 < scenario.frame_count(); b0 += block) {
    const std::size_t b1 = std::min(b0 + block, scenario.frame_count());
    frames.resize(b1 - b0);
    parallel_for(frames.size(), options.threads, [&](std::size_t k) {
      frames[k].frame_pos = b0 + k;
      prepare_frame(frames[k], scenario, accel, config, options.pair_filter, narrowest_fov);
    });
    parallel_for(variants.size(), options.threads, [&](std::size_t v) {
      for (const auto & fd : frames) {
        const VisibilityRelation raw = fd.los->with_fov(fovs[v]);
        const VisibilityRelation eff = fuse(raw, fd.frame_pos, scenario, variants[v], config);
        const auto present = eff.present();
        const std::size_t n = present.size();
        for (const auto & pr : fd.pairs) {
          double f = 0.0;
          if (!eff.sees_local(pr.observer, pr.target)) {
            f = fd.weight[pr.target * n + pr.observer];
            if (std::isnan(f)) {
              throw InvariantError(fmt::format(
                "pair weight missing for {} -> {} at frame {}", present[pr.observer],
                present[pr.target], scenario.frames()[fd.frame_pos]));
            }
          }
          states[v].observe(present[pr.target], present[pr.observer], pr.type, fd.frame_pos, f);
        }
      }
    });
  }

  std::vector<RiskReport> reports;
  reports.reserve(variants.size());
  for (auto & s : states) {
    reports.push_back(s.finish());
  }
  return reports;
}

}  // namespace rtlsim
