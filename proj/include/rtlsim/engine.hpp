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

#ifndef RTLSIM__ENGINE_HPP_
#define RTLSIM__ENGINE_HPP_

#include "rtlsim/comms.hpp"
#include "rtlsim/core.hpp"
#include "rtlsim/risk.hpp"
#include "rtlsim/visibility.hpp"

#include <functional>
#include <span>
#include <vector>

/// \file
/// Streaming evaluation of many communication variants over one scenario.
///
/// Frames are visited once. Line of sight and pair weights are computed per
/// frame and shared by every variant; each variant then folds its own
/// effective visibility into per-pair event accumulators. Results equal the
/// frame-by-frame reference path (visibility_relation, fuse_*, risk_series,
/// event_integrals) exactly.

namespace rtlsim
{

/// One way of running the scenario: who is connected, how perception is shared.
struct Variant
{
  ConnectivityAssignment assignment;
  Paradigm paradigm = Paradigm::None;
  FovMode fov_mode = FovMode::All120;
  bool keep_events = false;
};

struct EngineOptions
{
  PairFilter pair_filter = PairFilter::Both;
  unsigned threads = 1;
  std::size_t block_frames = 32;
};

/// FoV per AgentIndex under `mode`.
std::vector<double> fov_assignment(
  const Scenario & scenario, FovMode mode, const ConnectivityAssignment & assignment,
  const RiskConfig & config);

/// Reference (uncached) effective visibility of one variant at one frame.
VisibilityRelation effective_visibility(
  std::size_t frame_pos, const Scenario & scenario, const Variant & variant,
  const RiskConfig & config);

/// One report per variant, in order. Deterministic for any thread count.
std::vector<RiskReport> simulate(
  const Scenario & scenario, const RiskConfig & config, std::span<const Variant> variants,
  const EngineOptions & options);

/// Runs `body(k)` for k in [0, n) on up to `threads` workers; rethrows the
/// first exception.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> & body);

}  // namespace rtlsim

#endif  // RTLSIM__ENGINE_HPP_
