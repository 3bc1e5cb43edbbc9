// Copyright 2026 The coinlab Authors
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

#pragma once

#include <cstdint>
#include <vector>

#include "coinlab/montecarlo.hpp"
#include "coinlab/walk.hpp"

namespace coinlab {

/// What the adversary does with the good streams it is allowed to cut short.
enum class StopMode {
  kOmniscient,  // stop each at its most adverse prefix in [1, n]
  kNone,        // let them complete
};

/// One global-coin iteration among n processors, t of them bad. The n - t good
/// processors split into t_excluded wrongly-excluded streams, t_stopped
/// adversarially stoppable streams and the remaining complete ("core")
/// streams. Every good stream has n coins.
struct IterationConfig {
  std::int64_t n = 0;
  std::int64_t t = 0;
  std::int64_t t_excluded = 0;
  std::int64_t t_stopped = 0;
  /// Direction in which a coin outcome forces agreement. The adversary pushes
  /// the other way.
  Direction good_direction = Direction::kUp;
  StopMode stop_mode = StopMode::kOmniscient;
  /// Whether the t ambiguous coins are present (always set against the good
  /// direction when they are).
  bool ambiguous = true;
  /// Optional contribution of the bad processors' own coins, clamped to
  /// [-tn, tn]. Zero by default; not part of the four-source decomposition.
  std::int64_t bad_term = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct IterationRecord {
  std::uint64_t index = 0;
  std::int64_t core_sum = 0;
  std::int64_t excluded_raw_sum = 0;
  /// excluded_raw_sum clamped to [-floor(beta/4), floor(beta/4)].
  std::int64_t excluded_sum = 0;
  bool excluded_cap_binds = false;
  std::int64_t stopped_sum = 0;
  /// What the stopped streams would have summed to had they completed.
  std::int64_t stopped_full_sum = 0;
  std::int64_t ambiguous_term = 0;
  std::int64_t bad_term = 0;
  /// core_sum + excluded_sum + stopped_sum + ambiguous_term + bad_term.
  std::int64_t total = 0;
  Direction coin = Direction::kUp;  // sign of total; zero resolves to +
  bool tie = false;
  /// good_direction * core_sum >= alpha'.
  bool good_event = false;

  // Raw streams, retained when requested, in generation order.
  std::vector<WalkTrace> core_streams;
  std::vector<WalkTrace> stopped_streams;
  std::vector<StoppedStream> stops;
  std::vector<WalkTrace> excluded_streams;
};

/// Iteration `index` draws from substream (seed, index): core streams first,
/// then stopped, then excluded. Two configs that differ only in adversary
/// knobs (stop_mode, ambiguous, bad_term, good_direction aside) therefore see
/// identical core streams.
IterationRecord run_iteration(const IterationConfig& config, std::uint64_t index = 0,
                              bool keep_streams = true);

/// Frequency of good_event over iterations 0..iterations-1.
McEstimate good_event_frequency(const IterationConfig& config, std::uint64_t iterations,
                                unsigned workers = 0, double confidence_level = 0.99);

struct AgreementResult {
  bool agreed = false;
  std::uint64_t iterations_used = 0;
  std::vector<IterationRecord> records;  // streams dropped
};

/// Runs iterations 0, 1, ... until one has coin == good_direction and
/// good_direction * total >= alpha', or max_iterations is exhausted.
AgreementResult run_agreement(const IterationConfig& config, std::uint64_t max_iterations);

}  // namespace coinlab
