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
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "coinlab/rng.hpp"

namespace coinlab {

enum class Direction : int { kUp = 1, kDown = -1 };

constexpr int sign(Direction d) noexcept { return static_cast<int>(d); }
constexpr Direction opposite(Direction d) noexcept {
  return d == Direction::kUp ? Direction::kDown : Direction::kUp;
}
inline const char* to_string(Direction d) noexcept {
  return d == Direction::kUp ? "+" : "-";
}

/// Longest stream the engine will generate (2^31 steps). Prefix sums are
/// 64-bit, so they cannot overflow below this length.
inline constexpr std::int64_t kMaxWalkLength = std::int64_t{1} << 31;

/// A realized symmetric +-1 walk. prefix_sums[0] == 0 and
/// prefix_sums[k] is the sum of the first k steps. The extrema range over all
/// prefixes including index 0, so run_max >= 0 >= run_min.
struct WalkTrace {
  std::vector<std::int8_t> steps;
  std::vector<std::int64_t> prefix_sums{0};
  std::int64_t run_max = 0;
  std::int64_t run_min = 0;
  std::int64_t argmax = 0;
  std::int64_t argmin = 0;

  std::int64_t length() const noexcept {
    return static_cast<std::int64_t>(steps.size());
  }
  std::int64_t final_value() const noexcept { return prefix_sums.back(); }
};

/// Inclusive range of prefix indices an adversary may stop at.
struct Window {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

struct NoStop {};
struct FixedLength {
  std::int64_t k = 0;
};
/// Stop at the first index in the window whose prefix sum reaches the
/// threshold in the given direction; if none does, stop at window.hi.
struct FirstHit {
  std::int64_t threshold = 1;
  Direction direction = Direction::kUp;
  Window window;
};
/// Stop where the prefix sum is most extreme in the given direction over the
/// window, smallest index on ties. Requires knowledge of the whole stream.
struct OmniscientExtreme {
  Direction direction = Direction::kUp;
  Window window;
};

using StoppingStrategy =
    std::variant<NoStop, FixedLength, FirstHit, OmniscientExtreme>;

struct StoppedStream {
  std::int64_t stop_index = 0;
  std::int64_t value = 0;
  StoppingStrategy strategy_used;
};

WalkTrace generate_walk(std::int64_t length, CoinSource& source);

/// Builds a trace from explicit steps; every step must be +1 or -1.
WalkTrace walk_from_steps(std::span<const int> steps);

/// Throws ParameterError when the strategy is not admissible for a stream of
/// `length` steps.
void validate_strategy(const StoppingStrategy& strategy, std::int64_t length);

StoppedStream apply_stop(const WalkTrace& trace,
                         const StoppingStrategy& strategy);

std::string describe(const StoppingStrategy& strategy);

}  // namespace coinlab
