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
#include <random>

namespace coinlab {

/// Fixed tags separating the random substreams of different experiments, so
/// that (seed, tag, index) never collides across experiments.
enum class StreamTag : std::uint64_t {
  kGeneric = 0,
  kFact3 = 1,
  kLemma52Part1 = 2,
  kLemma52Part2 = 3,
  kLemma71 = 4,
  kCoinIteration = 5,
  kSpectral = 6,
  kPowerStart = 7,
  kOracleMatrices = 8,
  kAgreementRuns = 9,
};

/// Derives the engine seed of substream `index` under `tag`. Pure function of
/// its arguments; this is what makes trial results independent of which
/// worker executes them.
std::uint64_t substream_seed(std::uint64_t seed, StreamTag tag,
                             std::uint64_t index) noexcept;

/// Source of fair +-1 coinflips backed by a 64-bit Mersenne twister. Each
/// engine word supplies 64 flips, least significant bit first.
class CoinSource {
 public:
  explicit CoinSource(std::uint64_t engine_seed) : engine_(engine_seed) {}

  static CoinSource for_substream(std::uint64_t seed, StreamTag tag,
                                  std::uint64_t index) {
    return CoinSource(substream_seed(seed, tag, index));
  }

  int flip() {
    if (bits_left_ == 0) {
      word_ = engine_();
      bits_left_ = 64;
    }
    const int step = (word_ & 1U) != 0 ? 1 : -1;
    word_ >>= 1;
    --bits_left_;
    return step;
  }

  /// Uniform on [-1, 1), 53-bit resolution. Portable across standard
  /// libraries, unlike std::uniform_real_distribution.
  double uniform_signed() {
    const std::uint64_t bits = engine_() >> 11;
    return static_cast<double>(bits) * 0x1.0p-52 - 1.0;
  }

  /// Uniform integer in [lo, hi], by rejection on the raw engine output.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
  std::uint64_t word_ = 0;
  int bits_left_ = 0;
};

}  // namespace coinlab
