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

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace coinlab {

/// 0 means "one per hardware thread".
inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) {
    return requested;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs `body(acc, trial)` for every trial in [0, trials) and merges the
/// per-worker accumulators with `+=`.
///
/// Trials are split into contiguous chunks, one per worker. The result is
/// independent of the worker count provided that `body` draws its randomness
/// from a substream keyed on `trial` and `Acc::operator+=` is associative and
/// commutative (integer counters are).
template <class Acc, class Body>
Acc run_trials(std::uint64_t trials, unsigned workers, const Acc& zero,
               Body&& body) {
  const std::uint64_t count =
      std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(trials, 1));
  if (count <= 1) {
    Acc acc = zero;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
      body(acc, trial);
    }
    return acc;
  }

  std::vector<Acc> partial(count, zero);
  std::vector<std::exception_ptr> failures(count);
  {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (std::uint64_t w = 0; w < count; ++w) {
      pool.emplace_back([&, w] {
        const std::uint64_t begin = trials * w / count;
        const std::uint64_t end = trials * (w + 1) / count;
        try {
          for (std::uint64_t trial = begin; trial < end; ++trial) {
            body(partial[w], trial);
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) {
      std::rethrow_exception(failure);
    }
  }
  Acc acc = zero;
  for (const auto& p : partial) {
    acc += p;
  }
  return acc;
}

/// Fixed-size vector of counters, mergeable by run_trials.
struct Counters {
  std::vector<std::uint64_t> values;

  explicit Counters(std::size_t size = 0) : values(size, 0) {}

  std::uint64_t& operator[](std::size_t i) { return values[i]; }
  std::uint64_t operator[](std::size_t i) const { return values[i]; }

  Counters& operator+=(const Counters& other) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] += other.values[i];
    }
    return *this;
  }
};

}  // namespace coinlab
