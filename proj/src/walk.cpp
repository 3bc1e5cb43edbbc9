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

#include "coinlab/walk.hpp"

#include <sstream>

#include "coinlab/error.hpp"

namespace coinlab {
namespace {

void push_step(WalkTrace& trace, int step) {
  trace.steps.push_back(static_cast<std::int8_t>(step));
  const std::int64_t next = trace.prefix_sums.back() + step;
  const auto index = static_cast<std::int64_t>(trace.prefix_sums.size());
  trace.prefix_sums.push_back(next);
  if (next > trace.run_max) {
    trace.run_max = next;
    trace.argmax = index;
  } else if (next < trace.run_min) {
    trace.run_min = next;
    trace.argmin = index;
  }
}

void check_window(const Window& w, std::int64_t length, const char* what) {
  if (w.lo < 1 || w.lo > w.hi || w.hi > length) {
    std::ostringstream msg;
    msg << what << " window [" << w.lo << ", " << w.hi
        << "] must satisfy 1 <= lo <= hi <= " << length;
    throw ParameterError(msg.str());
  }
}

}  // namespace

WalkTrace generate_walk(std::int64_t length, CoinSource& source) {
  if (length < 0 || length > kMaxWalkLength) {
    throw ParameterError("walk length must lie in [0, 2^31]");
  }
  WalkTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(length));
  trace.prefix_sums.reserve(static_cast<std::size_t>(length) + 1);
  for (std::int64_t i = 0; i < length; ++i) {
    push_step(trace, source.flip());
  }
  return trace;
}

WalkTrace walk_from_steps(std::span<const int> steps) {
  WalkTrace trace;
  trace.steps.reserve(steps.size());
  trace.prefix_sums.reserve(steps.size() + 1);
  for (const int step : steps) {
    if (step != 1 && step != -1) {
      throw ParameterError("walk steps must be +1 or -1");
    }
    push_step(trace, step);
  }
  return trace;
}

void validate_strategy(const StoppingStrategy& strategy, std::int64_t length) {
  std::visit(
      [length](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, FixedLength>) {
          if (s.k < 0 || s.k > length) {
            throw ParameterError("FixedLength k outside [0, stream length]");
          }
        } else if constexpr (std::is_same_v<S, FirstHit>) {
          if (s.threshold < 1) {
            throw ParameterError("FirstHit threshold must be >= 1");
          }
          check_window(s.window, length, "FirstHit");
        } else if constexpr (std::is_same_v<S, OmniscientExtreme>) {
          check_window(s.window, length, "OmniscientExtreme");
        }
      },
      strategy);
}

StoppedStream apply_stop(const WalkTrace& trace,
                         const StoppingStrategy& strategy) {
  validate_strategy(strategy, trace.length());
  const auto& sums = trace.prefix_sums;

  const std::int64_t stop = std::visit(
      [&](const auto& s) -> std::int64_t {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, NoStop>) {
          return trace.length();
        } else if constexpr (std::is_same_v<S, FixedLength>) {
          return s.k;
        } else if constexpr (std::is_same_v<S, FirstHit>) {
          const int dir = sign(s.direction);
          for (std::int64_t i = s.window.lo; i <= s.window.hi; ++i) {
            if (dir * sums[i] >= s.threshold) {
              return i;
            }
          }
          return s.window.hi;
        } else {
          const int dir = sign(s.direction);
          std::int64_t best = s.window.lo;
          for (std::int64_t i = s.window.lo + 1; i <= s.window.hi; ++i) {
            if (dir * sums[i] > dir * sums[best]) {
              best = i;
            }
          }
          return best;
        }
      },
      strategy);

  return StoppedStream{stop, sums[static_cast<std::size_t>(stop)], strategy};
}

std::string describe(const StoppingStrategy& strategy) {
  std::ostringstream out;
  std::visit(
      [&out](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, NoStop>) {
          out << "NoStop";
        } else if constexpr (std::is_same_v<S, FixedLength>) {
          out << "FixedLength(" << s.k << ")";
        } else if constexpr (std::is_same_v<S, FirstHit>) {
          out << "FirstHit(" << s.threshold << "," << to_string(s.direction)
              << ",[" << s.window.lo << "," << s.window.hi << "])";
        } else {
          out << "OmniscientExtreme(" << to_string(s.direction) << ",["
              << s.window.lo << "," << s.window.hi << "])";
        }
      },
      strategy);
  return out.str();
}

}  // namespace coinlab
