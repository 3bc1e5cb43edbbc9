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

#include "coinlab/coin_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coinlab/bounds.hpp"
#include "coinlab/error.hpp"
#include "coinlab/parallel.hpp"
#include "coinlab/rng.hpp"

namespace coinlab {
namespace {

Params params_of(const IterationConfig& config) {
  Params p;
  p.n = config.n;
  p.t = config.t;
  return p;
}

std::int64_t core_count(const IterationConfig& c) {
  return c.n - c.t - c.t_excluded - c.t_stopped;
}

}  // namespace

void IterationConfig::validate() const {
  params_of(*this).validate();
  std::ostringstream msg;
  if (t_excluded < 0 || t_excluded > t) {
    msg << "t_excluded must lie in [0, t]";
  } else if (t_stopped < 0 || t_stopped > t) {
    msg << "t_stopped must lie in [0, t]";
  } else if (core_count(*this) < 1) {
    msg << "need at least one complete good stream: n - t - t_excluded - t_stopped >= 1";
  } else {
    return;
  }
  throw ParameterError(msg.str());
}

IterationRecord run_iteration(const IterationConfig& config, std::uint64_t index,
                              bool keep_streams) {
  config.validate();
  const DerivedThresholds d = derive(params_of(config));
  const int good = sign(config.good_direction);
  const std::int64_t n = config.n;

  auto source = CoinSource::for_substream(config.seed, StreamTag::kCoinIteration, index);
  IterationRecord rec;
  rec.index = index;

  for (std::int64_t i = 0; i < core_count(config); ++i) {
    WalkTrace w = generate_walk(n, source);
    rec.core_sum += w.final_value();
    if (keep_streams) rec.core_streams.push_back(std::move(w));
  }

  const StoppingStrategy adversary =
      config.stop_mode == StopMode::kOmniscient
          ? StoppingStrategy{OmniscientExtreme{opposite(config.good_direction), Window{1, n}}}
          : StoppingStrategy{NoStop{}};
  for (std::int64_t i = 0; i < config.t_stopped; ++i) {
    WalkTrace w = generate_walk(n, source);
    const StoppedStream stop = apply_stop(w, adversary);
    rec.stopped_sum += stop.value;
    rec.stopped_full_sum += w.final_value();
    if (keep_streams) {
      rec.stops.push_back(stop);
      rec.stopped_streams.push_back(std::move(w));
    }
  }

  for (std::int64_t i = 0; i < config.t_excluded; ++i) {
    WalkTrace w = generate_walk(n, source);
    rec.excluded_raw_sum += w.final_value();
    if (keep_streams) rec.excluded_streams.push_back(std::move(w));
  }
  const auto cap = static_cast<std::int64_t>(std::floor(d.beta_quarter));
  rec.excluded_sum = std::clamp(rec.excluded_raw_sum, -cap, cap);
  rec.excluded_cap_binds = rec.excluded_sum != rec.excluded_raw_sum;

  rec.ambiguous_term = config.ambiguous ? -good * config.t : 0;
  rec.bad_term = std::clamp(config.bad_term, -config.t * n, config.t * n);

  rec.total = rec.core_sum + rec.excluded_sum + rec.stopped_sum + rec.ambiguous_term +
              rec.bad_term;
  rec.tie = rec.total == 0;
  rec.coin = rec.total >= 0 ? Direction::kUp : Direction::kDown;
  rec.good_event = static_cast<double>(good * rec.core_sum) >= d.alpha_prime;
  return rec;
}

McEstimate good_event_frequency(const IterationConfig& config, std::uint64_t iterations,
                                unsigned workers, double confidence_level) {
  if (iterations < 1) {
    throw ParameterError("iterations must be >= 1");
  }
  config.validate();
  const Counters hits = run_trials(iterations, workers, Counters(1),
                                   [&](Counters& acc, std::uint64_t i) {
                                     if (run_iteration(config, i, false).good_event) {
                                       ++acc[0];
                                     }
                                   });
  return make_estimate(hits[0], iterations, confidence_level, config.seed);
}

AgreementResult run_agreement(const IterationConfig& config, std::uint64_t max_iterations) {
  if (max_iterations < 1) {
    throw ParameterError("max_iterations must be >= 1");
  }
  config.validate();
  const double alpha_prime = derive(params_of(config)).alpha_prime;
  const int good = sign(config.good_direction);

  AgreementResult result;
  for (std::uint64_t i = 0; i < max_iterations; ++i) {
    IterationRecord rec = run_iteration(config, i, false);
    const bool decides = rec.coin == config.good_direction &&
                         static_cast<double>(good * rec.total) >= alpha_prime;
    result.records.push_back(std::move(rec));
    result.iterations_used = i + 1;
    if (decides) {
      result.agreed = true;
      break;
    }
  }
  return result;
}

}  // namespace coinlab
