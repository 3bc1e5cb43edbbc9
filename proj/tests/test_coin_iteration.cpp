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


#include <algorithm>
#include <cmath>
#include <cstdint>

#include <gtest/gtest.h>

#include "coinlab/bounds.hpp"
#include "coinlab/coin_iteration.hpp"
#include "coinlab/error.hpp"

namespace coinlab {
namespace {

IterationConfig full_adversary(std::uint64_t seed) {
  IterationConfig c;
  c.n = 60;
  c.t = 3;
  c.t_excluded = 3;
  c.t_stopped = 3;
  c.seed = seed;
  return c;
}

double alpha_prime(std::int64_t n, std::int64_t t) {
  Params p;
  p.n = n;
  p.t = t;
  return derive(p).alpha_prime;
}

TEST(Iteration, NoAdversary) {
  IterationConfig c;
  c.n = 10;
  c.t = 0;
  c.seed = 1;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const IterationRecord r = run_iteration(c, i);
    EXPECT_EQ(r.excluded_sum, 0);
    EXPECT_EQ(r.stopped_sum, 0);
    EXPECT_EQ(r.ambiguous_term, 0);
    EXPECT_EQ(r.total, r.core_sum);
    EXPECT_EQ(r.core_streams.size(), 10U);
  }
}

// Recompute every component from the retained raw streams.
TEST(Iteration, ComponentsRecomputeFromStreams) {
  const IterationConfig c = full_adversary(42);
  const auto cap = static_cast<std::int64_t>(std::floor(derive({60, 3}).beta_quarter));
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const IterationRecord r = run_iteration(c, i);
    ASSERT_EQ(r.core_streams.size(), 51U);
    ASSERT_EQ(r.stopped_streams.size(), 3U);
    ASSERT_EQ(r.excluded_streams.size(), 3U);
    std::int64_t core = 0;
    for (const auto& w : r.core_streams) {
      ASSERT_EQ(w.length(), 60);
      core += w.final_value();
    }
    std::int64_t stopped = 0;
    std::int64_t stopped_full = 0;
    for (std::size_t k = 0; k < r.stopped_streams.size(); ++k) {
      const WalkTrace& w = r.stopped_streams[k];
      // The adversary pushes down, so each stopped value is the smallest
      // prefix sum over [1, n].
      std::int64_t lowest = w.prefix_sums[1];
      for (std::int64_t j = 1; j <= 60; ++j) lowest = std::min(lowest, w.prefix_sums[j]);
      ASSERT_EQ(r.stops[k].value, lowest);
      ASSERT_EQ(r.stops[k].value, w.prefix_sums[r.stops[k].stop_index]);
      stopped += lowest;
      stopped_full += w.final_value();
    }
    std::int64_t excluded = 0;
    for (const auto& w : r.excluded_streams) excluded += w.final_value();
    ASSERT_EQ(r.core_sum, core);
    ASSERT_EQ(r.stopped_sum, stopped);
    ASSERT_EQ(r.stopped_full_sum, stopped_full);
    ASSERT_LE(r.stopped_sum, r.stopped_full_sum);
    ASSERT_EQ(r.excluded_raw_sum, excluded);
    ASSERT_EQ(r.excluded_sum, std::clamp(excluded, -cap, cap));
    ASSERT_EQ(r.excluded_cap_binds, excluded != r.excluded_sum);
    ASSERT_EQ(r.ambiguous_term, -3);
    ASSERT_EQ(r.total, r.core_sum + r.excluded_sum + r.stopped_sum + r.ambiguous_term);
    ASSERT_EQ(r.tie, r.total == 0);
    ASSERT_EQ(r.coin, r.total >= 0 ? Direction::kUp : Direction::kDown);
    ASSERT_EQ(r.good_event, static_cast<double>(r.core_sum) >= alpha_prime(60, 3));
  }
}

TEST(Iteration, DownwardGoodDirection) {
  IterationConfig c = full_adversary(5);
  c.good_direction = Direction::kDown;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const IterationRecord r = run_iteration(c, i);
    EXPECT_EQ(r.ambiguous_term, 3);
    EXPECT_GE(r.stopped_sum, r.stopped_full_sum);
    EXPECT_EQ(r.good_event, -static_cast<double>(r.core_sum) >= alpha_prime(60, 3));
  }
}

TEST(Iteration, GoodEventIgnoresAdversaryKnobs) {
  IterationConfig loud = full_adversary(77);
  IterationConfig quiet = loud;
  quiet.stop_mode = StopMode::kNone;
  quiet.ambiguous = false;
  quiet.bad_term = 180;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const IterationRecord a = run_iteration(loud, i, false);
    const IterationRecord b = run_iteration(quiet, i, false);
    ASSERT_EQ(a.core_sum, b.core_sum);
    ASSERT_EQ(a.good_event, b.good_event);
    ASSERT_EQ(b.stopped_sum, b.stopped_full_sum);
    ASSERT_EQ(b.bad_term, 180);
  }
}

TEST(Iteration, BadTermIsClamped) {
  IterationConfig c = full_adversary(1);
  c.bad_term = -100000;
  EXPECT_EQ(run_iteration(c).bad_term, -180);
}

TEST(Iteration, RejectsInvalidConfigs) {
  IterationConfig c = full_adversary(1);
  c.t_excluded = 4;
  EXPECT_THROW(run_iteration(c), ParameterError);
  c = full_adversary(1);
  c.t_stopped = -1;
  EXPECT_THROW(run_iteration(c), ParameterError);
  c = full_adversary(1);
  c.t = 30;
  EXPECT_THROW(run_iteration(c), ParameterError);
  c.n = 3;
  c.t = 1;
  c.t_excluded = 1;
  c.t_stopped = 1;
  EXPECT_THROW(run_iteration(c), ParameterError);
}

TEST(Iteration, TiesResolveUp) {
  IterationConfig c;
  c.n = 2;
  c.t = 0;
  c.seed = 3;
  int ties = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const IterationRecord r = run_iteration(c, i);
    if (r.total == 0) {
      ++ties;
      EXPECT_TRUE(r.tie);
      EXPECT_EQ(r.coin, Direction::kUp);
    }
  }
  EXPECT_GT(ties, 0);
}

TEST(GoodEventFrequency, Runs) {
  IterationConfig c;
  c.n = 2;
  c.t = 0;
  c.seed = 1;
  const McEstimate tiny = good_event_frequency(c, 100);
  EXPECT_EQ(tiny.trials, 100U);
  EXPECT_THROW(good_event_frequency(c, 0), ParameterError);

  c.n = 60;
  const McEstimate base = good_event_frequency(c, 10'000, 0);
  EXPECT_GT(base.p_hat, 0.05);
  EXPECT_LT(base.p_hat, 0.5);
  EXPECT_EQ(base.successes, good_event_frequency(c, 10'000, 3).successes);
}

TEST(GoodEventFrequency, AdversaryDoesNotRaiseIt) {
  IterationConfig calm;
  calm.n = 60;
  calm.t = 0;
  calm.seed = 7;
  const McEstimate p0 = good_event_frequency(calm, 10'000);
  const McEstimate p3 = good_event_frequency(full_adversary(7), 10'000);
  EXPECT_LE(p3.p_hat, p0.p_hat);
  EXPECT_LE(p3.ci_low, p0.ci_high);
}

TEST(Agreement, ZeroBudgetRejected) {
  IterationConfig c;
  c.n = 60;
  c.seed = 1;
  EXPECT_THROW(run_agreement(c, 0), ParameterError);
}

TEST(Agreement, Deterministic) {
  const IterationConfig c = full_adversary(11);
  const AgreementResult a = run_agreement(c, 1000);
  const AgreementResult b = run_agreement(c, 1000);
  EXPECT_EQ(a.agreed, b.agreed);
  EXPECT_EQ(a.iterations_used, b.iterations_used);
  EXPECT_EQ(a.records.size(), a.iterations_used);
  EXPECT_TRUE(a.records.back().core_streams.empty());
}

TEST(Agreement, TerminatesWithoutAdversary) {
  int agreed = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    IterationConfig c;
    c.n = 60;
    c.t = 0;
    c.seed = seed;
    agreed += run_agreement(c, 1000).agreed ? 1 : 0;
  }
  EXPECT_GE(agreed, 298);
}

// With t = 0 the decision rule reduces to the good event, iteration by
// iteration on the same substreams.
TEST(Agreement, MatchesGoodEventWithoutAdversary) {
  IterationConfig c;
  c.n = 60;
  c.t = 0;
  c.seed = 21;
  const AgreementResult a = run_agreement(c, 1000);
  ASSERT_TRUE(a.agreed);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const bool last = i + 1 == a.records.size();
    ASSERT_EQ(a.records[i].good_event, last) << i;
  }
}

}  // namespace
}  // namespace coinlab
