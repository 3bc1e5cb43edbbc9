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

#include "coinlab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "coinlab/error.hpp"
#include "coinlab/parallel.hpp"
#include "coinlab/rng.hpp"

namespace coinlab {
namespace {

void require_options(const McOptions& options) {
  if (options.trials < 1) {
    throw ParameterError("trials must be >= 1");
  }
  if (!(options.confidence_level > 0.0 && options.confidence_level < 1.0)) {
    throw ParameterError("confidence level must lie in (0, 1)");
  }
}

// Smallest integer strictly greater than x.
std::int64_t integer_above(double x) {
  return static_cast<std::int64_t>(std::floor(x)) + 1;
}

// Smallest integer >= x.
std::int64_t integer_at_least(double x) {
  return static_cast<std::int64_t>(std::ceil(x));
}

constexpr std::int64_t kExactLengthLimit = 20'000;

}  // namespace

McEstimate make_estimate(std::uint64_t successes, std::uint64_t trials,
                         double confidence_level, std::uint64_t seed) {
  if (trials == 0) {
    throw ParameterError("an estimate needs at least one trial");
  }
  if (successes > trials) {
    throw ParameterError("successes cannot exceed trials");
  }
  if (!(confidence_level > 0.0 && confidence_level < 1.0)) {
    throw ParameterError("confidence level must lie in (0, 1)");
  }
  McEstimate e;
  e.successes = successes;
  e.trials = trials;
  e.confidence_level = confidence_level;
  e.seed = seed;
  const auto s = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  e.p_hat = s / n;
  const double tail = (1.0 - confidence_level) / 2.0;
  e.ci_low = successes == 0 ? 0.0 : boost::math::ibeta_inv(s, n - s + 1.0, tail);
  e.ci_high = successes == trials ? 1.0 : boost::math::ibeta_inv(s + 1.0, n - s, 1.0 - tail);
  e.ci_low = std::min(e.ci_low, e.p_hat);
  e.ci_high = std::max(e.ci_high, e.p_hat);
  return e;
}

double normal_quantile(double confidence_level) {
  const boost::math::normal standard;
  return boost::math::quantile(standard, 0.5 + confidence_level / 2.0);
}

const char* to_string(Relation relation) noexcept {
  switch (relation) {
    case Relation::kAtMost:
      return "<=";
    case Relation::kAtLeast:
      return ">=";
    case Relation::kEquals:
      return "==";
  }
  return "?";
}

const char* to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

Verdict judge(const McEstimate& estimate, double bound, Relation relation) {
  switch (relation) {
    case Relation::kAtMost:
      if (estimate.ci_high <= bound) return Verdict::kPass;
      if (estimate.ci_low > bound) return Verdict::kFail;
      return Verdict::kInconclusive;
    case Relation::kAtLeast:
      if (estimate.ci_low >= bound) return Verdict::kPass;
      if (estimate.ci_high < bound) return Verdict::kFail;
      return Verdict::kInconclusive;
    case Relation::kEquals:
      return estimate.ci_low <= bound && bound <= estimate.ci_high ? Verdict::kPass
                                                                   : Verdict::kFail;
  }
  return Verdict::kInconclusive;
}

// ---------------------------------------------------------------------------

std::vector<Fact3Check> verify_fact3_sweep(std::int64_t n,
                                           std::span<const std::int64_t> rs,
                                           const McOptions& options) {
  require_options(options);
  if (n < 1) {
    throw ParameterError("fact3 requires n >= 1");
  }
  for (const auto r : rs) {
    if (r < 1) {
      throw ParameterError("fact3 requires r >= 1");
    }
  }

  const std::vector<std::int64_t> thresholds(rs.begin(), rs.end());
  const Counters hits = run_trials(
      options.trials, options.workers, Counters(thresholds.size()),
      [&](Counters& acc, std::uint64_t trial) {
        auto source = CoinSource::for_substream(options.seed, StreamTag::kFact3, trial);
        const WalkTrace trace = generate_walk(n, source);
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
          if (trace.run_max >= thresholds[i]) {
            ++acc[i];
          }
        }
      });

  std::vector<Fact3Check> checks;
  checks.reserve(thresholds.size());
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const std::int64_t r = thresholds[i];
    Fact3Check c;
    c.n = n;
    c.r = r;
    c.reflection = prob_max_ge_reflection(n, r);
    c.twice_sum_ge = prob_sum_ge(n, r).times(2);
    const McEstimate est =
        make_estimate(hits[i], options.trials, options.confidence_level, options.seed);

    c.exact_match.claim_id = "fact3.reflection.n" + std::to_string(n) + ".r" + std::to_string(r);
    c.exact_match.empirical = est;
    c.exact_match.analytic_bound = c.reflection.to_double();
    c.exact_match.relation = Relation::kEquals;
    c.exact_match.verdict = judge(est, c.exact_match.analytic_bound, Relation::kEquals);

    c.bound.claim_id = "fact3.bound.n" + std::to_string(n) + ".r" + std::to_string(r);
    c.bound.empirical = est;
    c.bound.analytic_bound = c.twice_sum_ge.to_double();
    c.bound.relation = Relation::kAtMost;
    c.bound.verdict = judge(est, c.bound.analytic_bound, Relation::kAtMost);
    checks.push_back(std::move(c));
  }
  return checks;
}

Fact3Check verify_fact3_mc(std::int64_t n, std::int64_t r, const McOptions& options) {
  const std::int64_t rs[] = {r};
  return verify_fact3_sweep(n, rs, options).front();
}

// ---------------------------------------------------------------------------

Lemma52Part1Result verify_lemma52_part1(const Params& params, const McOptions& options) {
  require_options(options);
  const DerivedThresholds d = derive(params);

  Lemma52Part1Result result;
  result.stream_length = params.n * params.t;
  result.beta_quarter = d.beta_quarter;
  result.hit_threshold = integer_above(d.beta_quarter);
  result.analytic_bound = lemma52_part1_bound(params);

  const std::uint64_t up_trials = (options.trials + 1) / 2;
  const std::uint64_t down_trials = options.trials / 2;

  Counters hits(2);
  if (result.stream_length > 0) {
    const std::int64_t length = result.stream_length;
    const std::int64_t threshold = result.hit_threshold;
    hits = run_trials(options.trials, options.workers, Counters(2),
                      [&](Counters& acc, std::uint64_t trial) {
                        auto source = CoinSource::for_substream(
                            options.seed, StreamTag::kLemma52Part1, trial);
                        const WalkTrace trace = generate_walk(length, source);
                        const Direction dir = trial % 2 == 0 ? Direction::kUp : Direction::kDown;
                        const StoppedStream stop =
                            apply_stop(trace, FirstHit{threshold, dir, Window{1, length}});
                        if (sign(dir) * stop.value > result.beta_quarter) {
                          ++acc[trial % 2];
                        }
                      });
    if (length <= kExactLengthLimit) {
      result.exact_one_sided = prob_max_ge_reflection(length, threshold).to_double();
    }
  }

  const double cl = options.confidence_level;
  result.upward = make_estimate(hits[0], std::max<std::uint64_t>(up_trials, 1), cl, options.seed);
  if (down_trials > 0) {
    result.downward = make_estimate(hits[1], down_trials, cl, options.seed);
  }

  VerificationVerdict& v = result.verdict;
  v.claim_id = "lemma52-1.stopped-stream-bound";
  v.empirical = make_estimate(hits[0] + hits[1], options.trials, cl, options.seed);
  v.analytic_bound = result.analytic_bound;
  v.relation = Relation::kAtMost;
  // With no stream the event is impossible and the bound of 0 holds exactly.
  v.verdict = result.stream_length == 0
                  ? Verdict::kPass
                  : judge(v.empirical, v.analytic_bound, Relation::kAtMost);
  return result;
}

// ---------------------------------------------------------------------------

Lemma52Part2Result verify_lemma52_part2(const Params& params, const McOptions& options) {
  require_options(options);
  const DerivedThresholds d = derive(params);

  Lemma52Part2Result result;
  result.prefix_length = params.n * (params.n - 2 * params.t);
  result.full_length = params.n * (params.n - params.t);
  result.alpha = d.alpha;
  result.beta_quarter = d.beta_quarter;
  result.alpha_prime = d.alpha_prime;

  const std::int64_t lo = result.prefix_length;
  const std::int64_t hi = result.full_length;
  constexpr std::array<Direction, 2> kDirections{Direction::kUp, Direction::kDown};

  // Per direction: first, adversary_max, full.
  const Counters hits = run_trials(
      options.trials, options.workers, Counters(6),
      [&](Counters& acc, std::uint64_t trial) {
        auto source = CoinSource::for_substream(options.seed, StreamTag::kLemma52Part2, trial);
        const WalkTrace trace = generate_walk(hi, source);
        const std::int64_t at_prefix = trace.prefix_sums[static_cast<std::size_t>(lo)];
        for (std::size_t k = 0; k < kDirections.size(); ++k) {
          const int dir = sign(kDirections[k]);
          const StoppedStream stop =
              apply_stop(trace, OmniscientExtreme{opposite(kDirections[k]), Window{lo, hi}});
          const std::int64_t pullback = dir * (at_prefix - stop.value);
          if (dir * at_prefix >= result.alpha) ++acc[3 * k];
          if (static_cast<double>(pullback) >= result.beta_quarter) ++acc[3 * k + 1];
          if (dir * stop.value >= result.alpha_prime) ++acc[3 * k + 2];
        }
      });

  const double cl = options.confidence_level;
  for (std::size_t k = 0; k < kDirections.size(); ++k) {
    Lemma52Part2Direction& out = result.directions[k];
    out.direction = kDirections[k];
    out.first = make_estimate(hits[3 * k], options.trials, cl, options.seed);
    out.adversary_max = make_estimate(hits[3 * k + 1], options.trials, cl, options.seed);
    out.full = make_estimate(hits[3 * k + 2], options.trials, cl, options.seed);
    out.count_check = hits[3 * k + 2] + hits[3 * k + 1] >= hits[3 * k];
    out.structural_check = out.full.ci_high >= out.first.ci_low - out.adversary_max.ci_high;
  }
  return result;
}

// ---------------------------------------------------------------------------

std::int64_t lemma71_walk_length(const Params& params) {
  params.validate();
  const double coins = params.c1 * static_cast<double>(params.m) *
                       static_cast<double>(params.n) * static_cast<double>(params.t);
  // Tolerate representation error in products such as 0.05 * 10 * 40 * 2.
  return static_cast<std::int64_t>(std::floor(coins + 1e-9));
}

double lemma71_threshold(const Params& params) {
  const DerivedThresholds d = derive(params);
  return d.beta / 6.0 * params.c1 * static_cast<double>(params.m);
}

std::vector<Lemma71Result> verify_lemma71_sweep(const Params& params,
                                                std::span<const double> thresholds,
                                                const McOptions& options) {
  require_options(options);
  const std::int64_t length = lemma71_walk_length(params);
  if (length < 1) {
    throw ParameterError("c1 m n t must be at least 1 coin");
  }
  if (length > kMaxWalkLength) {
    throw ParameterError("c1 m n t exceeds the maximum walk length");
  }
  const std::vector<double> taus(thresholds.begin(), thresholds.end());
  const std::size_t k = taus.size();

  // Per threshold: X hits, Y hits, sum of (1[X] - 2*1[Y])^2.
  const Counters hits = run_trials(
      options.trials, options.workers, Counters(3 * k),
      [&](Counters& acc, std::uint64_t trial) {
        auto source = CoinSource::for_substream(options.seed, StreamTag::kLemma71, trial);
        const WalkTrace trace = generate_walk(length, source);
        for (std::size_t i = 0; i < k; ++i) {
          const int x = static_cast<double>(trace.run_max) >= taus[i] ? 1 : 0;
          const int y = static_cast<double>(trace.final_value()) >= taus[i] ? 1 : 0;
          const int diff = x - 2 * y;
          acc[3 * i] += static_cast<std::uint64_t>(x);
          acc[3 * i + 1] += static_cast<std::uint64_t>(y);
          acc[3 * i + 2] += static_cast<std::uint64_t>(diff * diff);
        }
      });

  const double cl = options.confidence_level;
  const double z = normal_quantile(cl);
  const auto n = static_cast<double>(options.trials);
  std::vector<Lemma71Result> results;
  results.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    Lemma71Result r;
    r.walk_length = length;
    r.threshold = taus[i];
    r.max_event = make_estimate(hits[3 * i], options.trials, cl, options.seed);
    r.sum_event = make_estimate(hits[3 * i + 1], options.trials, cl, options.seed);
    r.paired_mean = r.max_event.p_hat - 2.0 * r.sum_event.p_hat;
    const double second_moment = static_cast<double>(hits[3 * i + 2]) / n;
    const double variance = std::max(0.0, second_moment - r.paired_mean * r.paired_mean);
    r.paired_stderr = options.trials > 1 ? std::sqrt(variance * n / (n - 1.0) / n) : 0.0;

    VerificationVerdict& v = r.verdict;
    std::ostringstream id;
    id << "lemma71.max-vs-twice-sum.tau" << taus[i];
    v.claim_id = id.str();
    v.empirical = r.max_event;
    v.analytic_bound = 2.0 * r.sum_event.p_hat + z * r.paired_stderr;
    v.relation = Relation::kAtMost;
    v.verdict = r.max_event.p_hat <= v.analytic_bound ? Verdict::kPass : Verdict::kFail;
    results.push_back(std::move(r));
  }
  return results;
}

Lemma71Result verify_lemma71(const Params& params, const McOptions& options,
                             std::optional<double> threshold) {
  const double taus[] = {threshold.value_or(lemma71_threshold(params))};
  return verify_lemma71_sweep(params, taus, options).front();
}

Lemma71Exact lemma71_exact(std::int64_t walk_length, double threshold) {
  if (walk_length < 1) {
    throw ParameterError("walk length must be >= 1");
  }
  const std::int64_t r = integer_at_least(threshold);
  Lemma71Exact out;
  out.max_ge = r <= 0 ? ExactProb::one() : prob_max_ge_reflection(walk_length, r);
  out.twice_sum_ge = prob_sum_ge(walk_length, r).times(2);
  return out;
}

}  // namespace coinlab
