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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coinlab/bounds.hpp"
#include "coinlab/exact.hpp"
#include "coinlab/walk.hpp"

namespace coinlab {

/// Event-probability estimate with an exact-tail (Clopper-Pearson) interval.
struct McEstimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double p_hat = 0;
  double ci_low = 0;
  double ci_high = 1;
  double confidence_level = 0.99;
  std::uint64_t seed = 0;
};

McEstimate make_estimate(std::uint64_t successes, std::uint64_t trials,
                         double confidence_level, std::uint64_t seed);

/// Two-sided standard normal quantile for the given confidence level
/// (2.5758... at 0.99).
double normal_quantile(double confidence_level);

enum class Relation { kAtMost, kAtLeast, kEquals };
enum class Verdict { kPass, kFail, kInconclusive };

const char* to_string(Relation relation) noexcept;
const char* to_string(Verdict verdict) noexcept;

struct VerificationVerdict {
  std::string claim_id;
  McEstimate empirical;
  double analytic_bound = 0;
  Relation relation = Relation::kAtMost;
  Verdict verdict = Verdict::kInconclusive;
};

/// Verdict for "true probability <relation> bound" from the interval:
///   at-most:  pass if ci_high <= bound, fail if ci_low > bound;
///   at-least: pass if ci_low >= bound,  fail if ci_high < bound;
///   equals:   pass iff bound lies inside [ci_low, ci_high].
/// Anything else is inconclusive (the interval straddles the bound).
Verdict judge(const McEstimate& estimate, double bound, Relation relation);

struct McOptions {
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  double confidence_level = 0.99;
};

// ---------------------------------------------------------------------------
// Reflection identity for the running maximum

struct Fact3Check {
  std::int64_t n = 0;
  std::int64_t r = 0;
  ExactProb reflection;    // Pr(S_n = r) + 2 Pr(S_n > r)
  ExactProb twice_sum_ge;  // 2 Pr(S_n >= r)
  VerificationVerdict exact_match;  // empirical Pr(M_n >= r) vs reflection
  VerificationVerdict bound;        // empirical Pr(M_n >= r) <= 2 Pr(S_n >= r)
};

Fact3Check verify_fact3_mc(std::int64_t n, std::int64_t r, const McOptions& options);

/// Shares one set of simulated walks across all thresholds in `rs`.
std::vector<Fact3Check> verify_fact3_sweep(std::int64_t n,
                                           std::span<const std::int64_t> rs,
                                           const McOptions& options);

// ---------------------------------------------------------------------------
// Stopped stream of up to nt coins

struct Lemma52Part1Result {
  std::int64_t stream_length = 0;  // n t
  double beta_quarter = 0;
  std::int64_t hit_threshold = 0;  // smallest integer exceeding beta/4
  double analytic_bound = 0;
  McEstimate upward;
  McEstimate downward;
  /// Exact one-sided Pr(M >= hit_threshold); absent for long streams.
  std::optional<double> exact_one_sided;
  VerificationVerdict verdict;  // both directions pooled
};

/// Even-numbered trials target the upward direction, odd-numbered the
/// downward one. t == 0 means there is no stream and the event is empty.
Lemma52Part1Result verify_lemma52_part1(const Params& params, const McOptions& options);

// ---------------------------------------------------------------------------
// Stream of between n(n-2t) and n(n-t) coins with an adversarial stop

struct Lemma52Part2Direction {
  Direction direction = Direction::kUp;
  McEstimate first;           // d * S_{n(n-2t)} >= alpha
  McEstimate adversary_max;   // adversary pulls back >= beta/4 after the prefix
  McEstimate full;            // d * S_stop >= alpha'
  bool count_check = false;       // full >= first - adversary_max, in counts
  bool structural_check = false;  // same inequality with interval slack
};

struct Lemma52Part2Result {
  std::int64_t prefix_length = 0;  // n(n-2t)
  std::int64_t full_length = 0;    // n(n-t)
  double alpha = 0;
  double beta_quarter = 0;
  double alpha_prime = 0;
  double reference_first = 0.211;  // reported only; not verified
  std::array<Lemma52Part2Direction, 2> directions;

  bool structural_check() const {
    return directions[0].structural_check && directions[1].structural_check &&
           directions[0].count_check && directions[1].count_check;
  }
};

/// Each trial generates one walk of n(n-t) steps and evaluates both target
/// directions on it; the adversary plays OmniscientExtreme against the target
/// over [n(n-2t), n(n-t)].
Lemma52Part2Result verify_lemma52_part2(const Params& params, const McOptions& options);

// ---------------------------------------------------------------------------
// Incomplete streams totalling c1 m n t coins

std::int64_t lemma71_walk_length(const Params& params);
/// (beta/6) c1 m
double lemma71_threshold(const Params& params);

struct Lemma71Result {
  std::int64_t walk_length = 0;
  double threshold = 0;
  McEstimate max_event;  // running max (prefix 0 included) >= threshold
  McEstimate sum_event;  // endpoint >= threshold
  double paired_mean = 0;    // mean of 1[X] - 2*1[Y]
  double paired_stderr = 0;
  /// empirical = max_event; analytic_bound = 2 p_hat(Y) + z * stderr of the
  /// paired difference; pass iff p_hat(X) <= analytic_bound.
  VerificationVerdict verdict;
};

Lemma71Result verify_lemma71(const Params& params, const McOptions& options,
                             std::optional<double> threshold = std::nullopt);

/// X and Y are read off the same simulated walk, so the comparison is paired.
std::vector<Lemma71Result> verify_lemma71_sweep(const Params& params,
                                                std::span<const double> thresholds,
                                                const McOptions& options);

struct Lemma71Exact {
  ExactProb max_ge;        // Pr(max_{0<=k<=L} S_k >= threshold)
  ExactProb twice_sum_ge;  // 2 Pr(S_L >= threshold)
};

Lemma71Exact lemma71_exact(std::int64_t walk_length, double threshold);

}  // namespace coinlab
