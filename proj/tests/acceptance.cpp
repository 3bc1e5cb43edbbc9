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


// Acceptance suite. Prints one PASS/FAIL line per criterion, with indented
// detail lines underneath.
//
// Exit status is 0 when every criterion passes or the only failures are the
// ones listed in kKnownUnattainable (criteria that are false as stated and
// are reported as failing rather than weakened). Pass --strict to make any
// failure fatal.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "coinlab/bounds.hpp"
#include "coinlab/coin_iteration.hpp"
#include "coinlab/exact.hpp"
#include "coinlab/montecarlo.hpp"
#include "coinlab/report.hpp"
#include "coinlab/rng.hpp"
#include "coinlab/spectral.hpp"
#include "json.hpp"

namespace {

using namespace coinlab;
using Clock = std::chrono::steady_clock;

// Criterion 1 demands Pr(M_n >= r) < 2 Pr(S_n >= r) strictly, which is an
// equality whenever n + r is odd.
const std::set<int> kKnownUnattainable = {1};

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok    " : "FAILED ") + what);
  }
  void note(const std::string& what) { details.push_back("note  " + what); }
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

McOptions options(std::uint64_t trials, std::uint64_t seed) {
  McOptions o;
  o.trials = trials;
  o.seed = seed;
  return o;
}

Params params(std::int64_t n, std::int64_t t, std::int64_t m = 1, double c1 = 0.001,
              double epsilon = 0.1) {
  Params p;
  p.n = n;
  p.t = t;
  p.m = m;
  p.c1 = c1;
  p.epsilon = epsilon;
  return p;
}

std::string estimate_text(const McEstimate& e) {
  return fmt("%llu/%llu = %.6g, CI [%.6g, %.6g]",
             static_cast<unsigned long long>(e.successes),
             static_cast<unsigned long long>(e.trials), e.p_hat, e.ci_low, e.ci_high);
}

// 1. Exact reflection identity, and the strict twice-tail inequality.
Outcome reflection_exactness() {
  Outcome o;
  const auto start = Clock::now();
  int pairs = 0;
  int identity_ok = 0;
  int positive = 0;
  int strict_ok = 0;
  int corrected_ok = 0;
  std::string first_counterexample;
  for (std::int64_t n = 1; n <= 16; ++n) {
    for (std::int64_t r = 1; r <= n; ++r) {
      ++pairs;
      const ExactProb enumerated = prob_max_ge_enumeration(n, r);
      const ExactProb reflected = prob_max_ge_reflection(n, r);
      identity_ok += enumerated == reflected ? 1 : 0;
      const ExactProb twice = prob_sum_ge(n, r).times(2);
      if (twice > ExactProb::zero()) {
        ++positive;
        if (enumerated < twice) {
          ++strict_ok;
        } else if (first_counterexample.empty()) {
          first_counterexample = fmt("n=%lld r=%lld: %s vs %s", static_cast<long long>(n),
                                     static_cast<long long>(r), enumerated.str().c_str(),
                                     twice.str().c_str());
        }
      }
      const bool point_mass = prob_sum_eq(n, r) > ExactProb::zero();
      corrected_ok += (enumerated <= twice && (enumerated < twice) == point_mass) ? 1 : 0;
    }
  }
  const double elapsed = seconds_since(start);
  o.require(identity_ok == pairs,
            fmt("enumeration equals Pr(S=r)+2Pr(S>r) exactly for %d/%d pairs", identity_ok,
                pairs));
  o.require(strict_ok == positive,
            fmt("strict Pr(M>=r) < 2Pr(S>=r) holds for %d/%d pairs with positive right side",
                strict_ok, positive));
  if (!first_counterexample.empty()) {
    o.note("equality, not strict inequality, whenever n+r is odd; first case " +
           first_counterexample);
  }
  o.note(fmt("weak form (<= always, strict iff Pr(S_n=r) > 0) holds for %d/%d pairs",
             corrected_ok, pairs));
  o.require(elapsed < 60.0, fmt("runtime %.2f s < 60 s", elapsed));
  return o;
}

// 2. Stopped stream of up to nt coins.
Outcome stopped_stream() {
  Outcome o;
  const auto start = Clock::now();
  const double bound = lemma52_part1_bound(params(1000, 5));
  o.require(bound <= std::exp(-11.0),
            fmt("bound at n=1000 t=5: %.6g <= e^-11 = %.6g", bound, std::exp(-11.0)));
  const Lemma52Part1Result r = verify_lemma52_part1(params(200, 1), options(1'000'000, 20260));
  o.require(r.verdict.verdict == Verdict::kPass,
            fmt("n=200 t=1: exceedance %s vs bound %.6g (%s)",
                estimate_text(r.verdict.empirical).c_str(), r.analytic_bound,
                to_string(r.verdict.verdict)));
  if (r.exact_one_sided) o.note(fmt("exact one-sided probability %.6g", *r.exact_one_sided));
  const double elapsed = seconds_since(start);
  o.require(elapsed < 120.0, fmt("runtime %.2f s < 120 s", elapsed));
  return o;
}

// 3. Stream between n(n-2t) and n(n-t) coins with an adversarial stop.
Outcome adversarial_window() {
  Outcome o;
  const Lemma52Part2Result r = verify_lemma52_part2(params(60, 3), options(100'000, 20261));
  for (const auto& d : r.directions) {
    const char* dir = to_string(d.direction);
    o.require(d.structural_check && d.count_check,
              fmt("direction %s: p_full %.5f >= p_first %.5f - p_adversary_max %.5f "
                  "(within CI widths)",
                  dir, d.full.p_hat, d.first.p_hat, d.adversary_max.p_hat));
    o.note(fmt("direction %s: measured p_first %.5f beside reference 0.211 (reported only)", dir,
               d.first.p_hat));
  }
  return o;
}

// 4. Constant chains.
Outcome constant_chains() {
  Outcome o;
  const auto start = Clock::now();
  const ClaimReport report = check_claims(params(1000, 5));
  const double elapsed = seconds_since(start);
  for (const Claim& c : report.claims) {
    o.require(c.pass, fmt("(%s) %s: lhs %.6g %s %.6g%s", c.id.c_str(), c.statement.c_str(),
                          c.lhs, c.relation.c_str(), c.rhs,
                          c.relation == "in" ? fmt("..%.6g", c.rhs_upper).c_str() : ""));
  }
  o.require(report.claims.size() == 4, "four claims evaluated");
  bool discrepancy = false;
  for (const std::string& note : report.notes) {
    if (note.find(".0183") != std::string::npos) {
      discrepancy = true;
      o.note(note);
    }
  }
  o.require(discrepancy, ".183 / .0183 discrepancy note present");
  o.require(elapsed < 1.0, fmt("runtime %.4f s < 1 s", elapsed));
  return o;
}

// 5. Maximum over incomplete streams vs twice the endpoint tail.
Outcome incomplete_streams() {
  Outcome o;
  const auto start = Clock::now();
  const Params p = params(40, 2, 10, 0.05);
  const std::int64_t length = lemma71_walk_length(p);
  const double sigma = std::sqrt(static_cast<double>(length));
  const std::vector<double> thresholds = {0.5 * sigma, sigma, 2 * sigma};
  const char* names[] = {"0.5 sigma", "1 sigma", "2 sigma"};
  const auto sweep = verify_lemma71_sweep(p, thresholds, options(100'000, 20262));
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const Lemma71Result& r = sweep[i];
    o.require(r.verdict.verdict == Verdict::kPass,
              fmt("length %lld, threshold %s = %.4f: Pr(X) %.5f <= 2 Pr(Y) + slack = %.5f",
                  static_cast<long long>(length), names[i], r.threshold, r.max_event.p_hat,
                  r.verdict.analytic_bound));
  }
  const Lemma71Exact exact = lemma71_exact(8, 2);
  const ExactProb oracle = prob_max_ge_enumeration(8, 2);
  o.require(exact.max_ge == oracle && exact.max_ge <= exact.twice_sum_ge,
            "length 8, threshold 2: Pr(max >= 2) = " + exact.max_ge.str() +
                " equals enumeration " + oracle.str() + " and is <= 2Pr(S>=2) = " +
                exact.twice_sum_ge.str());
  const Params small = params(4, 1, 2, 1.0);
  const Lemma71Result mc = verify_lemma71(small, options(100'000, 20263), 2.0);
  const Verdict agree = judge(mc.max_event, exact.max_ge.to_double(), Relation::kEquals);
  o.require(lemma71_walk_length(small) == 8 && agree == Verdict::kPass,
            "length 8 simulation " + estimate_text(mc.max_event) + " contains " +
                exact.max_ge.str());
  const double elapsed = seconds_since(start);
  o.require(elapsed < 120.0, fmt("runtime %.2f s < 120 s", elapsed));
  return o;
}

// 6. Spectral norm bound, triangle inequality, and the 2x2 oracle.
Outcome spectral() {
  Outcome o;
  const auto start = Clock::now();
  SpectralSetup setup;
  setup.params = params(32, 1, 32, 0.001, 0.1);
  const NormBoundResult r = verify_norm_bound(setup, options(1000, 20264));
  o.require(r.g_exceeds.verdict == Verdict::kPass && r.g_exceeds.empirical.successes == 0,
            fmt("Pr(|G| > %.3f): %s <= %.5f", r.threshold,
                estimate_text(r.g_exceeds.empirical).c_str(), r.probability_bound));
  o.require(r.triangle_checks == 1000 && r.worst_triangle_excess <= 1e-5,
            fmt("|G| <= |R| + |Z| in %llu/1000 trials, worst relative excess %.3g",
                static_cast<unsigned long long>(r.triangle_checks), r.worst_triangle_excess));
  o.note(fmt("mean |G| %.2f, max |G| %.2f, mean |R| %.2f, mean |Z| %.2f", r.mean_g, r.max_g,
             r.mean_r, r.mean_z));

  auto source = CoinSource::for_substream(20264, StreamTag::kOracleMatrices, 0);
  double worst = 0;
  int mismatches = 0;
  for (int k = 0; k < 1000; ++k) {
    RealMatrix a(2, 2);
    for (int i = 0; i < 4; ++i) a(i / 2, i % 2) = static_cast<double>(source.uniform_int(-9, 9));
    const double fro = a.squaredNorm();
    const double det = a.determinant();
    const double exact = std::sqrt((fro + std::sqrt(std::max(0.0, fro * fro - 4 * det * det))) / 2);
    const double got = spectral_norm(a, 1e-6, 10'000, static_cast<std::uint64_t>(k)).value;
    const double rel = exact == 0 ? std::abs(got) : std::abs(got - exact) / exact;
    worst = std::max(worst, rel);
    mismatches += rel <= 1e-6 ? 0 : 1;
  }
  o.require(mismatches == 0,
            fmt("power iteration vs closed form on 1000 random 2x2 matrices: worst relative "
                "error %.3g <= 1e-6",
                worst));
  const double elapsed = seconds_since(start);
  o.require(elapsed < 180.0, fmt("runtime %.2f s < 180 s", elapsed));
  return o;
}

// 7. Coin-iteration properties.
Outcome coin_iteration() {
  Outcome o;
  IterationConfig loud;
  loud.n = 60;
  loud.t = 3;
  loud.t_excluded = 3;
  loud.t_stopped = 3;
  loud.seed = 20265;
  Params p = params(60, 3);
  const DerivedThresholds d = derive(p);
  const auto cap = static_cast<std::int64_t>(std::floor(d.beta_quarter));

  int additive = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const IterationRecord r = run_iteration(loud, i);
    std::int64_t core = 0;
    for (const auto& w : r.core_streams) core += w.prefix_sums.back();
    std::int64_t stopped = 0;
    bool extremes = true;
    for (const auto& w : r.stopped_streams) {
      std::int64_t lowest = w.prefix_sums[1];
      for (std::size_t k = 1; k < w.prefix_sums.size(); ++k) {
        lowest = std::min(lowest, w.prefix_sums[k]);
      }
      stopped += lowest;
    }
    for (std::size_t k = 0; k < r.stops.size(); ++k) {
      extremes = extremes && r.stops[k].value == r.stopped_streams[k].prefix_sums[r.stops[k].stop_index];
    }
    std::int64_t excluded = 0;
    for (const auto& w : r.excluded_streams) excluded += w.prefix_sums.back();
    excluded = std::clamp(excluded, -cap, cap);
    const std::int64_t ambiguous = -loud.t;
    const bool ok = extremes && core == r.core_sum && stopped == r.stopped_sum &&
                    excluded == r.excluded_sum && ambiguous == r.ambiguous_term &&
                    r.total == core + stopped + excluded + ambiguous;
    additive += ok ? 1 : 0;
  }
  o.require(additive == 1000,
            fmt("total = core + excluded + stopped + ambiguous recomputed from raw streams in "
                "%d/1000 iterations",
                additive));

  IterationConfig quiet = loud;
  quiet.stop_mode = StopMode::kNone;
  quiet.ambiguous = false;
  quiet.bad_term = quiet.t * quiet.n;
  int invariant = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const IterationRecord a = run_iteration(loud, i, false);
    const IterationRecord b = run_iteration(quiet, i, false);
    invariant += (a.good_event == b.good_event && a.core_sum == b.core_sum) ? 1 : 0;
  }
  o.require(invariant == 1000,
            fmt("good event unchanged by adversary knobs under paired seeds in %d/1000", invariant));

  IterationConfig calm;
  calm.n = 60;
  calm.t = 0;
  calm.seed = 20266;
  const McEstimate good = good_event_frequency(calm, 20'000);
  std::uint64_t agreed = 0;
  std::uint64_t iterations = 0;
  bool paired = true;
  for (std::uint64_t run = 0; run < 2000; ++run) {
    calm.seed = substream_seed(20267, StreamTag::kAgreementRuns, run);
    const AgreementResult a = run_agreement(calm, 1000);
    agreed += a.agreed ? 1 : 0;
    iterations += a.iterations_used;
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      const bool decided = a.agreed && k + 1 == a.records.size();
      paired = paired && a.records[k].good_event == decided;
    }
  }
  const McEstimate rate = make_estimate(agreed, iterations, 0.99, 20267);
  const bool overlap = rate.ci_low <= good.ci_high && good.ci_low <= rate.ci_high;
  o.require(paired, "t=0: every agreement decision coincides with the good event of that iteration");
  o.require(overlap, "t=0: per-iteration agreement rate " + estimate_text(rate) +
                         " matches good-event frequency " + estimate_text(good));
  return o;
}

// 8. Determinism of the full suite across worker counts, through the CLI.
Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path();
  std::string docs[2];
  const unsigned workers[2] = {1, 4};
  for (int k = 0; k < 2; ++k) {
    const fs::path out = dir / fmt("coinlab_acceptance_all_w%u.json", workers[k]);
    const std::string cmd = std::string("\"") + COINLAB_CLI_PATH + "\" all --seed 7 --workers " +
                            std::to_string(workers[k]) + " --out \"" + out.string() +
                            "\" 2>/dev/null";
    const auto start = Clock::now();
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.require(code == 0, fmt("coinlab all --seed 7 --workers %u exits %d in %.1f s", workers[k],
                             code, seconds_since(start)));
    std::ifstream in(out);
    std::stringstream text;
    text << in.rdbuf();
    try {
      docs[k] = strip_nondeterministic(nlohmann::json::parse(text.str())).dump();
    } catch (const std::exception& e) {
      o.require(false, std::string("report parses: ") + e.what());
    }
    fs::remove(out);
  }
  o.require(!docs[0].empty() && docs[0] == docs[1],
            fmt("reports identical apart from wall times and worker count (%zu bytes)",
                docs[0].size()));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"reflection identity exact for n <= 16; strict twice-tail inequality", reflection_exactness},
      {"stopped stream of up to nt coins: analytic bound and Monte Carlo", stopped_stream},
      {"adversarial window n(n-2t)..n(n-t): structural inequality", adversarial_window},
      {"constant chains", constant_chains},
      {"incomplete streams: max vs twice endpoint tail", incomplete_streams},
      {"spectral norm bound, subadditivity, 2x2 oracle", spectral},
      {"coin iteration: additivity, invariance, agreement rate", coin_iteration},
      {"determinism of `all` across worker counts", determinism},
  };

  int failed = 0;
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.require(false, std::string("exception: ") + e.what());
    }
    const bool known = kKnownUnattainable.count(id) > 0;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  criterion " << id << ": "
              << criteria[i].first;
    if (!outcome.pass && known) std::cout << "  [known unattainable as stated]";
    std::cout << "\n";
    for (const std::string& line : outcome.details) std::cout << "        " << line << "\n";
    std::cout.flush();
    if (!outcome.pass) {
      ++failed;
      if (!known) ++unexpected;
    }
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria pass";
  if (failed > unexpected) std::cout << "; " << failed - unexpected << " known-unattainable failure(s)";
  std::cout << "\n";
  if (strict) return failed == 0 ? 0 : 1;
  return unexpected == 0 ? 0 : 1;
}
