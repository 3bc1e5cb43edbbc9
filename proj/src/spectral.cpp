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

#include "coinlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <tuple>

#include "coinlab/parallel.hpp"
#include "coinlab/rng.hpp"

namespace coinlab {

StoppedCoinMatrix build_h(std::int64_t n, std::span<const std::int64_t> stopped_columns,
                          const StoppingStrategy& adversary, CoinSource& source) {
  if (n < 1) {
    throw ParameterError("matrix dimension n must be >= 1");
  }
  if (static_cast<std::int64_t>(stopped_columns.size()) > n) {
    throw ParameterError("more stopped columns than columns");
  }
  validate_strategy(adversary, n);

  StoppedCoinMatrix out;
  out.h_prime.resize(n, n);
  for (std::int64_t j = 0; j < n; ++j) {
    for (std::int64_t i = 0; i < n; ++i) {
      out.h_prime(i, j) = source.flip();
    }
  }
  out.h = out.h_prime;
  out.w = IntMatrix::Zero(n, n);

  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<int> column(static_cast<std::size_t>(n));
  for (const std::int64_t j : stopped_columns) {
    if (j < 0 || j >= n || seen[static_cast<std::size_t>(j)]) {
      throw ParameterError("stopped columns must be distinct indices in [0, n)");
    }
    seen[static_cast<std::size_t>(j)] = true;
    for (std::int64_t i = 0; i < n; ++i) {
      column[static_cast<std::size_t>(i)] = out.h_prime(i, j);
    }
    const StoppedStream stop = apply_stop(walk_from_steps(column), adversary);
    for (std::int64_t i = stop.stop_index; i < n; ++i) {
      out.h(i, j) = 0;
      out.w(i, j) = -out.h_prime(i, j);
    }
    out.stopped_columns.push_back(j);
    out.stop_points.push_back(stop.stop_index);
  }
  return out;
}

StoppingStrategy SpectralSetup::adversary_or_default() const {
  if (adversary) {
    return *adversary;
  }
  return OmniscientExtreme{Direction::kDown, Window{1, params.n}};
}

IterationSumMatrices build_g(const SpectralSetup& setup, std::uint64_t seed,
                             std::uint64_t trial) {
  const Params& p = setup.params;
  p.validate();
  const std::int64_t stopped = setup.stopped_count();
  if (stopped < 0 || stopped > p.t) {
    throw ParameterError("t_stopped must lie in [0, t]");
  }
  const StoppingStrategy adversary = setup.adversary_or_default();

  IterationSumMatrices out;
  for (std::int64_t j = p.n - p.t; j < p.n; ++j) out.bad_columns.push_back(j);
  for (std::int64_t j = 0; j < stopped; ++j) out.stopped_columns.push_back(j);

  const std::int64_t good_columns = p.n - p.t;
  out.g = RealMatrix::Zero(p.m, p.n);
  out.r = RealMatrix::Zero(p.m, p.n);
  out.z = RealMatrix::Zero(p.m, p.n);
  const auto rows = static_cast<std::uint64_t>(p.m);
  for (std::int64_t i = 0; i < p.m; ++i) {
    auto source = CoinSource::for_substream(seed, StreamTag::kSpectral,
                                            trial * rows + static_cast<std::uint64_t>(i));
    const StoppedCoinMatrix h = build_h(p.n, out.stopped_columns, adversary, source);
    for (std::int64_t j = 0; j < good_columns; ++j) {
      out.g(i, j) = h.h.col(j).sum();
      out.r(i, j) = h.h_prime.col(j).sum();
      out.z(i, j) = h.w.col(j).sum();
    }
  }
  return out;
}

NormEstimate spectral_norm(const RealMatrix& m, double rel_tol, int max_power_iters,
                           std::uint64_t start_seed) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw ParameterError("rel_tol must lie in (0, 1)");
  }
  if (max_power_iters < 2) {
    throw ParameterError("max_power_iters must be >= 2");
  }
  if (m.size() == 0 || m.isZero(0.0)) {
    return {};
  }

  const Eigen::Index cols = m.cols();
  NormEstimate best;
  int used = 0;
  const int first_budget = max_power_iters / 2;

  for (int attempt = 0; attempt < 2; ++attempt) {
    auto source = CoinSource::for_substream(start_seed, StreamTag::kPowerStart,
                                            static_cast<std::uint64_t>(attempt));
    Eigen::VectorXd v(cols);
    for (Eigen::Index i = 0; i < cols; ++i) v(i) = source.uniform_signed();
    if (v.norm() == 0.0) v(0) = 1.0;
    v.normalize();

    const int budget = attempt == 0 ? first_budget : max_power_iters - first_budget;
    double lambda_prev = -1.0;
    double delta_prev = 0.0;
    for (int k = 0; k < budget; ++k) {
      ++used;
      const Eigen::VectorXd w = m.transpose() * (m * v);
      const double lambda = v.dot(w);
      const double w_norm = w.norm();
      if (w_norm == 0.0) {
        break;  // start vector in the null space; restart
      }
      const double residual = (w - lambda * v).norm();
      if (lambda > 0.0) {
        const NormEstimate current{std::sqrt(lambda), residual / lambda, used, attempt > 0};
        if (current.value >= best.value) best = current;
      }

      if (lambda_prev >= 0.0 && lambda > 0.0) {
        const double delta = std::abs(lambda - lambda_prev);
        bool converged = delta <= rel_tol * lambda;
        if (delta <= 1e-13 * lambda) {
          converged = true;  // at rounding noise
        } else if (converged && delta_prev > 0.0) {
          const double ratio = delta / delta_prev;
          converged = ratio < 1.0 && delta * ratio / (1.0 - ratio) <= rel_tol * lambda;
        } else if (converged) {
          converged = false;  // need two differences to extrapolate
        }
        if (converged) {
          return NormEstimate{std::sqrt(lambda), residual / lambda, used, attempt > 0};
        }
        delta_prev = delta;
      }
      lambda_prev = lambda;
      v = w / w_norm;
    }
  }
  best.iterations_used = used;
  std::ostringstream msg;
  msg << "power iteration did not converge within " << max_power_iters
      << " iterations (best estimate " << best.value << ")";
  throw ConvergenceError(msg.str(), best);
}

namespace {

struct TrialNorms {
  std::uint64_t trial;
  double g;
  double r;
  double z;
};

struct NormLog {
  std::vector<TrialNorms> rows;
  NormLog& operator+=(const NormLog& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    return *this;
  }
};

}  // namespace

NormBoundResult verify_norm_bound(const SpectralSetup& setup, const McOptions& options,
                                  double rel_tol) {
  if (options.trials < 1) {
    throw ParameterError("trials must be >= 1");
  }
  const Params& p = setup.params;
  const DerivedThresholds d = derive(p);

  NormLog log = run_trials(options.trials, options.workers, NormLog{},
                           [&](NormLog& acc, std::uint64_t trial) {
                             const IterationSumMatrices mats = build_g(setup, options.seed, trial);
                             const std::uint64_t start = substream_seed(
                                 options.seed, StreamTag::kPowerStart, trial);
                             acc.rows.push_back(TrialNorms{
                                 trial, spectral_norm(mats.g, rel_tol, 10'000, start).value,
                                 spectral_norm(mats.r, rel_tol, 10'000, start).value,
                                 spectral_norm(mats.z, rel_tol, 10'000, start).value});
                           });
  std::sort(log.rows.begin(), log.rows.end(),
            [](const TrialNorms& a, const TrialNorms& b) { return a.trial < b.trial; });

  NormBoundResult out;
  out.threshold = d.norm_threshold;
  out.probability_bound = 2.0 / static_cast<double>(p.m + p.n);
  std::uint64_t g_hits = 0;
  std::uint64_t r_hits = 0;
  std::uint64_t z_hits = 0;
  out.worst_triangle_excess = -1.0;
  for (const TrialNorms& row : log.rows) {
    const double both = row.r + row.z;
    const double excess = both > 0.0 ? (row.g - both) / both : 0.0;
    out.worst_triangle_excess = std::max(out.worst_triangle_excess, excess);
    if (row.g > both + 10.0 * rel_tol * both) {
      std::ostringstream msg;
      msg << "norm subadditivity violated in trial " << row.trial << ": |G|=" << row.g
          << " > |R|+|Z|=" << both;
      throw InvariantViolation(msg.str());
    }
    ++out.triangle_checks;
    if (row.g > out.threshold) ++g_hits;
    if (row.r > out.threshold / 2.0) ++r_hits;
    if (row.z > out.threshold / 2.0) ++z_hits;
    out.mean_g += row.g;
    out.mean_r += row.r;
    out.mean_z += row.z;
    out.max_g = std::max(out.max_g, row.g);
  }
  const auto count = static_cast<double>(log.rows.size());
  out.mean_g /= count;
  out.mean_r /= count;
  out.mean_z /= count;

  const double cl = options.confidence_level;
  out.r_exceeds_half = make_estimate(r_hits, options.trials, cl, options.seed);
  out.z_exceeds_half = make_estimate(z_hits, options.trials, cl, options.seed);
  VerificationVerdict& v = out.g_exceeds;
  v.claim_id = "spectral.norm-bound";
  v.empirical = make_estimate(g_hits, options.trials, cl, options.seed);
  v.analytic_bound = out.probability_bound;
  v.relation = Relation::kAtMost;
  v.verdict = judge(v.empirical, v.analytic_bound, Relation::kAtMost);
  return out;
}

void write_csv(std::ostream& out, const RealMatrix& m) {
  const auto old = out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  out.precision(old);
}

}  // namespace coinlab
