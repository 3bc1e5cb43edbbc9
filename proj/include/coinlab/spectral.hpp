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
#include <iosfwd>
#include <optional>
#include <string>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coinlab/bounds.hpp"
#include "coinlab/error.hpp"
#include "coinlab/montecarlo.hpp"
#include "coinlab/walk.hpp"

namespace coinlab {

using IntMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;
using RealMatrix = Eigen::MatrixXd;

/// One iteration's coin matrix. Column j is processor j's stream, filled top
/// to bottom. H = H' + W; in a stopped column with stop point k the first k
/// entries of H equal H' and the rest are 0, while W holds -H' on that suffix.
struct StoppedCoinMatrix {
  IntMatrix h;
  IntMatrix h_prime;
  IntMatrix w;
  std::vector<std::int64_t> stopped_columns;
  std::vector<std::int64_t> stop_points;  // parallel to stopped_columns, in [0, n]
};

/// Fills an n x n H' from `source` column by column, then stops each listed
/// column where `adversary` (applied to the column's partial-sum walk) says.
StoppedCoinMatrix build_h(std::int64_t n, std::span<const std::int64_t> stopped_columns,
                          const StoppingStrategy& adversary, CoinSource& source);

/// G = R + Z over m iterations (rows) and n processors (columns). Bad columns
/// are all zero in G, R and Z.
struct IterationSumMatrices {
  RealMatrix g;
  RealMatrix r;
  RealMatrix z;
  std::vector<std::int64_t> bad_columns;
  std::vector<std::int64_t> stopped_columns;
};

struct SpectralSetup {
  Params params;
  /// Good streams the adversary may cut in each iteration; defaults to t.
  std::int64_t t_stopped = -1;
  /// Strategy applied to each stopped column; defaults to
  /// OmniscientExtreme(-, [1, n]).
  std::optional<StoppingStrategy> adversary;

  std::int64_t stopped_count() const { return t_stopped < 0 ? params.t : t_stopped; }
  StoppingStrategy adversary_or_default() const;
};

/// Bad columns are the last t; stopped columns the first t_stopped. Iteration i
/// of trial `trial` draws from substream (seed, trial * m + i).
IterationSumMatrices build_g(const SpectralSetup& setup, std::uint64_t seed,
                             std::uint64_t trial = 0);

struct NormEstimate {
  double value = 0;
  /// Residual bound ||Av - lambda v|| / lambda for the Gram operator A; also
  /// bounds the relative error of value against the nearest singular value.
  double relative_error_bound = 0;
  int iterations_used = 0;
  bool restarted = false;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, NormEstimate best)
      : Error(what), best_(best) {}
  const NormEstimate& best_estimate() const noexcept { return best_; }

 private:
  NormEstimate best_;
};

/// Largest singular value by power iteration on M^T M from a seeded random
/// start vector. Stops once the relative change of the Rayleigh quotient is
/// below rel_tol and the geometric extrapolation of the remaining change is
/// too. After half the budget without convergence it restarts once from a
/// fresh start vector. A zero matrix has norm 0.
NormEstimate spectral_norm(const RealMatrix& m, double rel_tol = 1e-6,
                           int max_power_iters = 10'000, std::uint64_t start_seed = 0);

struct NormBoundResult {
  double threshold = 0;  // (6 + 2 eps) sqrt(n(m+n))
  double probability_bound = 0;  // 2 / (m+n)
  VerificationVerdict g_exceeds;  // Pr(|G| > threshold) <= 2/(m+n)
  McEstimate r_exceeds_half;      // Pr(|R| > threshold/2)
  McEstimate z_exceeds_half;      // Pr(|Z| > threshold/2)
  std::uint64_t triangle_checks = 0;
  /// max over trials of (|G| - |R| - |Z|) / (|R| + |Z|); <= 0 up to rounding.
  double worst_triangle_excess = 0;
  double mean_g = 0;
  double max_g = 0;
  double mean_r = 0;
  double mean_z = 0;
};

/// Per trial builds G, R, Z and checks |G| <= |R| + |Z| within
/// 10 rel_tol (|R| + |Z|); a violation throws InvariantViolation.
NormBoundResult verify_norm_bound(const SpectralSetup& setup, const McOptions& options,
                                  double rel_tol = 1e-6);

/// Comma-separated rows, integers printed without a fractional part.
void write_csv(std::ostream& out, const RealMatrix& m);

}  // namespace coinlab
