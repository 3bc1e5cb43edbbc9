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
#include <string>
#include <vector>

namespace coinlab {

/// Protocol parameters. n processors, t of them bad; epsilon is the slack in
/// the spectral norm threshold; c1 scales the incomplete-stream lengths; m is the
/// number of iterations (rows of the iteration-sum matrix).
struct Params {
  std::int64_t n = 0;
  std::int64_t t = 0;
  double epsilon = 0.1;
  double c1 = 0.001;
  std::int64_t m = 1;

  /// Throws ParameterError unless n >= 1, t >= 0, 2t < n, epsilon > 0,
  /// c1 > 0 and m >= 1.
  void validate() const;
};

/// Deviation thresholds derived from Params:
///   alpha        = sqrt(2n(n-2t))
///   beta         = sqrt(2n(n-t)) - 2t
///   beta_half    = beta / 2
///   beta_quarter = beta / 4 = sqrt(2n(n-t))/4 - t/2
///   alpha_prime  = alpha - beta_quarter
///   norm_threshold = (6 + 2 epsilon) sqrt(n(m+n))
struct DerivedThresholds {
  double alpha = 0;
  double beta = 0;
  double beta_half = 0;
  double beta_quarter = 0;
  double alpha_prime = 0;
  double norm_threshold = 0;
};

DerivedThresholds derive(const Params& params);

/// 2 exp(-(beta/4)^2 / (2tn)): bound on the probability that a stream of up to
/// nt coins, stopped anywhere, deviates beyond beta/4. Zero when t == 0.
double lemma52_part1_bound(const Params& params);

/// Same bound with a real-valued t, for evaluating claims at t = c*n.
double lemma52_part1_bound(double n, double t);

/// (2/3)(c1)(g)^2(h)^2(7+2 epsilon)^{-2}: the resilience-constant chain for
/// the spectral variant, with g the Gaussian-tail factor and h^2 the bound on
/// (beta/2)^2 / n^2.
double resilience_chain(double epsilon, double gaussian_factor = 0.0183,
                        double c1 = 0.001, double beta_ratio = 0.49999);

struct Claim {
  std::string id;
  std::string statement;
  double lhs = 0;
  double rhs = 0;
  std::string relation;  // "<=", "<", ">", "in"
  double rhs_upper = 0;  // only for relation "in"
  bool pass = false;
};

struct ClaimReport {
  std::int64_t n = 0;
  std::vector<Claim> claims;
  std::vector<std::string> notes;

  bool all_pass() const;
};

/// Evaluates the correction's arithmetic claims for processor count
/// `base.n`:
///   (a) the stopped-stream bound at t = 0.005n is at most e^{-11};
///   (b) 0.211 - e^{-11} > 1/20;
///   (c) (beta/2)^2 > 0.49999 n^2 at t = 10^{-6} n;
///   (d) the resilience chain at epsilon -> 0 lies in [1.13e-9, 1.15e-9].
/// Notes record the interpretive choices and constant discrepancies.
ClaimReport check_claims(const Params& base);

}  // namespace coinlab
