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

#include "coinlab/bounds.hpp"

#include <cmath>
#include <sstream>

#include "coinlab/error.hpp"

namespace coinlab {

void Params::validate() const {
  std::ostringstream msg;
  if (n < 1) {
    msg << "n must be >= 1 (got " << n << ")";
  } else if (t < 0) {
    msg << "t must be >= 0 (got " << t << ")";
  } else if (2 * t >= n) {
    msg << "bad processors must be a minority: 2t < n (n=" << n << ", t=" << t << ")";
  } else if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    msg << "epsilon must be a positive real";
  } else if (!(c1 > 0) || !std::isfinite(c1)) {
    msg << "c1 must be a positive real";
  } else if (m < 1) {
    msg << "m must be >= 1 (got " << m << ")";
  } else {
    return;
  }
  throw ParameterError(msg.str());
}

DerivedThresholds derive(const Params& params) {
  params.validate();
  const auto n = static_cast<double>(params.n);
  const auto t = static_cast<double>(params.t);
  const auto m = static_cast<double>(params.m);

  DerivedThresholds d;
  const double full = std::sqrt(2.0 * n * (n - t));
  d.alpha = std::sqrt(2.0 * n * (n - 2.0 * t));
  d.beta = full - 2.0 * t;
  d.beta_half = full / 2.0 - t;
  d.beta_quarter = full / 4.0 - t / 2.0;
  d.alpha_prime = d.alpha - d.beta_quarter;
  d.norm_threshold = (6.0 + 2.0 * params.epsilon) * std::sqrt(n * (m + n));
  return d;
}

double lemma52_part1_bound(double n, double t) {
  if (!(n >= 1) || !(t >= 0) || !(2 * t < n)) {
    throw ParameterError("lemma52_part1_bound requires n >= 1 and 0 <= t < n/2");
  }
  if (t == 0) {
    return 0.0;
  }
  const double quarter = std::sqrt(2.0 * n * (n - t)) / 4.0 - t / 2.0;
  return 2.0 * std::exp(-(quarter * quarter) / (2.0 * t * n));
}

double lemma52_part1_bound(const Params& params) {
  params.validate();
  return lemma52_part1_bound(static_cast<double>(params.n),
                             static_cast<double>(params.t));
}

double resilience_chain(double epsilon, double gaussian_factor, double c1,
                        double beta_ratio) {
  const double spread = 7.0 + 2.0 * epsilon;
  return (2.0 / 3.0) * c1 * gaussian_factor * gaussian_factor * beta_ratio *
         beta_ratio / (spread * spread);
}

bool ClaimReport::all_pass() const {
  for (const auto& c : claims) {
    if (!c.pass) {
      return false;
    }
  }
  return !claims.empty();
}

ClaimReport check_claims(const Params& base) {
  if (base.n < 1) {
    throw ParameterError("check_claims requires n >= 1");
  }
  ClaimReport report;
  report.n = base.n;
  const auto n = static_cast<double>(base.n);
  const double e11 = std::exp(-11.0);

  {
    const double t = 0.005 * n;
    Claim c;
    c.id = "a";
    c.statement = "stopped-stream deviation bound 2exp(-(beta/4)^2/(2tn)) at t=0.005n is at most e^-11";
    c.lhs = lemma52_part1_bound(n, t);
    c.rhs = e11;
    c.relation = "<=";
    c.pass = c.lhs <= c.rhs;
    report.claims.push_back(c);
  }
  {
    Claim c;
    c.id = "b";
    c.statement = "0.211 - e^-11 > 1/20";
    c.lhs = 0.211 - e11;
    c.rhs = 1.0 / 20.0;
    c.relation = ">";
    c.pass = c.lhs > c.rhs;
    report.claims.push_back(c);
  }
  {
    const double t = 1e-6 * n;
    const double half = std::sqrt(2.0 * n * (n - t)) / 2.0 - t;
    Claim c;
    c.id = "c";
    c.statement = "(beta/2)^2 > 0.49999 n^2 at t=1e-6 n";
    c.lhs = half * half;
    c.rhs = 0.49999 * n * n;
    c.relation = ">";
    c.pass = c.lhs > c.rhs;
    report.claims.push_back(c);
  }
  {
    Claim c;
    c.id = "d";
    c.statement = "(2/3)(.001)(.0183)^2(.49999)^2(7+2eps)^-2 at eps->0 lies in [1.13e-9, 1.15e-9]";
    c.lhs = resilience_chain(0.0);
    c.rhs = 1.13e-9;
    c.rhs_upper = 1.15e-9;
    c.relation = "in";
    c.pass = c.lhs >= c.rhs && c.lhs <= c.rhs_upper;
    report.claims.push_back(c);
  }

  std::ostringstream chain_eps;
  chain_eps << "resilience chain at configured epsilon=" << base.epsilon
            << " evaluates to " << resilience_chain(base.epsilon)
            << " (the eps->0 limit is the quoted 1.14e-9)";
  std::ostringstream factor;
  factor << "gaussian factor discrepancy: the displayed formula uses .183^2 but "
            "the numeric chain uses (.0183)^2; only .0183 reproduces 1.14e-9 "
            "(with .183 the chain gives "
         << resilience_chain(0.0, 0.183) << ")";
  report.notes = {
      factor.str(),
      chain_eps.str(),
      "stopped-stream bound uses the derivation form 2exp(-(beta/4)^2/(2tn)); "
      "the printed statement (1/2)e^{-(beta/4)^2}/2nt is treated as a typographical variant",
      "the resilience substitution 't < 1/72' is read as t < n/72",
      "spectral-variant resilience constant replaced: t < 4.25e-7 n becomes t < 3.3e-8 n",
      "0.211 is inherited from the uncorrected deviation lemma and is not independently verified here",
  };
  return report;
}

}  // namespace coinlab
