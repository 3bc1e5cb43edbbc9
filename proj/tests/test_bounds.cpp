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


#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "coinlab/bounds.hpp"
#include "coinlab/error.hpp"

namespace coinlab {
namespace {

Params make(std::int64_t n, std::int64_t t) {
  Params p;
  p.n = n;
  p.t = t;
  return p;
}

TEST(Derive, Examples) {
  EXPECT_NEAR(derive(make(200, 1)).beta_quarter, 70.03367989832942, 1e-10);
  const DerivedThresholds d = derive(make(100, 0));
  EXPECT_NEAR(d.alpha, 141.4213562373095, 1e-10);
  EXPECT_NEAR(d.beta_quarter, 35.35533905932738, 1e-10);
  EXPECT_NEAR(d.alpha_prime, 106.06601717798213, 1e-10);
  EXPECT_NEAR(derive(make(1000, 5)).beta_quarter, 350.1683994916471, 1e-9);
}

TEST(Derive, BetaFamilyIsConsistent) {
  const DerivedThresholds d = derive(make(300, 7));
  const double beta = std::sqrt(2.0 * 300 * 293) - 14;
  EXPECT_NEAR(d.beta, beta, 1e-10);
  EXPECT_NEAR(d.beta_half, beta / 2, 1e-10);
  EXPECT_NEAR(d.beta_quarter, beta / 4, 1e-10);
}

TEST(Derive, NormThreshold) {
  Params p = make(32, 1);
  p.m = 32;
  p.epsilon = 0.1;
  EXPECT_NEAR(derive(p).norm_threshold, 6.2 * std::sqrt(32.0 * 64.0), 1e-10);
}

TEST(Derive, AlphaPrimePlusQuarterIsAlpha) {
  for (std::int64_t n = 1; n <= 400; n += 3) {
    for (std::int64_t t = 0; 2 * t < n; t += 1 + n / 20) {
      const DerivedThresholds d = derive(make(n, t));
      ASSERT_NEAR(d.alpha_prime + d.beta_quarter, d.alpha, 1e-12 * d.alpha);
      ASSERT_GT(d.alpha, 0);
      ASSERT_GT(d.alpha_prime, 0) << n << "," << t;
      ASSERT_TRUE(std::isfinite(d.beta_quarter));
    }
  }
}

TEST(Derive, RejectsInadmissibleParams) {
  EXPECT_THROW(derive(make(10, 5)), ParameterError);
  EXPECT_THROW(derive(make(0, 0)), ParameterError);
  EXPECT_THROW(derive(make(10, -1)), ParameterError);
  Params p = make(10, 1);
  p.epsilon = 0;
  EXPECT_THROW(derive(p), ParameterError);
  p = make(10, 1);
  p.m = 0;
  EXPECT_THROW(derive(p), ParameterError);
  p = make(10, 1);
  p.c1 = -1;
  EXPECT_THROW(p.validate(), ParameterError);
}

TEST(StoppedStreamBound, Values) {
  const double b5 = lemma52_part1_bound(make(1000, 5));
  EXPECT_NEAR(b5, 9.45805669187928e-06, 1e-15);
  EXPECT_LE(b5, std::exp(-11.0));
  EXPECT_NEAR(lemma52_part1_bound(make(200, 1)), 9.45805669187928e-06, 1e-15);
  EXPECT_NEAR(lemma52_part1_bound(make(40, 2)), 0.7201453516614653, 1e-12);
  EXPECT_EQ(lemma52_part1_bound(make(200, 0)), 0.0);
  EXPECT_EQ(lemma52_part1_bound(200.0, 0.0), 0.0);
}

TEST(StoppedStreamBound, DecreasesWithT) {
  const double n = 1000;
  double previous = lemma52_part1_bound(n, 0.005 * n);
  for (double t = 0.005 * n - 0.25; t > 0; t -= 0.25) {
    const double b = lemma52_part1_bound(n, t);
    ASSERT_LT(b, previous) << t;
    previous = b;
  }
  for (std::int64_t t = 4; t >= 1; --t) {
    EXPECT_LT(lemma52_part1_bound(make(1000, t)), lemma52_part1_bound(make(1000, t + 1)));
  }
}

TEST(ResilienceChain, Values) {
  EXPECT_NEAR(resilience_chain(0.0), 1.1390360698433877e-09, 1e-20);
  EXPECT_NEAR(resilience_chain(0.0, 0.183), 1.1390360698433876e-07, 1e-18);
  EXPECT_LT(resilience_chain(0.1), resilience_chain(0.0));
}

TEST(CheckClaims, AllPassWithStatedConstants) {
  const ClaimReport report = check_claims(make(1000, 5));
  ASSERT_EQ(report.claims.size(), 4U);
  EXPECT_TRUE(report.all_pass());
  for (const Claim& c : report.claims) {
    EXPECT_TRUE(c.pass) << c.id << ": " << c.statement;
  }
  EXPECT_NEAR(report.claims[0].lhs, lemma52_part1_bound(1000.0, 5.0), 1e-18);
  EXPECT_NEAR(report.claims[1].lhs, 0.21098329829920975, 1e-15);
  EXPECT_NEAR(report.claims[2].lhs / (1000.0 * 1000.0), 0.49999808578814464, 1e-12);
  EXPECT_NEAR(report.claims[3].lhs, 1.139e-9, 1e-12);
}

TEST(CheckClaims, NotesSurfaceDiscrepancies) {
  const ClaimReport report = check_claims(make(1000, 5));
  bool factor = false;
  bool typo = false;
  for (const std::string& note : report.notes) {
    factor = factor || (note.find(".183") != std::string::npos &&
                        note.find(".0183") != std::string::npos);
    typo = typo || note.find("typographical") != std::string::npos;
  }
  EXPECT_TRUE(factor);
  EXPECT_TRUE(typo);
}

TEST(CheckClaims, ScaleInvariantClaims) {
  for (std::int64_t n : {200, 1000, 100000}) {
    EXPECT_TRUE(check_claims(make(n, 0)).all_pass()) << n;
  }
}

}  // namespace
}  // namespace coinlab
