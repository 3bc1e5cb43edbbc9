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

#include <boost/multiprecision/cpp_int.hpp>

namespace coinlab {

using BigInt = boost::multiprecision::cpp_int;

/// Exact probability numerator / 2^exponent. The exponent is the walk length
/// the probability was computed for; it is not reduced. Comparison and
/// equality are by value, so 1/2 (exponent 1) == 2/4 (exponent 2).
class ExactProb {
 public:
  ExactProb() = default;
  ExactProb(BigInt numerator, unsigned exponent);

  static ExactProb zero() { return {}; }
  static ExactProb one() { return ExactProb(1, 0); }

  const BigInt& numerator() const noexcept { return numerator_; }
  unsigned exponent() const noexcept { return exponent_; }
  BigInt denominator() const { return BigInt(1) << exponent_; }

  /// Lowest-terms "p/q" (or "0", "1").
  std::string str() const;
  double to_double() const;

  /// Sum of two probabilities. May exceed one, which is only meaningful as a
  /// bound (e.g. 2 Pr(S_n >= r)), so the result is an unchecked value.
  friend ExactProb operator+(const ExactProb& a, const ExactProb& b);
  ExactProb times(unsigned factor) const;

  friend bool operator==(const ExactProb& a, const ExactProb& b);
  friend bool operator<(const ExactProb& a, const ExactProb& b);
  friend bool operator<=(const ExactProb& a, const ExactProb& b) { return !(b < a); }
  friend bool operator>(const ExactProb& a, const ExactProb& b) { return b < a; }
  friend bool operator>=(const ExactProb& a, const ExactProb& b) { return !(a < b); }

 private:
  struct Unchecked {};
  ExactProb(BigInt numerator, unsigned exponent, Unchecked)
      : numerator_(std::move(numerator)), exponent_(exponent) {}

  BigInt numerator_{0};
  unsigned exponent_ = 0;
};

BigInt binomial(std::int64_t n, std::int64_t k);

/// Pr(S_n = r) for a symmetric +-1 walk of n steps.
ExactProb prob_sum_eq(std::int64_t n, std::int64_t r);

/// Pr(S_n >= r).
ExactProb prob_sum_ge(std::int64_t n, std::int64_t r);

/// Pr(M_n >= r) through the reflection identity
/// Pr(S_n = r) + 2 Pr(S_n > r); defined for r >= 1.
ExactProb prob_max_ge_reflection(std::int64_t n, std::int64_t r);

/// Largest n accepted by prob_max_ge_enumeration.
inline constexpr std::int64_t kEnumerationLimit = 24;

/// Pr(M_n >= r) by enumerating all 2^n paths. The running maximum is taken
/// over prefixes 1..n (prefix 0 excluded). Independent of the reflection
/// route; used as its oracle.
ExactProb prob_max_ge_enumeration(std::int64_t n, std::int64_t r);

/// e^{-r^2 / (2n)}, the sub-Gaussian tail bound for Pr(S_n >= r).
double chernoff_tail(double n, double r);

}  // namespace coinlab
