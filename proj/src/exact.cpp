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

#include "coinlab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coinlab/error.hpp"

namespace coinlab {
namespace {

void require_length(std::int64_t n) {
  if (n < 1) {
    throw ParameterError("walk length n must be >= 1");
  }
  if (n > 1'000'000) {
    throw BudgetError("exact distributions are limited to n <= 10^6");
  }
}

// Aligns both operands to the larger exponent.
std::pair<BigInt, BigInt> aligned(const ExactProb& a, const ExactProb& b) {
  const unsigned e = std::max(a.exponent(), b.exponent());
  return {a.numerator() << (e - a.exponent()), b.numerator() << (e - b.exponent())};
}

}  // namespace

ExactProb::ExactProb(BigInt numerator, unsigned exponent)
    : numerator_(std::move(numerator)), exponent_(exponent) {
  if (numerator_ < 0 || numerator_ > denominator()) {
    throw ParameterError("probability numerator outside [0, 2^exponent]");
  }
}

std::string ExactProb::str() const {
  if (numerator_ == 0) {
    return "0";
  }
  BigInt num = numerator_;
  unsigned e = exponent_;
  while (e > 0 && (num & 1) == 0) {
    num >>= 1;
    --e;
  }
  if (e == 0) {
    return num.str();
  }
  return num.str() + "/" + (BigInt(1) << e).str();
}

double ExactProb::to_double() const {
  if (numerator_ == 0) {
    return 0.0;
  }
  // Keep 62 significant bits so the conversion never overflows.
  const auto bits = static_cast<long>(boost::multiprecision::msb(numerator_)) + 1;
  const long drop = std::max(0L, bits - 62);
  const auto head = static_cast<std::uint64_t>(numerator_ >> drop);
  return std::ldexp(static_cast<double>(head), static_cast<int>(drop - static_cast<long>(exponent_)));
}

ExactProb operator+(const ExactProb& a, const ExactProb& b) {
  auto [x, y] = aligned(a, b);
  return ExactProb(x + y, std::max(a.exponent(), b.exponent()),
                   ExactProb::Unchecked{});
}

ExactProb ExactProb::times(unsigned factor) const {
  return ExactProb(numerator_ * factor, exponent_, Unchecked{});
}

bool operator==(const ExactProb& a, const ExactProb& b) {
  auto [x, y] = aligned(a, b);
  return x == y;
}

bool operator<(const ExactProb& a, const ExactProb& b) {
  auto [x, y] = aligned(a, b);
  return x < y;
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

ExactProb prob_sum_eq(std::int64_t n, std::int64_t r) {
  require_length(n);
  if (r > n || r < -n || ((n + r) & 1) != 0) {
    return ExactProb(0, static_cast<unsigned>(n));
  }
  return ExactProb(binomial(n, (n + r) / 2), static_cast<unsigned>(n));
}

ExactProb prob_sum_ge(std::int64_t n, std::int64_t r) {
  require_length(n);
  if (r > n) {
    return ExactProb(0, static_cast<unsigned>(n));
  }
  // S_n = 2H - n with H ~ Binomial(n, 1/2); S_n >= r  <=>  H >= ceil((n+r)/2).
  std::int64_t first_heads = (n + r + 1) / 2;
  if (n + r < 0) {
    first_heads = 0;
  }
  BigInt total = 0;
  BigInt term = binomial(n, first_heads);
  for (std::int64_t h = first_heads; h <= n; ++h) {
    total += term;
    term = term * (n - h) / (h + 1);
  }
  return ExactProb(total, static_cast<unsigned>(n));
}

ExactProb prob_max_ge_reflection(std::int64_t n, std::int64_t r) {
  if (r < 1) {
    throw ParameterError("reflection identity requires r >= 1");
  }
  const ExactProb strictly_above = prob_sum_ge(n, r + 1);
  const ExactProb at = prob_sum_eq(n, r);
  const auto e = static_cast<unsigned>(n);
  return ExactProb(at.numerator() + 2 * strictly_above.numerator(), e);
}

ExactProb prob_max_ge_enumeration(std::int64_t n, std::int64_t r) {
  if (n < 1) {
    throw ParameterError("walk length n must be >= 1");
  }
  if (n > kEnumerationLimit) {
    throw BudgetError("path enumeration is limited to n <= 24");
  }
  const std::uint64_t paths = std::uint64_t{1} << n;
  std::uint64_t hits = 0;
  for (std::uint64_t path = 0; path < paths; ++path) {
    std::int64_t sum = 0;
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for (std::int64_t i = 0; i < n; ++i) {
      sum += ((path >> i) & 1U) != 0 ? 1 : -1;
      best = std::max(best, sum);
    }
    if (best >= r) {
      ++hits;
    }
  }
  return ExactProb(BigInt(hits), static_cast<unsigned>(n));
}

double chernoff_tail(double n, double r) {
  if (!(n >= 1.0) || !(r >= 0.0)) {
    throw ParameterError("chernoff_tail requires n >= 1 and r >= 0");
  }
  return std::exp(-(r * r) / (2.0 * n));
}

}  // namespace coinlab
