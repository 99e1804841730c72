#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>

#include "gt/bitword.hpp"
#include "gt/errors.hpp"

namespace gt {

/// Exact non-negative integer. Counts such as products of binomials are kept
/// exact until a ceiling-log is taken; rounding them through floating point
/// risks an off-by-one next to powers of two.
using BigCount = boost::multiprecision::cpp_int;

/// Exact C(n, k); zero when k > n.
inline BigCount binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigCount c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;  // exact: c is C(n-k+i, i) after this step
  }
  return c;
}

/// Smallest m with 2^m >= x.
inline unsigned ceil_log2(const BigCount& x) {
  if (x < 1) throw DomainError("ceil_log2: argument must be >= 1");
  if (x == 1) return 0;
  BigCount y = x - 1;
  return static_cast<unsigned>(boost::multiprecision::msb(y)) + 1;
}

/// Binary entropy -x log2 x - (1-x) log2 (1-x), extended by continuity to
/// h(0) = h(1) = 0.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary_entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// Colexicographic rank of a constant-weight word: with 1-bits at positions
/// c_0 < c_1 < ... < c_{k-1}, the rank is sum_i C(c_i, i+1). The word with
/// 1s packed into the lowest k positions has rank 0.
inline std::uint64_t colex_rank(const BitWord& word) {
  BigCount r = 0;
  std::uint64_t i = 0;
  for (std::size_t pos = 0; pos < word.size(); ++pos)
    if (word.test(pos)) r += binomial(pos, ++i);
  return static_cast<std::uint64_t>(r);
}

/// Inverse of colex_rank over weight-k words of length n.
inline BitWord colex_unrank(std::uint64_t rank, unsigned n, unsigned k) {
  if (k > n) throw DomainError("colex_unrank: weight exceeds length");
  BigCount total = binomial(n, k);
  if (rank >= total) throw DomainError("colex_unrank: rank out of range");
  BitWord word(n);
  BigCount r = rank;
  unsigned hi = n;
  for (unsigned i = k; i >= 1; --i) {
    unsigned c = i - 1;
    for (unsigned pos = hi; pos-- > i - 1;) {
      if (binomial(pos, i) <= r) {
        c = pos;
        break;
      }
    }
    word.set(c);
    r -= binomial(c, i);
    hi = c;
  }
  return word;
}

}  // namespace gt
