#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gt/combinatorics.hpp"

namespace gt {

using Item = std::uint32_t;
/// Items tested together; a pooled test answers whether any member is defective.
using Pool = std::vector<Item>;
/// Sorted set of item indices.
using DefectSet = std::vector<Item>;
/// Per-layer weights of an outcome vector.
using WeightProfile = std::vector<unsigned>;

/// Parameters of a concatenated code: every item index is written as a
/// `layers`-digit base-q word (most significant digit first) and each digit
/// is mapped to a constant-weight binary word of length `inner_len` and
/// weight `inner_weight`.
struct ConcatParams {
  unsigned q = 0;
  unsigned layers = 0;
  unsigned inner_len = 0;
  unsigned inner_weight = 0;

  unsigned code_length() const { return layers * inner_len; }

  /// Largest layer weight an outcome of at most two defects can show.
  unsigned max_pair_weight() const { return std::min(2 * inner_weight, inner_len); }

  BigCount capacity() const {
    BigCount c = 1;
    for (unsigned i = 0; i < layers; ++i) c *= q;
    return c;
  }

  bool operator==(const ConcatParams&) const = default;
};

inline void validate_params(const ConcatParams& p) {
  if (p.q < 2) throw ParamError("params: alphabet size q must be >= 2");
  if (p.layers < 1) throw ParamError("params: need at least one layer");
  if (p.inner_len < 2) throw ParamError("params: inner length must be >= 2");
  if (p.inner_weight == 0 || p.inner_weight >= p.inner_len)
    throw ParamError("params: inner weight must satisfy 0 < W < inner length");
  if (binomial(p.inner_len, p.inner_weight) < p.q)
    throw ParamError("params: fewer constant-weight words than alphabet symbols");
}

/// Binary test code: code_length() rows (tests) by `size` columns (items).
struct BinaryCode {
  ConcatParams params;
  std::uint32_t size = 0;
  std::vector<BitWord> columns;
  std::vector<unsigned> digits;  // row-major, size * layers

  unsigned length() const { return params.code_length(); }

  unsigned digit(std::uint32_t item, unsigned layer) const {
    return digits[std::size_t(item) * params.layers + layer];
  }

  const BitWord& column(std::uint32_t item) const { return columns[item]; }

  /// The rows as pools: pool i holds every item whose column has bit i set.
  std::vector<Pool> row_pools() const {
    std::vector<Pool> pools(length());
    for (std::uint32_t j = 0; j < size; ++j)
      for (unsigned i = 0; i < length(); ++i)
        if (columns[j].test(i)) pools[i].push_back(j);
    return pools;
  }
};

/// Builds the concatenated code over items 0..t-1. When t is below the full
/// capacity q^layers, only the first t columns are kept.
inline BinaryCode build_code(const ConcatParams& params, std::uint64_t t) {
  validate_params(params);
  if (BigCount(t) > params.capacity()) throw ParamError("build_code: t exceeds code capacity");
  if (t > std::uint64_t{1} << 31) throw ParamError("build_code: t too large to materialize");

  // Inner dictionary: the first q constant-weight words in colex order.
  std::vector<BitWord> inner(params.q);
  for (unsigned c = 0; c < params.q; ++c)
    inner[c] = colex_unrank(c, params.inner_len, params.inner_weight);

  BinaryCode code;
  code.params = params;
  code.size = static_cast<std::uint32_t>(t);
  code.columns.reserve(t);
  code.digits.resize(std::size_t(t) * params.layers);
  for (std::uint64_t j = 0; j < t; ++j) {
    std::uint64_t rest = j;
    for (unsigned l = params.layers; l-- > 0;) {
      code.digits[j * params.layers + l] = static_cast<unsigned>(rest % params.q);
      rest /= params.q;
    }
    BitWord col(params.code_length());
    for (unsigned l = 0; l < params.layers; ++l) {
      const BitWord& w = inner[code.digits[j * params.layers + l]];
      for (unsigned i = 0; i < params.inner_len; ++i)
        if (w.test(i)) col.set(std::size_t(l) * params.inner_len + i);
    }
    code.columns.push_back(std::move(col));
  }
  return code;
}

/// Outcome vector of a defect set: bitwise OR of the defect columns.
inline BitWord outcome(const BinaryCode& code, const DefectSet& defects) {
  BitWord r(code.length());
  for (Item j : defects) {
    if (j >= code.size) throw DomainError("outcome: item index out of range");
    r |= code.column(j);
  }
  return r;
}

/// Weight of each length-inner_len slice of an outcome vector.
inline WeightProfile layer_weights(const BitWord& r, const ConcatParams& params) {
  if (r.size() != params.code_length()) throw DomainError("layer_weights: length mismatch");
  WeightProfile profile(params.layers);
  for (unsigned l = 0; l < params.layers; ++l)
    profile[l] = r.slice(std::size_t(l) * params.inner_len, params.inner_len).weight();
  return profile;
}

/// All defect sets of size <= s_max whose outcome equals r, in lexicographic
/// order of the index sequences. Brute force; intended for small codes.
inline std::vector<DefectSet> consistent_sets(const BinaryCode& code, const BitWord& r,
                                              unsigned s_max) {
  if (r.size() != code.length()) throw DomainError("consistent_sets: length mismatch");
  std::vector<DefectSet> result;
  DefectSet current;
  BitWord acc(code.length());

  auto recurse = [&](auto&& self, std::uint32_t start, const BitWord& sofar) -> void {
    if (sofar == r) result.push_back(current);
    if (current.size() >= s_max) return;
    for (std::uint32_t j = start; j < code.size; ++j) {
      if (!r.covers(code.column(j))) continue;  // adding j can never reach r
      current.push_back(j);
      self(self, j + 1, sofar | code.column(j));
      current.pop_back();
    }
  };
  recurse(recurse, 0, acc);
  return result;
}

}  // namespace gt
