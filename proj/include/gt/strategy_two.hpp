#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gt/bounds.hpp"
#include "gt/session.hpp"

namespace gt {

enum class Stage1Kind { NoDefects, OneDefect, TwoDefects };

/// What the first-stage outcome reveals. A heavy layer (weight above the
/// inner weight) proves two defects with distinct digits there; the
/// suspicious colors are the symbols whose inner word the heavy slice covers.
struct Stage1Analysis {
  Stage1Kind kind = Stage1Kind::NoDefects;
  Item item = 0;                            // OneDefect
  unsigned split_layer = 0;                 // TwoDefects
  std::vector<unsigned> suspicious_colors;  // TwoDefects, ascending
  WeightProfile profile;
};

/// After the separating stage: one class known to hold exactly one defect to
/// search first, and one or two classes that may hold the partner.
struct Stage2Result {
  unsigned search_color = 0;
  std::vector<unsigned> second_colors;
};

struct TwoOptions {
  /// Overrides the cost-based split layer choice; must be a heavy layer.
  std::optional<unsigned> forced_split_layer;
};

/// Decodes a single-defect outcome: each slice is the defect's inner word.
inline Item decode_single(const BitWord& r, const ConcatParams& params, std::uint64_t t) {
  std::uint64_t index = 0;
  for (unsigned l = 0; l < params.layers; ++l) {
    BitWord slice = r.slice(std::size_t(l) * params.inner_len, params.inner_len);
    if (slice.weight() != params.inner_weight)
      throw InconsistentOutcomeError("decode_single: slice is not an inner codeword");
    std::uint64_t digit = colex_rank(slice);
    if (digit >= params.q)
      throw InconsistentOutcomeError("decode_single: slice outside the inner dictionary");
    index = index * params.q + digit;
  }
  if (index >= t) throw InconsistentOutcomeError("decode_single: decoded index out of range");
  return static_cast<Item>(index);
}

/// Among the heavy layers, picks the one whose predicted remaining cost is
/// smallest; ties break toward the smallest index.
inline unsigned choose_split_layer(const WeightProfile& profile, const ConcatParams& params) {
  std::optional<unsigned> best_layer;
  unsigned best_cost = 0;
  for (unsigned l = 0; l < params.layers; ++l) {
    if (profile[l] <= params.inner_weight) continue;
    unsigned cost = stage_costs(profile, l, params).extra();
    if (!best_layer || cost < best_cost) {
      best_layer = l;
      best_cost = cost;
    }
  }
  if (!best_layer) throw DomainError("choose_split_layer: no heavy layer");
  return *best_layer;
}

inline Stage1Analysis classify_stage1(const BitWord& r, const ConcatParams& params,
                                      std::uint64_t t, const TwoOptions& opts = {}) {
  Stage1Analysis a;
  a.profile = layer_weights(r, params);
  if (r.none()) {
    a.kind = Stage1Kind::NoDefects;
    return a;
  }
  const unsigned w = params.inner_weight;
  const unsigned hi = params.max_pair_weight();
  bool heavy = false;
  for (unsigned wl : a.profile) {
    if (wl < w || wl > hi)
      throw InconsistentOutcomeError("classify_stage1: layer weight outside [W, min(2W, N')]");
    heavy = heavy || wl > w;
  }
  if (!heavy) {
    a.kind = Stage1Kind::OneDefect;
    a.item = decode_single(r, params, t);
    return a;
  }

  a.kind = Stage1Kind::TwoDefects;
  if (opts.forced_split_layer) {
    a.split_layer = *opts.forced_split_layer;
    if (a.split_layer >= params.layers || a.profile[a.split_layer] <= w)
      throw DomainError("classify_stage1: forced split layer is not heavy");
  } else {
    a.split_layer = choose_split_layer(a.profile, params);
  }
  BitWord heavy_slice = r.slice(std::size_t(a.split_layer) * params.inner_len, params.inner_len);
  for (unsigned c = 0; c < params.q; ++c)
    if (heavy_slice.covers(colex_unrank(c, params.inner_len, w)))
      a.suspicious_colors.push_back(c);
  if (a.suspicious_colors.size() < 2)
    throw InconsistentOutcomeError("classify_stage1: heavy layer with fewer than two suspicious colors");
  return a;
}

/// Items of one suspicious class that are consistent with r in every layer.
inline std::vector<Item> group_candidates(unsigned color, const BitWord& r,
                                          const BinaryCode& code, unsigned split_layer) {
  std::vector<Item> out;
  for (Item j = 0; j < code.size; ++j)
    if (code.digit(j, split_layer) == color && r.covers(code.column(j)))
      out.push_back(j);
  return out;
}

/// Pools for the separating stage: the consistency-filtered classes of all
/// suspicious colors except the last two, which stay untested.
inline std::vector<Pool> plan_stage2(const Stage1Analysis& a, const BitWord& r,
                                     const BinaryCode& code) {
  std::vector<Pool> pools;
  if (a.suspicious_colors.size() <= 2) return pools;
  for (std::size_t i = 0; i + 2 < a.suspicious_colors.size(); ++i)
    pools.push_back(group_candidates(a.suspicious_colors[i], r, code, a.split_layer));
  return pools;
}

inline Stage2Result analyze_stage2(const Stage1Analysis& a,
                                   const std::vector<std::uint8_t>& outcomes) {
  const auto& colors = a.suspicious_colors;
  const unsigned u1 = colors[colors.size() - 2];
  const unsigned u2 = colors[colors.size() - 1];
  std::vector<unsigned> positives;
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (outcomes[i]) positives.push_back(colors[i]);

  Stage2Result res;
  if (positives.size() == 2) {
    res.search_color = positives[0];
    res.second_colors = {positives[1]};
  } else if (positives.size() == 1) {
    res.search_color = positives[0];
    res.second_colors = {u1, u2};
  } else if (positives.empty()) {
    res.search_color = u1;
    res.second_colors = {u2};
  } else {
    throw InconsistentOutcomeError("analyze_stage2: more than two positive classes");
  }
  return res;
}

/// Binary identification of the single defective member of `candidates` in
/// one stage: pool b holds the candidates whose position has bit b set, so
/// the outcome bits spell the defective's position.
inline Item identify_among(const std::vector<Item>& candidates, StagedSession& session) {
  if (candidates.empty()) throw DomainError("identify_among: empty candidate list");
  if (candidates.size() == 1) return candidates[0];
  const unsigned bits = ceil_log2(BigCount(candidates.size()));
  session.begin_stage();
  for (unsigned b = 0; b < bits; ++b) {
    Pool pool;
    for (std::size_t pos = 0; pos < candidates.size(); ++pos)
      if ((pos >> b) & 1) pool.push_back(candidates[pos]);
    session.add_pool(std::move(pool));
  }
  const auto& outcomes = session.commit_stage();
  std::size_t pos = 0;
  for (unsigned b = 0; b < bits; ++b)
    if (outcomes[b]) pos |= std::size_t{1} << b;
  if (pos >= candidates.size())
    throw InconsistentOutcomeError("identify_among: decoded position out of range");
  return candidates[pos];
}

/// Candidates for the partner of an identified defect v: items of a second
/// color whose column completes r exactly.
inline std::vector<Item> second_defect_candidates(Item v, const BitWord& r,
                                                  const std::vector<unsigned>& second_colors,
                                                  const BinaryCode& code, unsigned split_layer) {
  std::vector<Item> out;
  for (Item u = 0; u < code.size; ++u) {
    if (u == v) continue;
    bool colored = false;
    for (unsigned c : second_colors) colored = colored || code.digit(u, split_layer) == c;
    if (!colored) continue;
    if ((code.column(u) | code.column(v)) == r) out.push_back(u);
  }
  return out;
}

/// The four-stage search for up to two defects. Stage 1 asks every code row;
/// stages with no pools are skipped.
inline DefectSet run_two_session(StagedSession& session, const ConcatParams& params,
                                 std::uint32_t t, const TwoOptions& opts = {}) {
  BinaryCode code = build_code(params, t);
  const auto& bits = session.run_stage(code.row_pools());
  BitWord r(code.length());
  for (unsigned i = 0; i < code.length(); ++i)
    if (bits[i]) r.set(i);

  Stage1Analysis a = classify_stage1(r, params, t, opts);
  if (a.kind == Stage1Kind::NoDefects) return {};
  if (a.kind == Stage1Kind::OneDefect) return {a.item};

  std::vector<Pool> pools = plan_stage2(a, r, code);
  std::vector<std::uint8_t> outcomes;
  if (!pools.empty()) outcomes = session.run_stage(std::move(pools));
  Stage2Result classes = analyze_stage2(a, outcomes);

  std::vector<Item> first = group_candidates(classes.search_color, r, code, a.split_layer);
  if (first.empty())
    throw InconsistentOutcomeError("run_two: search class has no consistent candidate");
  Item v = identify_among(first, session);

  std::vector<Item> partners =
      second_defect_candidates(v, r, classes.second_colors, code, a.split_layer);
  if (partners.empty())
    throw InconsistentOutcomeError("run_two: no consistent partner for the found defect");
  Item u = identify_among(partners, session);

  DefectSet diagnosis{v, u};
  std::sort(diagnosis.begin(), diagnosis.end());
  return diagnosis;
}

inline Transcript run_two(const Oracle& oracle, const ConcatParams& params,
                          const TwoOptions& opts = {}) {
  return run_session(
      [&](StagedSession& session) {
        return StrategyResult{params, run_two_session(session, params, oracle.universe(), opts)};
      },
      oracle);
}

}  // namespace gt
