#pragma once

#include <cstdint>
#include <vector>

#include "gt/session.hpp"

namespace gt {

struct GeneralOptions {
  /// Outer alphabet used for every group's code.
  unsigned q_hint = 3;
};

/// Code parameters for one group: half-weight inner words over the smallest
/// even length whose dictionary reaches q, and just enough layers for the
/// group size.
inline ConcatParams choose_group_params(std::uint64_t group_size, unsigned q_hint) {
  if (group_size < 2) throw DomainError("choose_group_params: singleton groups need no code");
  if (q_hint < 2) throw DomainError("choose_group_params: q must be >= 2");
  unsigned inner_len = 2;
  while (binomial(inner_len, inner_len / 2) < q_hint) inner_len += 2;
  ConcatParams p;
  p.q = q_hint;
  p.inner_len = inner_len;
  p.inner_weight = inner_len / 2;
  p.layers = 1;
  BigCount cap = q_hint;
  while (cap < group_size) {
    cap *= q_hint;
    ++p.layers;
  }
  return p;
}

/// A set of items that may contain defects. `certain` marks groups created
/// by a positive pool; only the initial universe may turn out empty.
struct GroupState {
  std::vector<Item> members;
  ConcatParams params;
  bool certain = true;
};

struct GeneralState {
  std::vector<GroupState> active;
  DefectSet resolved;
};

struct GeneralRunStats {
  unsigned code_stages = 0;
  unsigned split_stages = 0;
  unsigned max_group_code_cost = 0;
};

/// One round: codes every active group in a single stage, then resolves the
/// single-defect groups and splits the rest by outer digit at their first
/// heavy layer in one shared split stage.
inline void advance_round(GeneralState& state, StagedSession& session,
                          const GeneralOptions& opts, GeneralRunStats* stats = nullptr) {
  if (state.active.empty()) throw DomainError("advance_round: no active group");

  std::vector<BinaryCode> codes;
  codes.reserve(state.active.size());
  session.begin_stage();
  for (const GroupState& g : state.active) {
    BinaryCode code = build_code(g.params, g.members.size());
    for (const Pool& row : code.row_pools()) {
      Pool pool;
      pool.reserve(row.size());
      for (Item pos : row) pool.push_back(g.members[pos]);
      session.add_pool(std::move(pool));
    }
    if (stats)
      stats->max_group_code_cost = std::max(stats->max_group_code_cost, code.length());
    codes.push_back(std::move(code));
  }
  const std::vector<std::uint8_t> bits = session.commit_stage();
  if (stats) ++stats->code_stages;

  struct PendingSplit {
    std::size_t group;
    unsigned layer;
  };
  std::vector<GroupState> next;
  std::vector<PendingSplit> splits;
  std::size_t offset = 0;
  for (std::size_t gi = 0; gi < state.active.size(); ++gi) {
    const GroupState& g = state.active[gi];
    const BinaryCode& code = codes[gi];
    BitWord r(code.length());
    for (unsigned i = 0; i < code.length(); ++i)
      if (bits[offset + i]) r.set(i);
    offset += code.length();

    if (r.none()) {
      if (g.certain)
        throw InconsistentOutcomeError("advance_round: defect-bearing group tested all clear");
      continue;  // the initial universe held no defects
    }
    WeightProfile profile = layer_weights(r, g.params);
    unsigned heavy_layer = g.params.layers;
    for (unsigned l = 0; l < g.params.layers; ++l) {
      if (profile[l] < g.params.inner_weight)
        throw InconsistentOutcomeError("advance_round: layer weight below the inner weight");
      if (profile[l] > g.params.inner_weight && heavy_layer == g.params.layers) heavy_layer = l;
    }
    if (heavy_layer == g.params.layers) {
      // Every layer at the inner weight: exactly one defect, decodable.
      Item pos = 0;
      for (unsigned l = 0; l < g.params.layers; ++l) {
        BitWord slice = r.slice(std::size_t(l) * g.params.inner_len, g.params.inner_len);
        std::uint64_t digit = colex_rank(slice);
        if (digit >= g.params.q)
          throw InconsistentOutcomeError("advance_round: slice outside the inner dictionary");
        pos = static_cast<Item>(pos * g.params.q + digit);
      }
      if (pos >= g.members.size())
        throw InconsistentOutcomeError("advance_round: decoded position out of range");
      state.resolved.push_back(g.members[pos]);
    } else {
      splits.push_back({gi, heavy_layer});
    }
  }

  if (!splits.empty()) {
    session.begin_stage();
    for (const PendingSplit& sp : splits) {
      const GroupState& g = state.active[sp.group];
      const BinaryCode& code = codes[sp.group];
      for (unsigned c = 0; c < g.params.q; ++c) {
        Pool pool;
        for (std::size_t pos = 0; pos < g.members.size(); ++pos)
          if (code.digit(static_cast<Item>(pos), sp.layer) == c)
            pool.push_back(g.members[pos]);
        session.add_pool(std::move(pool));
      }
    }
    const std::vector<std::uint8_t> split_bits = session.commit_stage();
    if (stats) ++stats->split_stages;

    std::size_t bit = 0;
    for (const PendingSplit& sp : splits) {
      const GroupState& g = state.active[sp.group];
      const BinaryCode& code = codes[sp.group];
      unsigned positive = 0;
      for (unsigned c = 0; c < g.params.q; ++c, ++bit) {
        if (!split_bits[bit]) continue;
        ++positive;
        std::vector<Item> sub;
        for (std::size_t pos = 0; pos < g.members.size(); ++pos)
          if (code.digit(static_cast<Item>(pos), sp.layer) == c)
            sub.push_back(g.members[pos]);
        if (sub.size() == 1) {
          state.resolved.push_back(sub[0]);
        } else {
          ConcatParams sub_params = choose_group_params(sub.size(), opts.q_hint);
          next.push_back({std::move(sub), sub_params, true});
        }
      }
      if (positive < 2)
        throw InconsistentOutcomeError("advance_round: split produced fewer than two positive subgroups");
    }
  }

  state.active = std::move(next);
}

/// Recursive splitting search for up to s defects. The strategy never uses s
/// itself; the promise only matters for the stage and test bounds.
inline DefectSet run_general_session(StagedSession& session, std::uint32_t t, unsigned s,
                                     const GeneralOptions& opts = {},
                                     GeneralRunStats* stats = nullptr) {
  if (t < 1) throw DomainError("run_general: need t >= 1");
  if (s < 1) throw DomainError("run_general: need s >= 1");
  if (t == 1) {
    const auto& bits = session.run_stage({Pool{0}});
    if (stats) {
      ++stats->code_stages;
      stats->max_group_code_cost = std::max(stats->max_group_code_cost, 1u);
    }
    return bits[0] ? DefectSet{0} : DefectSet{};
  }

  GeneralState state;
  std::vector<Item> all(t);
  for (std::uint32_t j = 0; j < t; ++j) all[j] = j;
  state.active.push_back({std::move(all), choose_group_params(t, opts.q_hint), false});
  while (!state.active.empty()) advance_round(state, session, opts, stats);
  std::sort(state.resolved.begin(), state.resolved.end());
  return state.resolved;
}

inline Transcript run_general(const Oracle& oracle, unsigned s, const GeneralOptions& opts = {},
                              GeneralRunStats* stats = nullptr) {
  const std::uint32_t t = oracle.universe();
  ConcatParams params = t >= 2 ? choose_group_params(t, opts.q_hint) : ConcatParams{};
  return run_session(
      [&](StagedSession& session) {
        return StrategyResult{params, run_general_session(session, t, s, opts, stats)};
      },
      oracle);
}

}  // namespace gt
