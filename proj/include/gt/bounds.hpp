#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <tuple>

#include "gt/code.hpp"

namespace gt {

/// Upper bounds on the tests spent after the first stage when the outcome
/// profile is `profile` and the search splits on layer `split`:
///   s2: pools separating the suspicious classes (all but two),
///   s3: binary search for the first defect inside one class,
///   s4: binary search for the partner among consistent candidates, with a
///       factor two for the worst case of two untested classes.
struct StageCosts {
  unsigned s2 = 0;
  unsigned s3 = 0;
  unsigned s4 = 0;
  unsigned extra() const { return s2 + s3 + s4; }
};

inline StageCosts stage_costs(const WeightProfile& profile, unsigned split,
                              const ConcatParams& p) {
  if (profile.size() != p.layers) throw DomainError("stage_costs: profile length mismatch");
  if (split >= p.layers) throw DomainError("stage_costs: split layer out of range");
  const unsigned w = p.inner_weight;
  const unsigned hi = p.max_pair_weight();
  for (unsigned wl : profile)
    if (wl < w || wl > hi) throw DomainError("stage_costs: layer weight out of range");
  if (profile[split] <= w) throw DomainError("stage_costs: split layer is not heavy");

  StageCosts costs;
  BigCount classes = binomial(profile[split], w);
  costs.s2 = classes > 2 ? static_cast<unsigned>(classes - 2) : 0;

  BigCount group = 1;   // candidates sharing one split-layer class
  BigCount partners = 1;  // partner choices per class once one defect is known
  for (unsigned l = 0; l < p.layers; ++l) {
    if (l == split) continue;
    group *= binomial(profile[l], w);
    partners *= binomial(w, 2 * w - profile[l]);
  }
  costs.s3 = ceil_log2(group);
  costs.s4 = ceil_log2(2 * partners);
  return costs;
}

/// Worst case over all reachable outcome profiles, with the strategy free to
/// pick its best heavy layer per profile.
struct WorstCaseBreakdown {
  unsigned stage1 = 0;
  unsigned worst_extra = 0;
  WeightProfile worst_profile;
  unsigned total = 0;
};

namespace detail {

inline WorstCaseBreakdown worst_case_uncached(const ConcatParams& p) {
  const unsigned w = p.inner_weight;
  const unsigned hi = p.max_pair_weight();

  WorstCaseBreakdown best;
  best.stage1 = p.code_length();

  // Profiles are enumerated as non-increasing sequences (costs are symmetric
  // under layer permutation), carrying both products incrementally.
  WeightProfile profile(p.layers);
  auto recurse = [&](auto&& self, unsigned pos, unsigned max_value, const BigCount& group,
                     const BigCount& partners, bool has_heavy) -> void {
    if (pos == p.layers) {
      if (!has_heavy) return;
      std::optional<unsigned> extra;
      unsigned prev = 0;
      for (unsigned l = 0; l < p.layers; ++l) {
        const unsigned v = profile[l];
        if (v <= w || v == prev) continue;  // not heavy, or same cost as an earlier layer
        prev = v;
        StageCosts c;
        BigCount classes = binomial(v, w);
        c.s2 = classes > 2 ? static_cast<unsigned>(classes - 2) : 0;
        c.s3 = ceil_log2(group / classes);
        c.s4 = ceil_log2(2 * partners / binomial(w, 2 * w - v));
        if (!extra || c.extra() < *extra) extra = c.extra();
      }
      if (*extra > best.worst_extra) {
        best.worst_extra = *extra;
        best.worst_profile = profile;
      }
      return;
    }
    for (unsigned v = max_value; v >= w; --v) {
      profile[pos] = v;
      self(self, pos + 1, v, group * binomial(v, w), partners * binomial(w, 2 * w - v),
           has_heavy || v > w);
    }
  };
  recurse(recurse, 0, hi, 1, 1, false);

  best.total = best.stage1 + best.worst_extra;
  return best;
}

inline const WorstCaseBreakdown& worst_case_cached(unsigned layers, unsigned inner_len,
                                                   unsigned inner_weight) {
  using Key = std::tuple<unsigned, unsigned, unsigned>;
  static std::map<Key, WorstCaseBreakdown> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  const Key key{layers, inner_len, inner_weight};
  auto it = cache.find(key);
  if (it == cache.end()) {
    ConcatParams p{2, layers, inner_len, inner_weight};  // q does not affect the count
    it = cache.emplace(key, worst_case_uncached(p)).first;
  }
  return it->second;
}

/// Smallest q with q^n >= t.
inline std::uint64_t ceil_nth_root(std::uint64_t t, unsigned n) {
  std::uint64_t lo = 1, hi = t;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    BigCount pw = 1;
    bool enough = false;
    for (unsigned i = 0; i < n; ++i) {
      pw *= mid;
      if (pw >= t) {
        enough = true;
        break;
      }
    }
    if (enough)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace detail

inline WorstCaseBreakdown worst_case_total(const ConcatParams& params, std::uint64_t t) {
  validate_params(params);
  if (BigCount(t) > params.capacity()) throw ParamError("worst_case_total: t exceeds capacity");
  return detail::worst_case_cached(params.layers, params.inner_len, params.inner_weight);
}

enum class CapacityMode { AtMost, ExactPower };

struct OptimizeOptions {
  unsigned max_inner_len = 16;
};

struct OptimizationResult {
  ConcatParams params;
  unsigned total = 0;
  CapacityMode mode = CapacityMode::AtMost;
  WorstCaseBreakdown breakdown;
};

/// Minimizes the worst-case total over all families carrying t items.
/// AtMost requires q^layers >= t, ExactPower requires q^layers == t.
/// Ties break toward fewer first-stage tests, then a smaller alphabet.
inline OptimizationResult optimize_params(std::uint64_t t, CapacityMode mode,
                                          OptimizeOptions opts = {}) {
  if (t < 2) throw DomainError("optimize_params: need t >= 2");
  if (opts.max_inner_len < 2) throw DomainError("optimize_params: inner length cap too small");

  std::optional<OptimizationResult> best;
  auto better = [&](unsigned total, const ConcatParams& p) {
    if (!best) return true;
    const auto key = [](unsigned tot, const ConcatParams& c) {
      return std::tuple(tot, c.code_length(), c.q, c.layers, c.inner_len, c.inner_weight);
    };
    return key(total, p) < key(best->total, best->params);
  };

  for (unsigned layers = 1; layers <= 1024; ++layers) {
    if (best && 2 * layers + 1 >= best->total) break;  // inner_len >= 2, extra >= 1
    std::uint64_t root = detail::ceil_nth_root(t, layers);
    if (mode == CapacityMode::ExactPower) {
      BigCount pw = 1;
      for (unsigned i = 0; i < layers; ++i) pw *= root;
      if (pw != t) continue;
    }
    const std::uint64_t q = std::max<std::uint64_t>(2, root);
    if (q > std::numeric_limits<unsigned>::max()) continue;
    for (unsigned inner_len = 2; inner_len <= opts.max_inner_len; ++inner_len) {
      if (best && layers * inner_len + 1 >= best->total) break;
      for (unsigned w = 1; w < inner_len; ++w) {
        if (binomial(inner_len, w) < q) continue;
        const WorstCaseBreakdown& wcb = detail::worst_case_cached(layers, inner_len, w);
        ConcatParams p{static_cast<unsigned>(q), layers, inner_len, w};
        if (better(wcb.total, p))
          best = OptimizationResult{p, wcb.total, mode, wcb};
      }
    }
  }

  if (!best) {
    if (mode == CapacityMode::ExactPower)
      throw ModeError("optimize_params: t is not a feasible exact power q^layers");
    throw ParamError("optimize_params: no feasible family found");
  }
  return *best;
}

/// Smallest N with 2^N >= sum of C(t, k) for k = 0..s: no strategy can
/// distinguish that many hypotheses with fewer binary answers.
inline unsigned info_bound(std::uint64_t t, unsigned s) {
  if (t < 1 || s < 1) throw DomainError("info_bound: need t >= 1 and s >= 1");
  BigCount hypotheses = 0;
  for (unsigned k = 0; k <= s; ++k) hypotheses += binomial(t, k);
  return ceil_log2(hypotheses);
}

/// Test bound for the recursive splitting strategy: 2s-1 code stages of at
/// most layers*inner_len tests each, plus q pools per split.
inline unsigned general_bound(unsigned s, const ConcatParams& params) {
  if (s < 1) throw DomainError("general_bound: need s >= 1");
  return (2 * s - 1) * params.code_length() + params.q * (s - 1);
}

/// Normalized test count of the four-stage search in the many-layer limit
/// for a fixed inner code (inner_len, inner_weight).
inline double rate_finite(unsigned inner_len, unsigned inner_weight) {
  if (inner_weight == 0 || inner_weight >= inner_len)
    throw DomainError("rate_finite: need 0 < weight < length");
  const unsigned w = inner_weight;
  const unsigned hi = std::min(2 * w, inner_len);
  double best = 0.0;
  for (unsigned wp = w + 1; wp <= hi; ++wp) {
    double v = std::log2(
        static_cast<double>(binomial(wp, w) * binomial(w, 2 * w - wp)));
    best = std::max(best, v);
  }
  return (inner_len + best) / std::log2(static_cast<double>(binomial(inner_len, w)));
}

/// Continuous rate of the four-stage search at relative weights (w, w').
inline double rate_f(double w, double w_prime) {
  if (!(w > 0.0 && w < 1.0)) throw DomainError("rate_f: w outside (0,1)");
  if (!(w_prime >= w && w_prime <= std::min(1.0, 2.0 * w)))
    throw DomainError("rate_f: w' outside [w, min(1, 2w)]");
  const double a = binary_entropy(w / w_prime);
  const double b = binary_entropy((2.0 * w - w_prime) / w);
  return (1.0 + w_prime * a + w * b) / binary_entropy(w);
}

/// Residual of the stationarity condition for the inner supremum of rate_f;
/// zero at the optimizing (w, w') pair.
inline double stationarity_residual(double x, double y) {
  if (!(x > 0.0 && y >= x && y <= std::min(1.0, 2.0 * x)))
    throw DomainError("stationarity_residual: arguments outside domain");
  return (y - x) * (y - x) - 2.0 * x * y + y * y;
}

struct RatePoint {
  double w = 0.0;
  double w_prime = 0.0;
  double value = 0.0;
};

namespace detail {

template <typename F>
double golden_max(F&& f, double lo, double hi, double tol) {
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return (a + b) / 2;
}

}  // namespace detail

/// Approximates inf over w of sup over w' of rate_f by grid search with
/// local golden-section refinement.
inline RatePoint optimize_rate(double grid_step = 1e-3, double refine_tol = 1e-9) {
  if (!(grid_step > 0.0 && grid_step < 0.1))
    throw DomainError("optimize_rate: grid_step outside (0, 0.1)");

  auto inner_argmax = [&](double w) {
    const double lo = w, hi = std::min(1.0, 2.0 * w);
    double best_x = lo, best_v = rate_f(w, lo);
    const int n = 64;
    for (int i = 1; i <= n; ++i) {
      double x = lo + (hi - lo) * i / n;
      double v = rate_f(w, x);
      if (v > best_v) {
        best_v = v;
        best_x = x;
      }
    }
    double span = (hi - lo) / n;
    double a = std::max(lo, best_x - span), b = std::min(hi, best_x + span);
    return detail::golden_max([&](double x) { return rate_f(w, x); }, a, b, refine_tol);
  };
  auto sup_value = [&](double w) { return rate_f(w, inner_argmax(w)); };

  double best_w = grid_step, best_v = sup_value(grid_step);
  for (double w = 2 * grid_step; w < 1.0 - grid_step / 2; w += grid_step) {
    double v = sup_value(w);
    if (v < best_v) {
      best_v = v;
      best_w = w;
    }
  }
  double a = std::max(grid_step / 8, best_w - grid_step);
  double b = std::min(1.0 - grid_step / 8, best_w + grid_step);
  double w_star =
      detail::golden_max([&](double w) { return -sup_value(w); }, a, b, refine_tol);

  RatePoint pt;
  pt.w = w_star;
  pt.w_prime = inner_argmax(w_star);
  pt.value = rate_f(w_star, pt.w_prime);
  return pt;
}

}  // namespace gt
