// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gt/bounds.hpp"
#include "gt/strategy_general.hpp"
#include "gt/strategy_two.hpp"
#include "gt/verify.hpp"

using namespace gt;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream log;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << "    FAILED: " << what << '\n';
    }
  }
};

// ---------------------------------------------------------------------------
// Criterion 1: worst-case totals for t <= 1000, capacity mode "at most".
// ---------------------------------------------------------------------------
bool criterion1(Check& c) {
  const std::vector<std::pair<std::uint64_t, unsigned>> expected = {
      {9, 8},    {16, 10},  {27, 12},  {28, 13},  {36, 14},  {64, 15},
      {81, 16},  {125, 18}, {256, 20}, {441, 22}, {784, 24}, {1000, 25},
  };
  for (auto [t, total] : expected) {
    unsigned got = optimize_params(t, CapacityMode::AtMost).total;
    c.expect(got == total, "optimize(" + std::to_string(t) + ") = " + std::to_string(got) +
                               ", expected " + std::to_string(total));
  }
  return c.ok;
}

// ---------------------------------------------------------------------------
// Criterion 2: exact-power totals and information bounds at t = 10^k.
// ---------------------------------------------------------------------------
bool criterion2(Check& c) {
  const std::vector<std::pair<unsigned, std::pair<unsigned, unsigned>>> required = {
      {3, {26, 19}}, {4, {33, 26}}, {5, {41, 33}}, {6, {48, 39}},
  };
  for (auto [k, vals] : required) {
    std::uint64_t t = 1;
    for (unsigned i = 0; i < k; ++i) t *= 10;
    unsigned total = optimize_params(t, CapacityMode::ExactPower).total;
    unsigned info = info_bound(t, 2);
    c.expect(total == vals.first, "exact-power total at 10^" + std::to_string(k) + " = " +
                                      std::to_string(total) + ", expected " +
                                      std::to_string(vals.first));
    c.expect(info == vals.second, "info bound at 10^" + std::to_string(k) + " = " +
                                      std::to_string(info) + ", expected " +
                                      std::to_string(vals.second));
  }

  // Stretch rows, still exact arithmetic: k = 7..18.
  const std::vector<std::pair<unsigned, std::pair<unsigned, unsigned>>> stretch = {
      {7, {56, 46}},   {8, {64, 53}},   {9, {71, 59}},   {10, {79, 66}},
      {11, {86, 73}},  {12, {94, 79}},  {13, {102, 86}}, {14, {109, 93}},
      {15, {117, 99}}, {16, {124, 106}}, {17, {132, 112}}, {18, {139, 119}},
  };
  for (auto [k, vals] : stretch) {
    std::uint64_t t = 1;
    for (unsigned i = 0; i < k; ++i) t *= 10;
    unsigned total = optimize_params(t, CapacityMode::ExactPower).total;
    unsigned info = info_bound(t, 2);
    c.expect(total == vals.first, "stretch total at 10^" + std::to_string(k) + " = " +
                                      std::to_string(total) + ", expected " +
                                      std::to_string(vals.first));
    c.expect(info == vals.second, "stretch info bound at 10^" + std::to_string(k) + " = " +
                                      std::to_string(info) + ", expected " +
                                      std::to_string(vals.second));
  }
  return c.ok;
}

// ---------------------------------------------------------------------------
// Criterion 3: spot checks with ratios, capacity mode "at most".
// ---------------------------------------------------------------------------
bool criterion3(Check& c) {
  struct Row {
    std::uint64_t t;
    unsigned total;
    unsigned info;
    double ratio;
  };
  const std::vector<Row> rows = {
      {784, 24, 19, 2.496}, {3375, 29, 23, 2.474}, {9261, 32, 26, 2.428},
      {194481, 41, 35, 2.334}};
  for (const Row& row : rows) {
    unsigned total = optimize_params(row.t, CapacityMode::AtMost).total;
    unsigned info = info_bound(row.t, 2);
    double ratio = total / std::log2(static_cast<double>(row.t));
    c.expect(total == row.total, "total at t=" + std::to_string(row.t) + " = " +
                                     std::to_string(total) + ", expected " +
                                     std::to_string(row.total));
    c.expect(info == row.info, "info bound at t=" + std::to_string(row.t) + " = " +
                                   std::to_string(info) + ", expected " +
                                   std::to_string(row.info));
    c.expect(std::abs(ratio - row.ratio) <= 1e-3 + 5e-4,
             "ratio at t=" + std::to_string(row.t) + " = " + std::to_string(ratio) +
                 ", expected " + std::to_string(row.ratio) + " within 0.001");
  }
  return c.ok;
}

// ---------------------------------------------------------------------------
// Criterion 4: exhaustive correctness of the four-stage strategy, s = 2.
// ---------------------------------------------------------------------------
std::vector<std::uint32_t> criterion4_ts() {
  std::vector<std::uint32_t> ts;
  for (std::uint32_t t = 2; t <= 64; ++t) ts.push_back(t);
  ts.push_back(81);
  ts.push_back(100);
  return ts;
}

bool criterion4(Check& c) {
  for (std::uint32_t t : criterion4_ts()) {
    OptimizationResult opt = optimize_params(t, CapacityMode::AtMost);
    VerificationReport report = verify_exhaustive(
        t, 2, [&](const Oracle& oracle) { return run_two(oracle, opt.params); });
    BigCount expected_cases = 1 + binomial(t, 1) + binomial(t, 2);
    c.expect(BigCount(report.cases) == expected_cases,
             "case count at t=" + std::to_string(t));
    c.expect(report.failures.empty(), "identification failures at t=" + std::to_string(t));
    c.expect(report.max_stages <= 4, "stage count exceeds 4 at t=" + std::to_string(t));
    c.expect(report.max_tests <= opt.total,
             "observed " + std::to_string(report.max_tests) + " tests exceed the bound " +
                 std::to_string(opt.total) + " at t=" + std::to_string(t));
    if (t == 9 || t == 16 || t == 27) {
      c.expect(report.max_tests == opt.total,
               "observed max " + std::to_string(report.max_tests) +
                   " != predicted worst case " + std::to_string(opt.total) +
                   " at t=" + std::to_string(t));
    }
  }
  return c.ok;
}

// ---------------------------------------------------------------------------
// Criterion 5: exhaustive correctness of the recursive strategy.
// ---------------------------------------------------------------------------
bool criterion5(Check& c) {
  struct Case {
    std::uint32_t t;
    unsigned s;
  };
  for (const Case k : {Case{8, 3}, Case{27, 3}, Case{64, 3}, Case{16, 4}}) {
    GeneralOptions opts;
    const unsigned bound = general_bound(k.s, choose_group_params(k.t, opts.q_hint));
    unsigned over_bound = 0;
    VerificationReport report =
        verify_exhaustive(k.t, k.s, [&](const Oracle& oracle) {
          Transcript tr = run_general(oracle, k.s, opts);
          if (tr.total_tests() > bound) ++over_bound;
          return tr;
        });
    BigCount expected_cases = 0;
    for (unsigned j = 0; j <= k.s; ++j) expected_cases += binomial(k.t, j);
    const std::string tag = " at t=" + std::to_string(k.t) + ", s=" + std::to_string(k.s);
    c.expect(BigCount(report.cases) == expected_cases, "case count" + tag);
    c.expect(report.failures.empty(), "identification failures" + tag);
    c.expect(report.max_stages <= 2 * k.s - 1, "stage count exceeds 2s-1" + tag);
    c.expect(over_bound == 0, "test totals exceed the group bound" + tag);
  }
  return c.ok;
}

// ---------------------------------------------------------------------------
// Criterion 6: asymptotic rate optimum and stationarity.
// ---------------------------------------------------------------------------
bool criterion6(Check& c) {
  RatePoint pt = optimize_rate(1e-3, 1e-10);
  c.expect(std::abs(pt.value - 2.0) <= 1e-3,
           "rate value " + std::to_string(pt.value) + " != 2.000 within 1e-3");
  c.expect(std::abs(pt.w - 0.29289321881345254) <= 1e-3,
           "rate w " + std::to_string(pt.w) + " != 0.29289 within 1e-3");
  c.expect(std::abs(pt.w_prime - 0.5) <= 1e-3,
           "rate w' " + std::to_string(pt.w_prime) + " != 0.500 within 1e-3");
  double resid = stationarity_residual(1.0 / (2.0 + std::sqrt(2.0)), 0.5);
  c.expect(std::abs(resid) <= 1e-12,
           "stationarity residual " + std::to_string(resid) + " != 0 within 1e-12");
  return c.ok;
}

// ---------------------------------------------------------------------------
// Criterion 7: transcripts are information-theoretically forced.
// ---------------------------------------------------------------------------
bool criterion7(Check& c) {
  for (std::uint32_t t : criterion4_ts()) {
    if (t > 20) continue;
    OptimizationResult opt = optimize_params(t, CapacityMode::AtMost);
    verify_exhaustive(t, 2, [&](const Oracle& oracle) {
      Transcript tr = run_two(oracle, opt.params);
      if (!check_unique_consistency(tr, t, 2))
        c.expect(false, "non-unique transcript at t=" + std::to_string(t));
      return tr;
    });
  }

  // A case whose final stage separates two remaining candidate pairs.
  ConcatParams params{6, 1, 4, 2};
  Oracle oracle({0, 1}, 6);
  Transcript tr = run_two(oracle, params);
  c.expect(tr.diagnosis == DefectSet{0, 1}, "crafted case diagnosis");
  c.expect(check_unique_consistency(tr, 6, 2), "crafted case uniqueness");
  Transcript pruned = tr;
  if (!pruned.stages.empty()) pruned.stages.pop_back();
  c.expect(!check_unique_consistency(pruned, 6, 2),
           "dropping the final stage must break uniqueness");
  return c.ok;
}

// ---------------------------------------------------------------------------
// Criterion 8: property suites.
// ---------------------------------------------------------------------------
bool criterion8(Check& c) {
  // Outcome monotonicity: S subset of S' implies outcome(S) <= outcome(S').
  {
    BinaryCode code = build_code(ConcatParams{3, 2, 3, 1}, 9);
    for (Item a = 0; a < 9 && c.ok; ++a)
      for (Item b = a + 1; b < 9; ++b) {
        BitWord pair = outcome(code, {a, b});
        if (!(pair.covers(outcome(code, {a})) && pair.covers(outcome(code, {b})))) {
          c.expect(false, "outcome monotonicity");
          break;
        }
      }
  }

  // Colex roundtrip for all n <= 12.
  for (unsigned n = 1; n <= 12 && c.ok; ++n)
    for (unsigned k = 0; k <= n; ++k) {
      std::uint64_t total = static_cast<std::uint64_t>(binomial(n, k));
      for (std::uint64_t r = 0; r < total; ++r)
        if (colex_rank(colex_unrank(r, n, k)) != r) {
          c.expect(false, "colex roundtrip at n=" + std::to_string(n));
          break;
        }
    }

  // Answer monotonicity: growing pools never flip positive to negative.
  {
    Oracle oracle({2, 9}, 12);
    Pool pool;
    int prev = 0;
    for (Item j = 0; j < 12; ++j) {
      pool.push_back(j);
      int now = oracle.answer(pool);
      if (now < prev) c.expect(false, "answer monotonicity");
      prev = now;
    }
  }

  // Split-layer independence: the criterion-4 sweep re-run with every valid
  // forced split layer still identifies every pair.
  for (std::uint32_t t : criterion4_ts()) {
    OptimizationResult opt = optimize_params(t, CapacityMode::AtMost);
    BinaryCode code = build_code(opt.params, t);
    std::uint64_t checked = 0;
    for (Item a = 0; a < t && c.ok; ++a)
      for (Item b = a + 1; b < t; ++b) {
        WeightProfile prof = layer_weights(outcome(code, {a, b}), opt.params);
        for (unsigned l = 0; l < opt.params.layers; ++l) {
          if (prof[l] <= opt.params.inner_weight) continue;
          TwoOptions topts;
          topts.forced_split_layer = l;
          Oracle oracle({a, b}, t);
          Transcript tr = run_two(oracle, opt.params, topts);
          ++checked;
          if (tr.diagnosis != DefectSet{a, b}) {
            c.expect(false, "forced split layer " + std::to_string(l) + " broke t=" +
                                std::to_string(t));
            break;
          }
          if (tr.total_tests() > opt.total) {
            c.expect(false, "forced split layer exceeded the bound at t=" + std::to_string(t));
            break;
          }
        }
      }
    if (checked == 0) c.expect(false, "no forced-layer case at t=" + std::to_string(t));
  }
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int number;
    const char* name;
    bool (*fn)(Check&);
  };
  const std::vector<Criterion> criteria = {
      {1, "worst-case totals for t <= 1000 (at-most mode)", criterion1},
      {2, "exact-power totals and info bounds at t = 10^k", criterion2},
      {3, "spot checks with test/log2(t) ratios", criterion3},
      {4, "exhaustive identification, four-stage strategy, s = 2", criterion4},
      {5, "exhaustive identification, recursive strategy, s in {3,4}", criterion5},
      {6, "asymptotic rate optimum", criterion6},
      {7, "transcript consistency uniqueness", criterion7},
      {8, "property suites", criterion8},
  };

  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (const Criterion& cr : criteria) {
    if (only && cr.number != only) continue;
    auto start = std::chrono::steady_clock::now();
    Check check;
    bool ok = false;
    try {
      ok = cr.fn(check);
    } catch (const std::exception& e) {
      check.log << "    exception: " << e.what() << '\n';
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::printf("[%s] criterion %d: %s (%lld ms)\n", ok ? "PASS" : "FAIL", cr.number, cr.name,
                static_cast<long long>(ms));
    if (!ok) {
      std::fputs(check.log.str().c_str(), stdout);
      ++failures;
    }
  }
  return failures;
}
