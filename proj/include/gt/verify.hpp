#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <thread>
#include <vector>

#include "gt/session.hpp"

namespace gt {

struct VerifyFailure {
  DefectSet defects;
  DefectSet diagnosis;
};

struct VerificationReport {
  std::uint32_t t = 0;
  unsigned s = 0;
  std::uint64_t cases = 0;
  std::vector<VerifyFailure> failures;
  unsigned max_tests = 0;
  unsigned max_stages = 0;
  std::map<unsigned, std::uint64_t> test_histogram;

  bool ok() const { return failures.empty(); }
};

struct VerifyOptions {
  unsigned jobs = 1;
  std::uint64_t budget = 5'000'000;
};

namespace detail {

inline std::vector<DefectSet> all_defect_sets(std::uint32_t t, unsigned s) {
  std::vector<DefectSet> sets;
  sets.push_back({});
  for (unsigned k = 1; k <= s && k <= t; ++k) {
    DefectSet combo(k);
    for (unsigned i = 0; i < k; ++i) combo[i] = i;
    while (true) {
      sets.push_back(combo);
      int i = static_cast<int>(k) - 1;
      while (i >= 0 && combo[i] == t - k + i) --i;
      if (i < 0) break;
      ++combo[i];
      for (unsigned j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
  return sets;
}

}  // namespace detail

/// Runs a fresh strategy against every defect set of size <= s and reports
/// mismatches plus worst-case test and stage counts. The factory is called
/// once per case so no state can leak between cases.
template <typename Factory>
VerificationReport verify_exhaustive(std::uint32_t t, unsigned s, Factory&& factory,
                                     VerifyOptions opts = {}) {
  BigCount required = 0;
  for (unsigned k = 0; k <= s; ++k) required += binomial(t, k);
  if (required > opts.budget) {
    std::uint64_t req = required > std::numeric_limits<std::uint64_t>::max()
                            ? std::numeric_limits<std::uint64_t>::max()
                            : static_cast<std::uint64_t>(required);
    throw BudgetExceededError("verify_exhaustive: " + required.str() +
                                  " cases exceed the budget of " + std::to_string(opts.budget),
                              req);
  }

  const std::vector<DefectSet> sets = detail::all_defect_sets(t, s);
  const unsigned jobs = std::max(1u, opts.jobs);

  auto run_range = [&](std::size_t lo, std::size_t hi, VerificationReport& rep) {
    for (std::size_t i = lo; i < hi; ++i) {
      Oracle oracle(sets[i], t);
      Transcript tr = factory(oracle);
      const unsigned tests = tr.total_tests();
      rep.max_tests = std::max(rep.max_tests, tests);
      rep.max_stages = std::max(rep.max_stages, tr.n_stages());
      ++rep.test_histogram[tests];
      ++rep.cases;
      if (tr.diagnosis != sets[i]) rep.failures.push_back({sets[i], tr.diagnosis});
    }
  };

  VerificationReport report;
  report.t = t;
  report.s = s;
  if (jobs == 1) {
    run_range(0, sets.size(), report);
  } else {
    std::vector<VerificationReport> parts(jobs);
    std::vector<std::thread> workers;
    const std::size_t chunk = (sets.size() + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      const std::size_t lo = std::min<std::size_t>(j * chunk, sets.size());
      const std::size_t hi = std::min<std::size_t>(lo + chunk, sets.size());
      workers.emplace_back([&, lo, hi, j] { run_range(lo, hi, parts[j]); });
    }
    for (auto& th : workers) th.join();
    for (const VerificationReport& part : parts) {
      report.cases += part.cases;
      report.max_tests = std::max(report.max_tests, part.max_tests);
      report.max_stages = std::max(report.max_stages, part.max_stages);
      for (auto [tests, count] : part.test_histogram) report.test_histogram[tests] += count;
      report.failures.insert(report.failures.end(), part.failures.begin(), part.failures.end());
    }
  }
  std::sort(report.failures.begin(), report.failures.end(),
            [](const VerifyFailure& a, const VerifyFailure& b) { return a.defects < b.defects; });
  return report;
}

/// True iff the transcript's diagnosis is the only defect set of size <= s
/// consistent with every recorded pool outcome. Brute force over item masks.
inline bool check_unique_consistency(const Transcript& tr, std::uint32_t t, unsigned s) {
  if (t > 64) throw DomainError("check_unique_consistency: t > 64 unsupported");

  std::vector<std::uint64_t> pool_masks;
  std::vector<std::uint8_t> pool_bits;
  for (const Stage& stage : tr.stages) {
    for (std::size_t i = 0; i < stage.pools.size(); ++i) {
      std::uint64_t mask = 0;
      for (Item j : stage.pools[i]) {
        if (j >= t) throw DomainError("check_unique_consistency: pool index out of range");
        mask |= std::uint64_t{1} << j;
      }
      pool_masks.push_back(mask);
      pool_bits.push_back(stage.outcomes[i]);
    }
  }

  std::uint64_t diagnosis_mask = 0;
  for (Item j : tr.diagnosis) {
    if (j >= t) return false;  // a diagnosis outside the universe is never forced
    diagnosis_mask |= std::uint64_t{1} << j;
  }

  auto consistent = [&](std::uint64_t set_mask) {
    for (std::size_t i = 0; i < pool_masks.size(); ++i)
      if (((pool_masks[i] & set_mask) != 0) != (pool_bits[i] != 0)) return false;
    return true;
  };

  std::uint64_t found = 0;
  unsigned n_found = 0;
  DefectSet combo;
  auto scan = [&](auto&& self, std::uint32_t start, std::uint64_t mask) -> bool {
    if (consistent(mask)) {
      if (++n_found > 1) return false;
      found = mask;
    }
    if (combo.size() >= s) return true;
    for (std::uint32_t j = start; j < t; ++j) {
      combo.push_back(j);
      if (!self(self, j + 1, mask | (std::uint64_t{1} << j))) return false;
      combo.pop_back();
    }
    return true;
  };
  if (!scan(scan, 0, 0)) return false;
  return n_found == 1 && found == diagnosis_mask;
}

}  // namespace gt
