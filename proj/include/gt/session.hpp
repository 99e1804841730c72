#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "gt/code.hpp"

namespace gt {

/// Hidden defect set together with the pooled-test answer rule: a test is
/// positive iff the pool contains at least one defective item.
class Oracle {
 public:
  Oracle(DefectSet defects, std::uint32_t t) : defects_(std::move(defects)), t_(t), member_(t, false) {
    std::sort(defects_.begin(), defects_.end());
    for (Item j : defects_) {
      if (j >= t_) throw DomainError("Oracle: defect index out of range");
      member_[j] = true;
    }
  }

  int answer(const Pool& pool) const {
    for (Item j : pool) {
      if (j >= t_) throw DomainError("Oracle::answer: item index out of range");
      if (member_[j]) return 1;
    }
    return 0;
  }

  std::uint32_t universe() const { return t_; }
  const DefectSet& defects() const { return defects_; }

 private:
  DefectSet defects_;
  std::uint32_t t_;
  std::vector<bool> member_;
};

/// One batch of simultaneous pools and their answers.
struct Stage {
  std::vector<Pool> pools;
  std::vector<std::uint8_t> outcomes;
};

/// Full record of a run: every pool and outcome in stage order, plus the
/// final diagnosis.
struct Transcript {
  std::uint32_t t = 0;
  ConcatParams params;
  std::vector<Stage> stages;
  DefectSet diagnosis;

  unsigned total_tests() const {
    unsigned n = 0;
    for (const Stage& s : stages) n += static_cast<unsigned>(s.pools.size());
    return n;
  }
  unsigned n_stages() const { return static_cast<unsigned>(stages.size()); }
};

/// Stage-disciplined access to an answer source. All pools of a stage are
/// submitted before any of its outcomes can be read; commit_stage answers the
/// whole batch atomically and closes the stage.
class StagedSession {
 public:
  using AnswerFn = std::function<int(const Pool&)>;

  explicit StagedSession(AnswerFn answer) : answer_(std::move(answer)) {}
  explicit StagedSession(const Oracle& oracle)
      : answer_([&oracle](const Pool& p) { return oracle.answer(p); }) {}

  void begin_stage() {
    if (open_) throw ProtocolViolationError("session: stage already open");
    open_ = true;
    pending_.clear();
  }

  void add_pool(Pool pool) {
    if (!open_)
      throw ProtocolViolationError("session: pool submitted outside an open stage");
    pending_.push_back(std::move(pool));
  }

  const std::vector<std::uint8_t>& commit_stage() {
    if (!open_) throw ProtocolViolationError("session: no open stage to commit");
    if (pending_.empty()) throw ProtocolViolationError("session: empty stage");
    Stage stage;
    stage.pools = std::move(pending_);
    stage.outcomes.reserve(stage.pools.size());
    for (const Pool& p : stage.pools)
      stage.outcomes.push_back(static_cast<std::uint8_t>(answer_(p) ? 1 : 0));
    stages_.push_back(std::move(stage));
    open_ = false;
    pending_.clear();
    return stages_.back().outcomes;
  }

  std::vector<std::uint8_t> run_stage(std::vector<Pool> pools) {
    begin_stage();
    for (Pool& p : pools) add_pool(std::move(p));
    return commit_stage();
  }

  const std::vector<Stage>& stages() const { return stages_; }

  unsigned total_tests() const {
    unsigned n = 0;
    for (const Stage& s : stages_) n += static_cast<unsigned>(s.pools.size());
    return n;
  }

 private:
  AnswerFn answer_;
  std::vector<Stage> stages_;
  std::vector<Pool> pending_;
  bool open_ = false;
};

/// What a strategy hands back from a session.
struct StrategyResult {
  ConcatParams params;
  DefectSet diagnosis;
};

/// Runs a strategy against an oracle and assembles the transcript.
template <typename Strategy>
Transcript run_session(Strategy&& strategy, const Oracle& oracle) {
  StagedSession session(oracle);
  StrategyResult res = std::forward<Strategy>(strategy)(session);
  Transcript tr;
  tr.t = oracle.universe();
  tr.params = res.params;
  tr.stages = session.stages();
  tr.diagnosis = std::move(res.diagnosis);
  return tr;
}

}  // namespace gt
