/*
 * Copyright 2026 The calib Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "calib/cover_state.hpp"

#include <cassert>

#include "calib/error.hpp"
#include "calib/rng.hpp"

namespace calib {

CoverState::CoverState(const Problem& problem, const CandidateThresholdSet& candidates)
    : problem_(&problem),
      candidates_(&candidates),
      counts_(problem.num_negatives(), 0),
      positions_(problem.num_classifiers(), 0) {
  if (candidates.num_classifiers() != problem.num_classifiers()) {
    throw DimensionMismatch("candidate set does not match problem");
  }
  CounterRng rng(0x5eedf00dULL);
  keys_.resize(problem.num_negatives());
  for (auto& k : keys_) k = rng.next();
  // Position 0 never covers a negative, so the root state is empty.
}

CoverState::EdgeResult CoverState::apply_edge(std::size_t classifier, std::size_t target) {
  if (classifier >= positions_.size()) {
    throw IndexOutOfRange("classifier " + std::to_string(classifier));
  }
  const ClassifierCandidates& cand = (*candidates_)[classifier];
  const std::size_t current = positions_[classifier];
  if (target < current) {
    throw MonotonicityViolation("edge would raise threshold of classifier " +
                                std::to_string(classifier));
  }
  if (target >= cand.size()) {
    throw IndexOutOfRange("candidate position " + std::to_string(target));
  }

  const std::size_t begin = newly_stack_.size();
  journal_.push_back({classifier, current, begin});
  for (std::uint32_t n : cand.covered_between(current, target)) {
    if (counts_[n]++ == 0) {
      newly_stack_.push_back(n);
      fingerprint_ ^= keys_[n];
    }
  }
  fp_count_ += newly_stack_.size() - begin;
  positions_[classifier] = target;
  assert(fp_count_ == compute_loss(*problem_, config()));
  return {fp_count_, std::span<const std::uint32_t>(newly_stack_).subspan(begin)};
}

void CoverState::undo_edge() {
  if (journal_.empty()) throw EmptyJournal("undo_edge at root");
  const JournalEntry entry = journal_.back();
  journal_.pop_back();
  const ClassifierCandidates& cand = (*candidates_)[entry.classifier];
  for (std::uint32_t n : cand.covered_between(entry.old_position, positions_[entry.classifier])) {
    --counts_[n];
  }
  for (std::size_t k = entry.newly_begin; k < newly_stack_.size(); ++k) {
    fingerprint_ ^= keys_[newly_stack_[k]];
  }
  fp_count_ -= newly_stack_.size() - entry.newly_begin;
  newly_stack_.resize(entry.newly_begin);
  positions_[entry.classifier] = entry.old_position;
}

bool CoverState::same_fp_set(const CoverState& other) const {
  if (fp_count_ != other.fp_count_ || counts_.size() != other.counts_.size()) return false;
  for (std::size_t n = 0; n < counts_.size(); ++n) {
    if ((counts_[n] > 0) != (other.counts_[n] > 0)) return false;
  }
  return true;
}

std::vector<std::uint32_t> CoverState::fp_set() const {
  std::vector<std::uint32_t> out;
  out.reserve(fp_count_);
  for (std::uint32_t n = 0; n < counts_.size(); ++n) {
    if (counts_[n] > 0) out.push_back(n);
  }
  return out;
}

}  // namespace calib
