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

#ifndef CALIB_COVER_STATE_HPP
#define CALIB_COVER_STATE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "calib/problem.hpp"
#include "calib/thresholds.hpp"

namespace calib {

/// Incrementally maintained false-positive set for a configuration of
/// candidate positions. Every classifier starts at its tightest candidate;
/// apply_edge() only lowers thresholds and undo_edge() reverts the most
/// recent apply_edge() exactly.
///
/// Each negative carries the number of classifiers currently scoring it
/// positively, so an undo only touches the negatives its edge opened.
class CoverState {
 public:
  struct EdgeResult {
    std::size_t fp_count;
    /// Negatives whose coverage count rose from zero. Valid until the next
    /// apply_edge()/undo_edge().
    std::span<const std::uint32_t> newly_covered;
  };

  CoverState(const Problem& problem, const CandidateThresholdSet& candidates);

  /// Moves classifier `classifier` to candidate position `target`
  /// (target >= current position).
  EdgeResult apply_edge(std::size_t classifier, std::size_t target);
  void undo_edge();

  std::size_t fp_count() const { return fp_count_; }
  std::size_t position(std::size_t classifier) const { return positions_[classifier]; }
  std::span<const std::size_t> positions() const { return positions_; }
  std::size_t journal_depth() const { return journal_.size(); }
  ThresholdConfig config() const { return candidates_->config_at(positions_); }
  std::span<const std::uint32_t> coverage_counts() const { return counts_; }

  /// Order-independent hash of the false-positive set. Equal sets always
  /// hash equal; use same_fp_set() to rule out collisions.
  std::uint64_t fp_fingerprint() const { return fingerprint_; }
  std::uint64_t key(std::uint32_t negative) const { return keys_[negative]; }
  bool same_fp_set(const CoverState& other) const;
  /// Sorted false-positive set.
  std::vector<std::uint32_t> fp_set() const;

  friend bool operator==(const CoverState& a, const CoverState& b) {
    return a.positions_ == b.positions_ && a.counts_ == b.counts_ &&
           a.fp_count_ == b.fp_count_ && a.fingerprint_ == b.fingerprint_ &&
           a.journal_.size() == b.journal_.size();
  }

 private:
  struct JournalEntry {
    std::size_t classifier;
    std::size_t old_position;
    std::size_t newly_begin;  // offset into newly_stack_
  };

  const Problem* problem_;
  const CandidateThresholdSet* candidates_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::size_t> positions_;
  std::size_t fp_count_ = 0;
  std::uint64_t fingerprint_ = 0;
  std::vector<JournalEntry> journal_;
  std::vector<std::uint32_t> newly_stack_;
};

}  // namespace calib

#endif  // CALIB_COVER_STATE_HPP
