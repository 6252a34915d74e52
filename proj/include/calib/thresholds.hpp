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

#ifndef CALIB_THRESHOLDS_HPP
#define CALIB_THRESHOLDS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "calib/problem.hpp"

namespace calib {

/// Candidate thresholds of a single classifier.
///
/// `thresholds` is strictly descending. Position 0 is the tightest candidate
/// and scores no negative positively; the last position lies strictly below
/// every positive score. A threshold is only ever placed strictly between two
/// distinct score values, at their midpoint, or one unit beyond the extreme
/// score.
///
/// Negatives are stored sorted by descending score, so the negatives scored
/// positively at position a are exactly the prefix
/// `negatives_by_score[0, cumulative_fp[a])`.
struct ClassifierCandidates {
  std::vector<double> thresholds;
  std::vector<std::uint32_t> negatives_by_score;
  std::vector<std::uint32_t> cumulative_fp;

  std::size_t size() const { return thresholds.size(); }

  /// Negatives that position `a` scores positively but position `a - 1` does
  /// not.
  std::span<const std::uint32_t> newly_covered(std::size_t a) const {
    const std::size_t begin = a == 0 ? 0 : cumulative_fp[a - 1];
    return std::span<const std::uint32_t>(negatives_by_score)
        .subspan(begin, cumulative_fp[a] - begin);
  }

  /// Negatives opened when moving from position `from` down to `to`.
  std::span<const std::uint32_t> covered_between(std::size_t from, std::size_t to) const {
    return std::span<const std::uint32_t>(negatives_by_score)
        .subspan(cumulative_fp[from], cumulative_fp[to] - cumulative_fp[from]);
  }

  /// Position of the largest candidate strictly below `score`.
  std::size_t cover_position(double score) const;
};

struct CandidateThresholdSet {
  std::vector<ClassifierCandidates> classifiers;

  std::size_t num_classifiers() const { return classifiers.size(); }
  const ClassifierCandidates& operator[](std::size_t j) const { return classifiers[j]; }

  ThresholdConfig config_at(std::span<const std::size_t> positions) const;
  /// [theta_1^1 ... theta_E^1]: zero false positives.
  ThresholdConfig tightest() const;
  /// [theta_1^M1 ... theta_E^ME]: always feasible.
  ThresholdConfig lowest() const;
};

ClassifierCandidates extract_classifier_candidates(const Problem& problem,
                                                   std::size_t classifier);
CandidateThresholdSet extract_candidates(const Problem& problem);

/// Number of negatives that classifier j necessarily scores positively when
/// it scores positive `sample` positively: |{n : s_j(n) >= s_j(sample)}|.
std::size_t delta(const Problem& problem, std::size_t classifier, std::size_t sample);

struct DifficultyOrder {
  std::vector<std::size_t> order;
  std::vector<std::size_t> difficulty;
};

/// Positives sorted by non-increasing min_j delta, ties by index.
DifficultyOrder difficulty_order(const Problem& problem);

/// Lowers `current` just enough that `score` is scored positively, choosing
/// among the candidates; returns `current` when it already suffices.
double tighten_to_cover(const ClassifierCandidates& candidates, double current, double score);

/// A threshold above every score of the classifier, i.e. one that disables it.
double disabled_threshold(const Problem& problem, std::size_t classifier);

}  // namespace calib

#endif  // CALIB_THRESHOLDS_HPP
