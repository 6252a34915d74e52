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

#ifndef CALIB_PROBLEM_HPP
#define CALIB_PROBLEM_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace calib {

using ScoreMatrix = std::vector<std::vector<double>>;

/// Raw, unvalidated contents of a calibration problem. Rows are classifiers,
/// columns are samples.
struct ProblemData {
  ScoreMatrix positive_scores;
  ScoreMatrix negative_scores;
  std::vector<std::string> positive_ids;
  std::vector<std::string> negative_ids;
  std::map<std::string, std::string> metadata;
};

/// An ensemble calibration instance: the scores of E classifiers on a set of
/// positive samples and a set of negative samples. Immutable once built; the
/// constructor rejects ragged matrices, non-finite scores, an empty positive
/// set and duplicate identifiers.
class Problem {
 public:
  explicit Problem(ProblemData data);

  std::size_t num_classifiers() const { return data_.positive_scores.size(); }
  std::size_t num_positives() const { return num_positives_; }
  std::size_t num_negatives() const { return num_negatives_; }

  double positive(std::size_t classifier, std::size_t sample) const {
    return data_.positive_scores[classifier][sample];
  }
  double negative(std::size_t classifier, std::size_t sample) const {
    return data_.negative_scores[classifier][sample];
  }
  std::span<const double> positive_row(std::size_t classifier) const {
    return data_.positive_scores[classifier];
  }
  std::span<const double> negative_row(std::size_t classifier) const {
    return data_.negative_scores[classifier];
  }

  /// Scores of every classifier on one sample (a column of the matrix).
  std::vector<double> positive_sample(std::size_t sample) const;
  std::vector<double> negative_sample(std::size_t sample) const;

  const std::vector<std::string>& positive_ids() const { return data_.positive_ids; }
  const std::vector<std::string>& negative_ids() const { return data_.negative_ids; }
  const std::map<std::string, std::string>& metadata() const { return data_.metadata; }
  const ProblemData& data() const { return data_; }

  friend bool operator==(const Problem& a, const Problem& b) {
    return a.data_.positive_scores == b.data_.positive_scores &&
           a.data_.negative_scores == b.data_.negative_scores &&
           a.data_.positive_ids == b.data_.positive_ids &&
           a.data_.negative_ids == b.data_.negative_ids &&
           a.data_.metadata == b.data_.metadata;
  }

 private:
  ProblemData data_;
  std::size_t num_positives_ = 0;
  std::size_t num_negatives_ = 0;
};

/// One threshold per classifier.
struct ThresholdConfig {
  std::vector<double> thresholds;

  std::size_t size() const { return thresholds.size(); }
  double operator[](std::size_t j) const { return thresholds[j]; }
  double& operator[](std::size_t j) { return thresholds[j]; }
  friend bool operator==(const ThresholdConfig&, const ThresholdConfig&) = default;
};

struct IncumbentRecord {
  double time_ms = 0.0;
  std::uint64_t nodes_visited = 0;
  std::uint64_t loss = 0;
  friend bool operator==(const IncumbentRecord&, const IncumbentRecord&) = default;
};

struct SearchStats {
  std::uint64_t nodes_visited = 0;
  std::uint64_t nodes_pruned_bound = 0;
  std::uint64_t nodes_pruned_equivalence = 0;
  std::uint64_t positives_removed_by_root = 0;
  std::uint64_t levels = 0;
  double wall_time_ms = 0.0;
  std::vector<IncumbentRecord> incumbent_history;
  friend bool operator==(const SearchStats&, const SearchStats&) = default;
};

enum class SolveStatus {
  kOptimal,          // tree exhausted, incumbent is a global optimum
  kBudgetExhausted,  // budget fired, incumbent is feasible but unproven
  kFallback,         // budget fired before the first leaf
};

const char* to_string(SolveStatus status);
SolveStatus solve_status_from_string(const std::string& name);

/// Marks a positive that the root configuration already covers.
inline constexpr int kRootCovered = -1;

struct Solution {
  ThresholdConfig config;
  std::uint64_t loss = 0;
  /// For each positive, the classifier responsible for covering it, or
  /// kRootCovered.
  std::vector<int> assignment;
  bool optimal = false;
  bool fallback = false;
  SolveStatus status = SolveStatus::kOptimal;
  SearchStats stats;
  friend bool operator==(const Solution&, const Solution&) = default;
};

/// Number of negatives scored positively by at least one classifier, i.e.
/// with max_j(s_j - theta_j) > 0.
std::uint64_t compute_loss(const Problem& problem, const ThresholdConfig& config);

/// True iff every positive is scored positively by at least one classifier.
bool check_feasible(const Problem& problem, const ThresholdConfig& config);

/// max_j (scores[j] - thresholds[j]).
double ensemble_score(std::span<const double> scores, const ThresholdConfig& config);

}  // namespace calib

#endif  // CALIB_PROBLEM_HPP
