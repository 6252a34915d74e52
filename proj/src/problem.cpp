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

#include "calib/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "calib/error.hpp"

namespace calib {
namespace {

void check_ids_unique(const std::vector<std::string>& ids, std::size_t expected,
                      const char* field) {
  if (ids.empty()) return;
  if (ids.size() != expected) {
    throw ValidationError(std::string(field) + " has " + std::to_string(ids.size()) +
                          " entries, expected " + std::to_string(expected));
  }
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!seen.insert(ids[i]).second) {
      throw ValidationError(std::string(field) + "[" + std::to_string(i) +
                            "] duplicates identifier '" + ids[i] + "'");
    }
  }
}

std::size_t check_matrix(const ScoreMatrix& m, const char* field) {
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  for (std::size_t row = 0; row < m.size(); ++row) {
    if (m[row].size() != cols) {
      throw ValidationError(std::string(field) + " row " + std::to_string(row) + " has " +
                            std::to_string(m[row].size()) + " columns, expected " +
                            std::to_string(cols));
    }
    for (std::size_t col = 0; col < cols; ++col) {
      if (!std::isfinite(m[row][col])) {
        throw ValidationError(std::string(field) + " entry (row " + std::to_string(row) +
                              ", col " + std::to_string(col) + ") is not finite");
      }
    }
  }
  return cols;
}

void check_dimension(const Problem& problem, const ThresholdConfig& config) {
  if (config.size() != problem.num_classifiers()) {
    throw DimensionMismatch("config has " + std::to_string(config.size()) +
                            " thresholds, problem has " +
                            std::to_string(problem.num_classifiers()) + " classifiers");
  }
}

}  // namespace

Problem::Problem(ProblemData data) : data_(std::move(data)) {
  if (data_.positive_scores.empty()) {
    throw ValidationError("problem needs at least one classifier");
  }
  if (data_.negative_scores.empty()) {
    data_.negative_scores.assign(data_.positive_scores.size(), {});
  }
  if (data_.negative_scores.size() != data_.positive_scores.size()) {
    throw ValidationError("positive_scores has " + std::to_string(data_.positive_scores.size()) +
                          " rows but negative_scores has " +
                          std::to_string(data_.negative_scores.size()));
  }
  num_positives_ = check_matrix(data_.positive_scores, "positive_scores");
  num_negatives_ = check_matrix(data_.negative_scores, "negative_scores");
  if (num_positives_ == 0) throw ValidationError("no positives");
  check_ids_unique(data_.positive_ids, num_positives_, "positive_ids");
  check_ids_unique(data_.negative_ids, num_negatives_, "negative_ids");
}

std::vector<double> Problem::positive_sample(std::size_t sample) const {
  std::vector<double> out(num_classifiers());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = positive(j, sample);
  return out;
}

std::vector<double> Problem::negative_sample(std::size_t sample) const {
  std::vector<double> out(num_classifiers());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = negative(j, sample);
  return out;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kBudgetExhausted: return "budget-exhausted";
    case SolveStatus::kFallback: return "fallback";
  }
  return "unknown";
}

SolveStatus solve_status_from_string(const std::string& name) {
  if (name == "optimal") return SolveStatus::kOptimal;
  if (name == "budget-exhausted") return SolveStatus::kBudgetExhausted;
  if (name == "fallback") return SolveStatus::kFallback;
  throw ParseError("unknown solve status '" + name + "'");
}

std::uint64_t compute_loss(const Problem& problem, const ThresholdConfig& config) {
  check_dimension(problem, config);
  std::uint64_t loss = 0;
  for (std::size_t n = 0; n < problem.num_negatives(); ++n) {
    for (std::size_t j = 0; j < problem.num_classifiers(); ++j) {
      if (problem.negative(j, n) - config[j] > 0) {
        ++loss;
        break;
      }
    }
  }
  return loss;
}

bool check_feasible(const Problem& problem, const ThresholdConfig& config) {
  check_dimension(problem, config);
  for (std::size_t i = 0; i < problem.num_positives(); ++i) {
    bool covered = false;
    for (std::size_t j = 0; j < problem.num_classifiers() && !covered; ++j) {
      covered = problem.positive(j, i) - config[j] > 0;
    }
    if (!covered) return false;
  }
  return true;
}

double ensemble_score(std::span<const double> scores, const ThresholdConfig& config) {
  if (scores.size() != config.size()) {
    throw DimensionMismatch("sample has " + std::to_string(scores.size()) +
                            " scores, config has " + std::to_string(config.size()));
  }
  if (scores.empty()) throw DimensionMismatch("empty sample");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < scores.size(); ++j) best = std::max(best, scores[j] - config[j]);
  return best;
}

}  // namespace calib
