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

#include "calib/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "calib/error.hpp"

namespace calib {
namespace {

// Strictly above v when representable.
double above(double v) {
  double t = v + 1.0;
  if (t == v) {
    const double next = std::nextafter(v, std::numeric_limits<double>::infinity());
    if (std::isfinite(next)) t = next;
  }
  return t;
}

double below(double v) {
  double t = v - 1.0;
  if (t == v) t = std::nextafter(v, -std::numeric_limits<double>::infinity());
  return t;
}

// Any t with lo <= t < hi separates the two groups under the strict "s > t"
// rule; the midpoint is preferred, and `lo` itself is used when hi and lo are
// adjacent doubles.
double midpoint(double hi, double lo) {
  const double m = hi / 2 + lo / 2;
  return (m > lo && m < hi) ? m : lo;
}

struct ScoredSample {
  double score;
  bool positive;
};

}  // namespace

std::size_t ClassifierCandidates::cover_position(double score) const {
  const auto it = std::partition_point(thresholds.begin(), thresholds.end(),
                                       [score](double t) { return t >= score; });
  if (it == thresholds.end()) {
    throw InvalidArgument("no candidate threshold lies below score " + std::to_string(score));
  }
  return static_cast<std::size_t>(it - thresholds.begin());
}

ThresholdConfig CandidateThresholdSet::config_at(std::span<const std::size_t> positions) const {
  if (positions.size() != classifiers.size()) {
    throw DimensionMismatch("expected " + std::to_string(classifiers.size()) + " positions");
  }
  ThresholdConfig config;
  config.thresholds.reserve(positions.size());
  for (std::size_t j = 0; j < positions.size(); ++j) {
    config.thresholds.push_back(classifiers[j].thresholds.at(positions[j]));
  }
  return config;
}

ThresholdConfig CandidateThresholdSet::tightest() const {
  ThresholdConfig config;
  for (const auto& c : classifiers) config.thresholds.push_back(c.thresholds.front());
  return config;
}

ThresholdConfig CandidateThresholdSet::lowest() const {
  ThresholdConfig config;
  for (const auto& c : classifiers) config.thresholds.push_back(c.thresholds.back());
  return config;
}

ClassifierCandidates extract_classifier_candidates(const Problem& problem,
                                                   std::size_t classifier) {
  if (classifier >= problem.num_classifiers()) {
    throw IndexOutOfRange("classifier " + std::to_string(classifier));
  }
  const auto pos = problem.positive_row(classifier);
  const auto neg = problem.negative_row(classifier);

  std::vector<ScoredSample> samples;
  samples.reserve(pos.size() + neg.size());
  for (double s : pos) samples.push_back({s, true});
  for (double s : neg) samples.push_back({s, false});
  std::sort(samples.begin(), samples.end(),
            [](const ScoredSample& a, const ScoredSample& b) { return a.score > b.score; });

  struct Group {
    double value;
    bool has_positive = false;
    bool has_negative = false;
  };
  std::vector<Group> groups;
  for (const auto& s : samples) {
    if (groups.empty() || groups.back().value != s.score) groups.push_back({s.score});
    (s.positive ? groups.back().has_positive : groups.back().has_negative) = true;
  }

  ClassifierCandidates out;
  if (groups.front().has_negative) out.thresholds.push_back(above(groups.front().value));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (!groups[g].has_positive) continue;
    if (g + 1 == groups.size()) {
      out.thresholds.push_back(below(groups[g].value));
    } else if (groups[g + 1].has_negative) {
      out.thresholds.push_back(midpoint(groups[g].value, groups[g + 1].value));
    }
  }

  out.negatives_by_score.resize(neg.size());
  std::iota(out.negatives_by_score.begin(), out.negatives_by_score.end(), 0u);
  std::stable_sort(out.negatives_by_score.begin(), out.negatives_by_score.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return neg[a] > neg[b]; });

  out.cumulative_fp.reserve(out.thresholds.size());
  std::size_t covered = 0;
  for (double t : out.thresholds) {
    while (covered < neg.size() && neg[out.negatives_by_score[covered]] > t) ++covered;
    out.cumulative_fp.push_back(static_cast<std::uint32_t>(covered));
  }
  return out;
}

CandidateThresholdSet extract_candidates(const Problem& problem) {
  CandidateThresholdSet set;
  set.classifiers.reserve(problem.num_classifiers());
  for (std::size_t j = 0; j < problem.num_classifiers(); ++j) {
    set.classifiers.push_back(extract_classifier_candidates(problem, j));
  }
  return set;
}

std::size_t delta(const Problem& problem, std::size_t classifier, std::size_t sample) {
  if (classifier >= problem.num_classifiers()) {
    throw IndexOutOfRange("classifier " + std::to_string(classifier));
  }
  if (sample >= problem.num_positives()) {
    throw IndexOutOfRange("positive " + std::to_string(sample));
  }
  const double s = problem.positive(classifier, sample);
  const auto neg = problem.negative_row(classifier);
  return static_cast<std::size_t>(
      std::count_if(neg.begin(), neg.end(), [s](double v) { return v >= s; }));
}

DifficultyOrder difficulty_order(const Problem& problem) {
  const std::size_t num_pos = problem.num_positives();
  DifficultyOrder out;
  out.difficulty.assign(num_pos, std::numeric_limits<std::size_t>::max());

  std::vector<double> sorted;
  for (std::size_t j = 0; j < problem.num_classifiers(); ++j) {
    const auto neg = problem.negative_row(j);
    sorted.assign(neg.begin(), neg.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < num_pos; ++i) {
      const auto first = std::lower_bound(sorted.begin(), sorted.end(), problem.positive(j, i));
      const auto count = static_cast<std::size_t>(sorted.end() - first);
      out.difficulty[i] = std::min(out.difficulty[i], count);
    }
  }

  out.order.resize(num_pos);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
    return out.difficulty[a] > out.difficulty[b];
  });
  return out;
}

double tighten_to_cover(const ClassifierCandidates& candidates, double current, double score) {
  const double target = candidates.thresholds[candidates.cover_position(score)];
  return target < current ? target : current;
}

double disabled_threshold(const Problem& problem, std::size_t classifier) {
  if (classifier >= problem.num_classifiers()) {
    throw IndexOutOfRange("classifier " + std::to_string(classifier));
  }
  double top = -std::numeric_limits<double>::infinity();
  for (double s : problem.positive_row(classifier)) top = std::max(top, s);
  for (double s : problem.negative_row(classifier)) top = std::max(top, s);
  return above(top);
}

}  // namespace calib
