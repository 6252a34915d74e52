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

#include "calib/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "calib/error.hpp"

namespace calib {
namespace {

constexpr double kRecallSlack = 1e-9;

struct Ranked {
  double score;
  int label;
};

void check_model(const Problem& test, const CalibrationModel& model) {
  if (model.num_classifiers() != test.num_classifiers()) {
    throw DimensionMismatch("model has " + std::to_string(model.num_classifiers()) +
                            " classifiers, problem has " +
                            std::to_string(test.num_classifiers()));
  }
}

std::vector<double> positive_scores(const Problem& test, const CalibrationModel& model) {
  std::vector<double> out(test.num_positives());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = ensemble_calibrated_score(model, test.positive_sample(i));
  }
  return out;
}

std::vector<double> negative_scores(const Problem& test, const CalibrationModel& model) {
  std::vector<double> out(test.num_negatives());
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = ensemble_calibrated_score(model, test.negative_sample(n));
  }
  return out;
}

// Descending by score; among ties negatives come first.
std::vector<Ranked> ranked_samples(const Problem& test, const CalibrationModel& model) {
  check_model(test, model);
  std::vector<Ranked> out;
  out.reserve(test.num_positives() + test.num_negatives());
  for (double s : positive_scores(test, model)) out.push_back({s, 1});
  for (double s : negative_scores(test, model)) out.push_back({s, 0});
  std::stable_sort(out.begin(), out.end(), [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.label < b.label;
  });
  return out;
}

}  // namespace

double recall_at_thresholds(const Problem& test, const ThresholdConfig& config) {
  if (config.size() != test.num_classifiers()) {
    throw DimensionMismatch("config has " + std::to_string(config.size()) +
                            " thresholds, problem has " +
                            std::to_string(test.num_classifiers()));
  }
  if (test.num_positives() == 0) throw EmptyPositives("test problem has no positives");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < test.num_positives(); ++i) {
    if (ensemble_score(test.positive_sample(i), config) > 0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.num_positives());
}

OperatingPoint fp_at_recall(const Problem& test, const CalibrationModel& model,
                            double target_recall) {
  check_model(test, model);
  if (test.num_positives() == 0) throw EmptyPositives("test problem has no positives");
  const auto pos = positive_scores(test, model);
  const auto neg = negative_scores(test, model);
  const double num_pos = static_cast<double>(pos.size());

  OperatingPoint point;
  if (model.method == CalibrationMethod::kJointThresholds) {
    point.tau = 0.0;
    point.recall = static_cast<double>(std::count_if(pos.begin(), pos.end(),
                                                     [](double s) { return s > 0; })) /
                   num_pos;
    point.fp = static_cast<std::size_t>(
        std::count_if(neg.begin(), neg.end(), [](double s) { return s > 0; }));
    return point;
  }

  if (!(target_recall >= 0.0 && target_recall <= 1.0)) {
    throw InvalidArgument("target recall must lie in [0, 1]");
  }
  const auto needed =
      static_cast<std::size_t>(std::max(0.0, std::ceil(target_recall * num_pos - kRecallSlack)));
  if (needed == 0) {
    double top = -std::numeric_limits<double>::infinity();
    for (double s : pos) top = std::max(top, s);
    for (double s : neg) top = std::max(top, s);
    point.tau = top + 1.0;
    return point;
  }
  std::vector<double> sorted = pos;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double tau = sorted[needed - 1];
  if (!std::isfinite(tau)) {
    throw UnreachableRecall("recall " + std::to_string(target_recall) +
                            " needs a non-finite operating point");
  }
  point.tau = tau;
  point.recall =
      static_cast<double>(std::count_if(pos.begin(), pos.end(), [tau](double s) { return s >= tau; })) /
      num_pos;
  point.fp = static_cast<std::size_t>(
      std::count_if(neg.begin(), neg.end(), [tau](double s) { return s >= tau; }));
  return point;
}

std::vector<CurvePoint> precision_recall_curve(const Problem& test, const CalibrationModel& model) {
  const auto ranked = ranked_samples(test, model);
  const double num_pos = static_cast<double>(test.num_positives());
  std::vector<CurvePoint> curve;
  curve.reserve(ranked.size());
  std::size_t tp = 0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    tp += static_cast<std::size_t>(ranked[r].label);
    curve.push_back({r + 1, ranked[r].score, ranked[r].label,
                     static_cast<double>(tp) / static_cast<double>(r + 1),
                     static_cast<double>(tp) / num_pos});
  }
  return curve;
}

double average_precision(const Problem& test, const CalibrationModel& model) {
  if (test.num_positives() == 0) throw EmptyPositives("test problem has no positives");
  const auto ranked = ranked_samples(test, model);
  double sum = 0.0;
  std::size_t tp = 0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    if (ranked[r].label == 1) {
      ++tp;
      sum += static_cast<double>(tp) / static_cast<double>(r + 1);
    }
  }
  return sum / static_cast<double>(test.num_positives());
}

ComparisonReport compare_methods(const Problem& train, const Problem& test,
                                 const std::vector<CalibrationMethod>& methods,
                                 const CompareOptions& options) {
  if (train.num_classifiers() != test.num_classifiers()) {
    throw DimensionMismatch("train and test problems have different classifier counts");
  }
  ComparisonReport report;
  report.joint_solution = options.search.budget.unlimited()
                              ? solve_exact(train, options.search)
                              : solve_anytime(train, options.search);
  report.target_recall = recall_at_thresholds(test, report.joint_solution.config);

  for (CalibrationMethod method : methods) {
    CalibrationModel model;
    switch (method) {
      case CalibrationMethod::kJointThresholds:
        model = thresholds_model(report.joint_solution.config);
        break;
      case CalibrationMethod::kJointSigmoid:
        model = fit_joint_sigmoid(train, report.joint_solution);
        break;
      case CalibrationMethod::kIndependentSigmoid:
        model = fit_independent_sigmoid(train, options.margin_cutoff);
        break;
      case CalibrationMethod::kIsotonic:
        model = fit_isotonic(train);
        break;
      case CalibrationMethod::kAffine:
        model = fit_affine(train, options.affine_samples, options.seed);
        break;
    }
    MethodReport row;
    row.method = method;
    const OperatingPoint point = fp_at_recall(test, model, report.target_recall);
    row.recall = point.recall;
    row.fp = point.fp;
    row.tau = point.tau;
    row.ap = average_precision(test, model);
    row.curve = precision_recall_curve(test, model);
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "rank,score,label,precision,recall\n";
  const auto old_precision = out.precision(17);
  for (const CurvePoint& p : curve) {
    out << p.rank << ',' << p.score << ',' << p.label << ',' << p.precision << ',' << p.recall
        << '\n';
  }
  out.precision(old_precision);
}

}  // namespace calib
