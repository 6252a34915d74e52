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

#ifndef CALIB_EVALUATION_HPP
#define CALIB_EVALUATION_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "calib/calibrators.hpp"
#include "calib/problem.hpp"
#include "calib/search.hpp"

namespace calib {

/// Fraction of positives with max_j(s_j - theta_j) > 0.
double recall_at_thresholds(const Problem& test, const ThresholdConfig& config);

struct OperatingPoint {
  std::size_t fp = 0;
  double tau = 0.0;
  double recall = 0.0;
};

/// False positives needed to reach `target_recall`. For continuous models a
/// sample is accepted when its ensemble score is >= tau, with tau the
/// highest value reaching the target (tied samples all accepted). For a
/// joint-thresholds model the operating point is fixed at "score > 0" and the
/// target is ignored; the resulting recall is reported.
OperatingPoint fp_at_recall(const Problem& test, const CalibrationModel& model,
                            double target_recall);

/// All-point average precision. Tied scores rank negatives first.
double average_precision(const Problem& test, const CalibrationModel& model);

struct CurvePoint {
  std::size_t rank = 0;  // 1-based
  double score = 0.0;
  int label = 0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Ranked list with running precision/recall, in average_precision() order.
std::vector<CurvePoint> precision_recall_curve(const Problem& test, const CalibrationModel& model);

struct CompareOptions {
  SearchOptions search;  // used for the joint thresholds
  double margin_cutoff = kDefaultMarginCutoff;
  std::size_t affine_samples = kDefaultAffineSamples;
  std::uint64_t seed = 0;
};

struct MethodReport {
  CalibrationMethod method;
  double recall = 0.0;
  std::size_t fp = 0;
  double tau = 0.0;
  double ap = 0.0;
  std::vector<CurvePoint> curve;
};

struct ComparisonReport {
  double target_recall = 0.0;  // test recall of the joint thresholds
  Solution joint_solution;
  std::vector<MethodReport> rows;
};

/// Fits every method on `train` and scores it on `test`. All methods are
/// compared at the recall the joint thresholds reach on `test`.
ComparisonReport compare_methods(const Problem& train, const Problem& test,
                                 const std::vector<CalibrationMethod>& methods,
                                 const CompareOptions& options = {});

/// `rank,score,label,precision,recall` rows after a header line.
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

}  // namespace calib

#endif  // CALIB_EVALUATION_HPP
