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

#ifndef CALIB_CALIBRATORS_HPP
#define CALIB_CALIBRATORS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "calib/problem.hpp"

namespace calib {

enum class CalibrationMethod {
  kIndependentSigmoid,
  kJointSigmoid,
  kIsotonic,
  kAffine,
  kJointThresholds,
};

const char* to_string(CalibrationMethod method);
/// Accepts the canonical names plus "indep-sigmoid".
CalibrationMethod calibration_method_from_string(const std::string& name);

/// p(s) = 1 / (1 + exp(a * s + b)). `degenerate` marks a constant model
/// (a = 0) fitted without any positive sample.
struct SigmoidMap {
  double a = 0.0;
  double b = 0.0;
  bool degenerate = false;
  friend bool operator==(const SigmoidMap&, const SigmoidMap&) = default;
};

/// Right-continuous non-decreasing step function. `values[k]` applies on
/// [breakpoints[k], breakpoints[k+1]); below the first breakpoint the first
/// value applies.
struct IsotonicMap {
  std::vector<double> breakpoints;
  std::vector<double> values;
  friend bool operator==(const IsotonicMap&, const IsotonicMap&) = default;
};

/// scale * s + offset, scale > 0.
struct AffineMap {
  double scale = 1.0;
  double offset = 0.0;
  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// s - threshold.
struct ThresholdMap {
  double threshold = 0.0;
  friend bool operator==(const ThresholdMap&, const ThresholdMap&) = default;
};

using ClassifierMap = std::variant<SigmoidMap, IsotonicMap, AffineMap, ThresholdMap>;

struct CalibrationModel {
  CalibrationMethod method = CalibrationMethod::kJointThresholds;
  std::vector<ClassifierMap> classifiers;
  /// Classifiers whose sigmoid had no positive to fit.
  std::vector<std::size_t> degenerate;
  /// Joint sigmoid only: classifiers covering no positive, safe to drop.
  std::vector<std::size_t> redundant;

  std::size_t num_classifiers() const { return classifiers.size(); }
  friend bool operator==(const CalibrationModel&, const CalibrationModel&) = default;
};

inline constexpr double kDefaultMarginCutoff = -1.0;
inline constexpr std::size_t kDefaultAffineSamples = 200'000;

// --- Platt scaling ---------------------------------------------------------

/// Fits (a, b) by Newton's method with backtracking on the cross-entropy
/// against the smoothed targets (n+ + 1)/(n+ + 2) and 1/(n- + 2).
SigmoidMap fit_sigmoid(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Log-likelihood of the smoothed targets under (a, b).
double sigmoid_log_likelihood(const SigmoidMap& map, std::span<const double> scores,
                              std::span<const std::uint8_t> labels);

/// Per classifier, fits a sigmoid on every sample scoring above `cutoff`.
CalibrationModel fit_independent_sigmoid(const Problem& problem,
                                         double cutoff = kDefaultMarginCutoff);

/// Positives each classifier scores above its threshold in `config`.
std::vector<std::vector<std::size_t>> assignment_sets(const Problem& problem,
                                                      const ThresholdConfig& config);

/// Per classifier, fits a sigmoid on its assigned positives and all negatives.
CalibrationModel fit_joint_sigmoid(const Problem& problem, const Solution& solution);

// --- Isotonic regression ---------------------------------------------------

/// Pool-adjacent-violators: the weighted least-squares non-decreasing fit of
/// `values` taken in order. Empty `weights` means unit weights.
std::vector<double> pava(std::span<const double> values, std::span<const double> weights = {});

CalibrationModel fit_isotonic(const Problem& problem);

// --- Affine ------------------------------------------------------------------

/// Standardizes each classifier's scores on up to `sample_count` negatives
/// drawn with `seed`: (s - mean) / stddev.
CalibrationModel fit_affine(const Problem& problem,
                            std::size_t sample_count = kDefaultAffineSamples,
                            std::uint64_t seed = 0);

CalibrationModel thresholds_model(const ThresholdConfig& config);

// --- Scoring -------------------------------------------------------------------

double calibrated_score(const CalibrationModel& model, std::size_t classifier, double score);
/// max over classifiers of the calibrated scores of one sample.
double ensemble_calibrated_score(const CalibrationModel& model, std::span<const double> scores);

}  // namespace calib

#endif  // CALIB_CALIBRATORS_HPP
