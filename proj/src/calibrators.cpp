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

#include "calib/calibrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "calib/error.hpp"
#include "calib/rng.hpp"

namespace calib {
namespace {

constexpr int kMaxNewtonIterations = 100;
constexpr double kGradientTolerance = 1e-10;
constexpr double kMinStep = 1e-10;
constexpr double kHessianRidge = 1e-12;

struct Targets {
  double hi;
  double lo;
};

Targets smoothed_targets(std::span<const std::uint8_t> labels) {
  const double num_pos = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double num_neg = static_cast<double>(labels.size()) - num_pos;
  return {(num_pos + 1.0) / (num_pos + 2.0), 1.0 / (num_neg + 2.0)};
}

// Cross-entropy of target t against p = 1/(1+exp(z)), written to avoid
// overflow for either sign of z.
double cross_entropy(double z, double t) {
  return z >= 0 ? t * z + std::log1p(std::exp(-z)) : (t - 1.0) * z + std::log1p(std::exp(z));
}

double objective(double a, double b, std::span<const double> scores,
                 std::span<const std::uint8_t> labels, const Targets& targets) {
  double f = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    f += cross_entropy(a * scores[i] + b, labels[i] ? targets.hi : targets.lo);
  }
  return f;
}

SigmoidMap degenerate_sigmoid(std::size_t num_negatives) {
  // Constant 1/(n- + 2).
  return {0.0, std::log(static_cast<double>(num_negatives) + 1.0), true};
}

void check_classifier(const CalibrationModel& model, std::size_t j) {
  if (j >= model.classifiers.size()) {
    throw UnknownClassifier("classifier " + std::to_string(j) + " not in model of " +
                            std::to_string(model.classifiers.size()));
  }
}

double apply(const ClassifierMap& map, double s) {
  struct Visitor {
    double s;
    double operator()(const SigmoidMap& m) const { return 1.0 / (1.0 + std::exp(m.a * s + m.b)); }
    double operator()(const IsotonicMap& m) const {
      const auto it = std::upper_bound(m.breakpoints.begin(), m.breakpoints.end(), s);
      if (it == m.breakpoints.begin()) return m.values.front();
      return m.values[static_cast<std::size_t>(it - m.breakpoints.begin()) - 1];
    }
    double operator()(const AffineMap& m) const { return m.scale * s + m.offset; }
    double operator()(const ThresholdMap& m) const { return s - m.threshold; }
  };
  return std::visit(Visitor{s}, map);
}

}  // namespace

const char* to_string(CalibrationMethod method) {
  switch (method) {
    case CalibrationMethod::kIndependentSigmoid: return "independent-sigmoid";
    case CalibrationMethod::kJointSigmoid: return "joint-sigmoid";
    case CalibrationMethod::kIsotonic: return "isotonic";
    case CalibrationMethod::kAffine: return "affine";
    case CalibrationMethod::kJointThresholds: return "joint-thresholds";
  }
  return "unknown";
}

CalibrationMethod calibration_method_from_string(const std::string& name) {
  if (name == "independent-sigmoid" || name == "indep-sigmoid") {
    return CalibrationMethod::kIndependentSigmoid;
  }
  if (name == "joint-sigmoid") return CalibrationMethod::kJointSigmoid;
  if (name == "isotonic") return CalibrationMethod::kIsotonic;
  if (name == "affine") return CalibrationMethod::kAffine;
  if (name == "joint-thresholds") return CalibrationMethod::kJointThresholds;
  throw InvalidArgument("unknown calibration method '" + name + "'");
}

double sigmoid_log_likelihood(const SigmoidMap& map, std::span<const double> scores,
                              std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw DimensionMismatch("scores and labels differ in size");
  return -objective(map.a, map.b, scores, labels, smoothed_targets(labels));
}

SigmoidMap fit_sigmoid(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw DimensionMismatch("scores and labels differ in size");
  const std::size_t num_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t num_neg = labels.size() - num_pos;
  if (num_pos == 0) return degenerate_sigmoid(num_neg);

  const Targets targets = smoothed_targets(labels);
  double a = 0.0;
  double b = std::log((num_neg + 1.0) / (num_pos + 1.0));
  double f = objective(a, b, scores, labels, targets);

  for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
    double h11 = kHessianRidge, h22 = kHessianRidge, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double s = scores[i];
      const double z = a * s + b;
      double p, q;  // p = 1/(1+e^z), q = 1 - p
      if (z >= 0) {
        const double e = std::exp(-z);
        p = e / (1.0 + e);
        q = 1.0 / (1.0 + e);
      } else {
        const double e = std::exp(z);
        p = 1.0 / (1.0 + e);
        q = e / (1.0 + e);
      }
      const double d2 = p * q;
      h11 += s * s * d2;
      h22 += d2;
      h21 += s * d2;
      const double d1 = (labels[i] ? targets.hi : targets.lo) - p;
      g1 += s * d1;
      g2 += d1;
    }
    if (std::abs(g1) < kGradientTolerance && std::abs(g2) < kGradientTolerance) break;

    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;

    double step = 1.0;
    while (step >= kMinStep) {
      const double na = a + step * da;
      const double nb = b + step * db;
      const double nf = objective(na, nb, scores, labels, targets);
      if (nf < f + 1e-4 * step * gd) {
        a = na;
        b = nb;
        f = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < kMinStep) break;  // no further descent at working precision
  }
  return {a, b, false};
}

CalibrationModel fit_independent_sigmoid(const Problem& problem, double cutoff) {
  CalibrationModel model;
  model.method = CalibrationMethod::kIndependentSigmoid;
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  for (std::size_t j = 0; j < problem.num_classifiers(); ++j) {
    scores.clear();
    labels.clear();
    for (double s : problem.positive_row(j)) {
      if (s > cutoff) {
        scores.push_back(s);
        labels.push_back(1);
      }
    }
    for (double s : problem.negative_row(j)) {
      if (s > cutoff) {
        scores.push_back(s);
        labels.push_back(0);
      }
    }
    SigmoidMap map = fit_sigmoid(scores, labels);
    if (map.degenerate) model.degenerate.push_back(j);
    model.classifiers.emplace_back(map);
  }
  return model;
}

std::vector<std::vector<std::size_t>> assignment_sets(const Problem& problem,
                                                      const ThresholdConfig& config) {
  if (config.size() != problem.num_classifiers()) {
    throw DimensionMismatch("config does not match problem");
  }
  std::vector<std::vector<std::size_t>> sets(problem.num_classifiers());
  for (std::size_t j = 0; j < sets.size(); ++j) {
    for (std::size_t i = 0; i < problem.num_positives(); ++i) {
      if (problem.positive(j, i) > config[j]) sets[j].push_back(i);
    }
  }
  return sets;
}

CalibrationModel fit_joint_sigmoid(const Problem& problem, const Solution& solution) {
  if (!check_feasible(problem, solution.config)) {
    throw InfeasibleSolution("joint sigmoid needs a feasible threshold configuration");
  }
  const auto sets = assignment_sets(problem, solution.config);
  CalibrationModel model;
  model.method = CalibrationMethod::kJointSigmoid;
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  for (std::size_t j = 0; j < problem.num_classifiers(); ++j) {
    scores.clear();
    labels.clear();
    for (std::size_t i : sets[j]) {
      scores.push_back(problem.positive(j, i));
      labels.push_back(1);
    }
    for (double s : problem.negative_row(j)) {
      scores.push_back(s);
      labels.push_back(0);
    }
    SigmoidMap map = fit_sigmoid(scores, labels);
    if (map.degenerate) {
      model.degenerate.push_back(j);
      model.redundant.push_back(j);
    }
    model.classifiers.emplace_back(map);
  }
  return model;
}

std::vector<double> pava(std::span<const double> values, std::span<const double> weights) {
  if (!weights.empty() && weights.size() != values.size()) {
    throw DimensionMismatch("values and weights differ in size");
  }
  struct Block {
    double sum;     // weighted sum
    double weight;
    std::size_t count;
    double mean() const { return sum / weight; }
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    blocks.push_back({values[i] * w, w, 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      const Block last = blocks.back();
      blocks.pop_back();
      blocks.back().sum += last.sum;
      blocks.back().weight += last.weight;
      blocks.back().count += last.count;
    }
  }
  std::vector<double> fitted;
  fitted.reserve(values.size());
  for (const Block& b : blocks) fitted.insert(fitted.end(), b.count, b.mean());
  return fitted;
}

CalibrationModel fit_isotonic(const Problem& problem) {
  CalibrationModel model;
  model.method = CalibrationMethod::kIsotonic;
  for (std::size_t j = 0; j < problem.num_classifiers(); ++j) {
    std::vector<std::pair<double, double>> samples;  // (score, label)
    for (double s : problem.positive_row(j)) samples.emplace_back(s, 1.0);
    for (double s : problem.negative_row(j)) samples.emplace_back(s, 0.0);
    std::sort(samples.begin(), samples.end());

    // Tied scores must share one fitted value, so pool them up front.
    std::vector<double> xs, ys, ws;
    for (const auto& [s, label] : samples) {
      if (xs.empty() || xs.back() != s) {
        xs.push_back(s);
        ys.push_back(0.0);
        ws.push_back(0.0);
      }
      ys.back() += label;
      ws.back() += 1.0;
    }
    for (std::size_t k = 0; k < ys.size(); ++k) ys[k] /= ws[k];
    const std::vector<double> fitted = pava(ys, ws);

    IsotonicMap map;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (map.values.empty() || fitted[k] != map.values.back()) {
        map.breakpoints.push_back(xs[k]);
        map.values.push_back(std::clamp(fitted[k], 0.0, 1.0));
      }
    }
    model.classifiers.emplace_back(std::move(map));
  }
  return model;
}

CalibrationModel fit_affine(const Problem& problem, std::size_t sample_count, std::uint64_t seed) {
  const std::size_t num_neg = problem.num_negatives();
  std::vector<std::size_t> picked(num_neg);
  std::iota(picked.begin(), picked.end(), std::size_t{0});
  if (sample_count < num_neg) {
    // Partial Fisher-Yates; the same windows are used for every classifier.
    CounterRng rng = CounterRng::stream(seed, 0x616666696e65ULL);
    for (std::size_t k = 0; k < sample_count; ++k) {
      std::swap(picked[k], picked[k + rng.index(num_neg - k)]);
    }
    picked.resize(sample_count);
  }

  CalibrationModel model;
  model.method = CalibrationMethod::kAffine;
  for (std::size_t j = 0; j < problem.num_classifiers(); ++j) {
    double mean = 0.0;
    for (std::size_t n : picked) mean += problem.negative(j, n);
    mean /= static_cast<double>(picked.size());
    double var = 0.0;
    for (std::size_t n : picked) {
      const double d = problem.negative(j, n) - mean;
      var += d * d;
    }
    var /= static_cast<double>(picked.size());
    if (picked.empty() || !(var > 0.0)) {
      throw DegenerateVariance("classifier " + std::to_string(j) +
                               ": sampled negative scores have zero variance");
    }
    const double sd = std::sqrt(var);
    model.classifiers.emplace_back(AffineMap{1.0 / sd, -mean / sd});
  }
  return model;
}

CalibrationModel thresholds_model(const ThresholdConfig& config) {
  CalibrationModel model;
  model.method = CalibrationMethod::kJointThresholds;
  for (double t : config.thresholds) model.classifiers.emplace_back(ThresholdMap{t});
  return model;
}

double calibrated_score(const CalibrationModel& model, std::size_t classifier, double score) {
  check_classifier(model, classifier);
  return apply(model.classifiers[classifier], score);
}

double ensemble_calibrated_score(const CalibrationModel& model, std::span<const double> scores) {
  if (scores.size() != model.classifiers.size()) {
    throw DimensionMismatch("sample has " + std::to_string(scores.size()) +
                            " scores, model has " + std::to_string(model.classifiers.size()));
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < scores.size(); ++j) {
    best = std::max(best, apply(model.classifiers[j], scores[j]));
  }
  return best;
}

}  // namespace calib
