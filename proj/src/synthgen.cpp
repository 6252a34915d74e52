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

#include "calib/synthgen.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "calib/error.hpp"
#include "calib/rng.hpp"

namespace calib {
namespace {

using Point = std::vector<double>;

enum Stream : std::uint64_t { kCenters = 1, kTrain = 2, kTest = 3 };

Point random_direction(CounterRng& rng, std::size_t dims) {
  Point p(dims);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : p) {
      v = rng.normal();
      norm += v * v;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& v : p) v /= norm;
  return p;
}

double dot(const Point& a, const Point& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void validate(const GeneratorSpec& spec) {
  if (spec.classifiers < 1) throw InvalidSpec("need at least one classifier");
  if (spec.positives < 1) throw InvalidSpec("need at least one positive");
  if (spec.dims < 1) throw InvalidSpec("need at least one dimension");
  if (!(spec.spread >= 0.0) || !(spec.noise >= 0.0)) {
    throw InvalidSpec("spread and noise must be non-negative");
  }
  if (!(spec.test_fraction >= 0.0 && spec.test_fraction < 1.0)) {
    throw InvalidSpec("test_fraction must lie in [0, 1)");
  }
  if (!(spec.hard_fraction >= 0.0 && spec.hard_fraction <= 1.0)) {
    throw InvalidSpec("hard fraction must lie in [0, 1]");
  }
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Problem sample_problem(const GeneratorSpec& spec, const std::vector<Point>& centers,
                       CounterRng rng, std::size_t num_pos, std::size_t num_neg,
                       const char* split) {
  const std::size_t num_centers = centers.size();
  const std::size_t dims = spec.dims;

  // Exactly round(hard_fraction * P) planted positives at random indices.
  const auto num_hard = static_cast<std::size_t>(std::llround(spec.hard_fraction * num_pos));
  std::vector<std::size_t> perm(num_pos);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t k = 0; k < num_hard; ++k) std::swap(perm[k], perm[k + rng.index(num_pos - k)]);
  std::vector<bool> hard(num_pos, false);
  for (std::size_t k = 0; k < num_hard; ++k) hard[perm[k]] = true;

  std::vector<Point> positives(num_pos);
  for (std::size_t i = 0; i < num_pos; ++i) {
    Point x;
    if (hard[i] && num_centers > 1) {
      const std::size_t a = rng.index(num_centers);
      std::size_t b = rng.index(num_centers - 1);
      if (b >= a) ++b;
      x.resize(dims);
      double norm = 0.0;
      for (std::size_t d = 0; d < dims; ++d) {
        x[d] = centers[a][d] + centers[b][d];
        norm += x[d] * x[d];
      }
      norm = std::sqrt(norm);
      if (norm > 0.0) {
        for (double& v : x) v /= norm;
      }
    } else {
      x = centers[rng.index(num_centers)];
    }
    if (spec.spread > 0.0) {
      for (double& v : x) v += spec.spread * rng.normal();
    }
    positives[i] = std::move(x);
  }
  std::vector<Point> negatives(num_neg);
  for (auto& n : negatives) n = random_direction(rng, dims);

  ProblemData data;
  data.positive_scores.assign(num_centers, std::vector<double>(num_pos));
  data.negative_scores.assign(num_centers, std::vector<double>(num_neg));
  for (std::size_t j = 0; j < num_centers; ++j) {
    for (std::size_t i = 0; i < num_pos; ++i) {
      const double eps = spec.noise > 0.0 ? spec.noise * rng.normal() : 0.0;
      data.positive_scores[j][i] = dot(centers[j], positives[i]) + eps;
    }
    for (std::size_t n = 0; n < num_neg; ++n) {
      const double eps = spec.noise > 0.0 ? spec.noise * rng.normal() : 0.0;
      data.negative_scores[j][n] = dot(centers[j], negatives[n]) + eps;
    }
  }
  data.metadata = {
      {"generator", "planted-cluster"},
      {"seed", std::to_string(spec.seed)},
      {"split", split},
      {"dims", std::to_string(spec.dims)},
      {"spread", format_double(spec.spread)},
      {"noise", format_double(spec.noise)},
      {"hard_fraction", format_double(spec.hard_fraction)},
  };
  return Problem(std::move(data));
}

}  // namespace

GeneratedPair generate(const GeneratorSpec& spec) {
  validate(spec);
  CounterRng center_rng = CounterRng::stream(spec.seed, kCenters);
  std::vector<Point> centers(spec.classifiers);
  for (auto& c : centers) c = random_direction(center_rng, spec.dims);

  GeneratedPair out{sample_problem(spec, centers, CounterRng::stream(spec.seed, kTrain),
                                   spec.positives, spec.negatives, "train"),
                    std::nullopt};
  if (spec.test_fraction > 0.0) {
    const double ratio = spec.test_fraction / (1.0 - spec.test_fraction);
    const auto test_pos = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(spec.positives))));
    const auto test_neg =
        static_cast<std::size_t>(std::llround(ratio * static_cast<double>(spec.negatives)));
    out.test = sample_problem(spec, centers, CounterRng::stream(spec.seed, kTest), test_pos,
                              test_neg, "test");
  }
  return out;
}

Problem plant_hardness(GeneratorSpec spec, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw InvalidSpec("fraction must lie in [0, 1]");
  spec.hard_fraction = fraction;
  spec.test_fraction = 0.0;
  return generate(spec).train;
}

}  // namespace calib
