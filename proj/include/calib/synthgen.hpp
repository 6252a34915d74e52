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

#ifndef CALIB_SYNTHGEN_HPP
#define CALIB_SYNTHGEN_HPP

#include <cstddef>
#include <cstdint>
#include <optional>

#include "calib/problem.hpp"

namespace calib {

/// Planted-cluster generator.
///
/// E exemplar centers are drawn uniformly on the unit sphere in `dims`
/// dimensions. A regular positive is a random center plus isotropic Gaussian
/// displacement of standard deviation `spread`; a planted ("hard") positive is
/// the normalized midpoint of two distinct random centers plus the same
/// displacement. Negatives are uniform on the unit sphere. Classifier j
/// scores x as dot(center_j, x) + N(0, noise^2).
///
/// `positives` and `negatives` are training-set sizes. The test set holds
/// `test_fraction` of the combined pool, drawn from the same centers with an
/// independent stream, so the training set does not depend on it.
struct GeneratorSpec {
  std::uint64_t seed = 1;
  std::size_t classifiers = 2;
  std::size_t positives = 2;
  std::size_t negatives = 3;
  std::size_t dims = 4;
  double spread = 0.1;
  double noise = 0.05;
  double test_fraction = 0.5;
  double hard_fraction = 0.0;
};

struct GeneratedPair {
  Problem train;
  std::optional<Problem> test;  // absent when test_fraction == 0
};

GeneratedPair generate(const GeneratorSpec& spec);

/// Training problem of `spec` with `fraction` of its positives planted
/// between clusters.
Problem plant_hardness(GeneratorSpec spec, double fraction);

}  // namespace calib

#endif  // CALIB_SYNTHGEN_HPP
