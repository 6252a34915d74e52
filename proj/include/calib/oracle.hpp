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

#ifndef CALIB_ORACLE_HPP
#define CALIB_ORACLE_HPP

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "calib/problem.hpp"

namespace calib {

// Brute-force reference solver. It shares only the candidate extraction and
// the plain loss/feasibility functions with the tree search.

struct OracleResult {
  std::uint64_t loss = 0;
  ThresholdConfig witness;  // lexicographically smallest optimal thresholds
  std::uint64_t grid_size = 0;
};

inline constexpr std::uint64_t kDefaultOracleCap = 10'000'000;

/// Enumerates every configuration of candidate thresholds. Throws TooLarge
/// when the grid holds more than `cap` configurations.
OracleResult oracle_solve(const Problem& problem, std::uint64_t cap = kDefaultOracleCap);

/// Size of the full search tree, (E^(P+1) - 1) / (E - 1), or P + 1 when E = 1.
boost::multiprecision::cpp_int oracle_node_count(std::uint64_t num_classifiers,
                                                 std::uint64_t num_positives);

}  // namespace calib

#endif  // CALIB_ORACLE_HPP
