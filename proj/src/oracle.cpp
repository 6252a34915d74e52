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

#include "calib/oracle.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "calib/error.hpp"
#include "calib/thresholds.hpp"

namespace calib {

OracleResult oracle_solve(const Problem& problem, std::uint64_t cap) {
  const CandidateThresholdSet candidates = extract_candidates(problem);
  const std::size_t num_classifiers = candidates.num_classifiers();

  std::uint64_t grid = 1;
  for (const auto& c : candidates.classifiers) {
    if (grid > cap / c.size()) {
      throw TooLarge("candidate grid exceeds cap of " + std::to_string(cap));
    }
    grid *= c.size();
  }

  if (!check_feasible(problem, candidates.lowest())) {
    throw Infeasible("all-lowest configuration does not cover every positive");
  }

  // Odometer over positions. The last classifier varies fastest.
  std::vector<std::size_t> positions(num_classifiers, 0);
  std::optional<std::uint64_t> best_loss;
  ThresholdConfig best;
  for (std::uint64_t k = 0; k < grid; ++k) {
    const ThresholdConfig config = candidates.config_at(positions);
    if (check_feasible(problem, config)) {
      const std::uint64_t loss = compute_loss(problem, config);
      if (!best_loss || loss < *best_loss ||
          (loss == *best_loss && std::lexicographical_compare(
                                     config.thresholds.begin(), config.thresholds.end(),
                                     best.thresholds.begin(), best.thresholds.end()))) {
        best_loss = loss;
        best = config;
      }
    }
    for (std::size_t j = num_classifiers; j-- > 0;) {
      if (++positions[j] < candidates[j].size()) break;
      positions[j] = 0;
    }
  }
  return {*best_loss, std::move(best), grid};
}

boost::multiprecision::cpp_int oracle_node_count(std::uint64_t num_classifiers,
                                                 std::uint64_t num_positives) {
  using boost::multiprecision::cpp_int;
  if (num_classifiers == 0) throw InvalidArgument("need at least one classifier");
  if (num_classifiers == 1) return cpp_int(num_positives) + 1;
  const cpp_int e(num_classifiers);
  return (boost::multiprecision::pow(e, static_cast<unsigned>(num_positives + 1)) - 1) / (e - 1);
}

}  // namespace calib
