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

#ifndef CALIB_SEARCH_HPP
#define CALIB_SEARCH_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "calib/problem.hpp"
#include "calib/thresholds.hpp"

namespace calib {

enum class SearchMode { kExact, kAnytime };

struct SearchBudget {
  std::optional<double> wall_ms;
  std::optional<std::uint64_t> max_nodes;

  bool unlimited() const { return !wall_ms && !max_nodes; }
};

struct SearchOptions {
  bool prune_bound = true;        // discard children whose loss >= incumbent
  bool prune_equivalence = true;  // one child per distinct false-positive set
  bool depth_reduction = true;    // drop positives the root already covers
  bool difficulty_order = true;   // hardest positives first; else seeded shuffle
  std::uint64_t order_seed = 0;
  SearchMode mode = SearchMode::kExact;
  SearchBudget budget;
  /// Called on every incumbent improvement.
  std::function<void(const IncumbentRecord&)> on_incumbent;
};

/// The implicit search tree: one level per positive that still needs
/// covering, one edge per classifier.
struct SearchTreeSpec {
  std::vector<std::size_t> levels;
  std::vector<std::size_t> root_covered;
  ThresholdConfig root;
  std::size_t branching = 0;
};

struct DepthReduction {
  std::vector<std::size_t> remaining;
  std::vector<std::size_t> removed;
  ThresholdConfig root;
};

/// Splits positives into those the all-tightest configuration already covers
/// and the rest.
DepthReduction reduce_depth(const Problem& problem, const CandidateThresholdSet& candidates);

SearchTreeSpec build_search_tree(const Problem& problem, const CandidateThresholdSet& candidates,
                                 const SearchOptions& options);

/// Depth-first branch-and-bound. Returns a global optimum with
/// optimal = true unless a budget in `options` fires first.
Solution solve_exact(const Problem& problem, const SearchOptions& options = {});

/// Same traversal as solve_exact(), stopping when the budget fires and
/// returning the best incumbent. If no leaf has been reached by then, the
/// all-lowest configuration is returned with fallback = true.
Solution solve_anytime(const Problem& problem, SearchOptions options);

/// Classifiers that cover no positive in `solution` and can be disabled
/// without changing loss or feasibility. Checked jointly, in index order.
std::vector<std::size_t> redundant_classifiers(const Solution& solution, const Problem& problem);

/// Copy of `config` with the listed classifiers pushed above all their scores.
ThresholdConfig remove_classifiers(const Problem& problem, const ThresholdConfig& config,
                                   const std::vector<std::size_t>& classifiers);

}  // namespace calib

#endif  // CALIB_SEARCH_HPP
