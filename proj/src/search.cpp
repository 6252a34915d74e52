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

#include "calib/search.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <limits>

#include "calib/cover_state.hpp"
#include "calib/error.hpp"
#include "calib/rng.hpp"

namespace calib {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kBudgetCheckInterval = 1024;

struct Child {
  std::size_t classifier;
  std::size_t target;
  std::size_t fp_count;
  std::uint64_t fingerprint;
};

struct Frame {
  std::size_t level;
  std::vector<Child> children;
  std::size_t next = 0;
  bool applied = false;
};

class TreeSearch {
 public:
  TreeSearch(const Problem& problem, const SearchOptions& options)
      : problem_(problem),
        options_(options),
        candidates_(extract_candidates(problem)),
        tree_(build_search_tree(problem, candidates_, options)),
        state_(problem, candidates_) {
    const std::size_t num_levels = tree_.levels.size();
    cover_positions_.resize(num_levels);
    for (std::size_t l = 0; l < num_levels; ++l) {
      auto& row = cover_positions_[l];
      row.resize(problem.num_classifiers());
      for (std::size_t j = 0; j < row.size(); ++j) {
        row[j] = candidates_[j].cover_position(problem.positive(j, tree_.levels[l]));
      }
    }
  }

  Solution run() {
    start_ = Clock::now();
    stats_.positives_removed_by_root = tree_.root_covered.size();
    stats_.levels = tree_.levels.size();
    stats_.nodes_visited = 1;  // root

    enter(0);
    while (!stack_.empty()) {
      Frame& top = stack_.back();
      if (top.applied) {
        state_.undo_edge();
        top.applied = false;
      }
      if (out_of_budget()) {
        stopped_ = true;
        break;
      }
      if (top.next == top.children.size()) {
        stack_.pop_back();
        continue;
      }
      const Child& child = top.children[top.next];
      if (options_.prune_bound && best_loss_ && child.fp_count >= *best_loss_) {
        // Children are sorted by loss, so every remaining sibling is bounded.
        stats_.nodes_pruned_bound += top.children.size() - top.next;
        top.next = top.children.size();
        continue;
      }
      ++top.next;
      [[maybe_unused]] const std::size_t parent_fp = state_.fp_count();
      state_.apply_edge(child.classifier, child.target);
      assert(state_.fp_count() >= parent_fp);
      top.applied = true;
      ++stats_.nodes_visited;
      enter(top.level + 1);
    }
    return finish();
  }

 private:
  bool covered(std::size_t level) const {
    const auto& row = cover_positions_[level];
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (state_.position(j) >= row[j]) return true;
    }
    return false;
  }

  // Called for the node just reached whose next level to branch on is
  // `level`.
  void enter(std::size_t level) {
    if (options_.prune_equivalence) {
      // All edges at a covered level are dominated by the no-op edge.
      while (level < tree_.levels.size() && covered(level)) ++level;
    }
    if (level == tree_.levels.size()) {
      record_leaf();
      return;
    }

    Frame frame{level, {}};
    frame.children.reserve(problem_.num_classifiers());
    const auto& row = cover_positions_[level];
    for (std::size_t j = 0; j < row.size(); ++j) {
      const std::size_t target = std::max(state_.position(j), row[j]);
      state_.apply_edge(j, target);
      frame.children.push_back({j, target, state_.fp_count(), state_.fp_fingerprint()});
      state_.undo_edge();
    }
    std::stable_sort(frame.children.begin(), frame.children.end(),
                     [](const Child& a, const Child& b) { return a.fp_count < b.fp_count; });
    if (options_.prune_equivalence) dedupe(frame.children);
    stack_.push_back(std::move(frame));
  }

  std::vector<std::uint32_t> newly_covered(const Child& child) {
    const auto result = state_.apply_edge(child.classifier, child.target);
    std::vector<std::uint32_t> out(result.newly_covered.begin(), result.newly_covered.end());
    state_.undo_edge();
    std::sort(out.begin(), out.end());
    return out;
  }

  // Siblings share the parent's false-positive set, so two children have the
  // same set iff the negatives they newly cover are the same.
  void dedupe(std::vector<Child>& children) {
    std::vector<Child> kept;
    kept.reserve(children.size());
    for (const Child& c : children) {
      bool duplicate = false;
      for (const Child& k : kept) {
        if (k.fp_count == c.fp_count && k.fingerprint == c.fingerprint &&
            newly_covered(k) == newly_covered(c)) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) {
        ++stats_.nodes_pruned_equivalence;
      } else {
        kept.push_back(c);
      }
    }
    children = std::move(kept);
  }

  void record_leaf() {
    const std::size_t loss = state_.fp_count();
    if (best_loss_ && loss >= *best_loss_) return;
    best_loss_ = loss;
    best_positions_.assign(state_.positions().begin(), state_.positions().end());

    best_assignment_.assign(problem_.num_positives(), kRootCovered);
    std::vector<bool> branched(tree_.levels.size(), false);
    for (const Frame& f : stack_) {
      best_assignment_[tree_.levels[f.level]] =
          static_cast<int>(f.children[f.next - 1].classifier);
      branched[f.level] = true;
    }
    for (std::size_t l = 0; l < tree_.levels.size(); ++l) {
      if (branched[l]) continue;
      const auto& row = cover_positions_[l];
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (state_.position(j) >= row[j]) {
          best_assignment_[tree_.levels[l]] = static_cast<int>(j);
          break;
        }
      }
    }

    const IncumbentRecord record{elapsed_ms(), stats_.nodes_visited, loss};
    stats_.incumbent_history.push_back(record);
    if (options_.on_incumbent) options_.on_incumbent(record);
  }

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

  bool out_of_budget() {
    const SearchBudget& budget = options_.budget;
    // A node budget never interrupts the first descent.
    if (budget.max_nodes && best_loss_ && stats_.nodes_visited >= *budget.max_nodes) {
      return true;
    }
    if (budget.wall_ms && stats_.nodes_visited >= next_time_check_) {
      next_time_check_ = stats_.nodes_visited + kBudgetCheckInterval;
      if (elapsed_ms() >= *budget.wall_ms) return true;
    }
    return false;
  }

  Solution finish() {
    Solution sol;
    if (best_loss_) {
      sol.config = candidates_.config_at(best_positions_);
      sol.loss = *best_loss_;
      sol.assignment = best_assignment_;
      sol.optimal = !stopped_;
      sol.status = stopped_ ? SolveStatus::kBudgetExhausted : SolveStatus::kOptimal;
    } else {
      sol.config = candidates_.lowest();
      sol.loss = compute_loss(problem_, sol.config);
      sol.assignment.assign(problem_.num_positives(), 0);
      for (std::size_t i = 0; i < problem_.num_positives(); ++i) {
        for (std::size_t j = 0; j < problem_.num_classifiers(); ++j) {
          if (problem_.positive(j, i) > sol.config[j]) {
            sol.assignment[i] = static_cast<int>(j);
            break;
          }
        }
      }
      sol.optimal = false;
      sol.fallback = true;
      sol.status = SolveStatus::kFallback;
    }
    stats_.wall_time_ms = elapsed_ms();
    sol.stats = stats_;
    return sol;
  }

  const Problem& problem_;
  const SearchOptions& options_;
  CandidateThresholdSet candidates_;
  SearchTreeSpec tree_;
  CoverState state_;
  std::vector<std::vector<std::size_t>> cover_positions_;  // [level][classifier]
  std::vector<Frame> stack_;
  SearchStats stats_;
  Clock::time_point start_;
  std::uint64_t next_time_check_ = 0;
  bool stopped_ = false;
  std::optional<std::size_t> best_loss_;
  std::vector<std::size_t> best_positions_;
  std::vector<int> best_assignment_;
};

}  // namespace

DepthReduction reduce_depth(const Problem& problem, const CandidateThresholdSet& candidates) {
  DepthReduction out;
  out.root = candidates.tightest();
  for (std::size_t i = 0; i < problem.num_positives(); ++i) {
    bool covered = false;
    for (std::size_t j = 0; j < problem.num_classifiers() && !covered; ++j) {
      covered = problem.positive(j, i) > out.root[j];
    }
    (covered ? out.removed : out.remaining).push_back(i);
  }
  return out;
}

SearchTreeSpec build_search_tree(const Problem& problem, const CandidateThresholdSet& candidates,
                                 const SearchOptions& options) {
  SearchTreeSpec tree;
  tree.branching = problem.num_classifiers();
  tree.root = candidates.tightest();

  std::vector<bool> keep(problem.num_positives(), true);
  if (options.depth_reduction) {
    DepthReduction reduced = reduce_depth(problem, candidates);
    for (std::size_t i : reduced.removed) keep[i] = false;
    tree.root_covered = std::move(reduced.removed);
  }

  std::vector<std::size_t> order;
  if (options.difficulty_order) {
    order = difficulty_order(problem).order;
  } else {
    order.resize(problem.num_positives());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    CounterRng rng = CounterRng::stream(options.order_seed, 0x6f72646572ULL);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.index(i)]);
    }
  }
  for (std::size_t i : order) {
    if (keep[i]) tree.levels.push_back(i);
  }
  return tree;
}

Solution solve_exact(const Problem& problem, const SearchOptions& options) {
  SearchOptions exact = options;
  exact.mode = SearchMode::kExact;
  return TreeSearch(problem, exact).run();
}

Solution solve_anytime(const Problem& problem, SearchOptions options) {
  options.mode = SearchMode::kAnytime;
  return TreeSearch(problem, options).run();
}

ThresholdConfig remove_classifiers(const Problem& problem, const ThresholdConfig& config,
                                   const std::vector<std::size_t>& classifiers) {
  ThresholdConfig out = config;
  for (std::size_t j : classifiers) {
    if (j >= out.size()) throw IndexOutOfRange("classifier " + std::to_string(j));
    out[j] = disabled_threshold(problem, j);
  }
  return out;
}

std::vector<std::size_t> redundant_classifiers(const Solution& solution, const Problem& problem) {
  if (!check_feasible(problem, solution.config)) {
    throw InfeasibleSolution("solution does not cover every positive");
  }
  std::vector<bool> assigned(problem.num_classifiers(), false);
  for (int j : solution.assignment) {
    if (j >= 0 && static_cast<std::size_t>(j) < assigned.size()) assigned[j] = true;
  }

  std::vector<std::size_t> removed;
  ThresholdConfig config = solution.config;
  for (std::size_t j = 0; j < problem.num_classifiers(); ++j) {
    if (assigned[j]) continue;
    const auto neg = problem.negative_row(j);
    const bool scores_negative = std::any_of(neg.begin(), neg.end(),
                                             [&](double s) { return s > config[j]; });
    if (scores_negative) continue;
    ThresholdConfig trial = config;
    trial[j] = disabled_threshold(problem, j);
    if (!check_feasible(problem, trial)) continue;
    config = std::move(trial);
    removed.push_back(j);
  }
  return removed;
}

}  // namespace calib
