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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Reference values come from the
// independent routines in test_support.hpp, never from the library itself.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "calib/calibrators.hpp"
#include "calib/evaluation.hpp"
#include "calib/oracle.hpp"
#include "calib/search.hpp"
#include "calib/synthgen.hpp"
#include "calib/thresholds.hpp"
#include "test_support.hpp"

using namespace calib;
using calib::testing::RandomShape;
using calib::testing::random_problem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

template <class T>
T median(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

bool history_strictly_decreasing(const Solution& s) {
  const auto& h = s.stats.incumbent_history;
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (h[k].loss >= h[k - 1].loss) return false;
  }
  return true;
}

bool solution_consistent(const Problem& p, const Solution& s) {
  return check_feasible(p, s.config) && s.loss == compute_loss(p, s.config) &&
         calib::testing::reference_feasible(p, s.config.thresholds) &&
         s.loss == calib::testing::reference_loss(p, s.config.thresholds);
}

// Small random instance in the oracle range; every third uses a coarse score
// lattice so that ties are frequent.
Problem small_instance(std::uint64_t seed, std::size_t max_e, std::size_t max_p, std::size_t max_n) {
  RandomShape shape{.min_e = 2, .max_e = max_e, .min_p = 2, .max_p = max_p, .min_n = 5, .max_n = max_n};
  shape.lattice = seed % 3 == 0 ? 5 : 0;
  return random_problem(seed, shape);
}

Problem planted(std::uint64_t seed, std::size_t e, std::size_t p, std::size_t n, std::size_t dims,
                double hard) {
  GeneratorSpec spec;
  spec.seed = seed;
  spec.classifiers = e;
  spec.positives = p;
  spec.negatives = n;
  spec.dims = dims;
  spec.spread = 0.3;
  spec.noise = 0.1;
  spec.hard_fraction = hard;
  spec.test_fraction = 0.0;
  return generate(spec).train;
}

// --- criteria -------------------------------------------------------------------

Verdict oracle_equivalence() {
  const auto start = Clock::now();
  std::size_t agree = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Problem p = small_instance(seed, 5, 7, 40);
    if (solve_exact(p).loss == oracle_solve(p).loss) ++agree;
  }
  const double secs = seconds_since(start);
  return {agree == 200 && secs < 60.0, fmt("%zu/200 equal to oracle, %.2f s", agree, secs)};
}

Verdict pruning_ablation() {
  std::size_t same_loss = 0, fewer_nodes = 0;
  std::uint64_t nodes_on = 0, nodes_off = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Problem p = small_instance(1000 + seed, 4, 8, 60);
    const Solution base = solve_exact(p);
    std::vector<SearchOptions> variants(5);
    variants[0].prune_bound = false;
    variants[1].prune_equivalence = false;
    variants[2].depth_reduction = false;
    variants[3].difficulty_order = false;
    variants[3].order_seed = seed;
    variants[4] = variants[3];
    variants[4].prune_bound = variants[4].prune_equivalence = variants[4].depth_reduction = false;
    bool all_same = true;
    Solution all_off;
    for (const auto& o : variants) {
      const Solution s = solve_exact(p, o);
      all_same &= s.loss == base.loss && s.optimal;
      all_off = s;
    }
    same_loss += all_same ? 1 : 0;
    fewer_nodes += base.stats.nodes_visited <= all_off.stats.nodes_visited ? 1 : 0;
    nodes_on += base.stats.nodes_visited;
    nodes_off += all_off.stats.nodes_visited;
  }
  return {same_loss == 50 && fewer_nodes == 50,
          fmt("loss identical in %zu/50, nodes(on) <= nodes(off) in %zu/50, totals %llu vs %llu", same_loss,
              fewer_nodes, static_cast<unsigned long long>(nodes_on), static_cast<unsigned long long>(nodes_off))};
}

Verdict ordering_benefit() {
  std::vector<std::uint64_t> ordered, shuffled;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Problem p = planted(seed, 20, 30, 300, 8, 0.3);
    ordered.push_back(solve_exact(p).stats.nodes_visited);
    SearchOptions o;
    o.difficulty_order = false;
    o.order_seed = seed;
    shuffled.push_back(solve_exact(p, o).stats.nodes_visited);
  }
  const auto a = median(ordered), b = median(shuffled);
  return {a <= b, fmt("median nodes %llu (difficulty order) vs %llu (random order)",
                      static_cast<unsigned long long>(a), static_cast<unsigned long long>(b))};
}

Verdict scale_smoke() {
  const Problem p = planted(15, 15, 50, 500, 8, 0.3);
  const auto start = Clock::now();
  const Solution s = solve_exact(p);
  const double secs = seconds_since(start);
  using boost::multiprecision::cpp_int;
  const cpp_int full = oracle_node_count(15, 50);
  // nodes < 1e-40 * full  <=>  nodes * 1e40 < full
  const cpp_int scaled = cpp_int(s.stats.nodes_visited) * boost::multiprecision::pow(cpp_int(10), 40);
  const bool small = scaled < full;
  std::ostringstream full_text;
  full_text << std::scientific << full.convert_to<double>();
  return {s.optimal && secs < 120.0 && small,
          fmt("optimal=%d in %.3f s, %llu nodes vs full tree %s", s.optimal ? 1 : 0, secs,
              static_cast<unsigned long long>(s.stats.nodes_visited), full_text.str().c_str())};
}

Verdict anytime_contract() {
  std::size_t decreasing = 0, monotone = 0, runs = 0, cut = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Problem p = planted(100 + seed, 60, 200, 3000, 12, 0.5);
    std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
    bool ok = true;
    for (double ms : {10.0, 100.0, 1000.0}) {
      SearchOptions o;
      o.mode = SearchMode::kAnytime;
      o.budget.wall_ms = ms;
      const Solution s = solve_anytime(p, o);
      ++runs;
      cut += s.optimal ? 0 : 1;
      decreasing += history_strictly_decreasing(s) ? 1 : 0;
      ok &= s.loss <= prev && solution_consistent(p, s);
      prev = s.loss;
    }
    monotone += ok ? 1 : 0;
  }
  std::size_t reproduced = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Problem p = small_instance(2000 + seed, 5, 7, 40);
    SearchOptions o;
    o.mode = SearchMode::kAnytime;
    const Solution a = solve_anytime(p, o);
    const Solution e = solve_exact(p);
    reproduced += a.loss == e.loss && a.optimal && a.config == e.config ? 1 : 0;
  }
  return {decreasing == runs && monotone == 20 && reproduced == 20,
          fmt("strictly decreasing history %zu/%zu (budget fired in %zu), non-increasing over budgets %zu/20, "
              "unlimited == exact %zu/20",
              decreasing, runs, cut, monotone, reproduced)};
}

Verdict feasibility_fuzz() {
  std::size_t good = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    RandomShape shape{.min_e = 1, .max_e = 8, .min_p = 1, .max_p = 12, .min_n = 0, .max_n = 80};
    shape.lattice = seed % 4 == 0 ? 4 : 0;
    const Problem p = random_problem(30000 + seed, shape);
    SearchOptions o;
    o.mode = SearchMode::kAnytime;
    switch (seed % 4) {
      case 0: break;  // exact
      case 1: o.budget.max_nodes = 1 + seed % 7; break;
      case 2: o.budget.wall_ms = 0.0; break;  // fallback path
      case 3: o.budget.max_nodes = 50; break;
    }
    const Solution s = seed % 4 == 0 ? solve_exact(p) : solve_anytime(p, o);
    good += solution_consistent(p, s) ? 1 : 0;
  }
  return {good == 1000, fmt("%zu/1000 solutions feasible with matching loss", good)};
}

Verdict candidate_sufficiency() {
  std::size_t agree = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Problem p = small_instance(4000 + seed, 3, 5, 12);
    const auto dense = calib::testing::reference_min_loss(p, calib::testing::dense_threshold_sweep(p));
    agree += oracle_solve(p).loss == dense ? 1 : 0;
  }
  return {agree == 100, fmt("candidate grid optimum == dense sweep optimum in %zu/100", agree)};
}

Verdict calibrator_correctness() {
  // Isotonic: every label sequence and tie pattern up to length 8.
  std::size_t pava_cases = 0, pava_bad = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::uint32_t pattern = 0; pattern < (1u << (n - 1)); ++pattern) {
      std::vector<std::size_t> group(n, 0);
      for (std::size_t k = 1; k < n; ++k) group[k] = group[k - 1] + ((pattern >> (k - 1)) & 1u);
      for (std::uint32_t labels = 0; labels < (1u << n); ++labels) {
        std::vector<double> means(group.back() + 1, 0.0), weights(group.back() + 1, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
          means[group[k]] += (labels >> k) & 1u;
          weights[group[k]] += 1.0;
        }
        for (std::size_t g = 0; g < means.size(); ++g) means[g] /= weights[g];
        const auto expected = calib::testing::exhaustive_isotonic(means, weights);
        const auto got = pava(means, weights);
        bool ok = got.size() == expected.size();
        for (std::size_t g = 0; ok && g < got.size(); ++g) ok = std::abs(got[g] - expected[g]) <= 1e-12;
        pava_bad += ok ? 0 : 1;
        ++pava_cases;
      }
    }
  }

  // Sigmoid: fitted parameters beat a 101x101 grid.
  std::size_t platt_ok = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CounterRng rng = CounterRng::stream(seed, 0x6163636570);
    const std::size_t n_pos = 5 + rng.index(60);
    const std::size_t n_neg = 5 + rng.index(300);
    const double shift = 0.25 + 2.0 * rng.uniform();
    std::vector<double> s;
    std::vector<std::uint8_t> y;
    for (std::size_t i = 0; i < n_pos; ++i, y.push_back(1)) s.push_back(shift + rng.normal());
    for (std::size_t i = 0; i < n_neg; ++i, y.push_back(0)) s.push_back(-shift + rng.normal());
    const double ll = sigmoid_log_likelihood(fit_sigmoid(s, y), s, y);
    double grid_best = -std::numeric_limits<double>::infinity();
    for (int ia = 0; ia <= 100; ++ia) {
      for (int ib = 0; ib <= 100; ++ib) {
        grid_best = std::max(grid_best, sigmoid_log_likelihood({-20.0 + 0.2 * ia, -10.0 + 0.2 * ib, false}, s, y));
      }
    }
    platt_ok += ll >= grid_best ? 1 : 0;
  }

  // Affine: standardized negatives, population moments.
  std::size_t affine_ok = 0, affine_rows = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Problem p = random_problem(5000 + seed, {.min_e = 1, .max_e = 6, .min_p = 1, .max_p = 5, .min_n = 2, .max_n = 2000});
    const CalibrationModel m = fit_affine(p);
    for (std::size_t j = 0; j < p.num_classifiers(); ++j) {
      double mean = 0.0, var = 0.0;
      for (double v : p.negative_row(j)) mean += calibrated_score(m, j, v);
      mean /= static_cast<double>(p.num_negatives());
      for (double v : p.negative_row(j)) var += std::pow(calibrated_score(m, j, v) - mean, 2);
      var /= static_cast<double>(p.num_negatives());
      const double err = std::max(std::abs(mean), std::abs(var - 1.0));
      worst = std::max(worst, err);
      affine_ok += err <= 1e-9 ? 1 : 0;
      ++affine_rows;
    }
  }
  return {pava_bad == 0 && platt_ok == 20 && affine_ok == affine_rows,
          fmt("PAVA %zu/%zu exact, sigmoid beats grid %zu/20, affine %zu/%zu rows (max err %.1e)",
              pava_cases - pava_bad, pava_cases, platt_ok, affine_ok, affine_rows, worst)};
}

Verdict method_comparison() {
  std::size_t fewer_fp = 0, better_ap = 0;
  constexpr std::size_t kSeeds = 50;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    spec.classifiers = 100;
    spec.positives = 300;
    spec.negatives = 5000;
    spec.dims = 16;
    spec.spread = 0.3;
    spec.noise = 0.1;
    spec.hard_fraction = 0.3;
    spec.test_fraction = 0.5;
    const GeneratedPair pair = generate(spec);
    CompareOptions o;
    o.search.mode = SearchMode::kAnytime;
    o.search.budget.wall_ms = 5000.0;
    o.seed = seed;
    const ComparisonReport r =
        compare_methods(pair.train, *pair.test,
                        {CalibrationMethod::kJointThresholds, CalibrationMethod::kIndependentSigmoid,
                         CalibrationMethod::kJointSigmoid},
                        o);
    const auto row = [&](CalibrationMethod m) {
      return *std::find_if(r.rows.begin(), r.rows.end(), [&](const MethodReport& x) { return x.method == m; });
    };
    const MethodReport jt = row(CalibrationMethod::kJointThresholds);
    const MethodReport is = row(CalibrationMethod::kIndependentSigmoid);
    const MethodReport js = row(CalibrationMethod::kJointSigmoid);
    fewer_fp += jt.fp < is.fp ? 1 : 0;
    better_ap += js.ap >= is.ap ? 1 : 0;
    std::fprintf(stderr, "  seed %2llu: recall %.3f fp joint %zu indep %zu | ap joint-sigmoid %.4f indep %.4f\n",
                 static_cast<unsigned long long>(seed), r.target_recall, jt.fp, is.fp, js.ap, is.ap);
  }
  const bool pass = fewer_fp * 10 >= kSeeds * 9 && better_ap * 10 >= kSeeds * 8;
  return {pass, fmt("joint thresholds fewer FP in %zu/%zu seeds, joint sigmoid AP >= independent in %zu/%zu",
                    fewer_fp, kSeeds, better_ap, kSeeds)};
}

// A random feasible configuration: random candidate per classifier, then
// each uncovered positive is picked up by a random classifier.
ThresholdConfig random_feasible(const Problem& p, std::uint64_t seed) {
  CounterRng rng = CounterRng::stream(seed, 0x726564);
  const CandidateThresholdSet c = extract_candidates(p);
  ThresholdConfig cfg = c.tightest();
  for (std::size_t j = 0; j < p.num_classifiers(); ++j) {
    if (rng.index(3) == 0) cfg[j] = c[j].thresholds[rng.index(c[j].size())];
  }
  for (std::size_t i = 0; i < p.num_positives(); ++i) {
    bool hit = false;
    for (std::size_t j = 0; j < p.num_classifiers(); ++j) hit |= p.positive(j, i) > cfg[j];
    if (hit) continue;
    const std::size_t j = rng.index(p.num_classifiers());
    cfg[j] = tighten_to_cover(c[j], cfg[j], p.positive(j, i));
  }
  return cfg;
}

Verdict redundancy() {
  std::size_t identical = 0, removed = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Problem p = seed % 2 == 0 ? random_problem(6000 + seed, {.min_e = 2, .max_e = 12, .min_p = 1, .max_p = 10, .min_n = 0, .max_n = 60})
                                    : planted(6000 + seed, 12, 10, 60, 6, 0.3);
    Solution s;
    switch (seed % 3) {
      case 0: s = solve_exact(p); break;
      case 1: {
        SearchOptions o;
        o.mode = SearchMode::kAnytime;
        o.budget.max_nodes = 3;
        s = solve_anytime(p, o);
        break;
      }
      default: s.config = random_feasible(p, seed); break;
    }
    const auto red = redundant_classifiers(s, p);
    const ThresholdConfig pruned = remove_classifiers(p, s.config, red);
    const double r0 = recall_at_thresholds(p, s.config);
    const double r1 = recall_at_thresholds(p, pruned);
    const bool same = compute_loss(p, pruned) == compute_loss(p, s.config) &&
                      std::bit_cast<std::uint64_t>(r0) == std::bit_cast<std::uint64_t>(r1) && r1 == 1.0;
    identical += same ? 1 : 0;
    removed += red.size();
    total += p.num_classifiers();
  }
  return {identical == 200, fmt("loss and training recall identical in %zu/200; %.1f%% of classifiers redundant",
                                identical, 100.0 * static_cast<double>(removed) / static_cast<double>(total))};
}

}  // namespace

// With arguments, only the listed criterion numbers run.
int main(int argc, char** argv) {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"pruning soundness ablation", pruning_ablation},
      {"difficulty ordering benefit", ordering_benefit},
      {"scale smoke test", scale_smoke},
      {"anytime contract", anytime_contract},
      {"feasibility fuzz", feasibility_fuzz},
      {"candidate-space sufficiency", candidate_sufficiency},
      {"calibrator correctness", calibrator_correctness},
      {"method-comparison direction", method_comparison},
      {"redundancy removal", redundancy},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (argc > 1 && std::none_of(argv + 1, argv + argc, [&](const char* a) { return std::atoi(a) == int(k + 1); })) {
      continue;
    }
    const auto start = Clock::now();
    Verdict v;
    try {
      v = criteria[k].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::printf("%s [%zu] %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].name, v.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
