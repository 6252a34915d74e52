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

#include <bit>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

#include <doctest.h>

#include "calib/error.hpp"
#include "calib/io.hpp"
#include "calib/search.hpp"
#include "test_support.hpp"

using namespace calib;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("calib_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

// Random doubles over many magnitudes, including subnormals and values that
// need all 17 significant digits.
double awkward_double(CounterRng& rng) {
  switch (rng.index(6)) {
    case 0: return std::bit_cast<double>((rng.next() & 0x7FEFFFFFFFFFFFFFULL)) * (rng.index(2) ? 1 : -1);
    case 1: return std::numeric_limits<double>::denorm_min() * static_cast<double>(rng.index(1000) + 1);
    case 2: return 0.1 * static_cast<double>(rng.index(100));
    case 3: return -0.0;
    default: return rng.normal() * std::pow(10.0, static_cast<double>(rng.index(40)) - 20.0);
  }
}

Problem awkward_problem(std::uint64_t seed) {
  CounterRng rng = CounterRng::stream(seed, 0x696f);
  const std::size_t e = 1 + rng.index(4);
  const std::size_t p = 1 + rng.index(5);
  const std::size_t n = rng.index(6);
  ProblemData d;
  d.positive_scores.assign(e, std::vector<double>(p));
  d.negative_scores.assign(e, std::vector<double>(n));
  for (auto& row : d.positive_scores) {
    for (double& v : row) v = awkward_double(rng);
  }
  for (auto& row : d.negative_scores) {
    for (double& v : row) v = awkward_double(rng);
  }
  if (rng.index(2)) {
    for (std::size_t i = 0; i < p; ++i) d.positive_ids.push_back("p\"" + std::to_string(i) + "\\é");
  }
  if (rng.index(2)) d.metadata["class"] = "n0" + std::to_string(seed);
  return Problem(std::move(d));
}

bool bit_identical(const ScoreMatrix& a, const ScoreMatrix& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r].size() != b[r].size()) return false;
    for (std::size_t c = 0; c < a[r].size(); ++c) {
      if (std::bit_cast<std::uint64_t>(a[r][c]) != std::bit_cast<std::uint64_t>(b[r][c])) return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("property: problem round-trip is bit-exact") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Problem p = awkward_problem(seed);
    const Problem q = problem_from_json(problem_to_json(p));
    CHECK(q == p);
    CHECK(bit_identical(q.data().positive_scores, p.data().positive_scores));
    CHECK(bit_identical(q.data().negative_scores, p.data().negative_scores));
  }
}

TEST_CASE("problem files") {
  TempDir dir;
  const Problem p = calib::testing::toy_b();
  save_problem(p, dir.path / "toy.json");
  const Problem q = load_problem(dir.path / "toy.json");
  CHECK(q == p);
  CHECK(q.num_classifiers() == 2);
  CHECK(q.num_positives() == 2);
  CHECK(q.num_negatives() == 3);
  CHECK_THROWS_AS(load_problem(dir.path / "missing.json"), IoError);
  CHECK_THROWS_AS(save_problem(p, dir.path / "no" / "such" / "dir.json"), IoError);
}

TEST_CASE("malformed problem documents") {
  SUBCASE("not JSON") { CHECK_THROWS_AS(problem_from_json("{oops"), ParseError); }
  SUBCASE("missing field") {
    CHECK_THROWS_AS(problem_from_json(R"({"version":1,"num_classifiers":1})"), ParseError);
  }
  SUBCASE("wrong version") {
    CHECK_THROWS_AS(problem_from_json(R"({"version":2,"num_classifiers":1,"positive_scores":[[1]],"negative_scores":[[0]]})"),
                    ParseError);
  }
  SUBCASE("NaN names its cell") {
    CHECK_THROWS_WITH_AS(
        problem_from_json(R"({"version":1,"num_classifiers":2,"positive_scores":[[1],[2]],"negative_scores":[[0,0],[0,NaN]]})"),
        doctest::Contains("(row 1, col 1)"), ValidationError);
  }
  SUBCASE("infinity") {
    CHECK_THROWS_AS(
        problem_from_json(R"({"version":1,"num_classifiers":1,"positive_scores":[[-Infinity]],"negative_scores":[[0]]})"),
        ValidationError);
  }
  SUBCASE("no positives") {
    CHECK_THROWS_WITH_AS(
        problem_from_json(R"({"version":1,"num_classifiers":1,"positive_scores":[[]],"negative_scores":[[0]]})"),
        doctest::Contains("no positives"), ValidationError);
  }
  SUBCASE("ragged") {
    CHECK_THROWS_AS(
        problem_from_json(R"({"version":1,"num_classifiers":2,"positive_scores":[[1],[2,3]],"negative_scores":[[0],[0]]})"),
        ValidationError);
  }
  SUBCASE("row count disagrees with num_classifiers") {
    CHECK_THROWS_AS(
        problem_from_json(R"({"version":1,"num_classifiers":3,"positive_scores":[[1],[2]],"negative_scores":[[0],[0]]})"),
        ValidationError);
  }
  SUBCASE("duplicate ids") {
    CHECK_THROWS_AS(
        problem_from_json(R"({"version":1,"num_classifiers":1,"positive_scores":[[1,2]],"negative_scores":[[0]],"positive_ids":["a","a"]})"),
        ValidationError);
  }
  SUBCASE("the string \"NaN\" inside an id is left alone") {
    const Problem p = problem_from_json(
        R"({"version":1,"num_classifiers":1,"positive_scores":[[1]],"negative_scores":[[0]],"positive_ids":["NaN"]})");
    CHECK(p.positive_ids() == std::vector<std::string>{"NaN"});
  }
}

TEST_CASE("solution round-trip") {
  const Problem p = calib::testing::random_problem(5, {.min_e = 3, .max_e = 3, .min_p = 5, .max_p = 5, .min_n = 20, .max_n = 20});
  Solution s = solve_exact(p);
  s.assignment[0] = kRootCovered;
  const std::string text = solution_to_json(s);
  CHECK(text.find("\"root-covered\"") != std::string::npos);
  CHECK(text.find("\"optimal\": true") != std::string::npos);
  CHECK(solution_from_json(text) == s);

  TempDir dir;
  save_solution(s, dir.path / "sol.json");
  CHECK(load_solution(dir.path / "sol.json") == s);
}

TEST_CASE("model round-trip for every map kind") {
  const Problem p = calib::testing::random_problem(8, {.min_n = 5});
  for (const CalibrationModel& m :
       {fit_independent_sigmoid(p), fit_isotonic(p), fit_affine(p),
        thresholds_model(solve_exact(p).config), fit_joint_sigmoid(p, solve_exact(p))}) {
    CHECK(model_from_json(model_to_json(m)) == m);
  }
  CHECK_THROWS_AS(model_from_json(R"({"version":1,"method":"magic","num_classifiers":0,"classifiers":[]})"),
                  calib::Error);
}

TEST_CASE("report document") {
  ComparisonReport r;
  r.target_recall = 0.75;
  r.joint_solution.loss = 4;
  r.rows.push_back({CalibrationMethod::kJointThresholds, 0.75, 3, 0.0, 0.5, {}});
  const std::string text = report_to_json(r);
  CHECK(text.find("\"joint-thresholds\"") != std::string::npos);
  CHECK(text.find("\"target_recall\": 0.75") != std::string::npos);
}

}  // TEST_SUITE
