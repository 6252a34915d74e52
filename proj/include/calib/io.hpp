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

#ifndef CALIB_IO_HPP
#define CALIB_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "calib/calibrators.hpp"
#include "calib/evaluation.hpp"
#include "calib/problem.hpp"

namespace calib {

// JSON documents. Field names are listed in README.md. Doubles
// are written in shortest round-trip form, so load(save(x)) == x.

inline constexpr int kFormatVersion = 1;

std::string problem_to_json(const Problem& problem);
/// Throws ParseError for malformed JSON or missing fields, ValidationError
/// for well-formed documents that violate a Problem invariant.
Problem problem_from_json(std::string_view text);
Problem load_problem(const std::filesystem::path& path);
void save_problem(const Problem& problem, const std::filesystem::path& path);

std::string solution_to_json(const Solution& solution);
Solution solution_from_json(std::string_view text);
Solution load_solution(const std::filesystem::path& path);
void save_solution(const Solution& solution, const std::filesystem::path& path);

std::string model_to_json(const CalibrationModel& model);
CalibrationModel model_from_json(std::string_view text);
CalibrationModel load_model(const std::filesystem::path& path);
void save_model(const CalibrationModel& model, const std::filesystem::path& path);

std::string report_to_json(const ComparisonReport& report);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace calib

#endif  // CALIB_IO_HPP
