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

#include "calib/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "calib/error.hpp"

namespace calib {
namespace {

using nlohmann::json;

constexpr const char* kRootCoveredTag = "root-covered";

// Many writers emit bare NaN / Infinity tokens. They are not JSON; rewrite
// them (outside string literals) into strings so validation can point at
// the offending entry instead of failing the whole parse.
std::string quote_nonfinite_tokens(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      out += c;
      if (c == '\\' && i + 1 < text.size()) {
        out += text[++i];
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      continue;
    }
    bool replaced = false;
    for (std::string_view token : {"-Infinity", "Infinity", "NaN"}) {
      if (text.substr(i, token.size()) == token) {
        out += '"';
        out += token;
        out += '"';
        i += token.size() - 1;
        replaced = true;
        break;
      }
    }
    if (!replaced) out += c;
  }
  return out;
}

json parse(std::string_view text) {
  try {
    return json::parse(quote_nonfinite_tokens(text));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& doc, const char* name) {
  if (!doc.is_object()) throw ParseError("expected a JSON object");
  const auto it = doc.find(name);
  if (it == doc.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

template <typename T>
T get(const json& doc, const char* name) {
  try {
    return field(doc, name).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + name + "': " + e.what());
  }
}

void check_version(const json& doc) {
  if (get<int>(doc, "version") != kFormatVersion) {
    throw ParseError("unsupported format version");
  }
}

ScoreMatrix read_matrix(const json& doc, const char* name) {
  const json& rows = field(doc, name);
  if (!rows.is_array()) throw ParseError(std::string("'") + name + "' must be an array");
  ScoreMatrix m;
  m.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array()) {
      throw ParseError(std::string("'") + name + "' row " + std::to_string(r) +
                       " must be an array");
    }
    std::vector<double> row;
    row.reserve(rows[r].size());
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const json& v = rows[r][c];
      if (!v.is_number()) {
        throw ValidationError(std::string(name) + " entry (row " + std::to_string(r) + ", col " +
                              std::to_string(c) + ") is not a finite number");
      }
      row.push_back(v.get<double>());
    }
    m.push_back(std::move(row));
  }
  return m;
}

std::vector<std::string> read_ids(const json& doc, const char* name) {
  if (!doc.contains(name)) return {};
  return get<std::vector<std::string>>(doc, name);
}

void write_doc(const std::filesystem::path& path, const std::string& text) {
  write_text_file(path, text);
}

json stats_to_json(const SearchStats& s) {
  json history = json::array();
  for (const auto& r : s.incumbent_history) {
    history.push_back({{"time_ms", r.time_ms}, {"nodes_visited", r.nodes_visited}, {"loss", r.loss}});
  }
  return {{"nodes_visited", s.nodes_visited},
          {"nodes_pruned_bound", s.nodes_pruned_bound},
          {"nodes_pruned_equivalence", s.nodes_pruned_equivalence},
          {"positives_removed_by_root", s.positives_removed_by_root},
          {"levels", s.levels},
          {"wall_time_ms", s.wall_time_ms},
          {"incumbent_history", history}};
}

SearchStats stats_from_json(const json& doc) {
  SearchStats s;
  s.nodes_visited = get<std::uint64_t>(doc, "nodes_visited");
  s.nodes_pruned_bound = get<std::uint64_t>(doc, "nodes_pruned_bound");
  s.nodes_pruned_equivalence = get<std::uint64_t>(doc, "nodes_pruned_equivalence");
  s.positives_removed_by_root = get<std::uint64_t>(doc, "positives_removed_by_root");
  s.levels = get<std::uint64_t>(doc, "levels");
  s.wall_time_ms = get<double>(doc, "wall_time_ms");
  for (const json& r : field(doc, "incumbent_history")) {
    s.incumbent_history.push_back({get<double>(r, "time_ms"),
                                   get<std::uint64_t>(r, "nodes_visited"),
                                   get<std::uint64_t>(r, "loss")});
  }
  return s;
}

json map_to_json(const ClassifierMap& map) {
  struct Visitor {
    json operator()(const SigmoidMap& m) const {
      return {{"a", m.a}, {"b", m.b}, {"degenerate", m.degenerate}};
    }
    json operator()(const IsotonicMap& m) const {
      return {{"breakpoints", m.breakpoints}, {"values", m.values}};
    }
    json operator()(const AffineMap& m) const { return {{"scale", m.scale}, {"offset", m.offset}}; }
    json operator()(const ThresholdMap& m) const { return {{"threshold", m.threshold}}; }
  };
  return std::visit(Visitor{}, map);
}

ClassifierMap map_from_json(CalibrationMethod method, const json& doc) {
  switch (method) {
    case CalibrationMethod::kIndependentSigmoid:
    case CalibrationMethod::kJointSigmoid:
      return SigmoidMap{get<double>(doc, "a"), get<double>(doc, "b"), get<bool>(doc, "degenerate")};
    case CalibrationMethod::kIsotonic: {
      IsotonicMap m{get<std::vector<double>>(doc, "breakpoints"),
                    get<std::vector<double>>(doc, "values")};
      if (m.breakpoints.empty() || m.breakpoints.size() != m.values.size()) {
        throw ValidationError("isotonic map needs matching, non-empty breakpoints and values");
      }
      return m;
    }
    case CalibrationMethod::kAffine: {
      AffineMap m{get<double>(doc, "scale"), get<double>(doc, "offset")};
      if (!(m.scale > 0.0)) throw ValidationError("affine scale must be positive");
      return m;
    }
    case CalibrationMethod::kJointThresholds:
      return ThresholdMap{get<double>(doc, "threshold")};
  }
  throw ParseError("unknown method");
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

// --- Problem ---------------------------------------------------------------

std::string problem_to_json(const Problem& problem) {
  const ProblemData& d = problem.data();
  json doc = {{"version", kFormatVersion},
              {"num_classifiers", problem.num_classifiers()},
              {"positive_scores", d.positive_scores},
              {"negative_scores", d.negative_scores}};
  if (!d.positive_ids.empty()) doc["positive_ids"] = d.positive_ids;
  if (!d.negative_ids.empty()) doc["negative_ids"] = d.negative_ids;
  if (!d.metadata.empty()) doc["metadata"] = d.metadata;
  return doc.dump(1) + "\n";
}

Problem problem_from_json(std::string_view text) {
  const json doc = parse(text);
  check_version(doc);
  const auto num_classifiers = get<std::size_t>(doc, "num_classifiers");
  ProblemData data;
  data.positive_scores = read_matrix(doc, "positive_scores");
  data.negative_scores = read_matrix(doc, "negative_scores");
  if (data.positive_scores.size() != num_classifiers) {
    throw ValidationError("num_classifiers is " + std::to_string(num_classifiers) +
                          " but positive_scores has " +
                          std::to_string(data.positive_scores.size()) + " rows");
  }
  if (data.negative_scores.size() != num_classifiers) {
    throw ValidationError("num_classifiers is " + std::to_string(num_classifiers) +
                          " but negative_scores has " +
                          std::to_string(data.negative_scores.size()) + " rows");
  }
  data.positive_ids = read_ids(doc, "positive_ids");
  data.negative_ids = read_ids(doc, "negative_ids");
  if (doc.contains("metadata")) {
    data.metadata = get<std::map<std::string, std::string>>(doc, "metadata");
  }
  return Problem(std::move(data));
}

Problem load_problem(const std::filesystem::path& path) {
  return problem_from_json(read_text_file(path));
}

void save_problem(const Problem& problem, const std::filesystem::path& path) {
  write_doc(path, problem_to_json(problem));
}

// --- Solution --------------------------------------------------------------

std::string solution_to_json(const Solution& solution) {
  json assignment = json::array();
  for (int j : solution.assignment) {
    if (j == kRootCovered) {
      assignment.push_back(kRootCoveredTag);
    } else {
      assignment.push_back(j);
    }
  }
  json doc = {{"version", kFormatVersion},
              {"thresholds", solution.config.thresholds},
              {"loss", solution.loss},
              {"assignment", assignment},
              {"optimal", solution.optimal},
              {"fallback", solution.fallback},
              {"status", to_string(solution.status)},
              {"stats", stats_to_json(solution.stats)}};
  return doc.dump(1) + "\n";
}

Solution solution_from_json(std::string_view text) {
  const json doc = parse(text);
  check_version(doc);
  Solution s;
  s.config.thresholds = get<std::vector<double>>(doc, "thresholds");
  s.loss = get<std::uint64_t>(doc, "loss");
  for (const json& a : field(doc, "assignment")) {
    if (a.is_string() && a.get<std::string>() == kRootCoveredTag) {
      s.assignment.push_back(kRootCovered);
    } else if (a.is_number_integer()) {
      s.assignment.push_back(a.get<int>());
    } else {
      throw ParseError("assignment entries must be classifier indices or 'root-covered'");
    }
  }
  s.optimal = get<bool>(doc, "optimal");
  s.fallback = doc.contains("fallback") ? get<bool>(doc, "fallback") : false;
  s.status = doc.contains("status") ? solve_status_from_string(get<std::string>(doc, "status"))
                                    : (s.optimal ? SolveStatus::kOptimal
                                                 : SolveStatus::kBudgetExhausted);
  s.stats = stats_from_json(field(doc, "stats"));
  return s;
}

Solution load_solution(const std::filesystem::path& path) {
  return solution_from_json(read_text_file(path));
}

void save_solution(const Solution& solution, const std::filesystem::path& path) {
  write_doc(path, solution_to_json(solution));
}

// --- Calibration model -----------------------------------------------------

std::string model_to_json(const CalibrationModel& model) {
  json maps = json::array();
  for (const auto& m : model.classifiers) maps.push_back(map_to_json(m));
  json doc = {{"version", kFormatVersion},
              {"method", to_string(model.method)},
              {"num_classifiers", model.num_classifiers()},
              {"classifiers", maps},
              {"degenerate", model.degenerate},
              {"redundant", model.redundant}};
  return doc.dump(1) + "\n";
}

CalibrationModel model_from_json(std::string_view text) {
  const json doc = parse(text);
  check_version(doc);
  CalibrationModel model;
  try {
    model.method = calibration_method_from_string(get<std::string>(doc, "method"));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  const auto num_classifiers = get<std::size_t>(doc, "num_classifiers");
  const json& maps = field(doc, "classifiers");
  if (!maps.is_array() || maps.size() != num_classifiers) {
    throw ValidationError("model lists " + std::to_string(maps.size()) +
                          " classifier maps, expected " + std::to_string(num_classifiers));
  }
  for (const json& m : maps) model.classifiers.push_back(map_from_json(model.method, m));
  if (doc.contains("degenerate")) model.degenerate = get<std::vector<std::size_t>>(doc, "degenerate");
  if (doc.contains("redundant")) model.redundant = get<std::vector<std::size_t>>(doc, "redundant");
  return model;
}

CalibrationModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_text_file(path));
}

void save_model(const CalibrationModel& model, const std::filesystem::path& path) {
  write_doc(path, model_to_json(model));
}

// --- Comparison report -----------------------------------------------------

std::string report_to_json(const ComparisonReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"method", to_string(r.method)},
                    {"recall", r.recall},
                    {"fp", r.fp},
                    {"tau", r.tau},
                    {"ap", r.ap}});
  }
  json doc = {{"version", kFormatVersion},
              {"target_recall", report.target_recall},
              {"joint_loss", report.joint_solution.loss},
              {"joint_optimal", report.joint_solution.optimal},
              {"rows", rows}};
  return doc.dump(1) + "\n";
}

}  // namespace calib
