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

// calib: command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 validation/parse/IO, 3 search stopped by
// its budget (solution still feasible), 4 oracle grid over its cap.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "calib/calibrators.hpp"
#include "calib/error.hpp"
#include "calib/evaluation.hpp"
#include "calib/io.hpp"
#include "calib/oracle.hpp"
#include "calib/search.hpp"
#include "calib/synthgen.hpp"
#include "calib/thresholds.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitTruncated = 3;
constexpr int kExitOracleCap = 4;

enum class LogLevel { kQuiet = 0, kInfo = 1, kTrace = 2 };

LogLevel log_level() {
  const char* env = std::getenv("CALIB_LOG");
  if (env == nullptr) return LogLevel::kInfo;
  const std::string v(env);
  if (v == "quiet") return LogLevel::kQuiet;
  if (v == "trace") return LogLevel::kTrace;
  return LogLevel::kInfo;
}

void log(LogLevel level, const std::string& msg) {
  if (level <= log_level()) std::cerr << "calib: " << msg << '\n';
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// --- generate ----------------------------------------------------------------

struct GenerateArgs {
  calib::GeneratorSpec spec;
  std::string out;
  std::string test_out;
};

int run_generate(const GenerateArgs& args) {
  const calib::GeneratedPair pair = calib::generate(args.spec);
  calib::save_problem(pair.train, args.out);
  if (!args.test_out.empty()) {
    if (!pair.test) throw calib::InvalidSpec("--test-out needs --test-fraction > 0");
    calib::save_problem(*pair.test, args.test_out);
  }
  log(LogLevel::kInfo, "wrote " + args.out);
  return 0;
}

// --- solve -------------------------------------------------------------------

struct SolveArgs {
  std::string problem;
  std::string mode = "exact";
  std::optional<double> budget_ms;
  std::optional<std::uint64_t> node_budget;
  bool no_prune_bound = false;
  bool no_prune_equiv = false;
  bool no_depth_reduce = false;
  bool random_order = false;
  std::uint64_t order_seed = 0;
  bool trace = false;
  std::string out;
};

calib::SearchOptions search_options(const SolveArgs& args) {
  calib::SearchOptions opt;
  opt.prune_bound = !args.no_prune_bound;
  opt.prune_equivalence = !args.no_prune_equiv;
  opt.depth_reduction = !args.no_depth_reduce;
  opt.difficulty_order = !args.random_order;
  opt.order_seed = args.order_seed;
  opt.budget.wall_ms = args.budget_ms;
  opt.budget.max_nodes = args.node_budget;
  return opt;
}

int run_solve(const SolveArgs& args) {
  const calib::Problem problem = calib::load_problem(args.problem);
  calib::SearchOptions opt = search_options(args);
  if (args.trace || log_level() == LogLevel::kTrace) {
    const bool to_stdout = args.trace;
    opt.on_incumbent = [to_stdout](const calib::IncumbentRecord& r) {
      const json line = {{"elapsed_ms", r.time_ms}, {"nodes_visited", r.nodes_visited},
                         {"loss", r.loss}};
      if (to_stdout) {
        std::cout << line.dump() << std::endl;
      } else {
        log(LogLevel::kTrace, "incumbent " + line.dump());
      }
    };
  }
  const calib::Solution sol = args.mode == "anytime" ? calib::solve_anytime(problem, opt)
                                                     : calib::solve_exact(problem, opt);
  calib::save_solution(sol, args.out);
  log(LogLevel::kInfo, "loss " + std::to_string(sol.loss) + " (" + calib::to_string(sol.status) +
                           ", " + std::to_string(sol.stats.nodes_visited) + " nodes)");
  return sol.optimal ? 0 : kExitTruncated;
}

// --- oracle ------------------------------------------------------------------

int run_oracle(const std::string& path, std::uint64_t cap) {
  const calib::Problem problem = calib::load_problem(path);
  calib::OracleResult result;
  try {
    result = calib::oracle_solve(problem, cap);
  } catch (const calib::TooLarge& e) {
    log(LogLevel::kQuiet, e.what());
    return kExitOracleCap;
  }
  const json doc = {{"loss", result.loss},
                    {"witness", result.witness.thresholds},
                    {"grid_size", result.grid_size}};
  std::cout << doc.dump() << '\n';
  return 0;
}

// --- calibrate ---------------------------------------------------------------

struct CalibrateArgs {
  std::string problem;
  std::string method;
  std::string solution;
  double cutoff = calib::kDefaultMarginCutoff;
  std::size_t affine_samples = calib::kDefaultAffineSamples;
  std::uint64_t seed = 0;
  std::string out;
};

int run_calibrate(const CalibrateArgs& args) {
  const calib::Problem problem = calib::load_problem(args.problem);
  const calib::CalibrationMethod method = calib::calibration_method_from_string(args.method);

  auto joint_solution = [&]() {
    if (!args.solution.empty()) return calib::load_solution(args.solution);
    log(LogLevel::kInfo, "no --solution given; solving exactly");
    return calib::solve_exact(problem);
  };

  calib::CalibrationModel model;
  switch (method) {
    case calib::CalibrationMethod::kIndependentSigmoid:
      model = calib::fit_independent_sigmoid(problem, args.cutoff);
      break;
    case calib::CalibrationMethod::kJointSigmoid:
      model = calib::fit_joint_sigmoid(problem, joint_solution());
      break;
    case calib::CalibrationMethod::kIsotonic:
      model = calib::fit_isotonic(problem);
      break;
    case calib::CalibrationMethod::kAffine:
      model = calib::fit_affine(problem, args.affine_samples, args.seed);
      break;
    case calib::CalibrationMethod::kJointThresholds: {
      const calib::Solution sol = joint_solution();
      if (sol.config.size() != problem.num_classifiers()) {
        throw calib::DimensionMismatch("solution does not match problem");
      }
      model = calib::thresholds_model(sol.config);
      break;
    }
  }
  if (!model.degenerate.empty()) {
    log(LogLevel::kInfo, std::to_string(model.degenerate.size()) + " degenerate classifier(s)");
  }
  calib::save_model(model, args.out);
  return 0;
}

// --- evaluate ----------------------------------------------------------------

struct EvaluateArgs {
  std::string model;
  std::string problem;
  std::string metric = "ap";
  double recall = 1.0;
  std::string csv;
};

int run_evaluate(const EvaluateArgs& args) {
  const calib::CalibrationModel model = calib::load_model(args.model);
  const calib::Problem test = calib::load_problem(args.problem);
  json report = {{"method", calib::to_string(model.method)}, {"metric", args.metric}};
  if (args.metric == "ap") {
    report["ap"] = calib::average_precision(test, model);
  } else {
    const calib::OperatingPoint p = calib::fp_at_recall(test, model, args.recall);
    report["target_recall"] = args.recall;
    report["recall"] = p.recall;
    report["fp"] = p.fp;
    report["tau"] = p.tau;
  }
  std::cout << report.dump(1) << '\n';
  if (!args.csv.empty()) {
    std::ostringstream csv;
    calib::write_curve_csv(csv, calib::precision_recall_curve(test, model));
    calib::write_text_file(args.csv, csv.str());
  }
  return 0;
}

// --- compare -----------------------------------------------------------------

struct CompareArgs {
  std::string train;
  std::string test;
  std::vector<std::string> methods = {"joint-thresholds", "joint-sigmoid", "independent-sigmoid",
                                      "isotonic", "affine"};
  std::optional<double> budget_ms;
  std::uint64_t seed = 0;
  std::string out;
  std::string csv;
};

int run_compare(const CompareArgs& args) {
  const calib::Problem train = calib::load_problem(args.train);
  const calib::Problem test = calib::load_problem(args.test);
  std::vector<calib::CalibrationMethod> methods;
  for (const auto& m : args.methods) methods.push_back(calib::calibration_method_from_string(m));
  calib::CompareOptions opt;
  opt.search.budget.wall_ms = args.budget_ms;
  opt.seed = args.seed;
  const calib::ComparisonReport report = calib::compare_methods(train, test, methods, opt);
  const std::string doc = calib::report_to_json(report);
  if (args.out.empty()) {
    std::cout << doc;
  } else {
    calib::write_text_file(args.out, doc);
  }
  if (!args.csv.empty()) {
    std::ostringstream csv;
    csv << "method,rank,score,label,precision,recall\n";
    csv.precision(17);
    for (const auto& row : report.rows) {
      for (const auto& p : row.curve) {
        csv << calib::to_string(row.method) << ',' << p.rank << ',' << p.score << ',' << p.label
            << ',' << p.precision << ',' << p.recall << '\n';
      }
    }
    calib::write_text_file(args.csv, csv.str());
  }
  return 0;
}

// --- bench -------------------------------------------------------------------

struct BenchArgs {
  std::string spec;
  std::string out;
  std::string curves;
  std::string dump_candidates;
};

calib::SearchOptions bench_config(const std::string& name) {
  calib::SearchOptions opt;
  if (name == "default") return opt;
  if (name == "no-prune-bound") {
    opt.prune_bound = false;
  } else if (name == "no-prune-equiv") {
    opt.prune_equivalence = false;
  } else if (name == "no-depth-reduce") {
    opt.depth_reduction = false;
  } else if (name == "random-order") {
    opt.difficulty_order = false;
  } else if (name == "none") {
    opt.prune_bound = opt.prune_equivalence = opt.depth_reduction = opt.difficulty_order = false;
  } else {
    throw calib::InvalidSpec("unknown bench configuration '" + name + "'");
  }
  return opt;
}

int run_bench(const BenchArgs& args) {
  json spec;
  try {
    spec = json::parse(calib::read_text_file(args.spec));
  } catch (const json::parse_error& e) {
    throw calib::ParseError(std::string("bench spec: ") + e.what());
  }
  const json inst = spec.value("instances", json::object());
  calib::GeneratorSpec gen;
  gen.classifiers = inst.value("classifiers", gen.classifiers);
  gen.positives = inst.value("positives", gen.positives);
  gen.negatives = inst.value("negatives", gen.negatives);
  gen.dims = inst.value("dims", gen.dims);
  gen.spread = inst.value("spread", gen.spread);
  gen.noise = inst.value("noise", gen.noise);
  gen.hard_fraction = inst.value("hard_fraction", gen.hard_fraction);
  gen.test_fraction = 0.0;
  std::vector<std::uint64_t> seeds = inst.value("seeds", std::vector<std::uint64_t>{1});
  const std::vector<std::string> configs = spec.value(
      "configs", std::vector<std::string>{"default", "no-prune-bound", "no-prune-equiv",
                                          "no-depth-reduce", "random-order", "none"});
  std::optional<double> budget_ms;
  std::optional<std::uint64_t> node_budget;
  if (spec.contains("budget_ms")) budget_ms = spec["budget_ms"].get<double>();
  if (spec.contains("node_budget")) node_budget = spec["node_budget"].get<std::uint64_t>();

  std::ostringstream table;
  table << "config,seed,loss,optimal,nodes_visited,nodes_pruned_bound,nodes_pruned_equivalence,"
           "positives_removed_by_root,levels,full_tree_nodes,wall_time_ms\n";
  std::ostringstream curves;
  curves << "config,seed,nodes_visited,loss,time_ms\n";
  json candidates_dump = json::array();

  for (std::uint64_t seed : seeds) {
    gen.seed = seed;
    const calib::Problem problem = calib::generate(gen).train;
    if (!args.dump_candidates.empty()) {
      const auto cands = calib::extract_candidates(problem);
      json per = json::array();
      for (const auto& c : cands.classifiers) {
        per.push_back({{"thresholds", c.thresholds}, {"cumulative_fp", c.cumulative_fp}});
      }
      candidates_dump.push_back({{"seed", seed}, {"classifiers", per}});
    }
    const std::string full_tree =
        calib::oracle_node_count(problem.num_classifiers(), problem.num_positives()).str();
    for (const auto& name : configs) {
      calib::SearchOptions opt = bench_config(name);
      opt.order_seed = seed;
      opt.budget.wall_ms = budget_ms;
      opt.budget.max_nodes = node_budget;
      const calib::Solution sol = calib::solve_exact(problem, opt);
      const calib::SearchStats& s = sol.stats;
      table << name << ',' << seed << ',' << sol.loss << ',' << (sol.optimal ? 1 : 0) << ','
            << s.nodes_visited << ',' << s.nodes_pruned_bound << ',' << s.nodes_pruned_equivalence
            << ',' << s.positives_removed_by_root << ',' << s.levels << ',' << full_tree << ','
            << fmt(s.wall_time_ms) << '\n';
      for (const auto& r : s.incumbent_history) {
        curves << name << ',' << seed << ',' << r.nodes_visited << ',' << r.loss << ','
               << fmt(r.time_ms) << '\n';
      }
      log(LogLevel::kInfo, name + " seed " + std::to_string(seed) + ": loss " +
                               std::to_string(sol.loss) + ", " + std::to_string(s.nodes_visited) +
                               " nodes");
    }
  }
  if (args.out.empty()) {
    std::cout << table.str();
  } else {
    calib::write_text_file(args.out, table.str());
  }
  if (!args.curves.empty()) calib::write_text_file(args.curves, curves.str());
  if (!args.dump_candidates.empty()) {
    calib::write_text_file(args.dump_candidates, candidates_dump.dump(1) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint threshold calibration for max-combined classifier ensembles"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a seeded synthetic problem");
  generate->add_option("--seed", gen.spec.seed);
  generate->add_option("--classifiers", gen.spec.classifiers);
  generate->add_option("--positives", gen.spec.positives);
  generate->add_option("--negatives", gen.spec.negatives);
  generate->add_option("--dims", gen.spec.dims);
  generate->add_option("--spread", gen.spec.spread);
  generate->add_option("--noise", gen.spec.noise);
  generate->add_option("--hard-fraction", gen.spec.hard_fraction);
  generate->add_option("--test-fraction", gen.spec.test_fraction);
  generate->add_option("--out", gen.out)->required();
  generate->add_option("--test-out", gen.test_out);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Find per-classifier thresholds");
  solve_cmd->add_option("problem", solve.problem)->required();
  solve_cmd->add_option("--mode", solve.mode)->check(CLI::IsMember({"exact", "anytime"}));
  solve_cmd->add_option("--budget-ms", solve.budget_ms);
  solve_cmd->add_option("--node-budget", solve.node_budget);
  solve_cmd->add_flag("--no-prune-bound", solve.no_prune_bound);
  solve_cmd->add_flag("--no-prune-equiv", solve.no_prune_equiv);
  solve_cmd->add_flag("--no-depth-reduce", solve.no_depth_reduce);
  solve_cmd->add_flag("--random-order", solve.random_order);
  solve_cmd->add_option("--order-seed", solve.order_seed);
  solve_cmd->add_flag("--trace", solve.trace);
  solve_cmd->add_option("--out", solve.out)->required();

  std::string oracle_problem;
  std::uint64_t oracle_cap = calib::kDefaultOracleCap;
  auto* oracle = app.add_subcommand("oracle", "Brute-force the candidate grid");
  oracle->add_option("problem", oracle_problem)->required();
  oracle->add_option("--cap", oracle_cap);

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Fit a calibration model");
  calibrate->add_option("problem", cal.problem)->required();
  calibrate->add_option("--method", cal.method)
      ->required()
      ->check(CLI::IsMember({"joint-sigmoid", "indep-sigmoid", "independent-sigmoid", "isotonic",
                             "affine", "joint-thresholds"}));
  calibrate->add_option("--solution", cal.solution);
  calibrate->add_option("--cutoff", cal.cutoff);
  calibrate->add_option("--affine-samples", cal.affine_samples);
  calibrate->add_option("--seed", cal.seed);
  calibrate->add_option("--out", cal.out)->required();

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score a model on a held-out problem");
  evaluate->add_option("model", ev.model)->required();
  evaluate->add_option("test-problem", ev.problem)->required();
  evaluate->add_option("--metric", ev.metric)->check(CLI::IsMember({"ap", "fp-at-recall"}));
  evaluate->add_option("--recall", ev.recall);
  evaluate->add_option("--csv", ev.csv, "Write the precision-recall curve here");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Fit and evaluate several methods");
  compare->add_option("train", cmp.train)->required();
  compare->add_option("test", cmp.test)->required();
  compare->add_option("--methods", cmp.methods)->delimiter(',');
  compare->add_option("--budget-ms", cmp.budget_ms);
  compare->add_option("--seed", cmp.seed);
  compare->add_option("--out", cmp.out);
  compare->add_option("--csv", cmp.csv);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the pruning ablation grid");
  bench_cmd->add_option("spec-file", bench.spec)->required();
  bench_cmd->add_option("--out", bench.out);
  bench_cmd->add_option("--curves", bench.curves);
  bench_cmd->add_option("--dump-candidates", bench.dump_candidates);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*solve_cmd) return run_solve(solve);
    if (*oracle) return run_oracle(oracle_problem, oracle_cap);
    if (*calibrate) return run_calibrate(cal);
    if (*evaluate) return run_evaluate(ev);
    if (*compare) return run_compare(cmp);
    if (*bench_cmd) return run_bench(bench);
  } catch (const calib::Error& e) {
    log(LogLevel::kQuiet, e.what());
    return kExitInvalid;
  }
  return kExitUsage;
}
