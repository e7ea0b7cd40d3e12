#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "lmrecog/bundle.hpp"
#include "lmrecog/grounding.hpp"
#include "lmrecog/landmarks.hpp"
#include "lmrecog/log.hpp"
#include "lmrecog/oracle.hpp"
#include "lmrecog/recognize.hpp"
#include "lmrecog/suite.hpp"

namespace lmrecog::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInput = 2, kVerification = 3 };

namespace detail {

inline PlanningInstance load_instance(const std::string& domain_path, const std::string& problem_path, bool prune) {
  auto d = pddl::parse_domain(read_file(domain_path), domain_path);
  auto p = pddl::parse_problem(read_file(problem_path), d, problem_path);
  GroundOptions opts;
  opts.prune_unreachable = prune;
  return ground(d, p, opts);
}

inline Extractor extractor_or_throw(const std::string& s) {
  auto e = parse_extractor(s);
  if (!e) throw CLI::ValidationError("--algo", "unknown algorithm " + s);
  return *e;
}

inline const std::vector<std::string>& algo_names() {
  static const std::vector<std::string> names{"exhaust", "h1", "rhw", "zhu-givan", "hoffmann"};
  return names;
}

}  // namespace detail

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Landmark-based goal recognition"};
  app.name("lmrecog");
  app.require_subcommand(1, 1);

  std::string domain, problem, bundle, suite, out_dir;
  std::string algo = "exhaust";
  std::string heuristic = "gc";
  int theta = 0;
  std::size_t max_len = 12;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  bool no_prune = false, no_time = false;
  std::vector<std::string> bench_algos, bench_heuristics;
  std::vector<int> bench_thetas;

  auto* extract_cmd = app.add_subcommand("extract", "Print the landmarks of a planning problem");
  extract_cmd->add_option("--domain", domain, "PDDL domain file")->required();
  extract_cmd->add_option("--problem", problem, "PDDL problem file")->required();
  extract_cmd->add_option("--algo", algo, "Extraction algorithm")->check(CLI::IsMember(detail::algo_names()));
  extract_cmd->add_flag("--no-prune", no_prune, "Keep actions unreachable from the initial state");

  auto* recognize_cmd = app.add_subcommand("recognize", "Score the goal hypotheses of one bundle");
  recognize_cmd->add_option("--bundle", bundle, "Bundle directory")->required();
  recognize_cmd->add_option("--algo", algo, "Extraction algorithm")->check(CLI::IsMember(detail::algo_names()));
  recognize_cmd->add_option("--heuristic", heuristic, "gc or uniq")->check(CLI::IsMember({"gc", "uniq"}));
  recognize_cmd->add_option("--theta", theta, "Threshold in percent")->check(CLI::Range(0, 100));

  auto* bench_cmd = app.add_subcommand("bench", "Run every bundle under a suite root and write CSV reports");
  bench_cmd->add_option("--suite", suite, "Suite root directory")->required();
  bench_cmd->add_option("--out", out_dir, "Output directory")->required();
  bench_cmd->add_option("--algo", bench_algos, "Extraction algorithms (default: all)")
      ->check(CLI::IsMember(detail::algo_names()));
  bench_cmd->add_option("--heuristic", bench_heuristics, "Heuristics (default: gc uniq)")
      ->check(CLI::IsMember({"gc", "uniq"}));
  bench_cmd->add_option("--theta", bench_thetas, "Thresholds (default: 0 10)")->check(CLI::Range(0, 100));
  bench_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--no-time", no_time, "Write zero for every time value");

  auto* verify_cmd = app.add_subcommand("verify", "Check extracted landmarks against exhaustive plan search");
  verify_cmd->add_option("--domain", domain, "PDDL domain file")->required();
  verify_cmd->add_option("--problem", problem, "PDDL problem file")->required();
  verify_cmd->add_option("--algo", algo, "Extraction algorithm")->check(CLI::IsMember(detail::algo_names()));
  verify_cmd->add_option("--max-len", max_len, "Longest plan considered")->check(CLI::Range(0, 14));
  verify_cmd->add_flag("--no-prune", no_prune, "Keep actions unreachable from the initial state");

  std::vector<std::string> argv_store{"lmrecog"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*extract_cmd) {
      auto inst = detail::load_instance(domain, problem, !no_prune);
      auto set = extract(inst, detail::extractor_or_throw(algo));
      out << format_landmarks(*inst.task, set);
      return kOk;
    }
    if (*recognize_cmd) {
      auto b = load_bundle(bundle);
      RecognitionConfig cfg{*parse_heuristic(heuristic), theta, detail::extractor_or_throw(algo)};
      auto result = recognize(b.problem, cfg);
      out << format_result(result);
      out << "recognized:";
      for (auto g : result.recognized) out << ' ' << g;
      out << "\nreal goal: " << b.problem.real_goal << '\n';
      return kOk;
    }
    if (*bench_cmd) {
      SuiteOptions opts;
      if (!bench_algos.empty()) {
        opts.extractors.clear();
        for (const auto& a : bench_algos) opts.extractors.push_back(detail::extractor_or_throw(a));
      }
      if (!bench_heuristics.empty()) {
        opts.heuristics.clear();
        for (const auto& h : bench_heuristics) opts.heuristics.push_back(*parse_heuristic(h));
      }
      if (!bench_thetas.empty()) opts.thetas = bench_thetas;
      opts.jobs = jobs;
      opts.record_time = !no_time;
      auto result = run_suite(discover_bundles(suite), opts);
      std::filesystem::create_directories(out_dir);
      write_text(std::filesystem::path(out_dir) / "records.csv", records_csv(result.records));
      write_text(std::filesystem::path(out_dir) / "summary.csv", summary_csv(result.rows));
      out << result.records.size() << " records, " << result.rows.size() << " summary rows, "
          << result.failures.size() << " failed bundles\n";
      return result.failures.empty() ? kOk : kInput;
    }
    if (*verify_cmd) {
      auto inst = detail::load_instance(domain, problem, !no_prune);
      auto set = extract(inst, detail::extractor_or_throw(algo));
      OracleLimits limits;
      limits.max_length = max_len;
      auto violations = oracle_check_landmarks(inst, set.landmarks, limits);
      for (const auto& v : violations) {
        LandmarkSet one{inst.goal, {v.landmark}, set.extractor};
        std::string line = format_landmarks(*inst.task, one);
        line.pop_back();
        out << "violation: " << line << " avoided by";
        for (ActionId a : v.witness) out << ' ' << inst.task->action(a).signature();
        out << '\n';
      }
      out << violations.size() << " violations\n";
      return violations.empty() ? kOk : kVerification;
    }
  } catch (const CLI::ValidationError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "lmrecog: " << e.what() << '\n';
    return kInput;
  }
  return kUsage;
}

}  // namespace lmrecog::cli
