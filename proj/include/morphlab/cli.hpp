// cli.hpp -- command-line driver: pick experiments/conditions/seeds, run the
// battery, and write curves.csv, summary.txt, and manifest.txt.

#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "morphlab/gradcheck.hpp"
#include "morphlab/report.hpp"
#include "morphlab/xfer.hpp"

namespace morphlab {

inline constexpr const char* kVersion = "0.1.0";

namespace detail {

/// key=value lines; '#' starts a comment; unknown keys are errors.
inline std::map<std::string, std::string> parse_config_file(
    const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string entry = trim(line);
    if (entry.empty()) continue;
    auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    kv[trim(entry.substr(0, eq))] = trim(entry.substr(eq + 1));
  }
  return kv;
}

/// "N" -> {1..N}; "a,b,c" -> {a, b, c}.
inline std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  if (spec.find(',') == std::string::npos) {
    std::size_t pos = 0;
    long long n = std::stoll(spec, &pos);
    if (pos != spec.size() || n < 1)
      throw std::runtime_error("--seeds expects a positive count or a list");
    for (long long i = 1; i <= n; ++i)
      seeds.push_back(static_cast<std::uint64_t>(i));
    return seeds;
  }
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ','))
    seeds.push_back(static_cast<std::uint64_t>(std::stoull(tok)));
  if (seeds.empty()) throw std::runtime_error("empty seed list");
  return seeds;
}

}  // namespace detail

/// Full driver; returns the process exit status.
inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{
      "morphlab: modular recurrent-network morphology acquisition and "
      "transfer experiments on generated artificial languages"};
  app.footer(
      "With neither --experiment nor --condition, the full battery "
      "(experiments 1-5) is run.");

  int experiment = 0;
  std::vector<std::string> condition_filters;
  std::string seeds_spec = "10";
  std::string out_dir = "out";
  std::string config_path;
  bool check_gradients = false;
  bool list_conditions = false;
  int jobs = 1;
  RunSettings settings;

  app.add_option("--experiment", experiment,
                 "Experiment to run (1..5); omit for all");
  app.add_option("--condition", condition_filters,
                 "Condition name filter (repeatable)");
  auto* seeds_opt = app.add_option(
      "--seeds", seeds_spec, "Seed count N (runs seeds 1..N) or list a,b,c");
  auto* epochs1_opt = app.add_option("--epochs1", settings.epochs1,
                                     "Phase-1 epoch cap");
  auto* epochs2_opt = app.add_option("--epochs2", settings.epochs2,
                                     "Phase-2 epoch budget");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory")
                      ->envname("MORPHLAB_OUT");
  app.add_option("--config", config_path, "key=value settings file");
  auto* jobs_opt =
      app.add_option("--jobs", jobs, "Worker threads over (condition, seed)")
          ->check(CLI::PositiveNumber);
  app.add_flag("--check-gradients", check_gradients,
               "Run the finite-difference gradient suite and exit");
  app.add_flag("--list-conditions", list_conditions,
               "Print the condition tables and exit");
  app.set_version_flag("--version", std::string("morphlab ") + kVersion);

  try {
    std::reverse(args.begin(), args.end());  // CLI11 takes a reversed vector
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    // Config file fills in everything not set on the command line.
    if (!config_path.empty()) {
      auto kv = detail::parse_config_file(config_path);
      auto take = [&](const char* key, auto& value, const CLI::Option* opt) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        if (opt && opt->count() > 0) {
          kv.erase(it);
          return;  // command line wins
        }
        std::istringstream is(it->second);
        is >> value;
        if (is.fail())
          throw std::runtime_error(std::string("config: bad value for ") + key);
        kv.erase(it);
      };
      take("learning_rate", settings.net.learning_rate, nullptr);
      take("momentum", settings.net.momentum, nullptr);
      take("init_range", settings.net.init_range, nullptr);
      take("hidden_root", settings.percept_sizes.root_hidden, nullptr);
      take("hidden_infl", settings.percept_sizes.infl_hidden, nullptr);
      take("hidden_prod", settings.production_hidden, nullptr);
      take("epochs1", settings.epochs1, epochs1_opt);
      take("epochs2", settings.epochs2, epochs2_opt);
      take("pretrain_epochs", settings.pretrain_epochs, nullptr);
      take("phase1_stop_accuracy", settings.phase1_stop_accuracy, nullptr);
      take("pretrain_stop_accuracy", settings.pretrain_stop_accuracy, nullptr);
      take("eval_every", settings.eval_every, nullptr);
      take("pretrain_eval_every", settings.pretrain_eval_every, nullptr);
      take("seeds", seeds_spec, seeds_opt);
      take("out", out_dir, out_opt);
      take("jobs", jobs, jobs_opt);
      if (!kv.empty())
        throw std::runtime_error("config: unknown key '" + kv.begin()->first +
                                 "'");
    }

    if (check_gradients) {
      GradCheckReport report = run_gradient_check_suite(20);
      out << "gradient check: " << report.nets_checked
          << " nets, max relative error " << report.max_rel_error << "\n";
      if (report.max_rel_error < 1e-4) {
        out << "gradient check: PASS\n";
        return 0;
      }
      err << "gradient check: FAIL (threshold 1e-4)\n";
      return 1;
    }

    if (experiment != 0 && (experiment < 1 || experiment > 5))
      throw std::runtime_error("unknown experiment " +
                               std::to_string(experiment) +
                               " (valid range is 1..5)");
    std::vector<ConditionSpec> conditions =
        experiment ? conditions_for_experiment(experiment) : all_conditions();
    if (!condition_filters.empty()) {
      std::vector<ConditionSpec> filtered;
      for (const ConditionSpec& c : conditions)
        for (const std::string& want : condition_filters)
          if (c.name == want) {
            filtered.push_back(c);
            break;
          }
      if (filtered.empty())
        throw std::runtime_error("no condition matches the given filter");
      conditions = std::move(filtered);
    }

    if (list_conditions) {
      for (const ConditionSpec& c : conditions)
        out << c.experiment << '/' << c.name << " ("
            << modality_name(c.modality) << ")\n";
      return 0;
    }

    std::vector<std::uint64_t> seeds = detail::parse_seeds(seeds_spec);
    std::vector<int> checkpoints = default_checkpoints(settings.epochs2);

    err << "running " << conditions.size() << " condition(s) x "
        << seeds.size() << " seed(s) with " << jobs << " job(s)\n";
    std::vector<RunRecord> records = run_jobs(conditions, seeds, settings, jobs);

    // One comparison per experiment that has at least two conditions here.
    std::vector<ComparisonResult> comparisons;
    for (int e = 1; e <= 5; ++e) {
      std::vector<RunRecord> sub;
      std::set<std::string> names;
      for (const RunRecord& r : records)
        if (r.experiment == e) {
          sub.push_back(r);
          names.insert(r.condition);
        }
      if (names.size() >= 2)
        comparisons.push_back(compare_conditions(sub, checkpoints));
    }

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    auto write_file = [&](const std::string& name, auto&& writer) {
      fs::path path = fs::path(out_dir) / name;
      std::ofstream os(path, std::ios::binary);
      if (!os) throw std::runtime_error("cannot write " + path.string());
      writer(os);
      if (!os.good()) throw std::runtime_error("write failed: " + path.string());
    };
    write_file("curves.csv",
               [&](std::ostream& os) { write_curves_csv(records, os); });
    write_file("summary.txt",
               [&](std::ostream& os) { write_summary(comparisons, os); });
    write_file("manifest.txt", [&](std::ostream& os) {
      os << "morphlab " << kVersion << '\n';
      write_manifest(settings, conditions, seeds, checkpoints, os);
    });
    err << "wrote " << out_dir << "/curves.csv, summary.txt, manifest.txt\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

inline int run_cli(int argc, char** argv, std::ostream& out,
                   std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(std::move(args), out, err);
}

}  // namespace morphlab
