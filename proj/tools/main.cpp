#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "monosi/asymptotics.hpp"
#include "monosi/simulate.hpp"
#include "monosi/version.hpp"

namespace {

using nlohmann::json;

monosi::Chart chart_from_name(const std::string& name) {
  if (name == "spherical") return {monosi::ChartKind::spherical, 3};
  if (name == "half") return {monosi::ChartKind::half_sphere, 3};
  throw CLI::ValidationError("--chart", "expected 'spherical' or 'half'");
}

monosi::Formulation formulation_from_name(const std::string& name) {
  if (name == "param") return monosi::Formulation::parametrized;
  if (name == "lagrange") return monosi::Formulation::lagrange;
  throw CLI::ValidationError("--formulation", "expected 'param' or 'lagrange'");
}

std::vector<monosi::EstimatorKind> parse_estimator_list(const std::string& csv) {
  std::vector<monosi::EstimatorKind> out;
  std::string token;
  std::stringstream ss(csv);
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(monosi::estimator_from_name(token));
  }
  if (out.empty()) throw CLI::ValidationError("--estimators", "empty estimator list");
  return out;
}

std::string sibling_path(const std::string& output, const std::string& suffix) {
  std::filesystem::path p(output);
  std::filesystem::path q = p.parent_path() / (p.stem().string() + suffix);
  return q.string();
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("MONOSI_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

struct CommonFitFlags {
  std::string formulation = "lagrange";
  std::string chart = "spherical";
  double bandwidth = 0.0;  // 0: range rule
  double min_step = 1e-8;
  double initial_step = 0.5;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--formulation", formulation, "Score formulation: param|lagrange");
    cmd->add_option("--chart", chart, "Sphere chart: spherical|half");
    cmd->add_option("--bandwidth", bandwidth,
                    "Fixed kernel bandwidth; omit for the 0.5*range*n^(-1/7) rule");
    cmd->add_option("--min-step", min_step, "Pattern-search minimum step");
    cmd->add_option("--initial-step", initial_step, "Pattern-search initial step");
  }

  monosi::FitConfig build() const {
    monosi::FitConfig config;
    config.score.formulation = formulation_from_name(formulation);
    config.score.chart = chart_from_name(chart);
    if (bandwidth > 0.0) {
      config.score.bandwidth_rule = monosi::BandwidthRule::fixed;
      config.score.fixed_h = bandwidth;
    }
    config.pattern.min_step = min_step;
    config.pattern.initial_step = initial_step;
    return config;
  }
};

monosi::ModelSpec model_from_flags(const std::string& model, int dim) {
  if (model == "uniform-cubic") {
    if (dim != 3) throw CLI::ValidationError("--dim", "uniform-cubic requires --dim 3");
    return monosi::ModelSpec::uniform_cubic();
  }
  if (model == "normal-cubic") return monosi::ModelSpec::normal_cubic(dim);
  throw CLI::ValidationError("--model", "expected 'uniform-cubic' or 'normal-cubic'");
}

int run_fit(const std::string& input, const std::string& estimator, const CommonFitFlags& flags,
            int starts, std::uint64_t seed, const std::string& output) {
  const monosi::Dataset data = monosi::load_csv(input);
  monosi::FitConfig config = flags.build();
  config.starts = monosi::Starts::random_grid(starts, seed);

  const monosi::EstimatorKind kind = monosi::estimator_from_name(estimator);
  const monosi::Estimate est = monosi::fit(kind, data, config);

  const std::string link_csv = sibling_path(output, "_link.csv");
  monosi::save_stepfunction(est.link_fit, link_csv);
  std::ofstream out(output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + output);
  out << monosi::to_json_string(est, link_csv) << "\n";
  if (!out) throw std::runtime_error("write failed: " + output);
  return 0;
}

int run_simulate(const std::string& model, int dim, long long n, long long reps,
                 const std::string& estimators_csv, std::uint64_t seed,
                 const CommonFitFlags& flags, int starts, int threads,
                 const std::string& output) {
  const monosi::ModelSpec spec = model_from_flags(model, dim);
  const auto estimators = parse_estimator_list(estimators_csv);

  monosi::MonteCarloConfig config;
  config.fit = flags.build();
  config.threads = resolve_threads(threads);
  if (starts > 0) {
    config.start_at_truth = false;
    config.fit.starts = monosi::Starts::random_grid(starts, seed);
  }

  const auto summaries = monosi::monte_carlo(spec, estimators, n, reps, seed, config);
  monosi::write_table_csv(summaries, output);

  json manifest;
  manifest["command"] = "simulate";
  manifest["version"] = MONOSI_VERSION;
  manifest["model"] = model;
  manifest["dim"] = dim;
  manifest["n"] = n;
  manifest["reps"] = reps;
  manifest["seed"] = seed;
  manifest["threads"] = config.threads;
  manifest["estimators"] = json::array();
  json failures;
  for (const auto& s : summaries) {
    manifest["estimators"].push_back(monosi::estimator_name(s.estimator));
    failures[monosi::estimator_name(s.estimator)] = s.failures;
  }
  manifest["failures"] = std::move(failures);
  manifest["config"] = {{"formulation", flags.formulation},
                        {"chart", flags.chart},
                        {"bandwidth", flags.bandwidth > 0.0 ? json(flags.bandwidth) : json(nullptr)},
                        {"min_step", flags.min_step},
                        {"initial_step", flags.initial_step},
                        {"starts", starts > 0 ? json(starts) : json("alpha0")}};
  // informational only; byte-level output comparisons exclude the manifest
  manifest["timestamp"] = static_cast<long long>(
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());

  const std::string manifest_path = sibling_path(output, ".manifest.json");
  std::ofstream mout(manifest_path, std::ios::binary);
  if (!mout) throw std::runtime_error("cannot open file for writing: " + manifest_path);
  mout << manifest.dump(2) << "\n";
  if (!mout) throw std::runtime_error("write failed: " + manifest_path);
  return 0;
}

int run_asymptotics(const std::string& model, int dim, const std::string& output) {
  monosi::BenchmarkModel bench;
  if (model == "uniform-cubic") {
    if (dim != 3) throw CLI::ValidationError("--dim", "uniform-cubic requires --dim 3");
    bench = monosi::BenchmarkModel::uniform_cubic_d3();
  } else if (model == "normal-cubic") {
    bench = monosi::BenchmarkModel::normal_cubic(dim);
  } else {
    throw CLI::ValidationError("--model", "expected 'uniform-cubic' or 'normal-cubic'");
  }
  const std::string body = monosi::to_json_string(monosi::benchmark_matrices(bench));
  if (output.empty()) {
    std::cout << body << "\n";
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + output);
    out << body << "\n";
    if (!out) throw std::runtime_error("write failed: " + output);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monosi: monotone single-index model estimation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MONOSI_VERSION);

  auto* fit_cmd = app.add_subcommand("fit", "Fit an estimator to a CSV dataset");
  std::string fit_input, fit_estimator, fit_output;
  int fit_starts = 10;
  std::uint64_t fit_seed = 1;
  CommonFitFlags fit_flags;
  fit_cmd->add_option("--input", fit_input, "Input CSV (columns x1..xd and y)")->required();
  fit_cmd->add_option("--estimator", fit_estimator,
                      "One of sse,ese,lse,mrce,hlflse,lflse,linear-norm1")
      ->required();
  fit_cmd->add_option("--starts", fit_starts, "Random-grid start count");
  fit_cmd->add_option("--seed", fit_seed, "Seed for the random start grid");
  fit_cmd->add_option("--output", fit_output, "Output estimate JSON path")->required();
  fit_flags.add_to(fit_cmd);

  auto* sim_cmd = app.add_subcommand("simulate", "Seeded Monte Carlo study of the estimators");
  std::string sim_model = "uniform-cubic", sim_estimators = "sse", sim_output;
  int sim_dim = 3, sim_threads = 0, sim_starts = 0;
  long long sim_n = 1000, sim_reps = 100;
  std::uint64_t sim_seed = 1;
  CommonFitFlags sim_flags;
  sim_cmd->add_option("--model", sim_model, "uniform-cubic|normal-cubic")->required();
  sim_cmd->add_option("--dim", sim_dim, "Covariate dimension d");
  sim_cmd->add_option("--n", sim_n, "Sample size per replication")->required();
  sim_cmd->add_option("--reps", sim_reps, "Number of replications")->required();
  sim_cmd->add_option("--estimators", sim_estimators, "Comma list, e.g. sse,ese,lse")->required();
  sim_cmd->add_option("--seed", sim_seed, "Master seed");
  sim_cmd->add_option("--starts", sim_starts,
                      "Random-grid start count (default: start at the true alpha0)");
  sim_cmd->add_option("--threads", sim_threads, "Worker threads (or MONOSI_THREADS)");
  sim_cmd->add_option("--output", sim_output, "Output table CSV path")->required();
  sim_flags.add_to(sim_cmd);

  auto* asy_cmd = app.add_subcommand("asymptotics", "Print benchmark reference matrices");
  std::string asy_model = "uniform-cubic", asy_output;
  int asy_dim = 3;
  asy_cmd->add_option("--model", asy_model, "uniform-cubic|normal-cubic")->required();
  asy_cmd->add_option("--dim", asy_dim, "Covariate dimension d");
  asy_cmd->add_option("--output", asy_output, "Optional output JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
    if (fit_cmd->parsed())
      return run_fit(fit_input, fit_estimator, fit_flags, fit_starts, fit_seed, fit_output);
    if (sim_cmd->parsed())
      return run_simulate(sim_model, sim_dim, sim_n, sim_reps, sim_estimators, sim_seed,
                          sim_flags, sim_starts, sim_threads, sim_output);
    if (asy_cmd->parsed()) return run_asymptotics(asy_model, asy_dim, asy_output);
    std::cerr << "error: no subcommand given\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
