// Command line front end: synthetic data generation, bandwidth fitting,
// one-off interval prediction, and the benchmark harness.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "predint/dataset.hpp"
#include "predint/loess.hpp"
#include "predint/pim.hpp"
#include "predint/report.hpp"
#include "predint/runner.hpp"

namespace {

using namespace predint;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct DataArgs {
  std::string csv_path;
  std::string response;
  std::string generator;
  std::size_t n = 1000;
  std::size_t p = 1;
  double noise_sd = 1.0;
  std::uint64_t seed = 42;
};

void add_data_options(CLI::App* cmd, DataArgs& args) {
  cmd->add_option("--data", args.csv_path, "input CSV (header row, numeric columns)");
  cmd->add_option("--response", args.response,
                  "response column name or zero-based index (default: last)");
  cmd->add_option("--gen", args.generator, "synthetic generator: affine|sine-hetero|step");
  cmd->add_option("--n", args.n, "synthetic sample size");
  cmd->add_option("--p", args.p, "synthetic predictor count");
  cmd->add_option("--noise-sd", args.noise_sd, "noise level for affine/step");
  cmd->add_option("--seed", args.seed, "random seed");
}

bench::Dataset load_data(const DataArgs& args) {
  if (!args.csv_path.empty() && !args.generator.empty())
    throw CLI::ValidationError("--data and --gen are mutually exclusive");
  if (!args.csv_path.empty()) {
    bench::CsvOptions options;
    if (!args.response.empty()) options.response = args.response;
    return bench::load_csv(args.csv_path, options);
  }
  if (!args.generator.empty()) {
    bench::SynthSpec spec;
    spec.kind = bench::parse_synth_kind(args.generator);
    spec.n = args.n;
    spec.p = args.p;
    spec.noise_sd = args.noise_sd;
    spec.seed = args.seed;
    return bench::gen_synthetic(spec);
  }
  throw CLI::ValidationError("one of --data or --gen is required");
}

std::optional<loess::CvScheme> parse_scheme(const std::string& scheme) {
  if (scheme.empty() || scheme == "auto") return std::nullopt;
  if (scheme == "loo") return loess::CvScheme::loo();
  if (scheme == "kfold") return loess::CvScheme::kfold(10, 42);
  throw CLI::ValidationError("--scheme must be loo, kfold or auto");
}

std::vector<double> parse_query(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) values.push_back(std::stod(field));
  return values;
}

int run_synth(const DataArgs& data, const std::string& out) {
  DataArgs args = data;
  if (args.generator.empty()) args.generator = "sine-hetero";
  args.csv_path.clear();
  const auto dataset = load_data(args);
  bench::write_csv(dataset, out);
  std::cout << "wrote " << dataset.size() << " rows (" << dataset.dim()
            << " predictors) to " << out << "\n";
  return kExitOk;
}

int run_fit(const DataArgs& data, std::vector<std::size_t> grid, std::size_t folds,
            std::uint64_t seed, const std::string& scheme) {
  const auto dataset = load_data(data);
  if (grid.empty()) grid = {10, 20, 30, 40, 60, 80, 120};
  std::vector<std::size_t> usable;
  for (std::size_t k : grid)
    if (k >= dataset.dim() + 2 && k <= dataset.size()) usable.push_back(k);
  if (usable.empty()) throw CLI::ValidationError("no usable --grid-kloess candidate");
  const std::size_t k = loess::select_bandwidth(dataset.x, dataset.y, usable, folds, seed);
  const auto cv_scheme =
      parse_scheme(scheme).value_or(loess::CvScheme::default_for(dataset.size()));
  const auto errors = loess::cv_errors(dataset.x, dataset.y, k, cv_scheme);
  nlohmann::json j{{"dataset", dataset.name},
                   {"n", dataset.size()},
                   {"p", dataset.dim()},
                   {"k_loess", k},
                   {"cv_mse", errors.mse()},
                   {"cv_rmse", errors.sse()},
                   {"dropped_rows", dataset.dropped_rows}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int run_interval(const DataArgs& data, const std::string& method, double beta,
                 double gamma, std::optional<std::size_t> k_loess,
                 std::optional<std::size_t> k, std::optional<std::size_t> min_k,
                 std::optional<std::size_t> max_k, const std::string& scheme,
                 const std::vector<std::string>& queries) {
  const auto dataset = load_data(data);
  const std::size_t n = dataset.size();
  const std::size_t kl =
      k_loess.value_or(std::clamp<std::size_t>(n / 5, dataset.dim() + 2, n));
  const auto model = loess::fit(dataset.x, dataset.y, kl);
  const auto cv_scheme = parse_scheme(scheme).value_or(loess::CvScheme::default_for(n));
  const auto errors = loess::cv_errors(dataset.x, dataset.y, kl, cv_scheme);

  pim::PIMConfig config;
  config.beta = beta;
  config.gamma = gamma;
  config.k_loess = kl;
  if (method == "fixedk") {
    config.method = pim::FixedK{k.value_or(pim::default_fixed_k(n))};
  } else if (method == "vark") {
    const auto defaults = pim::default_var_k_window(n);
    config.method =
        pim::VarK{min_k.value_or(defaults.min_k), max_k.value_or(defaults.max_k)};
  } else if (method == "conventional")
    config.method = pim::Conventional{};
  else
    throw CLI::ValidationError("--method must be fixedk, vark or conventional");

  for (const auto& query : queries) {
    const auto raw = parse_query(query);
    if (raw.size() != dataset.dim())
      throw bench::DataError("query '" + query + "' has " +
                             std::to_string(raw.size()) + " coordinates, expected " +
                             std::to_string(dataset.dim()));
    const auto point = dataset.standardize(raw);
    const Interval interval = pim::predict_interval(model, errors, point, config);
    nlohmann::json j{{"query", raw},
                     {"prediction", model.predict(point)},
                     {"lower", interval.lower},
                     {"upper", interval.upper},
                     {"width", interval.width()}};
    std::cout << j.dump() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beta-content predictive intervals for local linear regression"};
  app.require_subcommand(1);

  DataArgs synth_args, fit_args, interval_args, bench_args;

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset as CSV");
  add_data_options(synth, synth_args);
  std::string synth_out = "synthetic.csv";
  synth->add_option("--out", synth_out, "output CSV path");

  auto* fit = app.add_subcommand("fit", "select the regression bandwidth by CV");
  add_data_options(fit, fit_args);
  std::vector<std::size_t> fit_grid;
  std::size_t fit_folds = 10;
  std::string fit_scheme = "auto";
  fit->add_option("--grid-kloess", fit_grid, "bandwidth candidates")->delimiter(',');
  fit->add_option("--folds", fit_folds, "CV folds for bandwidth selection");
  fit->add_option("--scheme", fit_scheme, "error scheme: loo|kfold|auto");

  auto* interval = app.add_subcommand("interval", "predict intervals at query points");
  add_data_options(interval, interval_args);
  std::string interval_method = "vark";
  double interval_beta = 0.9, interval_gamma = 0.9;
  std::optional<std::size_t> interval_kloess, interval_k, interval_min_k, interval_max_k;
  std::string interval_scheme = "auto";
  std::vector<std::string> interval_queries;
  interval->add_option("--method", interval_method, "fixedk|vark|conventional");
  interval->add_option("--beta", interval_beta, "desired content");
  interval->add_option("--gamma", interval_gamma, "tolerance confidence level");
  interval->add_option("--kloess", interval_kloess, "regression bandwidth");
  interval->add_option("--k", interval_k, "fixed neighborhood size");
  interval->add_option("--min-k", interval_min_k, "variable-K lower bound");
  interval->add_option("--max-k", interval_max_k, "variable-K upper bound");
  interval->add_option("--scheme", interval_scheme, "error scheme: loo|kfold|auto");
  interval->add_option("--query", interval_queries, "comma-separated raw coordinates")
      ->required();

  auto* bench_cmd = app.add_subcommand("bench", "cross-validated method comparison");
  add_data_options(bench_cmd, bench_args);
  bench::RunConfig run_config;
  std::string bench_scheme = "auto";
  bool no_tune = false;
  bench_cmd->add_option("--methods", run_config.methods,
                        "methods: fixedk,vark,conventional")
      ->delimiter(',');
  bench_cmd->add_option("--beta", run_config.betas, "nominal content (repeatable)");
  bench_cmd->add_option("--folds", run_config.folds, "evaluation folds");
  bench_cmd->add_option("--gamma", run_config.gamma, "gamma when tuning is off");
  bench_cmd->add_flag("--no-tune", no_tune, "skip the hyper-parameter tuning pass");
  bench_cmd->add_option("--kloess", run_config.k_loess, "regression bandwidth");
  bench_cmd->add_option("--grid-kloess", run_config.k_loess_grid,
                        "bandwidth candidates")
      ->delimiter(',');
  bench_cmd->add_option("--scheme", bench_scheme, "error scheme: loo|kfold|auto");
  bench_cmd->add_option("--alpha", run_config.alpha, "PIM test significance level");
  bench_cmd->add_flag("--egsd-literal", run_config.egsd_literal,
                      "use the compatibility EGSD variant");
  bench_cmd->add_option("--out-dir", run_config.out_dir, "artifact directory");
  bench_cmd->add_flag("--svg", run_config.svg, "also render static SVG charts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) return run_synth(synth_args, synth_out);
    if (fit->parsed())
      return run_fit(fit_args, fit_grid, fit_folds, fit_args.seed, fit_scheme);
    if (interval->parsed())
      return run_interval(interval_args, interval_method, interval_beta,
                          interval_gamma, interval_kloess, interval_k,
                          interval_min_k, interval_max_k, interval_scheme,
                          interval_queries);
    if (bench_cmd->parsed()) {
      run_config.seed = bench_args.seed;
      run_config.tune = !no_tune;
      run_config.scheme = parse_scheme(bench_scheme);
      const auto dataset = load_data(bench_args);
      const auto artifacts = bench::run(dataset, run_config);
      std::printf("%-14s %6s %8s %8s %8s %10s %6s\n", "method", "beta", "MIP",
                  "MIS", "sigma_is", "threshold", "PIM");
      for (const auto& row : artifacts.report.rows) {
        if (!row.valid) {
          std::printf("%-14s %6.3g %s\n", row.method.c_str(), row.beta,
                      ("invalid: " + row.error).c_str());
          continue;
        }
        std::printf("%-14s %6.3g %8.4f %8.4f %8.4f %10.4f %6s\n", row.method.c_str(),
                    row.beta, row.mip, row.mis, row.sigma_is, row.threshold,
                    row.pim_pass ? "pass" : "FAIL");
      }
      for (const auto& file : artifacts.files_written)
        std::cout << "wrote " << file << "\n";
      return kExitOk;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const predint::bench::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
