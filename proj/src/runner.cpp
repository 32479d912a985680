#include "predint/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "predint/report.hpp"
#include "predint/rng.hpp"

namespace predint::bench {

namespace {

std::vector<std::size_t> bandwidth_grid(const RunConfig& config, std::size_t n,
                                        std::size_t p) {
  const std::size_t lo = p + 2;
  std::vector<std::size_t> grid;
  const std::vector<std::size_t> base =
      config.k_loess_grid.empty()
          ? std::vector<std::size_t>{10, 20, 30, 40, 60, 80, 120}
          : config.k_loess_grid;
  for (std::size_t k : base)
    if (k >= lo && k <= n) grid.push_back(k);
  if (grid.empty()) grid.push_back(std::clamp(n / 5, lo, n));
  return grid;
}

pim::PIMConfig default_config(const std::string& method, double beta, double gamma,
                              std::size_t k_loess, std::size_t n) {
  pim::PIMConfig config;
  config.beta = beta;
  config.gamma = gamma;
  config.k_loess = k_loess;
  if (method == "fixedk") {
    config.method = pim::FixedK{pim::default_fixed_k(n)};
  } else if (method == "vark") {
    config.method = pim::default_var_k_window(n);
  } else if (method == "conventional") {
    config.method = pim::Conventional{};
  } else {
    throw std::invalid_argument("unknown method '" + method + "'");
  }
  return config;
}

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  written.push_back(path);
}

nlohmann::json scheme_json(const loess::CvScheme& scheme) {
  if (scheme.kind == loess::CvScheme::Kind::kLoo) return {{"kind", "loo"}};
  return {{"kind", "kfold"}, {"folds", scheme.folds}, {"seed", scheme.seed}};
}

}  // namespace

RunArtifacts run(const Dataset& dataset, const RunConfig& config) {
  const std::size_t n = dataset.size();
  RunArtifacts artifacts;

  artifacts.scheme = config.scheme.value_or(loess::CvScheme::default_for(n));

  // Regression bandwidth: user override or CV selection over the grid.
  if (config.k_loess) {
    artifacts.k_loess = *config.k_loess;
  } else {
    const auto grid = bandwidth_grid(config, n, dataset.dim());
    artifacts.k_loess =
        loess::select_bandwidth(dataset.x, dataset.y, grid, 10, config.seed);
  }
  artifacts.cv_mse =
      loess::cv_errors(dataset.x, dataset.y, artifacts.k_loess, artifacts.scheme).mse();

  // Tuning pass on a seeded 2/3 subsample.
  numkit::Matrix tune_x;
  std::vector<double> tune_y;
  loess::ErrorSet tune_errors;
  const bool needs_tuning =
      config.tune &&
      std::any_of(config.methods.begin(), config.methods.end(),
                  [](const std::string& m) { return m != "conventional"; });
  if (needs_tuning) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng::Engine eng(rng::derive_seed(config.seed, 0x74756e65ULL));
    rng::shuffle(order, eng);
    const std::size_t subset = (2 * n + 2) / 3;
    order.resize(subset);
    std::sort(order.begin(), order.end());
    tune_x = numkit::Matrix(subset, dataset.dim());
    tune_y.resize(subset);
    for (std::size_t r = 0; r < subset; ++r) {
      std::copy(dataset.x.row(order[r]).begin(), dataset.x.row(order[r]).end(),
                tune_x.row(r).begin());
      tune_y[r] = dataset.y[order[r]];
    }
    const std::size_t k_tune = std::min(artifacts.k_loess, subset);
    tune_errors = loess::cv_errors(tune_x, tune_y, k_tune, artifacts.scheme);
  }

  std::vector<eval::MethodPlan> plans;
  for (const auto& method : config.methods) {
    eval::MethodPlan plan;
    plan.name = method;
    for (double beta : config.betas) {
      if (config.tune && method != "conventional") {
        const auto kind =
            method == "fixedk" ? pim::MethodKind::kFixedK : pim::MethodKind::kVarK;
        if (method != "fixedk" && method != "vark")
          throw std::invalid_argument("unknown method '" + method + "'");
        auto result = pim::tune(tune_x, tune_y, tune_errors, artifacts.k_loess, beta,
                                kind, config.search);
        plan.per_beta.emplace(beta, result.config);
        artifacts.tuning.push_back({method, beta, std::move(result)});
      } else {
        plan.per_beta.emplace(
            beta, default_config(method, beta, config.gamma, artifacts.k_loess, n));
      }
    }
    plans.push_back(std::move(plan));
  }

  eval::CompareConfig compare_config;
  compare_config.betas = config.betas;
  compare_config.folds = config.folds;
  compare_config.seed = config.seed;
  compare_config.k_loess = artifacts.k_loess;
  compare_config.error_scheme = artifacts.scheme;
  compare_config.alpha = config.alpha;
  compare_config.use_egsd_literal = config.egsd_literal;
  compare_config.dataset_name = dataset.name;
  artifacts.report = eval::compare(dataset.x, dataset.y, plans, compare_config);

  nlohmann::json j = report_to_json(artifacts.report);
  j["dataset_info"] = {{"name", dataset.name},
                       {"n", n},
                       {"p", dataset.dim()},
                       {"source", dataset.source},
                       {"dropped_rows", dataset.dropped_rows},
                       {"constant_columns", dataset.constant_columns},
                       {"response", dataset.response_name}};
  j["config"] = {{"methods", config.methods}, {"betas", config.betas},
                 {"folds", config.folds},     {"seed", config.seed},
                 {"tune", config.tune},       {"gamma", config.gamma},
                 {"alpha", config.alpha},     {"egsd_literal", config.egsd_literal}};
  j["k_loess"] = artifacts.k_loess;
  j["cv_mse"] = artifacts.cv_mse;
  j["error_scheme"] = scheme_json(artifacts.scheme);
  j["tuning"] = nlohmann::json::array();
  for (const auto& record : artifacts.tuning) {
    nlohmann::json t;
    t["method"] = record.method;
    t["beta"] = record.beta;
    t["gamma"] = record.result.config.gamma;
    if (const auto* fixed = std::get_if<pim::FixedK>(&record.result.config.method)) {
      t["k"] = fixed->k;
    } else if (const auto* var = std::get_if<pim::VarK>(&record.result.config.method)) {
      t["min_k"] = var->min_k;
      t["max_k"] = var->max_k;
    }
    t["train_mip"] = record.result.score.mip;
    t["train_mis"] = record.result.score.mis;
    t["feasible"] = record.result.feasible;
    t["neighborhood_within_regression"] = record.result.neighborhood_within_regression;
    t["evaluations"] = record.result.evaluations;
    j["tuning"].push_back(std::move(t));
  }
  artifacts.json = std::move(j);

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    const auto path = [&](const std::string& name) {
      return (std::filesystem::path(config.out_dir) / name).string();
    };
    write_file(path("report.json"), artifacts.json.dump(2) + "\n",
               artifacts.files_written);
    write_file(path("report.csv"), report_csv(artifacts.report),
               artifacts.files_written);
    write_file(path("charts.csv"), chart_csv(artifacts.report),
               artifacts.files_written);
    if (config.svg) {
      write_file(path("chart_mip.svg"), chart_svg(artifacts.report, "obtained_mip"),
                 artifacts.files_written);
      write_file(path("chart_egsd.svg"),
                 chart_svg(artifacts.report, "normalized_egsd"),
                 artifacts.files_written);
      write_file(path("chart_mis.svg"), chart_svg(artifacts.report, "normalized_mis"),
                 artifacts.files_written);
    }
  }
  return artifacts;
}

}  // namespace predint::bench
