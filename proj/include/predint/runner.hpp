#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "predint/dataset.hpp"
#include "predint/eval.hpp"
#include "predint/pim.hpp"

namespace predint::bench {

struct RunConfig {
  std::vector<std::string> methods = {"fixedk", "vark", "conventional"};
  std::vector<double> betas = {0.8, 0.9, 0.95, 0.99};
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  bool tune = true;
  double gamma = 0.9;  // used by fixedk/vark when tuning is off

  std::optional<std::size_t> k_loess;       // overrides bandwidth selection
  std::vector<std::size_t> k_loess_grid;    // candidates when selecting
  std::optional<loess::CvScheme> scheme;    // error-set scheme; default by n
  double alpha = 0.05;
  bool egsd_literal = false;
  pim::SearchConfig search;

  std::string out_dir;  // empty: nothing written
  bool svg = false;
};

struct TuneRecord {
  std::string method;
  double beta = 0.0;
  pim::TuneResult result;
};

struct RunArtifacts {
  eval::EvalReport report;
  std::size_t k_loess = 0;
  double cv_mse = 0.0;
  loess::CvScheme scheme;
  std::vector<TuneRecord> tuning;
  nlohmann::json json;
  std::vector<std::string> files_written;
};

// Full harness pass over one dataset: bandwidth selection, an optional
// tuning pass on a seeded 2/3 subsample, then the k-fold evaluation.
// Artifacts (report.json, report.csv, charts.csv, optional SVGs) go to
// out_dir when it is set.
RunArtifacts run(const Dataset& dataset, const RunConfig& config);

}  // namespace predint::bench
