#include "predint/eval.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "predint/numkit.hpp"
#include "predint/parallel.hpp"
#include "predint/rng.hpp"

namespace predint::eval {

using numkit::Matrix;

namespace {

void check_run(const MethodRun& run, std::size_t min_n = 1) {
  if (run.intervals.size() != run.responses.size() || run.intervals.size() < min_n)
    throw std::invalid_argument("eval: run needs aligned intervals and responses");
}

}  // namespace

double mip(const MethodRun& run) {
  check_run(run);
  std::size_t covered = 0;
  for (std::size_t i = 0; i < run.intervals.size(); ++i)
    if (run.intervals[i].contains(run.responses[i])) ++covered;
  return static_cast<double>(covered) / static_cast<double>(run.intervals.size());
}

double mis(const MethodRun& run) {
  check_run(run);
  double sum = 0.0;
  for (const auto& interval : run.intervals) sum += interval.width();
  return sum / static_cast<double>(run.intervals.size());
}

double sigma_is(const MethodRun& run) {
  check_run(run, 2);
  const double mean = mis(run);
  double ss = 0.0;
  for (const auto& interval : run.intervals) {
    const double d = interval.width() - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(run.intervals.size() - 1));
}

double pim_threshold(double beta, std::size_t n_v, double alpha) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("pim_threshold: beta must lie in (0,1)");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("pim_threshold: alpha must lie in (0,1)");
  if (n_v == 0) throw std::invalid_argument("pim_threshold: empty evaluation set");
  const double z = numkit::normal_quantile(alpha);
  return beta + z * std::sqrt(beta * (1.0 - beta) / static_cast<double>(n_v));
}

PimTest pim_test(double mip_value, double beta, std::size_t n_v, double alpha) {
  PimTest result;
  result.threshold = pim_threshold(beta, n_v, alpha);
  result.pass = mip_value >= result.threshold;
  result.small_sample = n_v < 30;
  return result;
}

double egsd(double mis_value, double mip_value) {
  if (!(mip_value > 0.0 && mip_value < 1.0))
    throw std::invalid_argument("egsd: undefined for MIP of 0 or 1");
  if (!(mis_value >= 0.0)) throw std::invalid_argument("egsd: negative MIS");
  return mis_value / (2.0 * numkit::normal_quantile(0.5 * (1.0 + mip_value)));
}

double egsd_literal(double mis_value, double mip_value, double beta) {
  if (!(mip_value > 0.0 && mip_value < 1.0))
    throw std::invalid_argument("egsd: undefined for MIP of 0 or 1");
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("egsd: beta must lie in (0,1)");
  const double alpha = 1.0 - beta;
  return mis_value /
         (2.0 * numkit::normal_quantile(1.0 - 0.5 * alpha) * mip_value);
}

std::vector<double> normalize_to_max(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("normalize: empty input");
  double max = values[0];
  for (double v : values) {
    if (!(v > 0.0)) throw std::invalid_argument("normalize: values must be positive");
    max = std::max(max, v);
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(v / max);
  return out;
}

std::optional<double> failure_mip(
    std::span<const std::pair<double, bool>> beta_pass_sorted) {
  for (const auto& [beta, pass] : beta_pass_sorted)
    if (!pass) return beta;
  return std::nullopt;
}

namespace {

struct FoldData {
  std::vector<std::size_t> test_indices;
  std::optional<loess::LoessModel> model;
  loess::ErrorSet errors;  // over the fold's training subset
  std::string error;       // nonempty when the fold could not be prepared
};

Matrix subset_rows(const Matrix& x, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), x.cols());
  for (std::size_t r = 0; r < indices.size(); ++r)
    std::copy(x.row(indices[r]).begin(), x.row(indices[r]).end(), out.row(r).begin());
  return out;
}

// Clamp a method's neighborhood to the fold's training size.
pim::PIMConfig clamp_config(pim::PIMConfig config, std::size_t train_size) {
  if (auto* fixed = std::get_if<pim::FixedK>(&config.method)) {
    fixed->k = std::min(fixed->k, train_size);
  } else if (auto* var = std::get_if<pim::VarK>(&config.method)) {
    var->max_k = std::min(var->max_k, train_size);
    var->min_k = std::min(var->min_k, var->max_k);
  }
  return config;
}

}  // namespace

EvalReport compare(const Matrix& x, std::span<const double> y,
                   const std::vector<MethodPlan>& methods, const CompareConfig& config) {
  const std::size_t n = x.rows();
  if (n == 0 || n != y.size()) throw std::invalid_argument("compare: size mismatch");
  if (methods.empty()) throw std::invalid_argument("compare: need at least one method");
  if (config.betas.empty()) throw std::invalid_argument("compare: need at least one beta");
  if (config.folds < 2 || config.folds > n)
    throw std::invalid_argument("compare: folds must lie in [2, n]");

  EvalReport report;
  report.dataset = config.dataset_name;
  report.n_v = n;

  const auto fold_of = rng::kfold_assignment(n, config.folds, config.seed);

  bool need_neighbor_errors = false;
  bool need_conventional = false;
  for (const auto& plan : methods)
    for (const auto& [beta, cfg] : plan.per_beta) {
      if (std::holds_alternative<pim::Conventional>(cfg.method))
        need_conventional = true;
      else
        need_neighbor_errors = true;
    }

  // A single dataset-level SSE keeps the conventional width constant across
  // folds (and sigma_is exactly at the homoscedastic floor).
  double global_sse = 0.0;
  if (need_conventional)
    global_sse = loess::cv_errors(x, y, config.k_loess, config.error_scheme).sse();

  std::vector<FoldData> folds(config.folds);
  parallel_for(config.folds, [&](std::size_t f) {
    FoldData& fold = folds[f];
    std::vector<std::size_t> train;
    train.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (fold_of[i] == f)
        fold.test_indices.push_back(i);
      else
        train.push_back(i);
    }
    try {
      const Matrix train_x = subset_rows(x, train);
      std::vector<double> train_y;
      train_y.reserve(train.size());
      for (std::size_t i : train) train_y.push_back(y[i]);
      const std::size_t k = std::min(config.k_loess, train.size());
      fold.model.emplace(loess::fit(train_x, train_y, k));
      if (need_neighbor_errors)
        fold.errors = loess::cv_errors(train_x, train_y, k, config.error_scheme);
    } catch (const std::exception& e) {
      fold.error = e.what();
    }
  });

  struct Cell {
    MethodRun run;
    std::string error;
  };
  std::vector<Cell> cells(methods.size() * config.betas.size());
  const auto cell_at = [&](std::size_t m, std::size_t b) -> Cell& {
    return cells[m * config.betas.size() + b];
  };

  parallel_for(cells.size(), [&](std::size_t c) {
    const std::size_t m = c / config.betas.size();
    const std::size_t b = c % config.betas.size();
    const double beta = config.betas[b];
    Cell& cell = cells[c];
    cell.run.method = methods[m].name;
    cell.run.beta = beta;
    const auto it = methods[m].per_beta.find(beta);
    if (it == methods[m].per_beta.end()) {
      cell.error = "no config for this beta";
      return;
    }
    cell.run.intervals.resize(n);
    cell.run.responses.assign(y.begin(), y.end());
    try {
      for (const auto& fold : folds) {
        if (!fold.error.empty()) throw std::runtime_error(fold.error);
        const auto cfg = clamp_config(it->second, fold.model->size());
        for (std::size_t i : fold.test_indices) {
          if (std::holds_alternative<pim::Conventional>(cfg.method))
            cell.run.intervals[i] =
                pim::conventional_interval(*fold.model, global_sse, x.row(i), beta);
          else
            cell.run.intervals[i] =
                pim::predict_interval(*fold.model, fold.errors, x.row(i), cfg);
        }
      }
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });

  // Rows in method-major order; measures and the PIM test per cell.
  report.rows.resize(cells.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t b = 0; b < config.betas.size(); ++b) {
      const Cell& cell = cell_at(m, b);
      ReportRow& row = report.rows[m * config.betas.size() + b];
      row.method = methods[m].name;
      row.beta = config.betas[b];
      if (!cell.error.empty()) {
        row.valid = false;
        row.error = cell.error;
        continue;
      }
      row.mip = mip(cell.run);
      row.mis = mis(cell.run);
      row.sigma_is = n >= 2 ? sigma_is(cell.run) : 0.0;
      const PimTest test = pim_test(row.mip, row.beta, n, config.alpha);
      row.threshold = test.threshold;
      row.pim_pass = test.pass;
      row.small_sample = test.small_sample;
      if (row.mip > 0.0 && row.mip < 1.0)
        row.egsd = config.use_egsd_literal
                       ? egsd_literal(row.mis, row.mip, row.beta)
                       : egsd(row.mis, row.mip);
    }
  }

  // Per-beta normalization: EGSD over every method that has one, MIS over
  // the methods that pass the PIM test.
  for (std::size_t b = 0; b < config.betas.size(); ++b) {
    std::vector<std::size_t> egsd_rows;
    std::vector<std::size_t> passing_rows;
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const std::size_t r = m * config.betas.size() + b;
      if (!report.rows[r].valid) continue;
      if (report.rows[r].egsd) egsd_rows.push_back(r);
      if (report.rows[r].pim_pass && report.rows[r].mis > 0.0) passing_rows.push_back(r);
    }
    if (!egsd_rows.empty()) {
      std::vector<double> egsds;
      for (std::size_t r : egsd_rows) egsds.push_back(*report.rows[r].egsd);
      const auto norm = normalize_to_max(egsds);
      for (std::size_t i = 0; i < egsd_rows.size(); ++i)
        report.rows[egsd_rows[i]].normalized_egsd = norm[i];
    }
    if (!passing_rows.empty()) {
      std::vector<double> sizes;
      for (std::size_t r : passing_rows) sizes.push_back(report.rows[r].mis);
      const auto norm = normalize_to_max(sizes);
      for (std::size_t i = 0; i < passing_rows.size(); ++i)
        report.rows[passing_rows[i]].normalized_mis = norm[i];
    }
  }

  auto betas_sorted = config.betas;
  std::sort(betas_sorted.begin(), betas_sorted.end());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::vector<std::pair<double, bool>> beta_pass;
    for (double beta : betas_sorted) {
      for (std::size_t b = 0; b < config.betas.size(); ++b) {
        const auto& row = report.rows[m * config.betas.size() + b];
        if (row.beta == beta && row.valid) beta_pass.emplace_back(beta, row.pim_pass);
      }
    }
    report.failure_mips.emplace_back(methods[m].name, failure_mip(beta_pass));
  }

  for (const auto& row : report.rows) {
    if (!row.valid) continue;
    report.chart.push_back({row.beta, row.method, row.mip, "obtained_mip"});
    if (row.normalized_egsd)
      report.chart.push_back(
          {row.beta, row.method, *row.normalized_egsd, "normalized_egsd"});
    if (row.normalized_mis)
      report.chart.push_back({row.beta, row.method, *row.normalized_mis, "normalized_mis"});
  }
  for (double beta : betas_sorted) {
    report.chart.push_back({beta, "", pim_threshold(beta, n, config.alpha), "mip_constraint"});
    report.chart.push_back({beta, "", beta, "nominal_mip"});
  }
  return report;
}

}  // namespace predint::eval
