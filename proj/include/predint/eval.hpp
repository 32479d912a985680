#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "predint/interval.hpp"
#include "predint/loess.hpp"
#include "predint/pim.hpp"

namespace predint::eval {

// Out-of-fold intervals and the responses they were scored against.
struct MethodRun {
  std::string method;
  double beta = 0.0;
  std::vector<Interval> intervals;
  std::vector<double> responses;
};

// Fraction of responses inside their interval (closed membership).
double mip(const MethodRun& run);

// Mean interval width.
double mis(const MethodRun& run);

// Sample standard deviation of interval widths (divisor n-1).
double sigma_is(const MethodRun& run);

// One-sided lower acceptance bound for an observed inclusion fraction:
//   F = beta + z_alpha * sqrt(beta (1-beta) / n_v)
// the normal approximation to the binomial test of H0: content >= beta.
double pim_threshold(double beta, std::size_t n_v, double alpha = 0.05);

struct PimTest {
  bool pass = false;
  double threshold = 0.0;
  bool small_sample = false;  // n_v < 30, normal approximation is shaky
};

PimTest pim_test(double mip_value, double beta, std::size_t n_v, double alpha = 0.05);

// Standard deviation of the normal distribution whose mip-content
// inter-quantile width equals the observed mean interval size. Smaller means
// a more efficient envelope.
double egsd(double mis_value, double mip_value);

// Variant dividing by 2 z_{1-(1-beta)/2} * mip instead; kept for
// compatibility behind a flag.
double egsd_literal(double mis_value, double mip_value, double beta);

// Each value divided by the maximum; the maximum maps to 1.
std::vector<double> normalize_to_max(std::span<const double> values);

// Smallest nominal beta at which the test fails; input sorted by beta.
std::optional<double> failure_mip(
    std::span<const std::pair<double, bool>> beta_pass_sorted);

struct ReportRow {
  std::string method;
  double beta = 0.0;
  double mip = 0.0;
  double mis = 0.0;
  double sigma_is = 0.0;
  std::optional<double> egsd;            // absent when MIP is 0 or 1
  std::optional<double> normalized_egsd;
  std::optional<double> normalized_mis;  // absent when the PIM test fails
  double threshold = 0.0;
  bool pim_pass = false;
  bool small_sample = false;
  bool valid = true;
  std::string error;
};

struct ChartPoint {
  double beta = 0.0;
  std::string method;  // empty for the constraint / nominal lines
  double value = 0.0;
  std::string line_kind;
};

struct EvalReport {
  std::string dataset;
  std::size_t n_v = 0;
  std::vector<ReportRow> rows;  // method-major, beta-minor
  std::vector<std::pair<std::string, std::optional<double>>> failure_mips;
  std::vector<ChartPoint> chart;
};

// One interval method to evaluate, with a (possibly tuned) config per beta.
struct MethodPlan {
  std::string name;
  std::map<double, pim::PIMConfig> per_beta;
};

struct CompareConfig {
  std::vector<double> betas;
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  std::size_t k_loess = 0;
  loess::CvScheme error_scheme;
  double alpha = 0.05;
  bool use_egsd_literal = false;
  std::string dataset_name;
};

// k-fold evaluation harness: every instance receives an out-of-fold interval
// from every method at every beta. The conventional baseline keeps a single
// dataset-level SSE so its width is constant across the whole report. Cell
// failures are recorded in the affected rows instead of aborting.
EvalReport compare(const numkit::Matrix& x, std::span<const double> y,
                   const std::vector<MethodPlan>& methods, const CompareConfig& config);

}  // namespace predint::eval
