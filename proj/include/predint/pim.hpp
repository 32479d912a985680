#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "predint/interval.hpp"
#include "predint/loess.hpp"
#include "predint/tolerance.hpp"

namespace predint::pim {

struct FixedK {
  std::size_t k;
};
struct VarK {
  std::size_t min_k;
  std::size_t max_k;
};
struct Conventional {};

using Method = std::variant<FixedK, VarK, Conventional>;

struct PIMConfig {
  double beta = 0.9;
  double gamma = 0.9;  // ignored by Conventional
  Method method = Conventional{};
  std::size_t k_loess = 0;
};

// Throws unless the config is usable against a training set of size n.
// Neighborhood sizes are floored at 3: a two-point tolerance interval is
// legal but explodes.
void validate(const PIMConfig& config, std::size_t n);

// The k training points nearest to a query together with their stored
// out-of-sample errors (ascending distance order) and the error sample stats.
struct ErrorNeighborhood {
  std::vector<std::size_t> indices;
  std::vector<double> errors;
  tolerance::SampleStats stats;
};

ErrorNeighborhood error_neighborhood(const loess::LoessModel& model,
                                     const loess::ErrorSet& errors,
                                     std::span<const double> x, std::size_t k);

// beta-content gamma-coverage normal tolerance interval of an error sample.
Interval error_tolerance(std::span<const double> errors, double beta, double gamma);

// Prediction shifted by the tolerance interval of the k nearest stored
// errors. The center lands on prediction + mean(errors): the local sample
// bias is folded in rather than neglected.
Interval fixed_k_interval(const loess::LoessModel& model, const loess::ErrorSet& errors,
                          std::span<const double> x, const PIMConfig& config);

// Scans k in [min_k, max_k] and keeps the narrowest error tolerance
// interval; ties go to the smallest k.
Interval var_k_interval(const loess::LoessModel& model, const loess::ErrorSet& errors,
                        std::span<const double> x, const PIMConfig& config);

// prediction +/- z_{(1+beta)/2} * sse; width is constant over the predictor
// space.
Interval conventional_interval(const loess::LoessModel& model, double sse,
                               std::span<const double> x, double beta);

Interval predict_interval(const loess::LoessModel& model, const loess::ErrorSet& errors,
                          std::span<const double> x, const PIMConfig& config);

enum class MethodKind { kFixedK, kVarK };

// Default starting neighborhoods for a training set of size n. The variable-K
// window components cross for large n (n/40 outgrows the 60 cap); the lower
// bound then falls back to a window 40 wide below the cap.
std::size_t default_fixed_k(std::size_t n);
VarK default_var_k_window(std::size_t n);

struct SearchConfig {
  std::vector<double> gamma_ladder = {0.99, 0.95, 0.9, 0.8, 0.7,
                                      0.6,  0.5,  0.4, 0.3, 0.25};
  std::size_t neighborhood_step = 5;
  std::size_t max_iterations = 3;
  std::optional<std::size_t> initial_k;                               // FixedK
  std::optional<std::pair<std::size_t, std::size_t>> initial_window;  // VarK
  // Largest neighborhood the walk may reach. Defaults to
  // max(2 k_loess, 60): error neighborhoods are meant to stay near the
  // regression neighborhood, and coverage tracks locality poorly beyond it.
  std::optional<std::size_t> k_cap;
};

struct TrainScore {
  double mip = 0.0;
  double mis = 0.0;
};

struct TuneResult {
  PIMConfig config;
  TrainScore score;
  bool feasible = false;                 // training MIP >= beta was achieved
  bool neighborhood_within_regression = false;  // neighborhood stays inside k_loess
  std::size_t evaluations = 0;
};

// Greedy schedule over (neighborhood, gamma): widen the neighborhood while
// the coverage constraint holds and MIS improves, then walk gamma down the
// ladder while coverage holds; repeated up to max_iterations. Every evaluated
// candidate competes in the final selection (feasible first, then MIS, then
// smaller neighborhood, then smaller gamma), so the outcome does not depend
// on evaluation order. With no feasible candidate the best-coverage config is
// returned and flagged.
TuneResult tune(const numkit::Matrix& x, std::span<const double> y,
                const loess::ErrorSet& errors, std::size_t k_loess, double beta,
                MethodKind kind, const SearchConfig& search = {});

// Training-set coverage/size score of a config, evaluated out-of-sample:
// each instance is scored with its stored error's prediction and a
// neighborhood that excludes the instance itself.
TrainScore score_on_training(const numkit::Matrix& x, std::span<const double> y,
                             const loess::ErrorSet& errors, const PIMConfig& config);

}  // namespace predint::pim
