#include "predint/pim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "predint/numkit.hpp"

namespace predint::pim {

using loess::ErrorSet;
using loess::LoessModel;
using numkit::Matrix;

void validate(const PIMConfig& config, std::size_t n) {
  if (!(config.beta > 0.0 && config.beta < 1.0))
    throw std::invalid_argument("pim: beta must lie in (0,1)");
  if (std::holds_alternative<Conventional>(config.method)) return;
  if (!(config.gamma > 0.0 && config.gamma < 1.0))
    throw std::invalid_argument("pim: gamma must lie in (0,1)");
  if (const auto* fixed = std::get_if<FixedK>(&config.method)) {
    if (fixed->k < 3 || fixed->k > n)
      throw std::invalid_argument("pim: fixed K must lie in [3, n]");
  } else if (const auto* var = std::get_if<VarK>(&config.method)) {
    if (var->min_k < 3 || var->min_k > var->max_k || var->max_k > n)
      throw std::invalid_argument("pim: need 3 <= MIN_K <= MAX_K <= n");
  }
}

Interval error_tolerance(std::span<const double> errors, double beta, double gamma) {
  return tolerance::normal_tolerance_interval(
      tolerance::SampleStats::from_sample(errors), {beta, gamma});
}

ErrorNeighborhood error_neighborhood(const LoessModel& model, const ErrorSet& errors,
                                     std::span<const double> x, std::size_t k) {
  if (errors.errors.size() != model.size())
    throw std::invalid_argument("pim: error set not aligned with the model");
  const auto neighbors = numkit::nearest_neighbors(model.predictors(), x, k);
  ErrorNeighborhood nb;
  nb.indices.reserve(k);
  nb.errors.reserve(k);
  for (const auto& n : neighbors) {
    nb.indices.push_back(n.index);
    nb.errors.push_back(errors.errors[n.index]);
  }
  nb.stats = tolerance::SampleStats::from_sample(nb.errors);
  return nb;
}

Interval fixed_k_interval(const LoessModel& model, const ErrorSet& errors,
                          std::span<const double> x, const PIMConfig& config) {
  validate(config, model.size());
  const auto* fixed = std::get_if<FixedK>(&config.method);
  if (fixed == nullptr) throw std::invalid_argument("fixed_k_interval: wrong method");
  const auto nb = error_neighborhood(model, errors, x, fixed->k);
  return error_tolerance(nb.errors, config.beta, config.gamma)
      .shifted(model.predict(x));
}

namespace {

// Narrowest error tolerance interval over neighbor-count prefixes
// [min_k, max_k] of an ascending-distance error list. Strictly-smaller
// comparison keeps the smallest k on ties. Each prefix is evaluated with the
// same fresh two-pass statistics a direct fixed-k computation would use, so
// the winner matches that computation bit for bit.
Interval best_prefix_interval(std::span<const double> errors, std::size_t min_k,
                              std::size_t max_k, double beta, double gamma) {
  Interval best{0.0, std::numeric_limits<double>::infinity()};
  double best_width = std::numeric_limits<double>::infinity();
  for (std::size_t k = min_k; k <= max_k; ++k) {
    const Interval candidate = error_tolerance(errors.first(k), beta, gamma);
    if (candidate.width() < best_width) {
      best = candidate;
      best_width = candidate.width();
    }
  }
  return best;
}

}  // namespace

Interval var_k_interval(const LoessModel& model, const ErrorSet& errors,
                        std::span<const double> x, const PIMConfig& config) {
  validate(config, model.size());
  const auto* var = std::get_if<VarK>(&config.method);
  if (var == nullptr) throw std::invalid_argument("var_k_interval: wrong method");
  const auto nb = error_neighborhood(model, errors, x, var->max_k);
  return best_prefix_interval(nb.errors, var->min_k, var->max_k, config.beta,
                              config.gamma)
      .shifted(model.predict(x));
}

Interval conventional_interval(const LoessModel& model, double sse,
                               std::span<const double> x, double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("conventional_interval: beta must lie in (0,1)");
  if (!(sse >= 0.0) || !std::isfinite(sse))
    throw std::invalid_argument("conventional_interval: sse must be nonnegative");
  const double half = numkit::normal_quantile(0.5 * (1.0 + beta)) * sse;
  const double fhat = model.predict(x);
  return {fhat - half, fhat + half};
}

Interval predict_interval(const LoessModel& model, const ErrorSet& errors,
                          std::span<const double> x, const PIMConfig& config) {
  validate(config, model.size());
  if (std::holds_alternative<FixedK>(config.method))
    return fixed_k_interval(model, errors, x, config);
  if (std::holds_alternative<VarK>(config.method))
    return var_k_interval(model, errors, x, config);
  return conventional_interval(model, errors.sse(), x, config.beta);
}

namespace {

// Per-instance out-of-sample view of the training set: the stored error
// recovers the held-out prediction, and the instance itself never enters its
// own neighborhood.
struct TrainingCache {
  std::vector<std::vector<double>> neighbor_errors;
  std::vector<double> fhat;
  std::size_t cap = 0;
};

TrainingCache build_cache(const Matrix& x, std::span<const double> y,
                          const ErrorSet& errors, std::size_t cap) {
  const std::size_t n = x.rows();
  TrainingCache cache;
  cache.cap = cap;
  cache.neighbor_errors.resize(n);
  cache.fhat.resize(n);
  std::vector<std::size_t> others;
  others.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    others.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) others.push_back(j);
    const auto neighbors = numkit::nearest_neighbors(x, others, x.row(i), cap);
    auto& errs = cache.neighbor_errors[i];
    errs.reserve(cap);
    for (const auto& nb : neighbors) errs.push_back(errors.errors[nb.index]);
    cache.fhat[i] = y[i] - errors.errors[i];
  }
  return cache;
}

struct Window {
  std::size_t min_k;
  std::size_t max_k;  // min_k == max_k for fixed K
};

TrainScore score_cached(const TrainingCache& cache, std::span<const double> y,
                        const Window& window, double beta, double gamma) {
  const std::size_t n = y.size();
  std::size_t covered = 0;
  double width_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& errs = cache.neighbor_errors[i];
    const std::size_t hi = std::min(window.max_k, errs.size());
    const std::size_t lo = std::min(window.min_k, hi);
    const Interval interval =
        best_prefix_interval(errs, lo, hi, beta, gamma).shifted(cache.fhat[i]);
    if (interval.contains(y[i])) ++covered;
    width_sum += interval.width();
  }
  return {static_cast<double>(covered) / static_cast<double>(n),
          width_sum / static_cast<double>(n)};
}

}  // namespace

TrainScore score_on_training(const Matrix& x, std::span<const double> y,
                             const ErrorSet& errors, const PIMConfig& config) {
  validate(config, x.rows());
  if (errors.errors.size() != x.rows() || y.size() != x.rows())
    throw std::invalid_argument("score_on_training: size mismatch");
  Window window{};
  if (const auto* fixed = std::get_if<FixedK>(&config.method))
    window = {fixed->k, fixed->k};
  else if (const auto* var = std::get_if<VarK>(&config.method))
    window = {var->min_k, var->max_k};
  else
    throw std::invalid_argument("score_on_training: tolerance-based methods only");
  const std::size_t cap = std::min(window.max_k, x.rows() - 1);
  const auto cache = build_cache(x, y, errors, cap);
  return score_cached(cache, y, window, config.beta, config.gamma);
}

namespace {

struct Candidate {
  Window window;
  std::size_t gamma_idx;

  bool operator<(const Candidate& other) const {
    if (window.max_k != other.window.max_k) return window.max_k < other.window.max_k;
    if (window.min_k != other.window.min_k) return window.min_k < other.window.min_k;
    return gamma_idx < other.gamma_idx;
  }
};

// Feasibility first, then MIS, then the smaller neighborhood, then the
// smaller gamma; independent of the order candidates were produced in.
bool better(const std::pair<Candidate, TrainScore>& a,
            const std::pair<Candidate, TrainScore>& b, double beta,
            std::span<const double> ladder) {
  const bool fa = a.second.mip >= beta;
  const bool fb = b.second.mip >= beta;
  if (fa != fb) return fa;
  if (!fa) {
    if (a.second.mip != b.second.mip) return a.second.mip > b.second.mip;
  }
  if (a.second.mis != b.second.mis) return a.second.mis < b.second.mis;
  if (a.first.window.max_k != b.first.window.max_k)
    return a.first.window.max_k < b.first.window.max_k;
  if (a.first.window.min_k != b.first.window.min_k)
    return a.first.window.min_k < b.first.window.min_k;
  return ladder[a.first.gamma_idx] < ladder[b.first.gamma_idx];
}

}  // namespace

std::size_t default_fixed_k(std::size_t n) {
  return std::clamp<std::size_t>(std::min<std::size_t>(40, n / 4), 3, n);
}

VarK default_var_k_window(std::size_t n) {
  const std::size_t hi = std::clamp<std::size_t>(std::min<std::size_t>(60, n / 2), 3, n);
  std::size_t lo = std::max<std::size_t>(10, n / 40);
  if (lo >= hi) lo = hi > 40 ? hi - 40 : 3;
  return {std::clamp<std::size_t>(lo, 3, hi), hi};
}

TuneResult tune(const Matrix& x, std::span<const double> y, const ErrorSet& errors,
                std::size_t k_loess, double beta, MethodKind kind,
                const SearchConfig& search) {
  const std::size_t n = x.rows();
  if (n < 5) throw std::invalid_argument("tune: training set too small");
  if (errors.errors.size() != n || y.size() != n)
    throw std::invalid_argument("tune: size mismatch");
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("tune: beta must lie in (0,1)");
  if (search.gamma_ladder.empty())
    throw std::invalid_argument("tune: empty gamma ladder");
  for (std::size_t i = 0; i < search.gamma_ladder.size(); ++i) {
    const double g = search.gamma_ladder[i];
    if (!(g > 0.0 && g < 1.0))
      throw std::invalid_argument("tune: gamma ladder values must lie in (0,1)");
    if (i > 0 && !(g < search.gamma_ladder[i - 1]))
      throw std::invalid_argument("tune: gamma ladder must be strictly decreasing");
  }
  if (search.neighborhood_step == 0)
    throw std::invalid_argument("tune: neighborhood step must be positive");

  const auto& ladder = search.gamma_ladder;
  const std::size_t default_cap = std::max<std::size_t>(2 * k_loess, 60);
  const std::size_t k_cap =
      std::max<std::size_t>(3, std::min(search.k_cap.value_or(default_cap), n - 1));

  Window window{};
  if (kind == MethodKind::kFixedK) {
    std::size_t k0 = search.initial_k.value_or(default_fixed_k(n));
    k0 = std::clamp<std::size_t>(k0, 3, k_cap);
    window = {k0, k0};
  } else {
    const VarK defaults = default_var_k_window(n);
    std::size_t lo = defaults.min_k;
    std::size_t hi = defaults.max_k;
    if (search.initial_window) {
      lo = search.initial_window->first;
      hi = search.initial_window->second;
    }
    lo = std::clamp<std::size_t>(lo, 3, k_cap);
    hi = std::clamp<std::size_t>(hi, lo, k_cap);
    window = {lo, hi};
  }

  TrainingCache cache = build_cache(x, y, errors, std::min(k_cap, window.max_k));
  std::map<Candidate, TrainScore> evaluated;
  std::size_t evaluations = 0;

  const auto eval = [&](const Candidate& c) -> TrainScore {
    if (auto it = evaluated.find(c); it != evaluated.end()) return it->second;
    if (c.window.max_k > cache.cap && cache.cap < n - 1) {
      const std::size_t grown =
          std::min<std::size_t>(n - 1, std::max(c.window.max_k, 2 * cache.cap));
      cache = build_cache(x, y, errors, grown);
    }
    const TrainScore score = score_cached(cache, y, c.window, beta, ladder[c.gamma_idx]);
    evaluated.emplace(c, score);
    ++evaluations;
    return score;
  };

  Candidate current{window, 0};
  TrainScore current_score = eval(current);
  const std::size_t step = search.neighborhood_step;

  for (std::size_t iteration = 0; iteration < std::max<std::size_t>(1, search.max_iterations);
       ++iteration) {
    bool moved = false;

    while (current.window.max_k + step <= k_cap) {
      Candidate next = current;
      next.window.min_k += step;
      next.window.max_k += step;
      const TrainScore s = eval(next);
      if (s.mip >= beta && s.mis <= current_score.mis) {
        current = next;
        current_score = s;
        moved = true;
      } else {
        break;
      }
    }

    while (current.gamma_idx + 1 < ladder.size()) {
      Candidate next = current;
      ++next.gamma_idx;
      const TrainScore s = eval(next);
      if (s.mip >= beta && s.mis <= current_score.mis) {
        current = next;
        current_score = s;
        moved = true;
      } else {
        break;
      }
    }

    if (!moved) break;
  }

  std::pair<Candidate, TrainScore> best{evaluated.begin()->first,
                                        evaluated.begin()->second};
  for (const auto& [candidate, score] : evaluated) {
    const std::pair<Candidate, TrainScore> entry{candidate, score};
    if (better(entry, best, beta, ladder)) best = entry;
  }

  TuneResult result;
  result.score = best.second;
  result.feasible = best.second.mip >= beta;
  result.evaluations = evaluations;
  result.config.beta = beta;
  result.config.gamma = ladder[best.first.gamma_idx];
  result.config.k_loess = k_loess;
  if (kind == MethodKind::kFixedK)
    result.config.method = FixedK{best.first.window.max_k};
  else
    result.config.method = VarK{best.first.window.min_k, best.first.window.max_k};
  result.neighborhood_within_regression = best.first.window.max_k <= k_loess;
  return result;
}

}  // namespace predint::pim
