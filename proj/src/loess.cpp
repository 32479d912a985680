#include "predint/loess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "predint/numkit.hpp"
#include "predint/rng.hpp"

namespace predint::loess {

using numkit::Matrix;

namespace {

struct LocalFit {
  double value;
  bool regularized;
};

// Tricube-weighted linear fit over the k nearest candidates, evaluated at the
// query point (the intercept of the fit in query-centered coordinates).
LocalFit local_fit(const Matrix& x, std::span<const double> y,
                   std::span<const std::size_t> candidates, std::size_t k,
                   std::span<const double> query) {
  const std::size_t p = x.cols();
  const auto neighbors = numkit::nearest_neighbors(x, candidates, query, k);
  const double bandwidth = neighbors.back().distance;

  std::vector<double> weights(k);
  if (bandwidth == 0.0) {
    // Query duplicates the whole neighborhood; fall back to uniform weights.
    std::fill(weights.begin(), weights.end(), 1.0);
  } else {
    for (std::size_t i = 0; i < k; ++i)
      weights[i] = numkit::tricube(neighbors[i].distance / bandwidth);
  }

  // The farthest neighbor carries weight zero; keep the fit rank-safe by
  // giving boundary points a vanishing positive weight when too few remain.
  const std::size_t needed = std::min(p + 2, k);
  std::size_t positive = 0;
  for (double w : weights)
    if (w > 0.0) ++positive;
  if (positive < needed) {
    for (double& w : weights)
      if (w == 0.0) w = 1e-12;
  }

  Matrix design(k, p + 1);
  std::vector<double> responses(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto xi = x.row(neighbors[i].index);
    auto row = design.row(i);
    row[0] = 1.0;
    for (std::size_t j = 0; j < p; ++j) row[j + 1] = xi[j] - query[j];
    responses[i] = y[neighbors[i].index];
  }
  const auto fit = numkit::wls_fit(design, responses, weights);
  return {fit.coefficients[0], fit.regularized};
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

LoessModel::LoessModel(Matrix x, std::vector<double> y, std::size_t k_loess)
    : x_(std::move(x)), y_(std::move(y)), k_loess_(k_loess) {
  if (x_.rows() == 0 || x_.rows() != y_.size())
    throw std::invalid_argument("loess: predictor/response size mismatch");
  if (!x_.all_finite())
    throw std::invalid_argument("loess: non-finite predictor entry");
  for (double v : y_)
    if (!std::isfinite(v)) throw std::invalid_argument("loess: non-finite response");
  const std::size_t lo = x_.cols() + 2;
  if (k_loess_ < lo || k_loess_ > x_.rows())
    throw std::invalid_argument("loess: k_loess must lie in [" + std::to_string(lo) +
                                ", " + std::to_string(x_.rows()) + "], got " +
                                std::to_string(k_loess_));
}

LoessModel fit(const Matrix& x, std::span<const double> y, std::size_t k_loess) {
  return LoessModel(x, {y.begin(), y.end()}, k_loess);
}

LoessModel::Prediction LoessModel::predict_detailed(std::span<const double> x) const {
  const auto idx = all_indices(x_.rows());
  const auto fit = local_fit(x_, y_, idx, k_loess_, x);
  return {fit.value, fit.regularized};
}

double LoessModel::predict(std::span<const double> x) const {
  return predict_detailed(x).value;
}

double ErrorSet::mse() const {
  double s = 0.0;
  for (double e : errors) s += e * e;
  return s / static_cast<double>(errors.size());
}

double ErrorSet::sse() const { return std::sqrt(mse()); }

ErrorSet cv_errors(const Matrix& x, std::span<const double> y, std::size_t k_loess,
                   const CvScheme& scheme) {
  const std::size_t n = x.rows();
  if (n != y.size()) throw std::invalid_argument("cv_errors: size mismatch");
  (void)fit(x, y, k_loess);  // validate data and bandwidth range
  if (scheme.kind == CvScheme::Kind::kKFold && scheme.folds < 2)
    throw std::invalid_argument("cv_errors: k-fold scheme needs k >= 2");

  std::vector<std::size_t> fold;
  if (scheme.kind == CvScheme::Kind::kKFold) {
    if (scheme.folds > n)
      throw std::invalid_argument("cv_errors: more folds than observations");
    fold = rng::kfold_assignment(n, scheme.folds, scheme.seed);
  }

  ErrorSet out;
  out.errors.resize(n);
  out.scheme = scheme;

  const std::size_t min_rows = x.cols() + 2;
  std::vector<std::size_t> training;
  training.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    training.clear();
    if (scheme.kind == CvScheme::Kind::kLoo) {
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) training.push_back(j);
    } else {
      for (std::size_t j = 0; j < n; ++j)
        if (fold[j] != fold[i]) training.push_back(j);
    }
    if (training.size() < min_rows)
      throw std::invalid_argument("cv_errors: fold leaves too few training rows");
    std::size_t k = k_loess;
    if (k > training.size()) {
      k = training.size();
      ++out.clamped;
    }
    out.errors[i] = y[i] - local_fit(x, y, training, k, x.row(i)).value;
  }
  return out;
}

std::size_t select_bandwidth(const Matrix& x, std::span<const double> y,
                             std::span<const std::size_t> candidates,
                             std::size_t folds, std::uint64_t seed) {
  if (candidates.empty())
    throw std::invalid_argument("select_bandwidth: empty candidate list");
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  bool have = false;
  for (std::size_t k : candidates) {
    const double score = cv_errors(x, y, k, CvScheme::kfold(folds, seed)).mse();
    if (!have || score < best_score || (score == best_score && k < best)) {
      best = k;
      best_score = score;
      have = true;
    }
  }
  return best;
}

}  // namespace predint::loess
