#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "predint/matrix.hpp"

namespace predint::loess {

// Cross-validation scheme used to produce out-of-sample prediction errors.
struct CvScheme {
  enum class Kind { kLoo, kKFold };
  Kind kind = Kind::kKFold;
  std::size_t folds = 10;
  std::uint64_t seed = 42;

  static CvScheme loo() { return {Kind::kLoo, 0, 0}; }
  static CvScheme kfold(std::size_t k, std::uint64_t seed) {
    return {Kind::kKFold, k, seed};
  }
  // Leave-one-out is affordable for small samples only.
  static CvScheme default_for(std::size_t n) {
    return n > 500 ? kfold(10, 42) : loo();
  }

  bool operator==(const CvScheme&) const = default;
};

// Degree-1 local polynomial smoother: tricube weights over the k_loess
// nearest neighbors, bandwidth set by the farthest of them. Immutable after
// construction; predictions are pure.
class LoessModel {
public:
  LoessModel(numkit::Matrix x, std::vector<double> y, std::size_t k_loess);

  double predict(std::span<const double> x) const;

  struct Prediction {
    double value;
    bool regularized = false;  // ridge fallback hit inside the local fit
  };
  Prediction predict_detailed(std::span<const double> x) const;

  const numkit::Matrix& predictors() const { return x_; }
  std::span<const double> responses() const { return y_; }
  std::size_t bandwidth() const { return k_loess_; }
  std::size_t size() const { return x_.rows(); }
  std::size_t dim() const { return x_.cols(); }

private:
  numkit::Matrix x_;
  std::vector<double> y_;
  std::size_t k_loess_;
};

LoessModel fit(const numkit::Matrix& x, std::span<const double> y, std::size_t k_loess);

// Out-of-sample prediction error per training instance, index-aligned with
// the data that produced it.
struct ErrorSet {
  std::vector<double> errors;  // y_i - prediction without observation i
  CvScheme scheme;
  std::size_t clamped = 0;  // queries whose neighbor count had to be reduced

  double mse() const;
  double sse() const;  // sqrt(mse)
};

ErrorSet cv_errors(const numkit::Matrix& x, std::span<const double> y,
                   std::size_t k_loess, const CvScheme& scheme);

// Candidate minimizing the k-fold CV mean squared error; ties go to the
// smallest candidate.
std::size_t select_bandwidth(const numkit::Matrix& x, std::span<const double> y,
                             std::span<const std::size_t> candidates,
                             std::size_t folds = 10, std::uint64_t seed = 42);

}  // namespace predint::loess
