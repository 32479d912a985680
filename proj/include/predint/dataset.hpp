#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "predint/matrix.hpp"

namespace predint::bench {

// Problem with the input data (bad file, bad columns, too few rows).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Dataset {
  std::string name;
  numkit::Matrix x;  // standardized predictors
  std::vector<double> y;
  std::vector<std::string> predictor_names;
  std::string response_name;

  // Per-column statistics used for standardization. Columns with zero spread
  // are centered only and flagged.
  std::vector<double> column_mean;
  std::vector<double> column_sd;
  std::vector<std::size_t> constant_columns;

  std::string source;  // "csv:<path>" or "synthetic:<id>:<seed>"
  std::size_t dropped_rows = 0;

  std::size_t size() const { return x.rows(); }
  std::size_t dim() const { return x.cols(); }

  // Raw-scale coordinates of a standardized row.
  std::vector<double> destandardize(std::span<const double> row) const;
  // Standardize a raw-scale query with the dataset's statistics.
  std::vector<double> standardize(std::span<const double> raw) const;
};

struct CsvOptions {
  char delimiter = ',';
  // Response column by header name or zero-based index; last column when
  // unset.
  std::optional<std::string> response;
};

// Reads a headered numeric CSV, drops rows with missing/non-numeric fields,
// and z-scores the predictors. Requires at least 2 numeric columns and 20
// complete rows.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});

enum class SynthKind { kAffine, kSineHetero, kStep };

SynthKind parse_synth_kind(const std::string& id);
std::string synth_kind_name(SynthKind kind);

struct SynthSpec {
  SynthKind kind = SynthKind::kSineHetero;
  std::size_t n = 1000;
  std::size_t p = 1;
  double noise_sd = 1.0;  // ignored by sine-hetero (its noise profile is fixed)
  std::uint64_t seed = 42;
};

// Predictors are uniform on [-2, 2]; only the first coordinate drives the
// response.
//   affine:      y = 2 x1 - 3 x2 + 1 (coefficients alternate 2, -3, ...)
//                plus N(0, noise_sd^2) noise
//   sine-hetero: y = sin(3 x1) + 0.5 x1 + (0.1 + 0.4 |x1|) eps
//   step:        y = 4 * [x1 >= 0] plus N(0, noise_sd^2) noise
Dataset gen_synthetic(const SynthSpec& spec);

// Noise-free mean and noise scale of a generator at a raw-scale point; used
// for oracle intervals in tests.
double synth_true_mean(const SynthSpec& spec, std::span<const double> raw_x);
double synth_true_sd(const SynthSpec& spec, std::span<const double> raw_x);

// Writes a dataset back out as CSV on the raw (destandardized) scale.
void write_csv(const Dataset& dataset, const std::string& path);

}  // namespace predint::bench
