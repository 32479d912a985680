#include "predint/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "predint/rng.hpp"

namespace predint::bench {

using numkit::Matrix;

std::vector<double> Dataset::destandardize(std::span<const double> row) const {
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j)
    out[j] = row[j] * column_sd[j] + column_mean[j];
  return out;
}

std::vector<double> Dataset::standardize(std::span<const double> raw) const {
  std::vector<double> out(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j)
    out[j] = (raw[j] - column_mean[j]) / column_sd[j];
  return out;
}

namespace {

// Center every column; scale by the sample standard deviation unless the
// column has no spread.
void standardize_in_place(Dataset& dataset) {
  const std::size_t n = dataset.x.rows();
  const std::size_t p = dataset.x.cols();
  dataset.column_mean.assign(p, 0.0);
  dataset.column_sd.assign(p, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += dataset.x(i, j);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = dataset.x(i, j) - mean;
      ss += d * d;
    }
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    dataset.column_mean[j] = mean;
    if (sd > 0.0) {
      dataset.column_sd[j] = sd;
      for (std::size_t i = 0; i < n; ++i)
        dataset.x(i, j) = (dataset.x(i, j) - mean) / sd;
    } else {
      dataset.column_sd[j] = 1.0;
      dataset.constant_columns.push_back(j);
      for (std::size_t i = 0; i < n; ++i) dataset.x(i, j) = dataset.x(i, j) - mean;
    }
  }
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, delimiter)) fields.push_back(field);
  if (!line.empty() && line.back() == delimiter) fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::optional<double> parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  try {
    std::size_t consumed = 0;
    const double v = std::stod(s, &consumed);
    if (consumed != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM
  auto header = split_line(line, options.delimiter);
  for (auto& h : header) h = trim(h);
  if (header.size() < 2)
    throw DataError(path + ": need at least 2 columns, found " +
                    std::to_string(header.size()));

  std::size_t response_col = header.size() - 1;
  if (options.response) {
    const auto it = std::find(header.begin(), header.end(), *options.response);
    if (it != header.end()) {
      response_col = static_cast<std::size_t>(it - header.begin());
    } else if (auto idx = parse_number(*options.response);
               idx && *idx >= 0 && *idx < static_cast<double>(header.size()) &&
               *idx == std::floor(*idx)) {
      response_col = static_cast<std::size_t>(*idx);
    } else {
      throw DataError(path + ": response column '" + *options.response +
                      "' not found");
    }
  }

  std::vector<std::vector<double>> rows;
  std::size_t dropped = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_line(line, options.delimiter);
    if (fields.size() != header.size())
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    bool complete = true;
    for (const auto& field : fields) {
      const auto v = parse_number(field);
      if (!v) {
        complete = false;
        break;
      }
      row.push_back(*v);
    }
    if (complete)
      rows.push_back(std::move(row));
    else
      ++dropped;
  }
  if (rows.size() < 20)
    throw DataError(path + ": need at least 20 complete rows, found " +
                    std::to_string(rows.size()) + " (" + std::to_string(dropped) +
                    " dropped)");

  Dataset dataset;
  dataset.name = path;
  dataset.source = "csv:" + path;
  dataset.dropped_rows = dropped;
  dataset.response_name = header[response_col];

  const std::size_t p = header.size() - 1;
  dataset.x = Matrix(rows.size(), p);
  dataset.y.resize(rows.size());
  for (std::size_t j = 0; j < header.size(); ++j)
    if (j != response_col) dataset.predictor_names.push_back(header[j]);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t col = 0;
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j == response_col)
        dataset.y[i] = rows[i][j];
      else
        dataset.x(i, col++) = rows[i][j];
    }
  }
  standardize_in_place(dataset);
  return dataset;
}

SynthKind parse_synth_kind(const std::string& id) {
  if (id == "affine") return SynthKind::kAffine;
  if (id == "sine-hetero") return SynthKind::kSineHetero;
  if (id == "step") return SynthKind::kStep;
  throw std::invalid_argument("unknown synthetic generator '" + id + "'");
}

std::string synth_kind_name(SynthKind kind) {
  switch (kind) {
    case SynthKind::kAffine: return "affine";
    case SynthKind::kSineHetero: return "sine-hetero";
    case SynthKind::kStep: return "step";
  }
  return "?";
}

double synth_true_mean(const SynthSpec& spec, std::span<const double> raw_x) {
  switch (spec.kind) {
    case SynthKind::kAffine: {
      double v = 1.0;
      for (std::size_t j = 0; j < raw_x.size(); ++j)
        v += (j % 2 == 0 ? 2.0 : -3.0) * raw_x[j];
      return v;
    }
    case SynthKind::kSineHetero:
      return std::sin(3.0 * raw_x[0]) + 0.5 * raw_x[0];
    case SynthKind::kStep:
      return raw_x[0] >= 0.0 ? 4.0 : 0.0;
  }
  return 0.0;
}

double synth_true_sd(const SynthSpec& spec, std::span<const double> raw_x) {
  switch (spec.kind) {
    case SynthKind::kAffine:
    case SynthKind::kStep:
      return spec.noise_sd;
    case SynthKind::kSineHetero:
      return 0.1 + 0.4 * std::fabs(raw_x[0]);
  }
  return 0.0;
}

Dataset gen_synthetic(const SynthSpec& spec) {
  if (spec.n < 50) throw std::invalid_argument("gen_synthetic: need n >= 50");
  if (spec.p < 1) throw std::invalid_argument("gen_synthetic: need p >= 1");
  if (!(spec.noise_sd >= 0.0))
    throw std::invalid_argument("gen_synthetic: negative noise sd");

  Dataset dataset;
  dataset.name = synth_kind_name(spec.kind);
  dataset.source =
      "synthetic:" + synth_kind_name(spec.kind) + ":" + std::to_string(spec.seed);
  dataset.x = Matrix(spec.n, spec.p);
  dataset.y.resize(spec.n);
  for (std::size_t j = 0; j < spec.p; ++j)
    dataset.predictor_names.push_back("x" + std::to_string(j + 1));
  dataset.response_name = "y";

  rng::Engine eng(rng::derive_seed(spec.seed, 0x646174ULL));
  std::vector<double> raw(spec.p);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < spec.p; ++j) raw[j] = rng::uniform(eng, -2.0, 2.0);
    const double eps = rng::standard_normal(eng);
    for (std::size_t j = 0; j < spec.p; ++j) dataset.x(i, j) = raw[j];
    dataset.y[i] = synth_true_mean(spec, raw) + synth_true_sd(spec, raw) * eps;
  }
  standardize_in_place(dataset);
  return dataset;
}

void write_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (const auto& name : dataset.predictor_names) out << name << ",";
  out << dataset.response_name << "\n";
  char buffer[64];
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto raw = dataset.destandardize(dataset.x.row(i));
    for (double v : raw) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", v);
      out << buffer << ",";
    }
    std::snprintf(buffer, sizeof(buffer), "%.17g", dataset.y[i]);
    out << buffer << "\n";
  }
}

}  // namespace predint::bench
