#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "predint/dataset.hpp"
#include "predint/loess.hpp"
#include "predint/numkit.hpp"
#include "predint/report.hpp"
#include "predint/rng.hpp"
#include "predint/runner.hpp"

using namespace predint;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string make_numeric_csv(std::size_t rows, std::size_t null_every = 0) {
  std::ostringstream out;
  out << "a,b,target\n";
  rng::Engine eng(2);
  for (std::size_t i = 0; i < rows; ++i) {
    if (null_every != 0 && i % null_every == 1) {
      out << rng::uniform(eng, -1, 1) << ",," << rng::uniform(eng, -1, 1) << "\n";
      continue;
    }
    out << rng::uniform(eng, -1, 1) << ',' << rng::uniform(eng, 0, 5) << ','
        << rng::uniform(eng, -2, 2) << "\n";
  }
  return out.str();
}

}  // namespace

TEST_CASE("load_csv: shapes, response selection and standardization") {
  const auto path = temp_file("predint_basic.csv");
  write_text(path, make_numeric_csv(40));
  const auto dataset = bench::load_csv(path.string());
  CHECK(dataset.size() == 40);
  CHECK(dataset.dim() == 2);
  CHECK(dataset.response_name == "target");
  CHECK(dataset.dropped_rows == 0);

  // Standardized columns: mean 0, sample sd 1 within 1e-9.
  for (std::size_t j = 0; j < 2; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 40; ++i) sum += dataset.x(i, j);
    const double mean = sum / 40.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < 40; ++i)
      ss += (dataset.x(i, j) - mean) * (dataset.x(i, j) - mean);
    CHECK(std::fabs(mean) < 1e-9);
    CHECK(std::fabs(std::sqrt(ss / 39.0) - 1.0) < 1e-9);
  }

  bench::CsvOptions by_name;
  by_name.response = "a";
  const auto other = bench::load_csv(path.string(), by_name);
  CHECK(other.response_name == "a");
  CHECK(other.dim() == 2);

  bench::CsvOptions by_index;
  by_index.response = "0";
  CHECK(bench::load_csv(path.string(), by_index).response_name == "a");

  bench::CsvOptions missing;
  missing.response = "nope";
  CHECK_THROWS_AS(bench::load_csv(path.string(), missing), bench::DataError);
}

TEST_CASE("load_csv: null rows dropped and counted") {
  const auto path = temp_file("predint_nulls.csv");
  write_text(path, make_numeric_csv(100, 20));
  const auto dataset = bench::load_csv(path.string());
  CHECK(dataset.size() == 95);
  CHECK(dataset.dropped_rows == 5);
}

TEST_CASE("load_csv: constant predictor column is centered and flagged") {
  std::ostringstream out;
  out << "a,c,target\n";
  rng::Engine eng(4);
  for (int i = 0; i < 30; ++i)
    out << rng::uniform(eng, -1, 1) << ",5.5," << rng::uniform(eng, -1, 1) << "\n";
  const auto path = temp_file("predint_const.csv");
  write_text(path, out.str());
  const auto dataset = bench::load_csv(path.string());
  REQUIRE(dataset.constant_columns == std::vector<std::size_t>{1});
  for (std::size_t i = 0; i < dataset.size(); ++i) CHECK(dataset.x(i, 1) == 0.0);
  CHECK(dataset.column_sd[1] == 1.0);
}

TEST_CASE("load_csv: failure modes") {
  CHECK_THROWS_AS(bench::load_csv("/nonexistent/path.csv"), bench::DataError);

  const auto tiny = temp_file("predint_tiny.csv");
  write_text(tiny, make_numeric_csv(10));
  CHECK_THROWS_AS(bench::load_csv(tiny.string()), bench::DataError);

  const auto one_col = temp_file("predint_one.csv");
  write_text(one_col, "only\n1\n2\n");
  CHECK_THROWS_AS(bench::load_csv(one_col.string()), bench::DataError);

  const auto ragged = temp_file("predint_ragged.csv");
  write_text(ragged, "a,b,c\n1,2,3\n1,2\n");
  CHECK_THROWS_AS(bench::load_csv(ragged.string()), bench::DataError);
}

TEST_CASE("load_csv: byte-order mark does not corrupt the first header") {
  const auto path = temp_file("predint_bom.csv");
  write_text(path, "\xEF\xBB\xBF" + make_numeric_csv(30));
  bench::CsvOptions by_name;
  by_name.response = "a";
  const auto dataset = bench::load_csv(path.string(), by_name);
  CHECK(dataset.response_name == "a");
  CHECK(dataset.size() == 30);
}

TEST_CASE("dataset: standardize / destandardize round trip") {
  const auto path = temp_file("predint_round.csv");
  write_text(path, make_numeric_csv(50));
  const auto dataset = bench::load_csv(path.string());
  rng::Engine eng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> raw{rng::uniform(eng, -2, 2), rng::uniform(eng, 0, 5)};
    const auto round = dataset.destandardize(dataset.standardize(raw));
    CHECK(std::fabs(round[0] - raw[0]) < 1e-9);
    CHECK(std::fabs(round[1] - raw[1]) < 1e-9);
  }
  for (std::size_t i = 0; i < 5; ++i) {
    const auto raw = dataset.destandardize(dataset.x.row(i));
    const auto back = dataset.standardize(raw);
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::fabs(back[j] - dataset.x(i, j)) < 1e-9);
  }
}

TEST_CASE("gen_synthetic: reproducible, validated, closed-form truth") {
  bench::SynthSpec spec;
  spec.kind = bench::SynthKind::kSineHetero;
  spec.n = 150;
  spec.p = 2;
  spec.seed = 9;
  const auto a = bench::gen_synthetic(spec);
  const auto b = bench::gen_synthetic(spec);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);

  spec.n = 10;
  CHECK_THROWS_AS(bench::gen_synthetic(spec), std::invalid_argument);
  CHECK_THROWS_AS(bench::parse_synth_kind("nope"), std::invalid_argument);

  // True 0.95 inter-quantile of the heteroscedastic generator.
  const std::vector<double> at{1.2, 0.0};
  spec.n = 150;
  const double mean = bench::synth_true_mean(spec, at);
  const double sd = bench::synth_true_sd(spec, at);
  CHECK(mean == doctest::Approx(std::sin(3.6) + 0.6).epsilon(1e-12));
  CHECK(sd == doctest::Approx(0.1 + 0.4 * 1.2).epsilon(1e-12));
  const double z = numkit::normal_quantile(0.975);
  CHECK(std::fabs(z - 1.959964) < 1e-6);
  CHECK(mean + z * sd == doctest::Approx(mean + 1.959964 * sd).epsilon(1e-6));
}

TEST_CASE("gen_synthetic: affine with zero noise is exactly recoverable") {
  bench::SynthSpec spec;
  spec.kind = bench::SynthKind::kAffine;
  spec.n = 120;
  spec.p = 2;
  spec.noise_sd = 0.0;
  spec.seed = 12;
  const auto data = bench::gen_synthetic(spec);
  const auto model = loess::fit(data.x, data.y, 30);
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(std::fabs(model.predict(data.x.row(i)) - data.y[i]) < 1e-8);
}

TEST_CASE("kfold_assignment: covers everything, sizes within one") {
  for (std::size_t n : {20, 47, 100}) {
    for (std::size_t k : {2, 5, 10}) {
      const auto fold = rng::kfold_assignment(n, k, 77);
      std::vector<std::size_t> counts(k, 0);
      for (std::size_t f : fold) {
        REQUIRE(f < k);
        ++counts[f];
      }
      std::size_t lo = n, hi = 0, total = 0;
      for (std::size_t c : counts) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        total += c;
      }
      CHECK(total == n);
      CHECK(hi - lo <= 1);
    }
  }
}

TEST_CASE("run: full grid of rows and reproducible artifacts") {
  bench::SynthSpec spec;
  spec.kind = bench::SynthKind::kSineHetero;
  spec.n = 240;
  spec.p = 1;
  spec.seed = 31;
  const auto dataset = bench::gen_synthetic(spec);

  bench::RunConfig config;
  config.methods = {"fixedk", "vark", "conventional"};
  config.betas = {0.8, 0.9, 0.95, 0.99};
  config.folds = 6;
  config.seed = 5;
  config.tune = false;
  config.k_loess = 30;
  const auto first = bench::run(dataset, config);
  REQUIRE(first.report.rows.size() == 12);
  for (const auto& row : first.report.rows) {
    CHECK(row.valid);
    CHECK(row.threshold == eval::pim_threshold(row.beta, 240));
  }

  const auto second = bench::run(dataset, config);
  CHECK(first.json.dump() == second.json.dump());

  // Byte-identical artifacts on disk.
  auto out_a = std::filesystem::temp_directory_path() / "predint_run_a";
  auto out_b = std::filesystem::temp_directory_path() / "predint_run_b";
  std::filesystem::remove_all(out_a);
  std::filesystem::remove_all(out_b);
  auto with_dir = config;
  with_dir.svg = true;
  with_dir.out_dir = out_a.string();
  bench::run(dataset, with_dir);
  with_dir.out_dir = out_b.string();
  bench::run(dataset, with_dir);
  for (const char* name : {"report.json", "report.csv", "charts.csv", "chart_mip.svg"}) {
    std::ifstream fa(out_a / name), fb(out_b / name);
    REQUIRE(fa);
    REQUIRE(fb);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());
  }
}

TEST_CASE("run: tuning pass emits records and respects the scheme flag") {
  bench::SynthSpec spec;
  spec.kind = bench::SynthKind::kSineHetero;
  spec.n = 220;
  spec.p = 1;
  spec.seed = 33;
  const auto dataset = bench::gen_synthetic(spec);

  bench::RunConfig config;
  config.methods = {"vark"};
  config.betas = {0.9};
  config.folds = 5;
  config.seed = 5;
  config.tune = true;
  config.k_loess = 30;
  config.scheme = loess::CvScheme::kfold(10, 42);
  const auto artifacts = bench::run(dataset, config);
  REQUIRE(artifacts.tuning.size() == 1);
  CHECK(artifacts.tuning[0].method == "vark");
  CHECK(artifacts.tuning[0].beta == 0.9);
  CHECK(artifacts.scheme == loess::CvScheme::kfold(10, 42));
  REQUIRE(artifacts.report.rows.size() == 1);
  CHECK(artifacts.report.rows[0].valid);
}

TEST_CASE("run: CSV round trip feeds the harness like the in-memory dataset") {
  bench::SynthSpec spec;
  spec.kind = bench::SynthKind::kSineHetero;
  spec.n = 200;
  spec.p = 2;
  spec.seed = 37;
  const auto generated = bench::gen_synthetic(spec);
  const auto path = temp_file("predint_roundtrip.csv");
  bench::write_csv(generated, path.string());
  const auto loaded = bench::load_csv(path.string());
  REQUIRE(loaded.size() == 200);
  REQUIRE(loaded.dim() == 2);

  bench::RunConfig config;
  config.methods = {"vark"};
  config.betas = {0.9};
  config.folds = 5;
  config.seed = 3;
  config.tune = false;
  config.k_loess = 25;
  const auto from_memory = bench::run(generated, config);
  const auto from_disk = bench::run(loaded, config);
  REQUIRE(from_disk.report.rows.size() == 1);
  CHECK(from_disk.report.rows[0].valid);
  // 17-significant-digit serialization keeps the standardized coordinates
  // close enough that the evaluated measures agree to high precision.
  CHECK(from_disk.report.rows[0].mip ==
        doctest::Approx(from_memory.report.rows[0].mip).epsilon(1e-12));
  CHECK(from_disk.report.rows[0].mis ==
        doctest::Approx(from_memory.report.rows[0].mis).epsilon(1e-9));
}

TEST_CASE("report csv: one line per row plus header") {
  bench::SynthSpec spec;
  spec.kind = bench::SynthKind::kSineHetero;
  spec.n = 200;
  spec.p = 1;
  spec.seed = 35;
  const auto dataset = bench::gen_synthetic(spec);
  bench::RunConfig config;
  config.methods = {"conventional"};
  config.betas = {0.8, 0.9};
  config.folds = 5;
  config.tune = false;
  config.k_loess = 25;
  const auto artifacts = bench::run(dataset, config);
  const auto csv = bench::report_csv(artifacts.report);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  const auto charts = bench::chart_csv(artifacts.report);
  CHECK(charts.rfind("beta,method,value,line_kind\n", 0) == 0);
}
