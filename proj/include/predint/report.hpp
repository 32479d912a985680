#pragma once

#include <string>

#include <json.hpp>

#include "predint/dataset.hpp"
#include "predint/eval.hpp"

namespace predint::bench {

// Flat CSV: one row per dataset x method x beta, numbers at 17 significant
// digits.
std::string report_csv(const eval::EvalReport& report);

// Chart-ready series with columns (beta, method, value, line_kind).
std::string chart_csv(const eval::EvalReport& report);

nlohmann::json report_to_json(const eval::EvalReport& report);

// Static line plots of the obtained-MIP / normalized-EGSD / normalized-MIS
// series. `kind` is one of the chart line kinds carrying per-method points.
std::string chart_svg(const eval::EvalReport& report, const std::string& kind);

}  // namespace predint::bench
