#include "predint/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace predint::bench {

namespace {

std::string num(double v) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace

std::string report_csv(const eval::EvalReport& report) {
  std::ostringstream out;
  out << "dataset,method,beta,mip,mis,sigma_is,egsd,normalized_egsd,"
         "normalized_mis,threshold,pim_pass,small_sample,valid,error\n";
  for (const auto& row : report.rows) {
    out << report.dataset << ',' << row.method << ',' << num(row.beta) << ',';
    if (row.valid) {
      out << num(row.mip) << ',' << num(row.mis) << ',' << num(row.sigma_is) << ','
          << (row.egsd ? num(*row.egsd) : std::string()) << ','
          << (row.normalized_egsd ? num(*row.normalized_egsd) : std::string()) << ','
          << (row.normalized_mis ? num(*row.normalized_mis) : std::string()) << ','
          << num(row.threshold) << ',' << (row.pim_pass ? 1 : 0) << ','
          << (row.small_sample ? 1 : 0) << ",1,\n";
    } else {
      out << ",,,,,,,,,0," << row.error << "\n";
    }
  }
  return out.str();
}

std::string chart_csv(const eval::EvalReport& report) {
  std::ostringstream out;
  out << "beta,method,value,line_kind\n";
  for (const auto& point : report.chart)
    out << num(point.beta) << ',' << point.method << ',' << num(point.value) << ','
        << point.line_kind << "\n";
  return out.str();
}

nlohmann::json report_to_json(const eval::EvalReport& report) {
  nlohmann::json j;
  j["dataset"] = report.dataset;
  j["n_v"] = report.n_v;
  j["results"] = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["method"] = row.method;
    r["beta"] = row.beta;
    r["valid"] = row.valid;
    if (row.valid) {
      r["mip"] = row.mip;
      r["mis"] = row.mis;
      r["sigma_is"] = row.sigma_is;
      if (row.egsd)
        r["egsd"] = *row.egsd;
      else
        r["egsd"] = nullptr;
      if (row.normalized_egsd)
        r["normalized_egsd"] = *row.normalized_egsd;
      else
        r["normalized_egsd"] = nullptr;
      if (row.normalized_mis)
        r["normalized_mis"] = *row.normalized_mis;
      else
        r["normalized_mis"] = nullptr;
      r["threshold"] = row.threshold;
      r["pim_pass"] = row.pim_pass;
      r["small_sample"] = row.small_sample;
    } else {
      r["error"] = row.error;
    }
    j["results"].push_back(std::move(r));
  }
  j["failure_mip"] = nlohmann::json::object();
  for (const auto& [method, beta] : report.failure_mips) {
    if (beta)
      j["failure_mip"][method] = *beta;
    else
      j["failure_mip"][method] = nullptr;
  }
  j["charts"] = nlohmann::json::array();
  for (const auto& point : report.chart) {
    j["charts"].push_back({{"beta", point.beta},
                           {"method", point.method},
                           {"value", point.value},
                           {"line_kind", point.line_kind}});
  }
  return j;
}

namespace {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (beta, value)
  bool dashed = false;
};

std::string render_svg(const std::string& title, const std::string& y_label,
                       const std::vector<Series>& series) {
  constexpr double kW = 640, kH = 420;
  constexpr double kL = 70, kR = 20, kT = 40, kB = 50;
  double ymin = 0.0, ymax = 1.0, xmin = 1.0, xmax = 0.0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
    }
  if (!(xmax > xmin)) {
    xmin = 0.0;
    xmax = 1.0;
  }
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const auto px = [&](double x) {
    return kL + (x - xmin) / (xmax - xmin) * (kW - kL - kR);
  };
  const auto py = [&](double y) {
    return kH - kB - (y - ymin) / (ymax - ymin) * (kH - kT - kB);
  };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
      << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR
      << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\""
      << kH - kB << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">nominal MIP (beta)</text>\n";
  out << "<text x=\"16\" y=\"" << kH / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << kH / 2 << ")\">" << y_label << "</text>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double fy = ymin + (ymax - ymin) * tick / 4.0;
    const double fx = xmin + (xmax - xmin) * tick / 4.0;
    char label[32];
    out << "<line x1=\"" << kL - 4 << "\" y1=\"" << py(fy) << "\" x2=\"" << kL
        << "\" y2=\"" << py(fy) << "\" stroke=\"black\"/>\n";
    std::snprintf(label, sizeof(label), "%.3g", fy);
    out << "<text x=\"" << kL - 8 << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\" font-size=\"10\">" << label << "</text>\n";
    std::snprintf(label, sizeof(label), "%.3g", fx);
    out << "<text x=\"" << px(fx) << "\" y=\"" << kH - kB + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << label << "</text>\n";
  }
  std::size_t color = 0;
  double legend_y = kT + 6;
  for (const auto& s : series) {
    const char* stroke = kColors[color % 6];
    ++color;
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\""
        << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points) out << px(x) << ',' << py(y) << ' ';
    out << "\"/>\n";
    for (const auto& [x, y] : s.points)
      out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
          << "\" r=\"2.4\" fill=\"" << stroke << "\"/>\n";
    out << "<text x=\"" << kW - kR - 6 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << stroke << "\">"
        << s.label << "</text>\n";
    legend_y += 14;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string chart_svg(const eval::EvalReport& report, const std::string& kind) {
  std::map<std::string, Series> by_method;
  std::vector<std::string> order;
  for (const auto& point : report.chart) {
    if (point.line_kind != kind || point.method.empty()) continue;
    if (!by_method.count(point.method)) order.push_back(point.method);
    auto& s = by_method[point.method];
    s.label = point.method;
    s.points.emplace_back(point.beta, point.value);
  }
  std::vector<Series> series;
  for (const auto& name : order) {
    auto s = by_method[name];
    std::sort(s.points.begin(), s.points.end());
    series.push_back(std::move(s));
  }
  if (kind == "obtained_mip") {
    Series constraint{"mip_constraint", {}, true};
    Series nominal{"nominal_mip", {}, true};
    for (const auto& point : report.chart) {
      if (point.line_kind == "mip_constraint")
        constraint.points.emplace_back(point.beta, point.value);
      if (point.line_kind == "nominal_mip")
        nominal.points.emplace_back(point.beta, point.value);
    }
    std::sort(constraint.points.begin(), constraint.points.end());
    std::sort(nominal.points.begin(), nominal.points.end());
    series.push_back(std::move(nominal));
    series.push_back(std::move(constraint));
  }
  const std::string y_label = kind == "obtained_mip"   ? "obtained MIP"
                              : kind == "normalized_egsd" ? "normalized EGSD"
                                                          : "normalized MIS";
  return render_svg(report.dataset + " : " + kind, y_label, series);
}

}  // namespace predint::bench
