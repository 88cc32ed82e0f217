#include "bandits/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bandits {

namespace {

std::string fmt(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::vector<std::size_t> sampled_rounds(std::size_t n, std::size_t stride) {
  std::vector<std::size_t> rows;
  if (n == 0) return rows;
  stride = std::max<std::size_t>(stride, 1);
  for (std::size_t t = stride; t <= n; t += stride) rows.push_back(t);
  if (rows.empty() || rows.back() != n) rows.push_back(n);
  return rows;
}

}  // namespace

const OverlayCurve& RegretReport::overlay(const std::string& name) const {
  for (const auto& o : overlays) {
    if (o.name == name) return o;
  }
  throw std::out_of_range("report has no overlay '" + name + "'");
}

void aggregate_curves(const std::vector<std::vector<double>>& curves,
                      std::vector<double>& mean, std::vector<double>& sem) {
  mean.clear();
  sem.clear();
  if (curves.empty()) return;
  const std::size_t n = curves.front().size();
  for (const auto& c : curves) {
    if (c.size() != n) throw std::invalid_argument("aggregate: curves differ in length");
  }
  const double r = static_cast<double>(curves.size());
  mean.assign(n, 0.0);
  sem.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double sum = 0.0;
    for (const auto& c : curves) sum += c[t];
    const double m = sum / r;
    double ss = 0.0;
    for (const auto& c : curves) ss += (c[t] - m) * (c[t] - m);
    mean[t] = m;
    sem[t] = curves.size() > 1 ? std::sqrt(ss / (r - 1.0)) / std::sqrt(r) : 0.0;
  }
}

std::string to_csv(const RegretReport& report, std::size_t stride) {
  std::ostringstream out;
  out << "# bandits regret report v" << kReportSchemaVersion << " policy=" << report.policy
      << " horizon=" << report.horizon << " replicas=" << report.replicas
      << " seed=" << report.seed << "\n";
  out << "round,mean_regret,sem";
  for (const auto& o : report.overlays) out << ",overlay_" << o.name;
  out << "\n";
  for (std::size_t t : sampled_rounds(report.mean.size(), stride)) {
    out << t << "," << fmt(report.mean[t - 1]) << "," << fmt(report.sem[t - 1]);
    for (const auto& o : report.overlays) out << "," << fmt(o.values[t - 1]);
    out << "\n";
  }
  return out.str();
}

std::string to_json(const RegretReport& report) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["policy"] = report.policy;
  j["horizon"] = report.horizon;
  j["replicas"] = report.replicas;
  j["seed"] = report.seed;
  j["policy_params"] = report.policy_params;
  j["environment"] = report.environment;
  j["mean"] = report.mean;
  j["sem"] = report.sem;
  j["terminal"] = report.terminal;
  j["overlays"] = nlohmann::json::array();
  for (const auto& o : report.overlays) {
    j["overlays"].push_back({{"name", o.name}, {"values", o.values}});
  }
  j["wall_clock_seconds"] = report.wall_clock_seconds;
  return j.dump(1) + "\n";
}

RegretReport report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("report json: ") + e.what());
  }
  if (j.value("schema_version", 0) != kReportSchemaVersion) {
    throw std::invalid_argument("report json: unsupported schema version");
  }
  RegretReport r;
  try {
    r.policy = j.at("policy").get<std::string>();
    r.horizon = j.at("horizon").get<std::size_t>();
    r.replicas = j.at("replicas").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.policy_params = j.at("policy_params").get<std::map<std::string, std::string>>();
    r.environment = j.at("environment").get<std::map<std::string, std::string>>();
    r.mean = j.at("mean").get<std::vector<double>>();
    r.sem = j.at("sem").get<std::vector<double>>();
    r.terminal = j.at("terminal").get<std::vector<double>>();
    for (const auto& o : j.at("overlays")) {
      r.overlays.push_back(
          {o.at("name").get<std::string>(), o.at("values").get<std::vector<double>>()});
    }
    r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("report json: ") + e.what());
  }
  return r;
}

std::string to_svg(const RegretReport& report, std::size_t max_points) {
  constexpr double kW = 800, kH = 500, kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;
  const std::size_t n = report.mean.size();
  double lo = 0.0, hi = 1.0;
  auto extend = [&](const std::vector<double>& v) {
    for (double x : v) {
      if (std::isfinite(x)) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    }
  };
  extend(report.mean);
  for (const auto& o : report.overlays) extend(o.values);
  const double xmax = std::max<double>(static_cast<double>(n), 1.0);
  auto px = [&](double t) { return kLeft + (kW - kLeft - kRight) * t / xmax; };
  auto py = [&](double v) { return kH - kBottom - (kH - kTop - kBottom) * (v - lo) / (hi - lo); };
  const std::size_t stride = max_points ? std::max<std::size_t>(1, n / max_points) : 1;
  const auto rows = sampled_rounds(n, stride);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kLeft << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
      << xml_escape(report.policy) << " (" << report.replicas << " replicas)</text>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight
      << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kH - kBottom << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double t = xmax * i / 5.0;
    const double v = lo + (hi - lo) * i / 5.0;
    out << "<line x1=\"" << fmt(px(t), 6) << "\" y1=\"" << kH - kBottom << "\" x2=\""
        << fmt(px(t), 6) << "\" y2=\"" << kH - kBottom + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(px(t), 6) << "\" y=\"" << kH - kBottom + 20
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << fmt(t, 6) << "</text>\n"
        << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(py(v), 6) << "\" x2=\"" << kLeft
        << "\" y2=\"" << fmt(py(v), 6) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(py(v) + 4, 6)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt(v, 6)
        << "</text>\n";
  }
  static const char* kColors[] = {"#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  auto polyline = [&](const std::vector<double>& v, const char* color, const char* dash) {
    if (rows.empty()) return;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (dash) out << " stroke-dasharray=\"" << dash << "\"";
    out << " points=\"";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const std::size_t t = rows[k];
      out << (k ? " " : "") << fmt(px(static_cast<double>(t)), 6) << ","
          << fmt(py(v[t - 1]), 6);
    }
    out << "\"/>\n";
  };
  polyline(report.mean, "#1f77b4", nullptr);
  double legend_y = kTop + 15;
  out << "<text x=\"" << kLeft + 10 << "\" y=\"" << legend_y
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1f77b4\">mean regret</text>\n";
  for (std::size_t i = 0; i < report.overlays.size(); ++i) {
    const char* color = kColors[i % 5];
    polyline(report.overlays[i].values, color, "6,3");
    legend_y += 15;
    out << "<text x=\"" << kLeft + 10 << "\" y=\"" << legend_y
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
        << xml_escape(report.overlays[i].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit(const RegretReport& report, const std::string& format, const std::string& path,
          std::size_t stride) {
  std::string body;
  if (format == "csv") {
    body = to_csv(report, stride);
  } else if (format == "json") {
    body = to_json(report);
  } else if (format == "svg") {
    body = to_svg(report);
  } else {
    throw std::invalid_argument("unknown format '" + format + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << body;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace bandits
