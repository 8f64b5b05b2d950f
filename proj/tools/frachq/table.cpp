#include "table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace frachq_cli {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

bool numeric(const Table& t, std::size_t col) {
  return std::all_of(t.rows.begin(), t.rows.end(), [&](const auto& r) {
    return std::holds_alternative<double>(r[col]);
  });
}

}  // namespace

std::vector<std::string> Table::select(const std::vector<std::string>& keep) {
  std::vector<std::string> missing;
  std::vector<std::size_t> idx{0};
  for (const auto& name : keep) {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
      missing.push_back(name);
    } else if (it != columns.begin()) {
      idx.push_back(static_cast<std::size_t>(it - columns.begin()));
    }
  }
  if (!missing.empty()) return missing;
  std::vector<std::string> cols;
  for (auto i : idx) cols.push_back(columns[i]);
  for (auto& r : rows) {
    std::vector<Cell> nr;
    for (auto i : idx) nr.push_back(r[i]);
    r = std::move(nr);
  }
  columns = std::move(cols);
  return {};
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      if (const double* d = std::get_if<double>(&r[i])) {
        out += format_number(*d);
      } else {
        out += std::get<std::string>(r[i]);
      }
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t, const nlohmann::json& extra) {
  nlohmann::json j = extra;
  j["columns"] = t.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& c : r) {
      if (const double* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) {
          row.push_back(*d);
        } else {
          row.push_back(nullptr);
        }
      } else {
        row.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string to_svg(const Table& t, const std::string& title) {
  constexpr double W = 640, H = 400, L = 60, R = 20, T = 30, B = 40;
  std::vector<std::size_t> series;
  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    if (numeric(t, c)) series.push_back(c);
  }

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& r : t.rows) {
    const double* x = std::get_if<double>(&r[0]);
    if (!x || !std::isfinite(*x)) continue;
    xmin = std::min(xmin, *x);
    xmax = std::max(xmax, *x);
    for (auto c : series) {
      const double y = std::get<double>(r[c]);
      if (!std::isfinite(y)) continue;
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmax > xmin)) {
    xmin = std::isfinite(xmin) ? xmin - 0.5 : 0.0;
    xmax = xmin + 1.0;
  }
  if (!(ymax > ymin)) {
    ymin = std::isfinite(ymin) ? ymin - 0.5 : 0.0;
    ymax = ymin + 1.0;
  }
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<title>" << xml_escape(title) << "</title>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
     << H - T - B << "\" fill=\"none\" stroke=\"#000\"/>\n";
  os << "<text x=\"" << L << "\" y=\"" << H - 10 << "\" font-size=\"11\">"
     << xml_escape(t.columns.empty() ? "" : t.columns[0]) << ": "
     << format_number(xmin) << " .. " << format_number(xmax) << "</text>\n";
  os << "<text x=\"5\" y=\"" << T - 10 << "\" font-size=\"11\">y: " << format_number(ymin)
     << " .. " << format_number(ymax) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto c = series[k];
    const char* colour = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    os << "<polyline data-column=\"" << xml_escape(t.columns[c])
       << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& r : t.rows) {
      const double* x = std::get_if<double>(&r[0]);
      const double y = std::get<double>(r[c]);
      if (!x || !std::isfinite(*x) || !std::isfinite(y)) continue;
      if (!first) os << ' ';
      first = false;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f", px(*x), py(y));
      os << buf;
    }
    os << "\"/>\n";
    os << "<text x=\"" << W - R - 120 << "\" y=\"" << T + 14 * (k + 1) << "\" font-size=\"11\" fill=\""
       << colour << "\">" << xml_escape(t.columns[c]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace frachq_cli
