#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hchaos/core.hpp"

namespace hchaos::io {

/// Shortest round-trip decimal text of a double (17 significant digits).
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : cols_(header.size()) { row(header); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != cols_) throw Error(ErrorKind::invalid_input, "csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  void row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(num(v));
    row(s);
  }

  std::string str() const { return out_.str(); }

 private:
  std::size_t cols_;
  std::ostringstream out_;
};

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::invalid_input, "cannot write " + path);
  f << text;
}

/// Minimal SVG canvas mapping a data box onto a pixel frame.
class Svg {
 public:
  Svg(double x0, double x1, double y0, double y1, int width = 640, int height = 480)
      : x0_(x0), x1_(x1), y0_(y0), y1_(y1), w_(width), h_(height) {}

  double px(double x) const { return (x - x0_) / (x1_ - x0_) * w_; }
  double py(double y) const { return h_ - (y - y0_) / (y1_ - y0_) * h_; }

  void circle(double x, double y, double r, const std::string& fill) {
    body_ << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y)) << "\" r=\"" << fmt(r)
          << "\" fill=\"" << fill << "\"/>\n";
  }
  void rect(double x, double y, double dx, double dy, const std::string& fill) {
    const double ax = px(x), ay = py(y + dy);
    body_ << "<rect x=\"" << fmt(ax) << "\" y=\"" << fmt(ay) << "\" width=\""
          << fmt(px(x + dx) - ax) << "\" height=\"" << fmt(py(y) - ay) << "\" fill=\"" << fill
          << "\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                double width = 1.0) {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(width)
          << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ << ' ';
      body_ << fmt(px(pts[i].first)) << ',' << fmt(py(pts[i].second));
    }
    body_ << "\"/>\n";
  }

  std::string str() const {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
      << "\" viewBox=\"0 0 " << w_ << ' ' << h_ << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
    return s.str();
  }

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }
  double x0_, x1_, y0_, y1_;
  int w_, h_;
  std::ostringstream body_;
};

/// Grey level for t in [0, 1].
inline std::string grey(double t) {
  const int v = static_cast<int>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", v, v, v);
  return buf;
}

// ---------------------------------------------------------------------------------------
// Config files: "[section]" headers followed by "key = value" lines; '#' starts a comment.

struct ConfigEntry {
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string name;
  int line = 0;
  std::map<std::string, ConfigEntry> entries;

  bool has(const std::string& k) const { return entries.count(k) != 0; }
  std::string get(const std::string& k, const std::string& fallback) const {
    auto it = entries.find(k);
    return it == entries.end() ? fallback : it->second.value;
  }
  double number(const std::string& k, double fallback) const {
    auto it = entries.find(k);
    if (it == entries.end()) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(it->second.value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != it->second.value.size()) {
      throw Error(ErrorKind::invalid_input, "line " + std::to_string(it->second.line) + ": '" + k +
                                                "' is not a number");
    }
    return v;
  }
  /// Rejects keys outside `allowed`, naming the offending line.
  void require_known(const std::vector<std::string>& allowed) const {
    for (const auto& [k, e] : entries) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        throw Error(ErrorKind::invalid_input,
                    "line " + std::to_string(e.line) + ": unknown key '" + k + "' in [" + name + "]");
      }
    }
  }
};

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<ConfigSection> parse_config(const std::string& text) {
  std::vector<ConfigSection> out;
  std::istringstream in(text);
  std::string raw;
  int ln = 0;
  while (std::getline(in, raw)) {
    ++ln;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorKind::invalid_input, "line " + std::to_string(ln) + ": bad section header");
      }
      out.push_back({trim(line.substr(1, line.size() - 2)), ln, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::invalid_input, "line " + std::to_string(ln) + ": expected key = value");
    }
    if (out.empty()) {
      throw Error(ErrorKind::invalid_input, "line " + std::to_string(ln) + ": key outside a section");
    }
    const std::string k = trim(line.substr(0, eq));
    if (out.back().entries.count(k)) {
      throw Error(ErrorKind::invalid_input, "line " + std::to_string(ln) + ": duplicate key '" + k + "'");
    }
    out.back().entries[k] = {trim(line.substr(eq + 1)), ln};
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::invalid_input, "cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace hchaos::io
