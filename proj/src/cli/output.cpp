#include "vss/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "vss/errors.hpp"

namespace vss {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // no "-0.00000000e+00"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvTable::row(const std::vector<double>& values) {
  if (values.size() != columns_) fail(ErrorKind::input, "CSV row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ',';
    text_ += format_number(values[i]);
  }
  text_ += '\n';
  ++rows_;
}

std::string CsvTable::str() const { return text_; }

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, text_); }

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) fail(ErrorKind::io, "failed writing " + path.string());
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    fail(ErrorKind::io, "cannot create output directory " + dir.string() +
                            (ec ? ": " + ec.message() : std::string()));
  }
}

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Scale {
  double lo, hi;
  bool log;
  double map(double v, double a, double b) const {
    const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }
  double label(double t) const {
    const double v = lo + t * (hi - lo);
    return log ? std::pow(10.0, v) : v;
  }
};

Scale make_scale(const std::vector<const std::vector<double>*>& data, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* v : data) {
    for (double x : *v) {
      if (!std::isfinite(x) || (log && !(x > 0.0))) continue;
      const double t = log ? std::log10(x) : x;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi == lo) hi = lo + 1.0;
  return {lo, hi, log};
}

void frame(std::ostringstream& svg, const ChartAxes& axes, const Scale& sx, const Scale& sy) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(axes.title) << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
      << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    const double px = kLeft + t * (kWidth - kLeft - kRight);
    const double py = kHeight - kBottom - t * (kHeight - kTop - kBottom);
    svg << "<text x=\"" << px << "\" y=\"" << kHeight - kBottom + 16
        << "\" text-anchor=\"middle\">" << short_number(sx.label(t)) << "</text>\n"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
        << short_number(sy.label(t)) << "</text>\n";
  }
  svg << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\">" << escape(axes.x_label) << "</text>\n"
      << "<text transform=\"translate(18," << (kTop + kHeight - kBottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(axes.y_label) << "</text>\n";
}

}  // namespace

std::string svg_line_chart(const ChartAxes& axes, const std::vector<Series>& series) {
  std::vector<const std::vector<double>*> xs, ys;
  for (const auto& s : series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  const Scale sx = make_scale(xs, axes.log_x);
  const Scale sy = make_scale(ys, axes.log_y);
  std::ostringstream svg;
  svg.precision(6);
  frame(svg, axes, sx, sy);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if ((axes.log_x && !(s.x[i] > 0)) || (axes.log_y && !(s.y[i] > 0))) continue;
      svg << sx.map(s.x[i], kLeft, kWidth - kRight) << ','
          << sy.map(s.y[i], kHeight - kBottom, kTop) << ' ';
    }
    svg << "\"/>\n";
    if (!s.label.empty()) {
      svg << "<text x=\"" << kWidth - kRight - 8 << "\" y=\"" << kTop + 16 + 16 * k
          << "\" text-anchor=\"end\" fill=\"" << colour << "\">" << escape(s.label) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_heatmap(const ChartAxes& axes, const std::vector<double>& x,
                        const std::vector<double>& y, const std::vector<std::vector<double>>& values) {
  const Scale sx = make_scale({&x}, false);
  const Scale sy = make_scale({&y}, false);
  double top = 0.0;
  for (const auto& row : values) {
    for (double v : row) {
      if (std::isfinite(v)) top = std::max(top, v);
    }
  }
  if (!(top > 0.0)) top = 1.0;
  std::ostringstream svg;
  svg.precision(6);
  frame(svg, axes, sx, sy);
  const double cw = (kWidth - kLeft - kRight) / static_cast<double>(std::max<std::size_t>(x.size(), 1));
  const double ch = (kHeight - kTop - kBottom) / static_cast<double>(std::max<std::size_t>(y.size(), 1));
  for (std::size_t r = 0; r < y.size() && r < values.size(); ++r) {
    for (std::size_t c = 0; c < x.size() && c < values[r].size(); ++c) {
      const double t = std::clamp(values[r][c] / top, 0.0, 1.0);
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - t)));
      svg << "<rect x=\"" << kLeft + c * cw << "\" y=\"" << kHeight - kBottom - (r + 1) * ch
          << "\" width=\"" << cw + 0.05 << "\" height=\"" << ch + 0.05 << "\" fill=\"rgb(" << shade
          << ',' << shade << ",255)\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace vss
