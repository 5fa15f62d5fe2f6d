#include "curvlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace curvlab::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  if (header.empty()) throw std::invalid_argument("csv needs a header row");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("csv row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_double(row[i]);
    }
    os << '\n';
  }
}

void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(os, header, rows);
  if (!os) throw std::runtime_error("write failed: " + path);
}

namespace {

constexpr int kWidth = 800, kHeight = 500;
constexpr int kLeft = 60, kRight = 20, kTop = 20, kBottom = 40;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#17becf"};

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void emit_svg(std::ostream& os, const std::vector<Series>& series,
              const std::string& x_label, const std::string& y_label,
              const std::string& title) {
  if (series.empty()) throw std::invalid_argument("svg chart needs at least one series");

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  std::size_t finite = 0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("series x and y lengths differ");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
      ++finite;
    }
  }
  if (finite == 0) throw std::invalid_argument("svg chart has no finite points");
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
     << "\">\n";
  os << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" fill=\"white\"/>\n";
  if (!title.empty())
    os << "<text x=\"" << kWidth / 2 << "\" y=\"14\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"13\">"
       << xml_escape(title) << "</text>\n";

  // Frame and ticks.
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
     << kLeft + plot_w << "\" y2=\"" << kTop + plot_h << "\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
     << "\" y2=\"" << kTop + plot_h << "\"/>\n";
  os << "</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  const int ticks = 5;
  for (int k = 0; k < ticks; ++k) {
    const double fx = xmin + (xmax - xmin) * k / (ticks - 1);
    const double gx = px(fx);
    os << "<line x1=\"" << short_num(gx) << "\" y1=\"" << kTop + plot_h
       << "\" x2=\"" << short_num(gx) << "\" y2=\"" << kTop + plot_h + 5
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << short_num(gx) << "\" y=\"" << kTop + plot_h + 18
       << "\" text-anchor=\"middle\">" << short_num(fx) << "</text>\n";
    const double fy = ymin + (ymax - ymin) * k / (ticks - 1);
    const double gy = py(fy);
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << short_num(gy) << "\" x2=\""
       << kLeft << "\" y2=\"" << short_num(gy) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << short_num(gy + 4)
       << "\" text-anchor=\"end\">" << short_num(fy) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 6
     << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
  os << "<text x=\"14\" y=\"" << kTop + plot_h / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
     << kTop + plot_h / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
  os << "</g>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    std::ostringstream pts;
    bool open = false;
    auto flush = [&]() {
      const std::string body = pts.str();
      if (open && !body.empty())
        os << "<polyline fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\" points=\"" << body << "\"/>\n";
      pts.str("");
      open = false;
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      if (open) pts << ' ';
      pts << short_num(px(s.x[i])) << ',' << short_num(py(s.y[i]));
      open = true;
    }
    flush();
    if (!s.label.empty()) {
      const int ly = kTop + 16 + 16 * static_cast<int>(si);
      os << "<line x1=\"" << kLeft + plot_w - 120 << "\" y1=\"" << ly - 4
         << "\" x2=\"" << kLeft + plot_w - 100 << "\" y2=\"" << ly - 4
         << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      os << "<text x=\"" << kLeft + plot_w - 94 << "\" y=\"" << ly
         << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.label)
         << "</text>\n";
    }
  }
  os << "</svg>\n";
}

void emit_svg_file(const std::string& path, const std::vector<Series>& series,
                   const std::string& x_label, const std::string& y_label,
                   const std::string& title) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  emit_svg(os, series, x_label, y_label, title);
  if (!os) throw std::runtime_error("write failed: " + path);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

}  // namespace curvlab::io
