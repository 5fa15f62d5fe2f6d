#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curvlab::io {

// Full round-trip precision, C-locale decimal point, "nan"/"inf"/"-inf" for
// the non-finite values.
std::string format_double(double v);

// Header row then one row per entry, LF line endings.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Standalone 800x500 SVG line chart: axes, five ticks per axis, one colored
// polyline per series, legend when labels are present. Non-finite points
// split the polyline. Throws on an empty series list or when nothing is
// drawable.
void emit_svg(std::ostream& os, const std::vector<Series>& series,
              const std::string& x_label, const std::string& y_label,
              const std::string& title = "");
void emit_svg_file(const std::string& path, const std::vector<Series>& series,
                   const std::string& x_label, const std::string& y_label,
                   const std::string& title = "");

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace curvlab::io
