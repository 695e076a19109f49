#pragma once

// Deterministic text output: config hashing, CSV tables, SVG figures, and
// files that appear only once fully written.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "softpack/vec.hpp"

namespace softpack::io {

std::string_view version();

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// "# softpack <version> config=<16 hex digits>"
std::string header_line(std::string_view canonical_config);

/// Shortest round-tripping form (%.17g); "nan", "inf", "-inf" for non-finite.
std::string fmt(double x);

class CsvTable {
 public:
  CsvTable(std::string canonical_config, std::vector<std::string> columns);
  /// Throws InputError when the width does not match the header.
  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::string config_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// SVG 1.1 document in world coordinates (y up), mapped onto a square canvas.
class SvgFigure {
 public:
  SvgFigure(double xmin, double ymin, double xmax, double ymax, int pixels = 640);
  void polygon(const std::vector<Vec2>& pts, std::string_view stroke, std::string_view fill = "none",
               double width = 1.0, std::string_view dash = {});
  void polyline(const std::vector<Vec2>& pts, std::string_view stroke, double width = 1.0);
  void circle(Vec2 c, double r, std::string_view stroke, std::string_view fill = "none", double width = 1.0);
  void text(Vec2 at, std::string_view s, int size = 12);
  std::string str() const;

 private:
  double xmin_, ymin_, scale_;
  int px_, py_;
  std::string body_;
  std::string point(Vec2 p) const;
};

/// Writes to a sibling temporary and renames, so readers never see a
/// partial file. Throws InputError when the directory is not writable.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace softpack::io
