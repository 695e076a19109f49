#include "softpack/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "softpack/errors.hpp"

#ifndef SOFTPACK_VERSION
#define SOFTPACK_VERSION "0.0.0"
#endif

namespace softpack::io {

std::string_view version() { return SOFTPACK_VERSION; }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string header_line(std::string_view canonical_config) {
  return "# softpack " + std::string(version()) + " config=" + hex64(fnv1a64(canonical_config));
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::string canonical_config, std::vector<std::string> columns)
    : config_(std::move(canonical_config)), columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) throw InputError("CsvTable: row width does not match the header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out = header_line(config_) + "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return out;
}

SvgFigure::SvgFigure(double xmin, double ymin, double xmax, double ymax, int pixels) : xmin_(xmin), ymin_(ymin) {
  const double w = xmax - xmin, h = ymax - ymin;
  if (!(w > 0 && h > 0)) throw InputError("SvgFigure: empty view box");
  scale_ = pixels / std::max(w, h);
  px_ = static_cast<int>(std::ceil(w * scale_));
  py_ = static_cast<int>(std::ceil(h * scale_));
}

std::string SvgFigure::point(Vec2 p) const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f,%.3f", (p.x - xmin_) * scale_, py_ - (p.y - ymin_) * scale_);
  return buf;
}

void SvgFigure::polygon(const std::vector<Vec2>& pts, std::string_view stroke, std::string_view fill, double width,
                        std::string_view dash) {
  std::ostringstream os;
  os << "<polygon points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? " " : "") << point(pts[i]);
  os << "\" stroke=\"" << stroke << "\" fill=\"" << fill << "\" stroke-width=\"" << width << "\"";
  if (!dash.empty()) os << " stroke-dasharray=\"" << dash << "\"";
  os << "/>\n";
  body_ += os.str();
}

void SvgFigure::polyline(const std::vector<Vec2>& pts, std::string_view stroke, double width) {
  std::ostringstream os;
  os << "<polyline points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? " " : "") << point(pts[i]);
  os << "\" stroke=\"" << stroke << "\" fill=\"none\" stroke-width=\"" << width << "\"/>\n";
  body_ += os.str();
}

void SvgFigure::circle(Vec2 c, double r, std::string_view stroke, std::string_view fill, double width) {
  const std::string p = point(c);
  const auto comma = p.find(',');
  std::ostringstream os;
  os << "<circle cx=\"" << p.substr(0, comma) << "\" cy=\"" << p.substr(comma + 1) << "\" r=\"" << r * scale_
     << "\" stroke=\"" << stroke << "\" fill=\"" << fill << "\" stroke-width=\"" << width << "\"/>\n";
  body_ += os.str();
}

void SvgFigure::text(Vec2 at, std::string_view s, int size) {
  const std::string p = point(at);
  const auto comma = p.find(',');
  std::ostringstream os;
  os << "<text x=\"" << p.substr(0, comma) << "\" y=\"" << p.substr(comma + 1) << "\" font-size=\"" << size
     << "\" font-family=\"sans-serif\">" << s << "</text>\n";
  body_ += os.str();
}

std::string SvgFigure::str() const {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << px_ << "\" height=\"" << py_
     << "\" viewBox=\"0 0 " << px_ << ' ' << py_ << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << body_ << "</svg>\n";
  return os.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw InputError("short write to " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot write " + path);
  }
}

}  // namespace softpack::io
