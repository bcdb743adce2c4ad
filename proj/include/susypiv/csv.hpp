#pragma once

// Plot-data export. Values are written with 17 significant digits, which
// round-trips every double exactly.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "susypiv/error.hpp"
#include "susypiv/painleve.hpp"

namespace susypiv {

inline constexpr std::string_view kCsvHeader = "x,re_g,im_g";

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvRow {
  double x = 0.0;
  cplx g{};
};

/// Header plus one row per unmasked sample.
inline std::string to_csv(const PivSolution& s) {
  std::string out(kCsvHeader);
  out += '\n';
  for (std::size_t i = 0; i < s.g.size(); ++i) {
    if (s.masked[i]) continue;
    out += format_double(s.grid.x(i)) + ',' + format_double(s.g[i].real()) + ',' + format_double(s.g[i].imag()) + '\n';
  }
  return out;
}

/// One masked abscissa per line.
inline std::string mask_listing(const PivSolution& s) {
  std::string out;
  for (std::size_t i = 0; i < s.g.size(); ++i)
    if (s.masked[i]) out += format_double(s.grid.x(i)) + '\n';
  return out;
}

namespace detail {

inline double parse_double(std::string_view field) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw InvalidArgument("csv: malformed number '" + std::string(field) + "'");
  return v;
}

}  // namespace detail

inline std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  bool header = true;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw InvalidArgument("csv: unexpected header");
      header = false;
      continue;
    }
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw InvalidArgument("csv: expected three columns");
    rows.push_back({detail::parse_double(line.substr(0, c1)),
                    {detail::parse_double(line.substr(c1 + 1, c2 - c1 - 1)), detail::parse_double(line.substr(c2 + 1))}});
  }
  if (header) throw InvalidArgument("csv: missing header");
  return rows;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw InvalidArgument("failed writing '" + path + "'");
}

}  // namespace susypiv
