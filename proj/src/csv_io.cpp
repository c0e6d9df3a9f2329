#include "tailasym/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "tailasym/errors.hpp"

namespace tailasym {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> to_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

} // namespace

PairedSample read_pair_csv(std::istream& is, Scale scale) {
  PairedSample out;
  out.scale = scale;
  std::string line;
  std::size_t lineno = 0;
  bool first_content = true;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (lineno == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    if (view.empty()) continue;
    const auto comma = view.find(',');
    const bool header_candidate = first_content;
    first_content = false;
    if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
      throw DataError("line " + std::to_string(lineno) + ": expected exactly two comma-separated columns");
    }
    const auto a = to_number(view.substr(0, comma));
    const auto b = to_number(view.substr(comma + 1));
    if (!a || !b) {
      if (header_candidate && !a && !b) continue;
      throw DataError("line " + std::to_string(lineno) + ": non-numeric value");
    }
    out.x1.push_back(*a);
    out.x2.push_back(*b);
  }
  out.validate();
  return out;
}

PairedSample read_pair_csv(const std::string& path, Scale scale) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_pair_csv(in, scale);
}

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_pair_csv(std::ostream& os, const PairedSample& sample) {
  os << (sample.scale == Scale::Raw ? "x1,x2\n" : "u1,u2\n");
  for (std::size_t i = 0; i < sample.size(); ++i)
    os << format_double(sample.x1[i]) << ',' << format_double(sample.x2[i]) << '\n';
}

} // namespace tailasym
