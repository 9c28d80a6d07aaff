#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ellscope/io.hpp"

namespace ellscope {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_scan_csv(std::ostream& os, const DomainScanResult& scan) {
  const bool two_d = scan.request.axes.size() > 1;
  os << (two_d ? "x,y,verdict,min_margin,worst_condition\n" : "x,verdict,min_margin,worst_condition\n");
  for (const auto& c : scan.cells) {
    os << format_double(c.coords[0]) << ',';
    if (two_d) os << format_double(c.coords[1]) << ',';
    os << status_letter(c.status) << ',' << format_double(c.min_margin) << ',' << c.worst << '\n';
  }
}

std::string scan_csv(const DomainScanResult& scan) {
  std::ostringstream os;
  write_scan_csv(os, scan);
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, int line_no) {
  if (s == "nan") return std::nan("");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

GridField read_scan_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool two_d;
  if (line == "x,y,verdict,min_margin,worst_condition") {
    two_d = true;
  } else if (line == "x,verdict,min_margin,worst_condition") {
    two_d = false;
  } else {
    throw std::runtime_error("csv line 1: unrecognized header '" + line + "'");
  }

  struct Row {
    double x, y, margin;
    bool inside;
  };
  std::vector<Row> rows;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    const std::size_t want = two_d ? 5 : 4;
    if (f.size() != want) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                               std::to_string(want) + " fields");
    }
    Row r{};
    std::size_t k = 0;
    r.x = parse_number(f[k++], line_no);
    r.y = two_d ? parse_number(f[k++], line_no) : 0.0;
    const std::string& verdict = f[k++];
    if (verdict != "E" && verdict != "V" && verdict != "I") {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad verdict '" + verdict + "'");
    }
    r.inside = verdict == "E";
    r.margin = parse_number(f[k++], line_no);
    rows.push_back(r);
  }
  if (rows.empty()) throw std::runtime_error("csv: no data rows");

  GridField field;
  for (const auto& r : rows) field.xs.push_back(r.x);
  std::sort(field.xs.begin(), field.xs.end());
  field.xs.erase(std::unique(field.xs.begin(), field.xs.end()), field.xs.end());
  if (two_d) {
    for (const auto& r : rows) field.ys.push_back(r.y);
    std::sort(field.ys.begin(), field.ys.end());
    field.ys.erase(std::unique(field.ys.begin(), field.ys.end()), field.ys.end());
  }
  const std::size_t nx = field.xs.size();
  const std::size_t ny = two_d ? field.ys.size() : 1;
  if (nx * ny != rows.size()) throw std::runtime_error("csv: rows do not form a complete grid");
  field.inside.assign(nx * ny, 0);
  field.value.assign(nx * ny, 0.0);
  std::vector<char> seen(nx * ny, 0);
  for (const auto& r : rows) {
    const std::size_t ix = std::lower_bound(field.xs.begin(), field.xs.end(), r.x) - field.xs.begin();
    const std::size_t iy =
        two_d ? std::lower_bound(field.ys.begin(), field.ys.end(), r.y) - field.ys.begin() : 0;
    const std::size_t idx = iy * nx + ix;
    if (seen[idx]) throw std::runtime_error("csv: duplicate grid node");
    seen[idx] = 1;
    field.inside[idx] = r.inside ? 1 : 0;
    field.value[idx] = std::isnan(r.margin) ? (r.inside ? 0.0 : -1.0) : r.margin;
  }
  return field;
}

void write_boundary_csv(std::ostream& os, const std::vector<BoundaryPolyline>& lines) {
  os << "polyline,closed,x,y\n";
  for (std::size_t k = 0; k < lines.size(); ++k) {
    for (const auto& v : lines[k].vertices) {
      os << k << ',' << (lines[k].closed ? 1 : 0) << ',' << format_double(v[0]) << ','
         << format_double(v[1]) << '\n';
    }
  }
}

}  // namespace ellscope
