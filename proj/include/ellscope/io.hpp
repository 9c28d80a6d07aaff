#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellscope/scanner.hpp"

namespace ellscope {

inline constexpr const char* kVersion = "0.1.0";

/// %.17g; "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double v);

// Scan CSV. 2D charts: x,y,verdict,min_margin,worst_condition
//           1D charts: x,verdict,min_margin,worst_condition
// Rows in cell order (y outer, x inner).
void write_scan_csv(std::ostream& os, const DomainScanResult& scan);
std::string scan_csv(const DomainScanResult& scan);

/// Parses a scan CSV back into a grid field. The node coordinates are the
/// distinct x (and y) values; every (x, y) pair must be present exactly once.
/// Cells are "inside" when the verdict is E. Throws std::runtime_error with
/// the offending line number on malformed input.
GridField read_scan_csv(std::istream& is);

/// polyline,closed,x,y
void write_boundary_csv(std::ostream& os, const std::vector<BoundaryPolyline>& lines);

struct SvgOptions {
  bool ellipse_overlay = false;  // a^2 + b^2 + ab = 1, meaningful for the ab chart
  std::string title;
  int width = 600;
};

/// Flat rendering: one filled rect per node (E green, other red), boundary
/// polylines in black, optional ellipse in blue. The viewBox spans the node
/// range with y pointing up.
std::string render_svg(const GridField& field, const std::vector<BoundaryPolyline>& lines,
                       const SvgOptions& options = {});

struct RunReport {
  std::string command;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
  double wall_seconds = 0.0;

  /// {"command", "version", "inputs", "outputs", "timing": {"wall_seconds"}}
  nlohmann::ordered_json to_json() const;
  static RunReport from_json(const nlohmann::ordered_json& j);
};

/// Non-finite doubles become null.
nlohmann::ordered_json json_number(double v);

}  // namespace ellscope
