#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ellscope/io.hpp"

namespace ellscope {

namespace {

// Cell extents: halfway to the neighbouring nodes, a full step at the ends.
std::vector<std::pair<double, double>> extents(const std::vector<double>& nodes) {
  std::vector<std::pair<double, double>> out;
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? 0.5 * (nodes[i - 1] + nodes[i]) : nodes[i] - (n > 1 ? 0.5 * (nodes[1] - nodes[0]) : 0.5);
    const double right =
        i + 1 < n ? 0.5 * (nodes[i] + nodes[i + 1]) : nodes[i] + (n > 1 ? 0.5 * (nodes[n - 1] - nodes[n - 2]) : 0.5);
    out.emplace_back(left, right);
  }
  return out;
}

}  // namespace

std::string render_svg(const GridField& field, const std::vector<BoundaryPolyline>& lines,
                       const SvgOptions& options) {
  const bool two_d = !field.ys.empty();
  const auto xe = extents(field.xs);
  const std::vector<double> ys = two_d ? field.ys : std::vector<double>{0.0};
  std::vector<std::pair<double, double>> ye = two_d ? extents(ys) : std::vector<std::pair<double, double>>{};
  const double x0 = xe.front().first, x1 = xe.back().second;
  if (!two_d) {
    const double h = 0.1 * (x1 - x0);
    ye.emplace_back(-0.5 * h, 0.5 * h);
  }
  const double y0 = ye.front().first, y1 = ye.back().second;
  const double w = x1 - x0, h = y1 - y0;
  const int px_w = options.width;
  const int px_h = std::max(1, static_cast<int>(std::lround(px_w * h / w)));
  // Vertical stroke widths scale with the data range.
  const double stroke = 1.5 * w / px_w;

  std::ostringstream os;
  auto num = [](double v) { return format_double(v); };
  // y is flipped: data y maps to -y in SVG coordinates.
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px_w << "\" height=\"" << px_h
     << "\" viewBox=\"" << num(x0) << ' ' << num(-y1) << ' ' << num(w) << ' ' << num(h) << "\">\n";
  if (!options.title.empty()) os << "<title>" << options.title << "</title>\n";
  os << "<g shape-rendering=\"crispEdges\" stroke=\"none\">\n";
  const std::size_t nx = field.xs.size();
  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const bool in = field.inside[j * nx + i] != 0;
      os << "<rect x=\"" << num(xe[i].first) << "\" y=\"" << num(-ye[j].second) << "\" width=\""
         << num(xe[i].second - xe[i].first) << "\" height=\"" << num(ye[j].second - ye[j].first)
         << "\" fill=\"" << (in ? "#9fd89f" : "#f2b8b8") << "\"/>\n";
    }
  }
  os << "</g>\n";

  if (options.ellipse_overlay && two_d) {
    os << "<polygon fill=\"none\" stroke=\"#1f4fd1\" stroke-width=\"" << num(stroke) << "\" points=\"";
    // a^2 + b^2 + ab = 1 via (p, theta) at p = sqrt2.
    const int m = 360;
    for (int k = 0; k < m; ++k) {
      const double t = 2.0 * std::numbers::pi * k / m;
      const auto [a, b] = ptheta_to_ab(std::numbers::sqrt2, t);
      os << (k ? " " : "") << num(a) << ',' << num(-b);
    }
    os << "\"/>\n";
  }

  for (const auto& line : lines) {
    if (line.vertices.size() == 1) {
      const auto& v = line.vertices[0];
      os << "<line x1=\"" << num(v[0]) << "\" y1=\"" << num(-y1) << "\" x2=\"" << num(v[0])
         << "\" y2=\"" << num(-y0) << "\" stroke=\"black\" stroke-width=\"" << num(stroke) << "\"/>\n";
      continue;
    }
    os << '<' << (line.closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"black\" stroke-width=\""
       << num(stroke) << "\" points=\"";
    for (std::size_t k = 0; k < line.vertices.size(); ++k) {
      os << (k ? " " : "") << num(line.vertices[k][0]) << ',' << num(-line.vertices[k][1]);
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ellscope
