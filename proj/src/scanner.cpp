#include "ellscope/scanner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace ellscope {

const char* to_string(Method m) { return m == Method::sufficient ? "sufficient" : "oracle"; }

std::optional<Method> parse_method(std::string_view name) {
  if (name == "sufficient") return Method::sufficient;
  if (name == "oracle") return Method::oracle;
  return std::nullopt;
}

double AxisRange::node(int k) const {
  if (k == resolution - 1) return hi;
  return lo + k * ((hi - lo) / (resolution - 1));
}

double DomainScanResult::threshold() const {
  return request.method == Method::sufficient ? request.tol : request.oracle.tol;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("ELLSCOPE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

namespace {

void validate(const ScanRequest& req) {
  if (static_cast<int>(req.axes.size()) != chart_arity(req.chart)) {
    throw std::invalid_argument(std::string("scan: chart '") + to_string(req.chart) + "' needs " +
                                std::to_string(chart_arity(req.chart)) + " axis range(s)");
  }
  for (const auto& ax : req.axes) {
    if (ax.resolution < 2) throw std::invalid_argument("scan: resolution must be >= 2 per axis");
    if (!(ax.lo < ax.hi)) throw std::invalid_argument("scan: range needs lo < hi");
  }
  if (req.spec.dim != chart_stretch_dim(req.chart)) {
    throw std::invalid_argument(std::string("scan: chart '") + to_string(req.chart) + "' produces " +
                                std::to_string(chart_stretch_dim(req.chart)) +
                                "D stretches but the energy is " + std::to_string(req.spec.dim) + "D");
  }
}

CellRecord evaluate_cell(const ScanRequest& req, std::array<double, 2> coords) {
  CellRecord cell;
  cell.coords = coords;
  try {
    const Stretches s = ChartPoint{req.chart, coords}.to_stretches(req.cone_scale);
    if (req.method == Method::sufficient) {
      const EllipticityVerdict v = check_point(req.spec, s, req.tol);
      cell.status = v.status;
      cell.min_margin = v.worst.margin;
      cell.worst = v.worst.tag();
    } else {
      const OracleVerdict v = min_acoustic(req.spec, s, req.oracle);
      cell.status = v.status;
      cell.min_margin = v.min_value;
      cell.worst = "rank1";
    }
  } catch (const std::exception& e) {
    cell.status = Status::Indeterminate;
    cell.min_margin = std::nan("");
    cell.worst = "error";
    cell.note = e.what();
  }
  return cell;
}

}  // namespace

DomainScanResult scan_grid(const ScanRequest& req) {
  validate(req);
  const auto start = std::chrono::steady_clock::now();
  DomainScanResult out;
  out.request = req;
  const int nx = req.axes[0].resolution;
  const int ny = req.axes.size() > 1 ? req.axes[1].resolution : 1;
  out.cells.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  parallel_for(out.cells.size(), req.threads, [&](std::size_t idx) {
    const int ix = static_cast<int>(idx % static_cast<std::size_t>(nx));
    const int iy = static_cast<int>(idx / static_cast<std::size_t>(nx));
    std::array<double, 2> coords{req.axes[0].node(ix), ny > 1 ? req.axes[1].node(iy) : 0.0};
    out.cells[idx] = evaluate_cell(req, coords);
  });
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

double BoundaryPolyline::length() const {
  double len = 0.0;
  for (std::size_t k = 1; k < vertices.size(); ++k) {
    len += std::hypot(vertices[k][0] - vertices[k - 1][0], vertices[k][1] - vertices[k - 1][1]);
  }
  if (closed && vertices.size() > 1) {
    len += std::hypot(vertices.front()[0] - vertices.back()[0],
                      vertices.front()[1] - vertices.back()[1]);
  }
  return len;
}

GridField GridField::from_scan(const DomainScanResult& scan) {
  GridField f;
  for (int i = 0; i < scan.nx(); ++i) f.xs.push_back(scan.request.axes[0].node(i));
  if (scan.request.axes.size() > 1) {
    for (int j = 0; j < scan.ny(); ++j) f.ys.push_back(scan.request.axes[1].node(j));
  }
  const double tol = scan.threshold();
  for (const auto& c : scan.cells) {
    const bool in = c.status == Status::Elliptic;
    f.inside.push_back(in ? 1 : 0);
    f.value.push_back(std::isnan(c.min_margin) ? (in ? 0.0 : -1.0) : c.min_margin + tol);
  }
  return f;
}

namespace {

// Keeps the interpolation weights consistent with the inside flags.
double signed_value(const GridField& f, std::size_t idx) {
  constexpr double tiny = 1e-300;
  const double v = f.value[idx];
  return f.inside[idx] ? std::max(v, tiny) : std::min(v, -tiny);
}

std::vector<BoundaryPolyline> trace_1d(const GridField& f) {
  std::vector<BoundaryPolyline> out;
  for (std::size_t i = 0; i + 1 < f.xs.size(); ++i) {
    if (f.inside[i] == f.inside[i + 1]) continue;
    const double va = signed_value(f, i), vb = signed_value(f, i + 1);
    const double t = va / (va - vb);
    out.push_back({{{f.xs[i] + t * (f.xs[i + 1] - f.xs[i]), 0.0}}, false});
  }
  return out;
}

}  // namespace

std::vector<BoundaryPolyline> trace_boundary(const GridField& f) {
  if (f.ys.empty()) return trace_1d(f);

  const int nx = static_cast<int>(f.xs.size());
  const int ny = static_cast<int>(f.ys.size());
  if (static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) != f.inside.size() ||
      f.inside.size() != f.value.size()) {
    throw std::invalid_argument("trace_boundary: field size mismatch");
  }
  auto at = [nx](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
  // Edge ids: horizontal edge from (i,j) to (i+1,j) is 2*at(i,j); vertical
  // edge from (i,j) to (i,j+1) is 2*at(i,j)+1.
  std::map<long, std::array<double, 2>> edge_point;
  auto crossing = [&](int i0, int j0, int i1, int j1, long id) {
    if (edge_point.count(id)) return;
    const double va = signed_value(f, at(i0, j0)), vb = signed_value(f, at(i1, j1));
    const double t = va / (va - vb);
    edge_point[id] = {f.xs[i0] + t * (f.xs[i1] - f.xs[i0]), f.ys[j0] + t * (f.ys[j1] - f.ys[j0])};
  };

  std::vector<std::array<long, 2>> segments;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const bool c0 = f.inside[at(i, j)], c1 = f.inside[at(i + 1, j)];
      const bool c2 = f.inside[at(i + 1, j + 1)], c3 = f.inside[at(i, j + 1)];
      const long bottom = 2L * static_cast<long>(at(i, j));
      const long right = 2L * static_cast<long>(at(i + 1, j)) + 1;
      const long top = 2L * static_cast<long>(at(i, j + 1));
      const long left = 2L * static_cast<long>(at(i, j)) + 1;
      std::vector<long> edges;
      if (c0 != c1) { crossing(i, j, i + 1, j, bottom); edges.push_back(bottom); }
      if (c1 != c2) { crossing(i + 1, j, i + 1, j + 1, right); edges.push_back(right); }
      if (c2 != c3) { crossing(i, j + 1, i + 1, j + 1, top); edges.push_back(top); }
      if (c3 != c0) { crossing(i, j, i, j + 1, left); edges.push_back(left); }
      if (edges.size() == 2) {
        segments.push_back({edges[0], edges[1]});
      } else if (edges.size() == 4) {
        const double avg = (signed_value(f, at(i, j)) + signed_value(f, at(i + 1, j)) +
                            signed_value(f, at(i + 1, j + 1)) + signed_value(f, at(i, j + 1))) / 4.0;
        const bool center = avg >= 0.0;
        // When the center matches c0 (and c2), the lines cut off c1 and c3.
        if (center == c0) {
          segments.push_back({bottom, right});
          segments.push_back({top, left});
        } else {
          segments.push_back({left, bottom});
          segments.push_back({right, top});
        }
      }
    }
  }

  std::map<long, std::vector<std::size_t>> by_edge;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    for (long e : segments[s]) by_edge[e].push_back(s);
  }
  std::vector<char> used(segments.size(), 0);

  auto walk = [&](std::size_t first, long start_edge) {
    BoundaryPolyline line;
    line.vertices.push_back(edge_point.at(start_edge));
    long edge = start_edge;
    std::size_t seg = first;
    while (true) {
      used[seg] = 1;
      const long next = segments[seg][0] == edge ? segments[seg][1] : segments[seg][0];
      if (next == start_edge) {
        line.closed = true;
        break;
      }
      line.vertices.push_back(edge_point.at(next));
      edge = next;
      std::size_t follow = segments.size();
      for (std::size_t cand : by_edge[edge]) {
        if (!used[cand]) follow = cand;
      }
      if (follow == segments.size()) break;
      seg = follow;
    }
    return line;
  };

  std::vector<BoundaryPolyline> out;
  // Open chains start at edges touched by a single segment (the grid border).
  for (const auto& [edge, segs] : by_edge) {
    if (segs.size() == 1 && !used[segs[0]]) out.push_back(walk(segs[0], edge));
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) out.push_back(walk(s, segments[s][0]));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.length() > b.length(); });
  return out;
}

std::vector<BoundaryPolyline> trace_boundary(const DomainScanResult& scan) {
  return trace_boundary(GridField::from_scan(scan));
}

double halton(std::uint64_t index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

const char* to_string(Region r) {
  switch (r) {
    case Region::prop2d: return "prop2d";
    case Region::prop3d_ellipse: return "prop3d-ellipse";
    case Region::bruhns_cube: return "bruhns-cube";
  }
  return "?";
}

std::optional<Region> parse_region(std::string_view name) {
  for (Region r : {Region::prop2d, Region::prop3d_ellipse, Region::bruhns_cube}) {
    if (name == to_string(r)) return r;
  }
  return std::nullopt;
}

namespace {

struct Sample {
  Stretches stretches;
  int expected;  // 1 Elliptic, 0 Violated, -1 excluded
};

std::vector<Sample> region_samples(Region region, int samples) {
  std::vector<Sample> out;
  using std::numbers::pi;
  switch (region) {
    case Region::prop2d:
      for (int k = 1; k <= samples; ++k) {
        const double logt = -2.0 + 4.0 * halton(static_cast<std::uint64_t>(k), 2);
        const double scale = std::pow(10.0, -1.0 + 2.0 * halton(static_cast<std::uint64_t>(k), 3));
        const double gap = std::abs(std::abs(logt) - 1.0);
        out.push_back({logt_to_stretches_2d(logt).scaled(scale),
                       gap < 1e-6 ? -1 : (std::abs(logt) <= 1.0 ? 1 : 0)});
      }
      break;
    case Region::prop3d_ellipse:
      for (int k = 1; k <= samples; ++k) {
        const double p = std::sqrt(2.0) * std::sqrt(halton(static_cast<std::uint64_t>(k), 2));
        const double theta = 2.0 * pi * halton(static_cast<std::uint64_t>(k), 3);
        const double scale = std::pow(10.0, -1.0 + 2.0 * halton(static_cast<std::uint64_t>(k), 5));
        const auto [a, b] = ptheta_to_ab(p, theta);
        out.push_back({ab_to_stretches(a, b).scaled(scale), 1});
      }
      break;
    case Region::bruhns_cube: {
      const int m = std::max(2, static_cast<int>(std::lround(std::cbrt(static_cast<double>(samples)))));
      const AxisRange axis{kBruhnsLo, kBruhnsHi, m};
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          for (int l = 0; l < m; ++l) {
            out.push_back({Stretches{axis.node(i), axis.node(j), axis.node(l)}, 1});
          }
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace

RegionReport verify_region(const EnergySpec& spec, Region region, Method method, int samples,
                           double tol, const OracleConfig& oracle, unsigned threads) {
  if (samples < 1) throw std::invalid_argument("verify_region: samples must be >= 1");
  const int need_dim = region == Region::prop2d ? 2 : 3;
  if (spec.dim != need_dim) {
    throw std::invalid_argument(std::string("verify_region: region '") + to_string(region) +
                                "' needs a " + std::to_string(need_dim) + "D energy");
  }
  const std::vector<Sample> pts = region_samples(region, samples);

  struct Outcome {
    Status status;
    double margin;
  };
  std::vector<Outcome> results(pts.size());
  OracleConfig config = oracle;
  config.tol = tol;
  parallel_for(pts.size(), threads, [&](std::size_t k) {
    if (method == Method::sufficient) {
      const auto v = check_point(spec, pts[k].stretches, tol);
      results[k] = {v.status, v.worst.margin};
    } else {
      const auto v = min_acoustic(spec, pts[k].stretches, config);
      results[k] = {v.status, v.min_value};
    }
  });

  RegionReport rep;
  rep.region = region;
  rep.method = method;
  rep.samples = static_cast<int>(pts.size());
  bool first = true;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& r = results[k];
    switch (r.status) {
      case Status::Elliptic: ++rep.elliptic; break;
      case Status::Violated: ++rep.violated; break;
      case Status::Indeterminate: ++rep.indeterminate; break;
    }
    if (pts[k].expected < 0) {
      ++rep.excluded;
    } else if ((pts[k].expected == 1) != (r.status == Status::Elliptic)) {
      ++rep.mismatches;
    }
    // Worst margin among points expected to be elliptic.
    if (pts[k].expected == 1 && (first || r.margin < rep.worst_margin)) {
      first = false;
      rep.worst_margin = r.margin;
      auto v = pts[k].stretches.values();
      rep.worst_location.assign(v.begin(), v.end());
    }
  }
  rep.pass = rep.mismatches == 0;
  return rep;
}

RegionReport verify_log_band_2d(const EnergySpec& spec, double min_abs_log, double max_abs_log,
                                Status expected, int samples, double tol) {
  if (samples < 1) throw std::invalid_argument("verify_log_band_2d: samples must be >= 1");
  if (spec.dim != 2) throw std::invalid_argument("verify_log_band_2d: needs a 2D energy");
  if (!(min_abs_log >= 0.0 && min_abs_log <= max_abs_log)) {
    throw std::invalid_argument("verify_log_band_2d: need 0 <= min <= max");
  }
  RegionReport rep;
  rep.region = Region::prop2d;
  rep.samples = samples;
  bool first = true;
  for (int k = 1; k <= samples; ++k) {
    const double mag = min_abs_log + (max_abs_log - min_abs_log) * halton(static_cast<std::uint64_t>(k), 2);
    const double logt = (k % 2 == 0) ? mag : -mag;
    const double scale = std::pow(10.0, -1.0 + 2.0 * halton(static_cast<std::uint64_t>(k), 3));
    const Stretches s = logt_to_stretches_2d(logt).scaled(scale);
    const auto v = check_point(spec, s, tol);
    switch (v.status) {
      case Status::Elliptic: ++rep.elliptic; break;
      case Status::Violated: ++rep.violated; break;
      case Status::Indeterminate: ++rep.indeterminate; break;
    }
    if (v.status != expected) ++rep.mismatches;
    if (first || v.worst.margin < rep.worst_margin) {
      first = false;
      rep.worst_margin = v.worst.margin;
      auto vals = s.values();
      rep.worst_location.assign(vals.begin(), vals.end());
    }
  }
  rep.pass = rep.mismatches == 0;
  return rep;
}

}  // namespace ellscope
