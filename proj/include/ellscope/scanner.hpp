#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ellscope/acoustic.hpp"
#include "ellscope/charts.hpp"
#include "ellscope/criteria.hpp"
#include "ellscope/energy.hpp"

namespace ellscope {

enum class Method { sufficient, oracle };
const char* to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
  int resolution = 2;

  /// Node k of lo + k * (hi - lo) / (resolution - 1); the last node is hi.
  double node(int k) const;
};

struct ScanRequest {
  EnergySpec spec;
  Chart chart = Chart::ab;
  std::vector<AxisRange> axes;  // one per chart coordinate
  Method method = Method::sufficient;
  double tol = kDefaultTol;     // sufficient criterion
  OracleConfig oracle;          // oracle method (its own tol)
  double cone_scale = 1.0;
  unsigned threads = 0;         // 0: ELLSCOPE_THREADS or hardware concurrency
};

struct CellRecord {
  std::array<double, 2> coords{};
  Status status = Status::Indeterminate;
  double min_margin = 0.0;  // normalized criterion margin, or oracle minimum
  std::string worst;        // condition tag, "rank1" for the oracle
  std::string note;         // error text for cells that could not be evaluated
};

struct DomainScanResult {
  ScanRequest request;
  std::vector<CellRecord> cells;  // row-major: index = iy * nx + ix
  double wall_seconds = 0.0;

  int nx() const { return request.axes.at(0).resolution; }
  int ny() const { return request.axes.size() > 1 ? request.axes[1].resolution : 1; }
  double threshold() const;       // tol used for the Elliptic decision
};

/// Worker count from ELLSCOPE_THREADS, falling back to the hardware count.
unsigned default_thread_count();

/// Runs body(i) for i in [0, count) on `threads` workers. Each index is
/// visited exactly once; callers write into pre-sized slots.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Classifies every grid node. Cell failures become Indeterminate with a
/// note; the scan never aborts.
DomainScanResult scan_grid(const ScanRequest& req);

struct BoundaryPolyline {
  std::vector<std::array<double, 2>> vertices;
  bool closed = false;

  double length() const;
};

/// A scalar field sampled on a tensor grid, positive where the region is
/// "inside". Used by trace_boundary both for fresh scans and for CSV input.
struct GridField {
  std::vector<double> xs;
  std::vector<double> ys;          // empty for 1D fields
  std::vector<char> inside;        // row-major
  std::vector<double> value;       // row-major, signed distance-like

  static GridField from_scan(const DomainScanResult& scan);
};

/// Marching squares on the Elliptic / non-Elliptic transition with linear
/// interpolation of the margins along cell edges. Saddle cells are resolved
/// by the sign of the average corner value. For 1D fields each transition
/// yields a single-vertex polyline. Sorted by length, longest first.
std::vector<BoundaryPolyline> trace_boundary(const GridField& field);
std::vector<BoundaryPolyline> trace_boundary(const DomainScanResult& scan);

/// Radical-inverse low-discrepancy sequence.
double halton(std::uint64_t index, unsigned base);

enum class Region { prop2d, prop3d_ellipse, bruhns_cube };
const char* to_string(Region r);
std::optional<Region> parse_region(std::string_view name);

struct RegionReport {
  Region region = Region::prop2d;
  Method method = Method::sufficient;
  int samples = 0;
  int elliptic = 0;
  int violated = 0;
  int indeterminate = 0;
  int excluded = 0;             // points inside the boundary band, not judged
  int mismatches = 0;           // verdicts contradicting the expected region
  double worst_margin = 0.0;
  std::vector<double> worst_location;
  bool pass = false;
};

inline constexpr double kBruhnsLo = 0.2117;
inline constexpr double kBruhnsHi = 1.3956;

/// Samples a region with known expected verdicts and counts outcomes.
///   prop2d          2D: Elliptic iff |log(l1/l2)| <= 1 (logt in [-2,2],
///                   random scale); points within 1e-6 of |logt| = 1 excluded
///   prop3d-ellipse  3D: p <= sqrt2 (area-uniform in p, theta), all Elliptic
///   bruhns-cube     3D: regular grid on [0.2117, 1.3956]^3, all Elliptic
RegionReport verify_region(const EnergySpec& spec, Region region, Method method, int samples,
                           double tol, const OracleConfig& oracle = {}, unsigned threads = 0);

/// 2D stretches with |log(l1/l2)| in [min_abs_log, max_abs_log] (both signs,
/// random scale in [0.1, 10]); every point is expected to get `expected`
/// from the sufficient criterion. Reported with region prop2d.
RegionReport verify_log_band_2d(const EnergySpec& spec, double min_abs_log, double max_abs_log,
                                Status expected, int samples, double tol = kDefaultTol);

}  // namespace ellscope
