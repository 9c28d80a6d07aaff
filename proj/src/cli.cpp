#include "ellscope/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ellscope/acoustic.hpp"
#include "ellscope/appendix.hpp"
#include "ellscope/charts.hpp"
#include "ellscope/criteria.hpp"
#include "ellscope/energy.hpp"
#include "ellscope/io.hpp"
#include "ellscope/scanner.hpp"

namespace ellscope {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw UsageError(what + ": '" + s + "' is not a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> parse_stretch_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& f : split(s, ',')) out.push_back(parse_double(f, "--stretches"));
  if (out.size() != 2 && out.size() != 3) {
    throw UsageError("--stretches: expected 2 or 3 comma-separated values, got " +
                     std::to_string(out.size()));
  }
  for (double v : out) {
    if (!(v > 0.0)) throw UsageError("--stretches: stretches must be positive");
  }
  return out;
}

std::vector<AxisRange> parse_ranges(const std::string& s, int res) {
  std::vector<AxisRange> out;
  for (const auto& part : split(s, ',')) {
    const auto lohi = split(part, ':');
    if (lohi.size() != 2) throw UsageError("--range: expected lo:hi[,lo:hi], got '" + s + "'");
    out.push_back({parse_double(lohi[0], "--range"), parse_double(lohi[1], "--range"), res});
  }
  return out;
}

// Common energy flags.
struct EnergyArgs {
  std::string name;
  std::optional<int> dim;
  std::vector<std::string> params;

  void attach(CLI::App* app) {
    app->add_option("--energy", name, "energy name (" + [] {
      std::string s;
      for (const auto& n : builtin_names()) s += (s.empty() ? "" : ", ") + n;
      return s;
    }() + ")")->required();
    app->add_option("--dim", dim, "dimension (2 or 3)");
    app->add_option("--param", params, "energy parameter key=value (repeatable)");
  }

  EnergySpec build(int fallback_dim) const {
    ParamMap pm;
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("--param: expected key=value, got '" + kv + "'");
      pm[kv.substr(0, eq)] = parse_double(kv.substr(eq + 1), "--param " + kv.substr(0, eq));
    }
    const int want = dim ? *dim : fallback_dim;
    static const std::vector<std::string> takes_n = {"dev-hencky", "quad-hencky", "vol-exp"};
    if (want > 0 && !pm.count("n") && std::find(takes_n.begin(), takes_n.end(), name) != takes_n.end()) {
      pm["n"] = want;
    }
    EnergySpec spec = make_builtin(name, pm);
    if (want > 0 && spec.dim != want) {
      throw UsageError("dimension mismatch: energy '" + name + "' is " + std::to_string(spec.dim) +
                       "D, requested " + std::to_string(want) + "D");
    }
    return spec;
  }
};

json params_json(const EnergySpec& spec) {
  json j = json::object();
  for (const auto& [k, v] : spec.params) j[k] = v;
  return j;
}

std::string params_text(const EnergySpec& spec) {
  std::string s;
  for (const auto& [k, v] : spec.params) s += (s.empty() ? "" : ", ") + k + "=" + format_double(v);
  return "{" + s + "}";
}

json vec_json(std::span<const double> v) {
  json j = json::array();
  for (double x : v) j.push_back(json_number(x));
  return j;
}

json vec_json(const Vector& v) {
  json j = json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(json_number(v[i]));
  return j;
}

std::string vec_text(const Vector& v) {
  std::string s;
  for (int i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return "(" + s + ")";
}

int exit_for(Status s) {
  switch (s) {
    case Status::Elliptic: return kExitOk;
    case Status::Violated: return kExitViolated;
    case Status::Indeterminate: return kExitIndeterminate;
  }
  return kExitUsage;
}

std::string joined(const std::vector<std::string>& args) {
  std::string s = "ellscope";
  for (const auto& a : args) s += " " + a;
  return s;
}

std::vector<std::pair<std::string, double>> labelled_margins(const EllipticityVerdict& v) {
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < v.te_margins.size(); ++i) {
    out.emplace_back(WorstMargin{Condition::TE, static_cast<int>(i), -1, 0.0}.tag(), v.te_margins[i]);
  }
  auto pairs = [&](Condition c, const std::vector<PairMargin>& ms) {
    for (const auto& m : ms) {
      std::string tag = WorstMargin{c, m.i, m.j, 0.0}.tag();
      if (m.negative_radicand) tag += "*";
      out.emplace_back(tag, m.value);
    }
  };
  pairs(Condition::BE, v.be_margins);
  pairs(Condition::C3, v.c3_margins);
  pairs(Condition::C4, v.c4_margins);
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  EnergyArgs energy;
  std::string stretches;
  double tol = kDefaultTol;
  bool json_out = false;
  bool oracle = false;
  int refine = 3;
};

int cmd_check(const CheckArgs& a, const std::string& command, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto values = parse_stretch_list(a.stretches);
  const EnergySpec spec = a.energy.build(a.energy.dim ? *a.energy.dim : static_cast<int>(values.size()));
  if (static_cast<int>(values.size()) != spec.dim) {
    throw UsageError("dimension mismatch: " + std::to_string(values.size()) + " stretches for a " +
                     std::to_string(spec.dim) + "D energy");
  }
  const Stretches s{std::span<const double>(values)};
  const EllipticityVerdict v = check_point(spec, s, a.tol);
  std::optional<OracleVerdict> ov;
  if (a.oracle) {
    OracleConfig cfg;
    cfg.refine = a.refine;
    ov = min_acoustic(spec, s, cfg);
  }

  RunReport rep;
  rep.command = command;
  rep.inputs = {{"energy", spec.name}, {"dim", spec.dim}, {"params", params_json(spec)},
                {"stretches", vec_json(s.values())}, {"tol", a.tol}};
  json margins = json::object();
  for (const auto& [tag, m] : labelled_margins(v)) margins[tag] = json_number(m);
  rep.outputs = {{"verdict", to_string(v.status)},
                 {"worst", {{"condition", v.worst.tag()}, {"margin", json_number(v.worst.margin)}}},
                 {"margins", margins}};
  if (ov) {
    rep.outputs["oracle"] = {{"verdict", to_string(ov->status)},
                             {"min", json_number(ov->min_value)},
                             {"xi", vec_json(ov->argmin.xi)},
                             {"eta", vec_json(ov->argmin.eta)}};
  }
  rep.wall_seconds = seconds_since(t0);

  if (a.json_out) {
    out << rep.to_json().dump(2) << '\n';
  } else {
    out << "energy     " << spec.name << ' ' << params_text(spec) << '\n';
    out << "stretches  " << s.to_string() << '\n';
    out << "verdict    " << to_string(v.status) << '\n';
    out << "worst      " << v.worst.tag() << ' ' << format_double(v.worst.margin) << '\n';
    out << "margins    (* = negative radicand)\n";
    for (const auto& [tag, m] : labelled_margins(v)) out << "  " << tag << ' ' << format_double(m) << '\n';
    if (ov) {
      out << "oracle     " << to_string(ov->status) << " min " << format_double(ov->min_value) << " xi "
          << vec_text(ov->argmin.xi) << " eta " << vec_text(ov->argmin.eta) << '\n';
    }
  }
  return exit_for(v.status);
}

// ---------------------------------------------------------------- scan

struct ScanArgs {
  EnergyArgs energy;
  std::string chart = "ab";
  std::string range;
  int res = 100;
  std::string method = "sufficient";
  std::string out_path;
  std::string svg_path;
  std::string overlay;
  int refine = 3;
  int grid = 24;
  double tol = kDefaultTol;
  double oracle_tol = 1e-6;
  double cone_scale = 1.0;
  bool json_out = false;
};

int cmd_scan(const ScanArgs& a, const std::string& command, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto chart = parse_chart(a.chart);
  if (!chart) throw UsageError("--chart: unknown chart '" + a.chart + "' (ab, ptheta, logt2d, cone)");
  const auto method = parse_method(a.method);
  if (!method) throw UsageError("--method: expected sufficient or oracle");
  if (!a.overlay.empty() && a.overlay != "ellipse") throw UsageError("--overlay: only 'ellipse' is supported");
  if (a.res < 2) throw UsageError("--res must be >= 2");

  ScanRequest req;
  req.spec = a.energy.build(a.energy.dim ? *a.energy.dim : chart_stretch_dim(*chart));
  req.chart = *chart;
  req.axes = parse_ranges(a.range, a.res);
  req.method = *method;
  req.tol = a.tol;
  req.oracle.refine = a.refine;
  req.oracle.grid = a.grid;
  req.oracle.tol = a.oracle_tol;
  req.cone_scale = a.cone_scale;
  if (static_cast<int>(req.axes.size()) != chart_arity(req.chart)) {
    throw UsageError(std::string("--range: chart '") + to_string(req.chart) + "' needs " +
                     std::to_string(chart_arity(req.chart)) + " range(s)");
  }

  const DomainScanResult scan = scan_grid(req);
  write_text_file(a.out_path, scan_csv(scan));
  std::vector<BoundaryPolyline> lines;
  if (!a.svg_path.empty()) {
    const GridField field = GridField::from_scan(scan);
    lines = trace_boundary(field);
    SvgOptions opt;
    opt.ellipse_overlay = a.overlay == "ellipse";
    opt.title = std::string(to_string(req.chart)) + " scan of " + req.spec.name;
    write_text_file(a.svg_path, render_svg(field, lines, opt));
  }

  int counts[3] = {0, 0, 0};
  int errors = 0;
  for (const auto& c : scan.cells) {
    ++counts[static_cast<int>(c.status)];
    if (!c.note.empty()) ++errors;
  }
  RunReport rep;
  rep.command = command;
  json ranges = json::array();
  for (const auto& ax : req.axes) ranges.push_back({{"lo", ax.lo}, {"hi", ax.hi}, {"resolution", ax.resolution}});
  rep.inputs = {{"energy", req.spec.name}, {"dim", req.spec.dim}, {"params", params_json(req.spec)},
                {"chart", to_string(req.chart)}, {"ranges", ranges}, {"method", to_string(req.method)},
                {"tol", req.method == Method::sufficient ? req.tol : req.oracle.tol}};
  rep.outputs = {{"cells", scan.cells.size()},
                 {"elliptic", counts[0]},
                 {"violated", counts[1]},
                 {"indeterminate", counts[2]},
                 {"cell_errors", errors},
                 {"csv", a.out_path}};
  if (!a.svg_path.empty()) {
    rep.outputs["svg"] = a.svg_path;
    rep.outputs["boundary_polylines"] = lines.size();
  }
  rep.wall_seconds = seconds_since(t0);
  if (a.json_out) {
    out << rep.to_json().dump(2) << '\n';
  } else {
    out << "scanned " << scan.cells.size() << " cells: E " << counts[0] << ", V " << counts[1] << ", I "
        << counts[2];
    if (errors) out << " (" << errors << " cell errors)";
    out << "\nwrote " << a.out_path;
    if (!a.svg_path.empty()) out << ", " << a.svg_path << " (" << lines.size() << " boundary polylines)";
    out << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- trace

struct TraceArgs {
  std::string in_path;
  std::string out_path;
  std::string svg_path;
  std::string overlay;
};

int cmd_trace(const TraceArgs& a, std::ostream& out) {
  if (!a.overlay.empty() && a.overlay != "ellipse") throw UsageError("--overlay: only 'ellipse' is supported");
  std::ifstream f(a.in_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + a.in_path + "'");
  const GridField field = read_scan_csv(f);
  const auto lines = trace_boundary(field);
  std::ostringstream csv;
  write_boundary_csv(csv, lines);
  write_text_file(a.out_path, csv.str());
  if (!a.svg_path.empty()) {
    SvgOptions opt;
    opt.ellipse_overlay = a.overlay == "ellipse";
    write_text_file(a.svg_path, render_svg(field, lines, opt));
  }
  out << "traced " << lines.size() << " boundary polylines from " << field.xs.size();
  if (!field.ys.empty()) out << "x" << field.ys.size();
  out << " nodes; wrote " << a.out_path;
  if (!a.svg_path.empty()) out << ", " << a.svg_path;
  out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct SubCheck {
  std::string name;
  bool pass;
  double value;
  std::string detail;
};

json region_json(const RegionReport& r) {
  return {{"samples", r.samples},      {"elliptic", r.elliptic},   {"violated", r.violated},
          {"indeterminate", r.indeterminate}, {"excluded", r.excluded}, {"mismatches", r.mismatches},
          {"worst_margin", json_number(r.worst_margin)}, {"worst_location", vec_json(r.worst_location)}};
}

SubCheck region_check(const std::string& name, const RegionReport& r, json& details) {
  details[name] = region_json(r);
  std::ostringstream d;
  d << r.samples << " samples: E " << r.elliptic << ", V " << r.violated << ", I " << r.indeterminate;
  if (r.excluded) d << ", excluded " << r.excluded;
  d << ", mismatches " << r.mismatches;
  return {name, r.pass, r.worst_margin, d.str()};
}

std::vector<SubCheck> verify_prop2d(int samples, json& details) {
  const EnergySpec spec = make_builtin("dev-hencky", {{"n", 2}});
  std::vector<SubCheck> out;
  out.push_back(region_check("region", verify_region(spec, Region::prop2d, Method::sufficient, samples, kDefaultTol), details));
  double worst = 0.0;
  for (double logt : {-1.0, 1.0}) {
    worst = std::max(worst, std::abs(check_point(spec, logt_to_stretches_2d(logt)).worst.margin));
  }
  out.push_back({"boundary |margin| at |logt| = 1", worst <= 1e-9, worst, "<= 1e-9"});
  return out;
}

std::vector<SubCheck> verify_prop3d(int samples, json& details) {
  const EnergySpec spec = make_builtin("dev-hencky", {{"n", 3}});
  std::vector<SubCheck> out;
  out.push_back(region_check("ellipse region", verify_region(spec, Region::prop3d_ellipse, Method::sufficient, samples, kDefaultTol), details));
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto [a, b] = ptheta_to_ab(std::numbers::sqrt2, 2.0 * std::numbers::pi * k / 1000.0);
    worst = std::max(worst, std::abs(dev3_invariant_from_ab(a, b) - 2.0 / 3.0));
  }
  out.push_back({"invariant 2/3 on ellipse boundary", worst <= 1e-12, worst, "max deviation, <= 1e-12"});
  return out;
}

std::vector<SubCheck> verify_appendix(int res, json& details) {
  namespace ap = appendix;
  std::vector<SubCheck> out;
  for (int k = 1; k <= 3; ++k) {
    const auto r = ap::verify_nonneg(k, ap::default_box(k), res);
    details[r.function] = {{"grid_min", r.grid_min}, {"refined_min", r.refined_min},
                           {"refined_argmin", {r.refined_argmin[0], r.refined_argmin[1]}}};
    std::ostringstream d;
    d << "min at (p, theta) = (" << format_double(r.refined_argmin[0]) << ", "
      << format_double(r.refined_argmin[1]) << "), >= -1e-9";
    out.push_back({r.function + " >= 0", r.pass, r.refined_min, d.str()});
    if (k == 1) {
      const double dp = std::abs(r.refined_argmin[0] - std::numbers::sqrt2);
      const double dt = std::abs(r.refined_argmin[1] - std::numbers::pi);
      const bool ok = std::abs(r.refined_min) <= 1e-6 && dp <= 1e-6 && dt <= 1e-6;
      out.push_back({"f1 minimum 0 at (sqrt2, pi)", ok, std::max(dp, dt), "coordinate error <= 1e-6"});
    }
  }
  for (int k = 1; k <= 3; ++k) {
    const auto s = ap::check_symmetry(k, 1000);
    out.push_back({"f" + std::to_string(k) + " symmetric in theta -> 2pi - theta", s.pass, s.max_abs_diff, "<= 1e-12"});
  }

  const auto line = ap::min_h_on_line(std::max(res * 4, 1000));
  details["line_min"] = {{"min", line.min_value}, {"argmin", line.argmin}, {"closed_form", line.closed_form},
                         {"h_min", line.h_min_value}, {"h_argmin", line.h_argmin}};
  out.push_back({"line minimum = closed form", std::abs(line.min_value - line.closed_form) <= 1e-9,
                 line.min_value, "closed form " + format_double(line.closed_form)});
  out.push_back({"line minimum = 0.0573242", std::abs(line.min_value - 0.0573242) <= 1e-6, line.min_value, "+- 1e-6"});
  out.push_back({"h(zeta, sqrt2) > 0", line.h_min_value > 0.0, line.h_min_value, "min of the unfactored h"});

  // Auxiliary bounds on grids.
  const int m = std::max(res, 100);
  double max_ds = -INFINITY, min_r = INFINITY, min_dr = INFINITY, max_hdiff = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double z = std::numbers::sqrt2 * i / (m - 1), w = std::numbers::sqrt2 * j / (m - 1);
      const auto sh = ap::eval_s_h(z, w);
      max_ds = std::max(max_ds, sh.ds_dvarpi);
      max_hdiff = std::max(max_hdiff, std::abs(sh.h - ap::eval_h_direct(z, w)));
      const double p = std::numbers::sqrt2 * i / (m - 1), th = (std::numbers::pi / 6.0) * j / (m - 1);
      const double zeta = p * std::sin(th), eta = p * std::cos(th);
      min_r = std::min(min_r, ap::eval_r(zeta, eta));
      min_dr = std::min(min_dr, ap::eval_dr_dzeta(zeta, eta));
    }
  }
  out.push_back({"ds/dvarpi <= (sqrt3 - 2)/sqrt2", max_ds <= ap::ds_dvarpi_bound() + 1e-9, max_ds,
                 "bound " + format_double(ap::ds_dvarpi_bound())});
  out.push_back({"h factorization", max_hdiff <= 1e-10, max_hdiff, "max |h - h_direct|"});
  out.push_back({"r >= 0 for theta in [0, pi/6]", min_r >= -1e-9, min_r, ">= -1e-9"});
  out.push_back({"dr/dzeta > 0 for theta in [0, pi/6]", min_dr > 0.0, min_dr, "expected sqrt(2/3)"});
  return out;
}

std::vector<SubCheck> verify_bruhns(int samples, int refine, json& details) {
  const EnergySpec spec = make_builtin("quad-hencky", {{"mu", 1}, {"lame_lambda", 1}});
  OracleConfig cfg;
  cfg.refine = refine;
  return {region_check("oracle on bruhns cube", verify_region(spec, Region::bruhns_cube, Method::oracle, samples, 1e-6, cfg), details)};
}

std::vector<SubCheck> verify_exp_hencky(int samples, json& details) {
  const EnergySpec exp2 = make_builtin("exp-hencky-iso-2", {{"mu", 1}, {"k", 0.25}});
  const EnergySpec dev2 = make_builtin("dev-hencky", {{"n", 2}});
  return {region_check("exp-hencky-iso-2 k=0.25, |log ratio| <= 3",
                       verify_log_band_2d(exp2, 0.0, 3.0, Status::Elliptic, samples), details),
          region_check("dev-hencky-2 Violated for 1 < |log ratio| <= 3",
                       verify_log_band_2d(dev2, 1.0 + 1e-6, 3.0, Status::Violated, samples), details)};
}

struct VerifyArgs {
  std::string target;
  std::optional<int> samples;
  int res = 500;
  int refine = 3;
  bool json_out = false;
};

int cmd_verify(const VerifyArgs& a, const std::string& command, std::ostream& out) {
  const auto t0 = Clock::now();
  json details = json::object();
  std::vector<SubCheck> checks;
  if (a.target == "prop2d") {
    checks = verify_prop2d(a.samples.value_or(4001), details);
  } else if (a.target == "prop3d") {
    checks = verify_prop3d(a.samples.value_or(10000), details);
  } else if (a.target == "appendix") {
    checks = verify_appendix(a.res, details);
  } else if (a.target == "bruhns-cube") {
    checks = verify_bruhns(a.samples.value_or(1000), a.refine, details);
  } else if (a.target == "exp-hencky") {
    checks = verify_exp_hencky(a.samples.value_or(10000), details);
  } else {
    throw UsageError("verify: unknown target '" + a.target +
                     "' (prop2d, prop3d, appendix, bruhns-cube, exp-hencky)");
  }
  if (a.samples && *a.samples < 1) throw UsageError("--samples must be >= 1");
  const bool all = std::all_of(checks.begin(), checks.end(), [](const SubCheck& c) { return c.pass; });

  RunReport rep;
  rep.command = command;
  rep.inputs = {{"target", a.target}};
  if (a.samples) rep.inputs["samples"] = *a.samples;
  json list = json::array();
  for (const auto& c : checks) {
    list.push_back({{"name", c.name}, {"pass", c.pass}, {"value", json_number(c.value)}, {"detail", c.detail}});
  }
  rep.outputs = {{"pass", all}, {"checks", list}, {"details", details}};
  rep.wall_seconds = seconds_since(t0);
  if (a.json_out) {
    out << rep.to_json().dump(2) << '\n';
  } else {
    for (const auto& c : checks) {
      out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_double(c.value) << " (" << c.detail << ")\n";
    }
    out << a.target << ": " << (all ? "PASS" : "FAIL") << '\n';
  }
  return all ? kExitOk : kExitViolated;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  EnergyArgs energy;
  std::string stretches;
  std::string xi;
  std::string eta;
  int refine = 3;
  int grid = 24;
  double tol = 1e-6;
  bool json_out = false;
};

Vector parse_direction(const std::string& s, int n, const char* flag) {
  const auto parts = split(s, ',');
  if (static_cast<int>(parts.size()) != n) {
    throw UsageError(std::string(flag) + ": expected " + std::to_string(n) + " components");
  }
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = parse_double(parts[static_cast<std::size_t>(i)], flag);
  if (v.norm() == 0.0) throw UsageError(std::string(flag) + ": zero vector");
  return v.normalized();
}

int cmd_oracle(const OracleArgs& a, const std::string& command, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto values = parse_stretch_list(a.stretches);
  const EnergySpec spec = a.energy.build(a.energy.dim ? *a.energy.dim : static_cast<int>(values.size()));
  if (static_cast<int>(values.size()) != spec.dim) {
    throw UsageError("dimension mismatch: " + std::to_string(values.size()) + " stretches for a " +
                     std::to_string(spec.dim) + "D energy");
  }
  if (a.xi.empty() != a.eta.empty()) throw UsageError("--xi and --eta go together");
  const Stretches s{std::span<const double>(values)};

  RunReport rep;
  rep.command = command;
  rep.inputs = {{"energy", spec.name}, {"dim", spec.dim}, {"params", params_json(spec)},
                {"stretches", vec_json(s.values())}};
  int code = kExitOk;
  OracleConfig cfg;
  cfg.refine = a.refine;
  cfg.grid = a.grid;
  cfg.tol = a.tol;
  if (!a.xi.empty()) {
    const Vector xi = parse_direction(a.xi, spec.dim, "--xi");
    const Vector eta = parse_direction(a.eta, spec.dim, "--eta");
    double mn = values[0];
    for (double v : values) mn = std::min(mn, v);
    const auto probe = probe_rank_one(spec, DeformationGradient::diagonal(s), xi, eta, cfg.step_scale * mn);
    rep.outputs = {{"rank_one_form", json_number(probe.value)}, {"xi", vec_json(xi)}, {"eta", vec_json(eta)},
                   {"step", probe.step}};
    if (!a.json_out) {
      out << "rank-one form " << format_double(probe.value) << " at xi " << vec_text(xi) << " eta "
          << vec_text(eta) << " (step " << format_double(probe.step) << ")\n";
    }
  } else {
    const OracleVerdict v = min_acoustic(spec, s, cfg);
    rep.inputs["grid"] = cfg.grid;
    rep.inputs["refine"] = cfg.refine;
    rep.inputs["tol"] = cfg.tol;
    rep.outputs = {{"verdict", to_string(v.status)}, {"min", json_number(v.min_value)},
                   {"xi", vec_json(v.argmin.xi)}, {"eta", vec_json(v.argmin.eta)},
                   {"evaluations", v.evaluations}};
    code = exit_for(v.status);
    if (!a.json_out) {
      out << "verdict  " << to_string(v.status) << '\n';
      out << "min      " << format_double(v.min_value) << '\n';
      out << "xi       " << vec_text(v.argmin.xi) << '\n';
      out << "eta      " << vec_text(v.argmin.eta) << '\n';
      out << "evals    " << v.evaluations << '\n';
    }
  }
  rep.wall_seconds = seconds_since(t0);
  if (a.json_out) out << rep.to_json().dump(2) << '\n';
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ellscope: ellipticity domains of isotropic Hencky-type energies", "ellscope"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "classify one stretch state with the sufficient criterion");
  check.energy.attach(c);
  c->add_option("--stretches", check.stretches, "comma-separated principal stretches")->required();
  c->add_option("--tol", check.tol, "margin tolerance")->capture_default_str();
  c->add_flag("--json", check.json_out, "print the JSON report");
  c->add_flag("--oracle", check.oracle, "also run the numerical acoustic-tensor oracle");
  c->add_option("--refine", check.refine, "oracle refinement depth")->capture_default_str();

  ScanArgs scan;
  auto* s = app.add_subcommand("scan", "classify a grid of stretch states and write CSV/SVG");
  scan.energy.attach(s);
  s->add_option("--chart", scan.chart, "ab, ptheta, logt2d or cone")->capture_default_str();
  s->add_option("--range", scan.range, "lo:hi[,lo:hi]")->required();
  s->add_option("--res", scan.res, "nodes per axis")->capture_default_str();
  s->add_option("--method", scan.method, "sufficient or oracle")->capture_default_str();
  s->add_option("--out", scan.out_path, "CSV output path")->required();
  s->add_option("--svg", scan.svg_path, "SVG output path");
  s->add_option("--overlay", scan.overlay, "ellipse");
  s->add_option("--refine", scan.refine, "oracle refinement depth")->capture_default_str();
  s->add_option("--grid", scan.grid, "oracle angular grid")->capture_default_str();
  s->add_option("--tol", scan.tol, "criterion tolerance")->capture_default_str();
  s->add_option("--oracle-tol", scan.oracle_tol, "oracle tolerance")->capture_default_str();
  s->add_option("--cone-scale", scan.cone_scale, "u for the cone chart")->capture_default_str();
  s->add_flag("--json", scan.json_out, "print the JSON report");

  TraceArgs trace;
  auto* t = app.add_subcommand("trace", "trace the Elliptic boundary of a scan CSV");
  t->add_option("--in", trace.in_path, "scan CSV")->required();
  t->add_option("--out", trace.out_path, "boundary CSV output")->required();
  t->add_option("--svg", trace.svg_path, "SVG output path");
  t->add_option("--overlay", trace.overlay, "ellipse");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "run a verification battery");
  v->add_option("target", verify.target, "prop2d, prop3d, appendix, bruhns-cube or exp-hencky")->required();
  v->add_option("--samples", verify.samples, "sample count override");
  v->add_option("--res", verify.res, "appendix grid resolution")->capture_default_str();
  v->add_option("--refine", verify.refine, "oracle refinement depth")->capture_default_str();
  v->add_flag("--json", verify.json_out, "print the JSON report");

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "numerical minimum of the rank-one form with its witness");
  oracle.energy.attach(o);
  o->add_option("--stretches", oracle.stretches, "comma-separated principal stretches")->required();
  o->add_option("--xi", oracle.xi, "evaluate the form at this xi (with --eta)");
  o->add_option("--eta", oracle.eta, "evaluate the form at this eta (with --xi)");
  o->add_option("--refine", oracle.refine, "refinement depth")->capture_default_str();
  o->add_option("--grid", oracle.grid, "angular grid")->capture_default_str();
  o->add_option("--tol", oracle.tol, "oracle tolerance")->capture_default_str();
  o->add_flag("--json", oracle.json_out, "print the JSON report");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = joined(args);
  try {
    if (*c) return cmd_check(check, command, out);
    if (*s) return cmd_scan(scan, command, out);
    if (*t) return cmd_trace(trace, out);
    if (*v) return cmd_verify(verify, command, out);
    if (*o) return cmd_oracle(oracle, command, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ellscope
