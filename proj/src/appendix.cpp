#include "ellscope/appendix.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ellscope::appendix {

namespace {

using std::numbers::pi;
using std::numbers::sqrt2;
using std::numbers::sqrt3;
const double kSqrt6 = std::sqrt(6.0);
constexpr double kBoxSlack = 1e-12;
constexpr double kRadicandClamp = -1e-12;

void check_k(int k) {
  if (k < 1 || k > 3) throw std::invalid_argument("appendix: function index must be 1, 2 or 3");
}

void check_unit_box(double x, double y, const char* what) {
  const double hi = sqrt2 + kBoxSlack;
  if (!(x >= -kBoxSlack && x <= hi && y >= -kBoxSlack && y <= hi)) {
    throw std::domain_error(std::string(what) + ": argument outside [0, sqrt2]^2");
  }
}

double clamped_root(double radicand, const char* what) {
  if (radicand < kRadicandClamp) {
    throw std::domain_error(std::string(what) + ": negative radicand " + std::to_string(radicand));
  }
  return std::sqrt(std::max(radicand, 0.0));
}

struct Terms {
  double u, v, x, root;
};

Terms terms(double p, double theta) {
  const double u = sqrt2 * p * std::sin(theta - pi / 6.0);
  const double v = sqrt2 * p * std::sin(theta + pi / 6.0);
  const double x = 2.0 * p / kSqrt6 * std::sin(theta);
  return {u, v, x, clamped_root((2.0 + u) * (2.0 - v), "f")};
}

// (-e^x u - v) / (1 - e^x). Since u + v = 3x this equals u + 3x/expm1(x).
double f3_quotient(const Terms& t) {
  if (std::abs(t.x) < 1e-3) {
    const double ratio = t.x == 0.0 ? 1.0 : t.x / std::expm1(t.x);
    return t.u + 3.0 * ratio;
  }
  const double e = std::exp(t.x);
  return (-e * t.u - t.v) / (1.0 - e);
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double& arg) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  // The bracket endpoints are candidates too: minima often sit on the boundary.
  double best = fc < fd ? fc : fd;
  arg = fc < fd ? c : d;
  for (double e : {lo, hi}) {
    const double fe = f(e);
    if (fe < best) { best = fe; arg = e; }
  }
  return best;
}

}  // namespace

PThetaBox default_box(int k) {
  check_k(k);
  PThetaBox box{0.0, sqrt2, 0.0, pi, false, false};
  if (k == 3) box.theta_lo_open = box.theta_hi_open = true;
  return box;
}

double eval_f(int k, double p, double theta, bool allow_limit) {
  check_k(k);
  if (!(p >= 0.0 && p <= sqrt2 + kBoxSlack)) throw std::domain_error("f: p outside [0, sqrt2]");
  if (!(theta >= 0.0 && theta < 2.0 * pi)) throw std::domain_error("f: theta outside [0, 2pi)");

  if (k == 1) return 2.0 + sqrt2 * p * std::cos(theta);
  const Terms t = terms(p, theta);
  if (k == 2) {
    const double e = std::exp(t.x);
    return 0.5 * t.root + 1.0 + (-e * t.u + t.v) / (1.0 + e);
  }
  const bool singular = p == 0.0 || theta == 0.0 || theta == pi;
  if (singular && !allow_limit) {
    throw std::domain_error("f3: removable singularity at sin(theta) = 0 or p = 0; pass allow_limit");
  }
  return 0.5 * t.root - 1.0 + f3_quotient(t);
}

double f3_without_root(double p, double theta) {
  const Terms t = terms(p, theta);
  return -1.0 + f3_quotient(t);
}

GridMinReport verify_nonneg(int k, const PThetaBox& box, int resolution) {
  check_k(k);
  if (resolution < 100) throw std::invalid_argument("verify_nonneg: resolution must be >= 100");
  if (!(box.p_lo >= 0.0 && box.p_hi <= sqrt2 + kBoxSlack && box.p_lo < box.p_hi &&
        box.theta_lo >= 0.0 && box.theta_hi <= 2.0 * pi && box.theta_lo < box.theta_hi)) {
    throw std::invalid_argument("verify_nonneg: box outside [0,sqrt2] x [0,2pi)");
  }

  const int R = resolution;
  const double dp = (box.p_hi - box.p_lo) / (R - 1);
  const double dth_nominal = (box.theta_hi - box.theta_lo) / (R - 1);
  const double th_first = box.theta_lo + (box.theta_lo_open ? 0.5 * dth_nominal : 0.0);
  const double th_last = box.theta_hi - (box.theta_hi_open ? 0.5 * dth_nominal : 0.0);
  const double dth = (th_last - th_first) / (R - 1);
  // Refinement never reaches an open end exactly.
  const double th_floor = box.theta_lo_open ? box.theta_lo + 1e-10 : box.theta_lo;
  const double th_ceil = box.theta_hi_open ? box.theta_hi - 1e-10 : box.theta_hi;

  auto f = [k](double p, double th) { return eval_f(k, p, th, false); };

  GridMinReport rep;
  rep.function = "f" + std::to_string(k);
  rep.resolution = R;
  rep.grid_min = INFINITY;
  for (int i = 0; i < R; ++i) {
    const double p = i == R - 1 ? box.p_hi : box.p_lo + i * dp;
    for (int j = 0; j < R; ++j) {
      const double th = j == R - 1 ? th_last : th_first + j * dth;
      // p = 0 makes f3's quotient 0/0; its limit is taken from the inner grid.
      if (k == 3 && p == 0.0) continue;
      const double v = f(p, th);
      if (v < rep.grid_min) {
        rep.grid_min = v;
        rep.grid_argmin = {p, th};
      }
    }
  }

  double p = rep.grid_argmin[0];
  double th = rep.grid_argmin[1];
  double best = rep.grid_min;
  const double p_lo = std::max(box.p_lo, p - dp), p_hi = std::min(box.p_hi, p + dp);
  const double p_floor = k == 3 ? std::max(p_lo, 1e-12) : p_lo;
  const double t_lo = std::max(th_floor, th - dth), t_hi = std::min(th_ceil, th + dth);
  for (int round = 0; round < 6; ++round) {
    double arg = p;
    double v = golden_min([&](double x) { return f(x, th); }, p_floor, p_hi, arg);
    if (v < best) { best = v; p = arg; }
    arg = th;
    v = golden_min([&](double y) { return f(p, y); }, t_lo, t_hi, arg);
    if (v < best) { best = v; th = arg; }
  }
  rep.refined_min = std::min(best, rep.grid_min);
  rep.refined_argmin = {p, th};
  rep.pass = rep.refined_min >= -kNonnegTol;
  return rep;
}

double eval_r(double zeta, double eta) {
  check_unit_box(zeta, eta, "r");
  const double e = std::exp(2.0 * zeta / kSqrt6);
  return sqrt2 * (sqrt3 * zeta / 2.0 + eta / 2.0) + sqrt2 * e * (sqrt3 * zeta / 2.0 - eta / 2.0) -
         e + 1.0;
}

double eval_dr_dzeta(double zeta, double eta) {
  check_unit_box(zeta, eta, "dr/dzeta");
  return std::exp(std::sqrt(2.0 / 3.0) * zeta) * (zeta - eta / sqrt3 + 1.0 / kSqrt6) +
         std::sqrt(1.5);
}

SH eval_s_h(double zeta, double varpi) {
  check_unit_box(zeta, varpi, "s");
  const double radicand = -1.5 * zeta * zeta + sqrt3 * zeta * varpi - 0.5 * varpi * varpi + 4.0;
  const double root = clamped_root(radicand, "s");
  SH out;
  out.s = root - sqrt2 * varpi + 2.0 - kSqrt6 * zeta * std::tanh(zeta / kSqrt6);
  out.h = 0.5 * (std::exp(2.0 * zeta / kSqrt6) + 1.0) * out.s;
  out.ds_dvarpi = ((sqrt3 * zeta - varpi) / clamped_root(2.0 * radicand, "ds") - 2.0) / sqrt2;
  return out;
}

double eval_h_direct(double zeta, double varpi) {
  check_unit_box(zeta, varpi, "h");
  const double e = std::exp(2.0 * zeta / kSqrt6);
  const double minus = sqrt3 / 2.0 * zeta - 0.5 * varpi;
  const double plus = sqrt3 / 2.0 * zeta + 0.5 * varpi;
  return 0.5 * (1.0 + e) * clamped_root(4.0 - 2.0 * minus * minus, "h") + (1.0 + e) -
         e * sqrt2 * plus + sqrt2 * minus;
}

double ds_dvarpi_bound() { return (sqrt3 - 2.0) / sqrt2; }

double line_expression(double zeta) {
  check_unit_box(zeta, 0.0, "line");
  return clamped_root(-1.5 * zeta * zeta + kSqrt6 * zeta + 3.0, "line") -
         kSqrt6 * zeta * std::tanh(zeta / kSqrt6);
}

double line_min_closed_form() {
  const double q = std::pow(3.0, 0.25);
  return q * (sqrt2 - 2.0 * q * std::tanh(1.0 / sqrt3));
}

LineMinReport min_h_on_line(int resolution) {
  if (resolution < 1000) throw std::invalid_argument("min_h_on_line: resolution must be >= 1000");
  auto h_line = [](double z) { return eval_s_h(z, sqrt2).h; };

  auto minimize = [resolution](const std::function<double(double)>& f, double& arg) {
    const double dz = sqrt2 / (resolution - 1);
    double best = INFINITY;
    for (int i = 0; i < resolution; ++i) {
      const double z = i == resolution - 1 ? sqrt2 : i * dz;
      const double v = f(z);
      if (v < best) { best = v; arg = z; }
    }
    double refined_arg = arg;
    const double v = golden_min(f, std::max(0.0, arg - dz), std::min(sqrt2, arg + dz), refined_arg);
    if (v < best) { best = v; arg = refined_arg; }
    return best;
  };

  LineMinReport rep;
  rep.min_value = minimize(line_expression, rep.argmin);
  rep.h_min_value = minimize(h_line, rep.h_argmin);
  rep.closed_form = line_min_closed_form();
  return rep;
}

SymmetryReport check_symmetry(int k, int samples, std::uint64_t seed) {
  check_k(k);
  if (samples < 1) throw std::invalid_argument("check_symmetry: samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pd(0.0, sqrt2), td(0.0, 2.0 * pi);
  SymmetryReport rep{k, samples, 0.0, false};
  for (int i = 0; i < samples;) {
    const double p = pd(rng);
    const double th = td(rng);
    // Keep clear of theta = 0 (its mirror 2pi is outside the domain) and of
    // f3's puncture at pi.
    if (th < 1e-6 || std::abs(th - pi) < 1e-6) continue;
    rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(eval_f(k, p, th) - eval_f(k, p, 2.0 * pi - th)));
    ++i;
  }
  rep.pass = rep.max_abs_diff <= 1e-12;
  return rep;
}

}  // namespace ellscope::appendix
