#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace ellscope::appendix {

// The three reduced inequalities of the 3D ellipticity proof in elliptic
// polar coordinates, and the auxiliary functions used to show they are
// non-negative on p <= sqrt(2).
//
//   f1 = 2 + sqrt2 p cos(theta)
//   f2 = 1/2 sqrt(R) + 1 + (-e^x u + v) / (1 + e^x)
//   f3 = 1/2 sqrt(R) - 1 + (-e^x u - v) / (1 - e^x)
//
// with u = sqrt2 p sin(theta - pi/6), v = sqrt2 p sin(theta + pi/6),
// x = (2p/sqrt6) sin(theta) and R = (2 + u)(2 - v).

/// Rectangle in (p, theta). Open theta ends are sampled with a half-cell
/// inset.
struct PThetaBox {
  double p_lo = 0.0;
  double p_hi = 0.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  bool theta_lo_open = false;
  bool theta_hi_open = false;
};

/// [0,sqrt2] x [0,pi] for f1, f2 and [0,sqrt2] x (0,pi) for f3.
PThetaBox default_box(int k);

/// Evaluates f_k. Requires p in [0, sqrt2] and theta in [0, 2pi). f3 has a
/// removable singularity where x = 0 (p = 0, theta = 0 or theta = pi); those
/// inputs throw std::domain_error unless allow_limit is set, in which case
/// the limit value is returned. Near x = 0 the quotient is evaluated in the
/// cancellation-free form u + 3x / expm1(x).
double eval_f(int k, double p, double theta, bool allow_limit = false);

/// The stronger bound used for f3: f3 minus its square-root term.
double f3_without_root(double p, double theta);

struct GridMinReport {
  std::string function;
  int resolution = 0;
  double grid_min = 0.0;
  std::array<double, 2> grid_argmin{};  // (p, theta)
  double refined_min = 0.0;
  std::array<double, 2> refined_argmin{};
  bool pass = false;                     // refined_min >= -1e-9
};

inline constexpr double kNonnegTol = 1e-9;

/// Grid minimum of f_k over the box followed by golden-section coordinate
/// refinement around the best grid node.
GridMinReport verify_nonneg(int k, const PThetaBox& box, int resolution);

// Auxiliary r(zeta, eta) for f3 on theta in (0, pi/6), zeta = p sin, eta = p cos.
double eval_r(double zeta, double eta);
double eval_dr_dzeta(double zeta, double eta);

// Auxiliaries for f2 on theta in (pi/2, pi], zeta = p sin, varpi = -p cos.
struct SH {
  double s = 0.0;
  double h = 0.0;            // 1/2 (e^{2 zeta/sqrt6} + 1) s
  double ds_dvarpi = 0.0;
};
SH eval_s_h(double zeta, double varpi);

/// h evaluated from its defining expression (before factoring out s).
double eval_h_direct(double zeta, double varpi);

/// (sqrt3 - 2) / sqrt2: the upper bound on ds/dvarpi over [0, sqrt2]^2.
double ds_dvarpi_bound();

/// Reduced expression along varpi = sqrt2:
/// sqrt(-3 zeta^2/2 + sqrt6 zeta + 3) - sqrt6 zeta tanh(zeta/sqrt6),
/// which equals s(zeta, sqrt2).
double line_expression(double zeta);

/// 3^{1/4} (sqrt2 - 2 3^{1/4} tanh(1/sqrt3)).
double line_min_closed_form();

struct LineMinReport {
  double min_value = 0.0;   // min of line_expression over [0, sqrt2]
  double argmin = 0.0;
  double closed_form = 0.0;
  double h_min_value = 0.0; // min of h(zeta, sqrt2) itself, for reference
  double h_argmin = 0.0;
};

/// Grid search plus golden-section refinement on zeta in [0, sqrt2].
LineMinReport min_h_on_line(int resolution);

struct SymmetryReport {
  int k = 0;
  int samples = 0;
  double max_abs_diff = 0.0;
  bool pass = false;  // max_abs_diff <= 1e-12
};

/// max |f_k(p, theta) - f_k(p, 2pi - theta)| over random in-domain samples.
SymmetryReport check_symmetry(int k, int samples, std::uint64_t seed = 7);

}  // namespace ellscope::appendix
