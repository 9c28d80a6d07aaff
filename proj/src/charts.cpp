#include "ellscope/charts.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ellscope {

using std::numbers::pi;

const char* to_string(Chart c) {
  switch (c) {
    case Chart::ab: return "ab";
    case Chart::ptheta: return "ptheta";
    case Chart::logt2d: return "logt2d";
    case Chart::cone: return "cone";
  }
  return "?";
}

std::optional<Chart> parse_chart(std::string_view name) {
  for (Chart c : {Chart::ab, Chart::ptheta, Chart::logt2d, Chart::cone}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

int chart_arity(Chart c) { return c == Chart::logt2d ? 1 : 2; }

int chart_stretch_dim(Chart c) { return c == Chart::logt2d ? 2 : 3; }

Stretches ChartPoint::to_stretches(double cone_scale) const {
  switch (chart) {
    case Chart::ab:
      return ab_to_stretches(coords[0], coords[1]);
    case Chart::ptheta: {
      const auto [a, b] = ptheta_to_ab(coords[0], coords[1]);
      return ab_to_stretches(a, b);
    }
    case Chart::logt2d:
      return logt_to_stretches_2d(coords[0]);
    case Chart::cone:
      return cone_point(coords[0], cone_scale, coords[1]);
  }
  throw std::logic_error("unknown chart");
}

Stretches ab_to_stretches(double a, double b) { return Stretches{std::exp(a), 1.0, std::exp(-b)}; }

std::pair<double, double> ptheta_to_ab(double p, double theta) {
  if (!(p >= 0.0)) throw std::invalid_argument("ptheta_to_ab: p must be >= 0");
  const double r = p * std::sqrt(2.0 / 3.0);
  return {r * std::cos(theta - pi / 6.0), -r * std::cos(theta + pi / 6.0)};
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::inside: return "inside";
    case Membership::boundary: return "boundary";
    case Membership::outside: return "outside";
  }
  return "?";
}

EllipseMembership ellipse_membership(double a, double b) {
  const double margin = 1.0 - (a * a + b * b + a * b);
  if (std::abs(margin) <= kEllipseTol) return {Membership::boundary, margin};
  return {margin > 0.0 ? Membership::inside : Membership::outside, margin};
}

double dev3_invariant_from_ab(double a, double b) {
  return (a * a + b * b + (a + b) * (a + b)) / 3.0;
}

Stretches logt_to_stretches_2d(double logt) { return Stretches{std::exp(logt), 1.0}; }

Stretches cone_point(double theta, double u, double p) {
  if (!(u > 0.0)) throw std::invalid_argument("cone_point: u must be > 0");
  if (!(p >= 0.0)) throw std::invalid_argument("cone_point: p must be >= 0");
  const double c = p / std::sqrt(6.0);
  const double s3 = std::sqrt(3.0) * std::cos(theta);
  const double sn = std::sin(theta);
  return Stretches{u * std::exp(c * (s3 + sn)), u, u * std::exp(c * (s3 - sn))};
}

std::array<std::pair<double, double>, 3> stretch_swap_images(double a, double b) {
  return {{{a + b, -b}, {-b, -a}, {-a, a + b}}};
}

std::array<std::pair<double, double>, 3> ellipse_symmetry_images(double a, double b) {
  return {{{a + b, -b}, {b, a}, {-b, -a}}};
}

}  // namespace ellscope
