#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>

#include "ellscope/stretches.hpp"

namespace ellscope {

/// Coordinate charts on the stretch cone.
///   ab      (a, b):    lambda1/lambda2 = e^a, lambda2/lambda3 = e^b, lambda2 = 1
///   ptheta  (p, theta): elliptic polar coordinates of (a, b), 2(a^2+b^2+ab) = p^2
///   logt2d  (logt):    2D stretches (e^logt, 1)
///   cone    (theta, p) at scale u: the isochoric cone surface
enum class Chart { ab, ptheta, logt2d, cone };

const char* to_string(Chart c);
std::optional<Chart> parse_chart(std::string_view name);
int chart_arity(Chart c);
int chart_stretch_dim(Chart c);

struct ChartPoint {
  Chart chart = Chart::ab;
  std::array<double, 2> coords{};

  /// Throws if the coordinates are outside the chart's range.
  Stretches to_stretches(double cone_scale = 1.0) const;
};

Stretches ab_to_stretches(double a, double b);
std::pair<double, double> ptheta_to_ab(double p, double theta);

enum class Membership { inside, boundary, outside };
const char* to_string(Membership m);

struct EllipseMembership {
  Membership membership;
  double margin;  // 1 - (a^2 + b^2 + ab)
};

inline constexpr double kEllipseTol = 1e-12;

EllipseMembership ellipse_membership(double a, double b);

/// (1/3)(a^2 + b^2 + (a+b)^2) = |dev_3 log U|^2 at ab_to_stretches(a, b).
double dev3_invariant_from_ab(double a, double b);

Stretches logt_to_stretches_2d(double logt);

/// lambda1 = u e^{(p/sqrt6)(sqrt3 cos + sin)}, lambda2 = u,
/// lambda3 = u e^{(p/sqrt6)(sqrt3 cos - sin)}.
Stretches cone_point(double theta, double u, double p);

/// Maps (a, b) -> (a', b') induced by swapping two stretches:
/// swap(lambda2, lambda3), swap(lambda1, lambda3), swap(lambda1, lambda2).
std::array<std::pair<double, double>, 3> stretch_swap_images(double a, double b);

/// The three maps under which the ellipse a^2+b^2+ab <= 1 is invariant as
/// a set: (x, y) -> (x+y, -y), (y, x), (-y, -x). The middle one is not
/// induced by a permutation of stretches.
std::array<std::pair<double, double>, 3> ellipse_symmetry_images(double a, double b);

}  // namespace ellscope
