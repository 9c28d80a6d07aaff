#include "ellscope/acoustic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace ellscope {

DeformationGradient::DeformationGradient(Matrix F) : F_(std::move(F)) {
  if (F_.rows() != F_.cols() || (F_.rows() != 2 && F_.rows() != 3)) {
    throw std::invalid_argument("deformation gradient must be 2x2 or 3x3");
  }
  if (!F_.allFinite()) throw std::invalid_argument("deformation gradient has non-finite entries");
  if (!(F_.determinant() > 0.0)) {
    throw std::invalid_argument("deformation gradient must have det F > 0");
  }
}

DeformationGradient DeformationGradient::diagonal(const Stretches& s) {
  return DeformationGradient(Matrix(s.as_vector().asDiagonal()));
}

namespace {

template <int N>
Vector singular_values_fixed(const Matrix& F) {
  const Eigen::Matrix<double, N, N> A = F;
  Eigen::JacobiSVD<Eigen::Matrix<double, N, N>> svd(A);
  return svd.singularValues();
}

double energy_of_matrix(const EnergySpec& spec, const Matrix& F) {
  return spec.eval(Stretches(singular_values(F)));
}

// Largest h <= step with det(F + t xi eta^T) > 0 for |t| <= h. The
// determinant is affine in t, so the endpoints suffice.
double admissible_step(const Matrix& F, const Vector& xi, const Vector& eta, double step) {
  const Matrix D = xi * eta.transpose();
  double h = step;
  for (int k = 0; k <= 40; ++k) {
    if ((F + h * D).determinant() > 0.0 && (F - h * D).determinant() > 0.0) return h;
    h *= 0.5;
  }
  throw DegenerateStepError("rank-one line leaves GL+(n) for every step; F is near-degenerate");
}

double second_difference(const EnergySpec& spec, const Matrix& F, const Matrix& D, double w0,
                         double h) {
  return (energy_of_matrix(spec, F + h * D) - 2.0 * w0 + energy_of_matrix(spec, F - h * D)) /
         (h * h);
}

double richardson_form(const EnergySpec& spec, const Matrix& F, const Vector& xi,
                       const Vector& eta, double w0, double h) {
  const Matrix D = xi * eta.transpose();
  const double coarse = second_difference(spec, F, D, w0, h);
  const double fine = second_difference(spec, F, D, w0, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

Vector direction_from_angles(int n, std::span<const double> angles) {
  Vector v(n);
  if (n == 2) {
    v << std::cos(angles[0]), std::sin(angles[0]);
  } else {
    const double polar = angles[0];
    const double azimuth = angles[1];
    v << std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
        std::cos(polar);
  }
  return v;
}

// Evaluates min over unit eta of the rank-one form for a fixed xi.
class AcousticSearch {
 public:
  AcousticSearch(const EnergySpec& spec, const Stretches& s, const OracleConfig& config)
      : spec_(spec),
        n_(s.dim()),
        F_(DeformationGradient::diagonal(s).matrix()),
        w0_(energy_of_matrix(spec, F_)),
        step_(config.step_scale * *std::min_element(s.values().begin(), s.values().end())) {}

  struct Result {
    double value;
    Vector xi;
    Vector eta;
  };

  Result at(std::span<const double> angles) {
    const Vector xi = direction_from_angles(n_, angles);
    // Polarization: A_jj = q(e_j), 2 A_jl = q(e_j + e_l) - q(e_j) - q(e_l).
    Matrix A(n_, n_);
    for (int j = 0; j < n_; ++j) A(j, j) = form(xi, Vector::Unit(n_, j));
    for (int j = 0; j < n_; ++j) {
      for (int l = j + 1; l < n_; ++l) {
        const double q = form(xi, Vector::Unit(n_, j) + Vector::Unit(n_, l));
        A(j, l) = A(l, j) = 0.5 * (q - A(j, j) - A(l, l));
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
    return {eig.eigenvalues()[0], xi, eig.eigenvectors().col(0)};
  }

  long evaluations() const { return evaluations_; }
  const Matrix& F() const { return F_; }
  double step() const { return step_; }

 private:
  double form(const Vector& xi, const Vector& eta) {
    const double h = admissible_step(F_, xi, eta, step_);
    evaluations_ += 4;
    return richardson_form(spec_, F_, xi, eta, w0_, h);
  }

  const EnergySpec& spec_;
  int n_;
  Matrix F_;
  double w0_;
  double step_;
  long evaluations_ = 1;
};

// Nelder-Mead on 1 or 2 angles.
template <typename Fn>
std::pair<std::vector<double>, double> nelder_mead(Fn&& f, std::vector<double> start,
                                                    double size, int max_iter) {
  const std::size_t d = start.size();
  std::vector<std::vector<double>> pts(d + 1, start);
  for (std::size_t k = 0; k < d; ++k) pts[k + 1][k] += size;
  std::vector<double> vals(d + 1);
  for (std::size_t k = 0; k <= d; ++k) vals[k] = f(pts[k]);

  auto affine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> out(d);
    for (std::size_t k = 0; k < d; ++k) out[k] = a[k] + t * (b[k] - a[k]);
    return out;
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<std::size_t> order(d + 1);
    for (std::size_t k = 0; k <= d; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[d - 1];

    double spread = 0.0;
    for (std::size_t k = 0; k <= d; ++k) {
      for (std::size_t c = 0; c < d; ++c) spread = std::max(spread, std::abs(pts[k][c] - pts[best][c]));
    }
    if (spread < 1e-8) break;

    std::vector<double> centroid(d, 0.0);
    for (std::size_t k = 0; k <= d; ++k) {
      if (k == worst) continue;
      for (std::size_t c = 0; c < d; ++c) centroid[c] += pts[k][c] / static_cast<double>(d);
    }
    const auto reflected = affine(centroid, pts[worst], -1.0);
    const double fr = f(reflected);
    if (fr < vals[best]) {
      const auto expanded = affine(centroid, pts[worst], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
    } else {
      const auto contracted = affine(centroid, pts[worst], 0.5);
      const double fc = f(contracted);
      if (fc < vals[worst]) {
        pts[worst] = contracted;
        vals[worst] = fc;
      } else {
        for (std::size_t k = 0; k <= d; ++k) {
          if (k == best) continue;
          pts[k] = affine(pts[best], pts[k], 0.5);
          vals[k] = f(pts[k]);
        }
      }
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  return {pts[static_cast<std::size_t>(it - vals.begin())], *it};
}

}  // namespace

Vector singular_values(const Matrix& F) {
  if (F.rows() == 2 && F.cols() == 2) return singular_values_fixed<2>(F);
  if (F.rows() == 3 && F.cols() == 3) return singular_values_fixed<3>(F);
  throw std::invalid_argument("singular_values: expected a 2x2 or 3x3 matrix");
}

double energy_of_F(const EnergySpec& spec, const DeformationGradient& F) {
  if (F.dim() != spec.dim) throw std::invalid_argument("energy_of_F: dimension mismatch");
  return energy_of_matrix(spec, F.matrix());
}

AcousticProbe probe_rank_one(const EnergySpec& spec, const DeformationGradient& F,
                             const Vector& xi, const Vector& eta, double step) {
  if (xi.size() != F.dim() || eta.size() != F.dim()) {
    throw std::invalid_argument("rank_one_form: direction dimension mismatch");
  }
  if (!(step > 0.0)) throw std::invalid_argument("rank_one_form: step must be > 0");
  AcousticProbe probe{F.matrix(), xi, eta, 0.0, 0.0};
  probe.step = admissible_step(F.matrix(), xi, eta, step);
  probe.value = richardson_form(spec, F.matrix(), xi, eta, energy_of_matrix(spec, F.matrix()),
                                probe.step);
  return probe;
}

double rank_one_form(const EnergySpec& spec, const DeformationGradient& F, const Vector& xi,
                     const Vector& eta, double step) {
  return probe_rank_one(spec, F, xi, eta, step).value;
}

OracleVerdict min_acoustic(const EnergySpec& spec, const Stretches& s, const OracleConfig& config) {
  if (s.dim() != spec.dim) throw std::invalid_argument("min_acoustic: dimension mismatch");
  if (config.grid < 2) throw std::invalid_argument("min_acoustic: grid must be >= 2");
  if (config.refine < 0) throw std::invalid_argument("min_acoustic: refine must be >= 0");

  using std::numbers::pi;
  const int n = s.dim();
  const int G = config.grid;
  AcousticSearch search(spec, s, config);

  // xi and -xi give the same form, so half of the angle range suffices.
  struct Node {
    std::array<double, 2> angles;
    double value;
    int a, b;
  };
  std::vector<Node> nodes;
  if (n == 2) {
    for (int a = 0; a < G; ++a) {
      const std::array<double, 2> ang{pi * a / G, 0.0};
      nodes.push_back({ang, search.at(std::span<const double>(ang.data(), 1)).value, a, 0});
    }
  } else {
    for (int a = 0; a < G; ++a) {
      for (int b = 0; b < G; ++b) {
        const std::array<double, 2> ang{pi * a / (G - 1), pi * b / G};
        nodes.push_back({ang, search.at(ang).value, a, b});
      }
    }
  }

  // Starting points: best grid nodes, at least two cells apart from each other.
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](auto x, auto y) { return nodes[x].value < nodes[y].value; });
  std::vector<std::size_t> starts;
  for (std::size_t k : order) {
    if (static_cast<int>(starts.size()) >= std::max(config.refine, 1)) break;
    bool far = true;
    for (std::size_t t : starts) {
      if (std::abs(nodes[k].a - nodes[t].a) <= 2 && std::abs(nodes[k].b - nodes[t].b) <= 2) far = false;
    }
    if (far) starts.push_back(k);
  }

  const int dims = n == 2 ? 1 : 2;
  std::vector<double> best_angles(nodes[order[0]].angles.begin(),
                                  nodes[order[0]].angles.begin() + dims);
  double best_value = nodes[order[0]].value;
  int levels = 0;
  if (config.refine > 0) {
    auto objective = [&](const std::vector<double>& ang) { return search.at(ang).value; };
    const double cell = pi / G;
    for (std::size_t k : starts) {
      std::vector<double> start(nodes[k].angles.begin(), nodes[k].angles.begin() + dims);
      auto [angles, value] = nelder_mead(objective, start, 0.5 * cell, 80);
      ++levels;
      if (value < best_value) {
        best_value = value;
        best_angles = angles;
      }
    }
  }

  const auto best = search.at(best_angles);
  OracleVerdict out;
  out.min_value = best.value;
  out.argmin = probe_rank_one(spec, DeformationGradient(search.F()), best.xi, best.eta,
                              search.step());
  out.refinement_levels = levels;
  out.evaluations = search.evaluations();
  out.status = out.min_value >= -config.tol ? Status::Elliptic : Status::Violated;
  return out;
}

OracleVerdict oracle_verdict(const EnergySpec& spec, const Stretches& s, double tol) {
  OracleConfig config;
  config.tol = tol;
  return min_acoustic(spec, s, config);
}

}  // namespace ellscope
