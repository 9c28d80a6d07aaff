#pragma once

#include <stdexcept>

#include "ellscope/criteria.hpp"
#include "ellscope/energy.hpp"

namespace ellscope {

/// F in GL+(n): finite entries, det F > 0.
class DeformationGradient {
 public:
  explicit DeformationGradient(Matrix F);
  static DeformationGradient diagonal(const Stretches& s);

  const Matrix& matrix() const { return F_; }
  int dim() const { return static_cast<int>(F_.rows()); }

 private:
  Matrix F_;
};

/// F + t xi (x) eta could not be kept in GL+(n) for any usable step.
class DegenerateStepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Singular values of F (descending), via a two-sided Jacobi SVD.
Vector singular_values(const Matrix& F);

/// W(F) = g(singular values of F).
double energy_of_F(const EnergySpec& spec, const DeformationGradient& F);

struct AcousticProbe {
  Matrix F;
  Vector xi;
  Vector eta;
  double value = 0.0;
  double step = 0.0;
};

/// Second derivative of t -> W(F + t xi (x) eta) at t = 0 by central
/// differences with steps h and h/2, Richardson-extrapolated. The step is
/// halved (at most 40 times) until det stays positive on [-h, h].
double rank_one_form(const EnergySpec& spec, const DeformationGradient& F, const Vector& xi,
                     const Vector& eta, double step);
AcousticProbe probe_rank_one(const EnergySpec& spec, const DeformationGradient& F,
                             const Vector& xi, const Vector& eta, double step);

struct OracleConfig {
  int grid = 24;            // angular samples per angle of xi
  int refine = 3;           // local simplex refinements from the best grid cells
  double step_scale = 2e-3; // FD step relative to the smallest stretch
  double tol = 1e-6;
};

struct OracleVerdict {
  double min_value = 0.0;
  AcousticProbe argmin;
  Status status = Status::Elliptic;  // Elliptic iff min_value >= -tol
  int refinement_levels = 0;
  long evaluations = 0;              // energy evaluations spent
};

/// Numerical minimum of D^2W(F).(xi (x) eta, xi (x) eta) over unit xi, eta
/// at F = diag(s). xi is searched over an angular grid followed by simplex
/// refinement; for each xi the minimum over eta is the smallest eigenvalue
/// of the acoustic tensor, which is assembled by polarization of the
/// finite-difference rank-one form. Deterministic for a fixed config.
OracleVerdict min_acoustic(const EnergySpec& spec, const Stretches& s,
                           const OracleConfig& config = {});

OracleVerdict oracle_verdict(const EnergySpec& spec, const Stretches& s, double tol = 1e-6);

}  // namespace ellscope
