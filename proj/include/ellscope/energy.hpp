#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ellscope/stretches.hpp"

namespace ellscope {

using ParamMap = std::map<std::string, double>;

/// Raised by make_builtin for unknown energies and bad parameters. key()
/// names the offending parameter (or the energy name).
class ParameterError : public std::invalid_argument {
 public:
  ParameterError(std::string key, const std::string& what)
      : std::invalid_argument(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// An isotropic energy written as a symmetric function g of the principal
/// stretches. grad/hess are optional; when empty, finite differences of eval
/// are used.
struct EnergySpec {
  std::string name;
  int dim = 3;
  ParamMap params;
  std::function<double(const Stretches&)> eval;
  std::function<Vector(const Stretches&)> grad;
  std::function<Matrix(const Stretches&)> hess;
  bool scale_invariant = false;

  bool has_analytic_grad() const { return static_cast<bool>(grad); }
  bool has_analytic_hess() const { return static_cast<bool>(hess); }
};

/// (1/n) * sum_{i<j} log^2(lambda_i / lambda_j), i.e. |dev_n log U|^2.
double dev_log_norm_sq(const Stretches& s);

/// Names accepted by make_builtin.
std::vector<std::string> builtin_names();

/// Builds one of the catalog energies:
///   dev-hencky        {n: 2|3, mu = 1}            mu |dev_n log U|^2
///   quad-hencky       {mu, lame_lambda, n = 3}    mu |log U|^2 + lame_lambda/2 (tr log U)^2
///   exp-hencky-iso-2  {mu, k}                     mu/k exp(k |dev_2 log U|^2)
///   exp-hencky-3      {mu, kappa, khat, k = 1}    mu/k exp(k |dev_3 log U|^2) + kappa/(2 khat) exp(khat (tr log U)^2)
///   vol-exp           {khat, n = 3}               exp(khat (log det U)^2)
/// All built-ins carry analytic gradients and Hessians.
EnergySpec make_builtin(std::string_view name, const ParamMap& params);

/// Copy of spec with grad/hess removed, so every derivative goes through
/// finite differences.
EnergySpec without_analytic_derivatives(EnergySpec spec);

// Finite-difference providers. Steps are scaled per coordinate by
// max(1, lambda_i) and shrunk when they would leave the positive orthant.
Vector fd_gradient(const std::function<double(const Stretches&)>& f, const Stretches& s);
Matrix fd_hessian(const std::function<double(const Stretches&)>& f, const Stretches& s);
Matrix fd_jacobian_of_gradient(const std::function<Vector(const Stretches&)>& grad,
                               const Stretches& s);

Vector grad_g(const EnergySpec& spec, const Stretches& s);
Matrix hess_g(const EnergySpec& spec, const Stretches& s);

struct FdReport {
  int samples = 0;
  double max_grad_rel_err = 0.0;   // analytic grad vs 5-point FD of eval
  double max_hess_rel_err = 0.0;   // analytic hess vs central FD of the analytic grad
  double max_hess_eval_rel_err = 0.0;  // analytic hess vs FD built from eval alone
  std::vector<double> worst_grad_point;
  std::vector<double> worst_hess_point;
};

/// Compares analytic derivatives with finite differences at `samples`
/// uniformly random stretches in [lo, hi]^n. Errors are measured as
/// max|analytic - fd| / max(1, max|fd|). Specs without analytic derivatives
/// report zero for the missing parts.
FdReport fd_consistency_report(const EnergySpec& spec, int samples, double lo, double hi,
                               std::uint64_t seed = 20160617);

}  // namespace ellscope
