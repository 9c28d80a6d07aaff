#include "ellscope/energy.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace ellscope {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Value, gradient and Hessian of an energy expressed in the log-stretches
// l_i = log(lambda_i).
struct LogForm {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

// d/dlambda_i = (1/lambda_i) d/dl_i, and the second derivative picks up
// -delta_ij (1/lambda_i^2) d/dl_i.
Vector to_stretch_grad(const LogForm& f, const Stretches& s) {
  Vector g(s.dim());
  for (int i = 0; i < s.dim(); ++i) g[i] = f.grad[i] / s[i];
  return g;
}

Matrix to_stretch_hess(const LogForm& f, const Stretches& s) {
  const int n = s.dim();
  Matrix h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) h(i, j) = f.hess(i, j) / (s[i] * s[j]);
    h(i, i) -= f.grad[i] / (s[i] * s[i]);
  }
  return h;
}

LogForm dev_norm_log(const Vector& l) {
  const int n = static_cast<int>(l.size());
  LogForm f;
  const double mean = l.mean();
  f.value = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = l[i] - l[j];
      f.value += d * d;
    }
  }
  f.value /= n;
  f.grad = 2.0 * (l.array() - mean).matrix();
  f.hess = Matrix::Constant(n, n, -2.0 / n);
  f.hess.diagonal().array() += 2.0;
  return f;
}

LogForm scaled(LogForm f, double c) {
  f.value *= c;
  f.grad *= c;
  f.hess *= c;
  return f;
}

// c * exp(k * psi) for an inner form psi.
LogForm exp_of(const LogForm& psi, double c, double k) {
  const double e = std::exp(k * psi.value);
  LogForm f;
  f.value = c * e;
  f.grad = c * k * e * psi.grad;
  f.hess = c * k * e * (psi.hess + k * psi.grad * psi.grad.transpose());
  return f;
}

// (tr log U)^2 = (sum l)^2.
LogForm trace_sq_log(const Vector& l) {
  const int n = static_cast<int>(l.size());
  const double tau = l.sum();
  LogForm f;
  f.value = tau * tau;
  f.grad = Vector::Constant(n, 2.0 * tau);
  f.hess = Matrix::Constant(n, n, 2.0);
  return f;
}

LogForm sum(const LogForm& a, const LogForm& b) {
  return {a.value + b.value, a.grad + b.grad, a.hess + b.hess};
}

// Wires eval/grad/hess of an EnergySpec from a LogForm builder.
template <typename Builder>
void wire(EnergySpec& spec, Builder build) {
  const int n = spec.dim;
  auto check = [n](const Stretches& s) {
    if (s.dim() != n) {
      throw std::invalid_argument("energy expects " + std::to_string(n) +
                                  " stretches, got " + std::to_string(s.dim()));
    }
  };
  spec.eval = [build, check](const Stretches& s) {
    check(s);
    return build(s.logs()).value;
  };
  spec.grad = [build, check](const Stretches& s) {
    check(s);
    return to_stretch_grad(build(s.logs()), s);
  };
  spec.hess = [build, check](const Stretches& s) {
    check(s);
    return to_stretch_hess(build(s.logs()), s);
  };
}

class ParamReader {
 public:
  ParamReader(std::string_view energy, const ParamMap& params)
      : energy_(energy), params_(params) {}

  double required(const std::string& key) {
    used_.insert(key);
    auto it = params_.find(key);
    if (it == params_.end()) {
      throw ParameterError(key, energy_ + ": missing parameter '" + key + "'");
    }
    if (!std::isfinite(it->second)) {
      throw ParameterError(key, energy_ + ": parameter '" + key + "' must be finite");
    }
    return it->second;
  }

  double optional(const std::string& key, double fallback) {
    if (params_.count(key) == 0) {
      used_.insert(key);
      return fallback;
    }
    return required(key);
  }

  double at_least(double value, double lo, bool strict, const std::string& key) {
    if (strict ? !(value > lo) : !(value >= lo)) {
      throw ParameterError(key, energy_ + ": parameter '" + key + "' must be " +
                                    (strict ? "> " : ">= ") + std::to_string(lo));
    }
    return value;
  }

  int dimension(double value, const std::string& key) {
    if (value != 2.0 && value != 3.0) {
      throw ParameterError(key, energy_ + ": parameter '" + key + "' must be 2 or 3");
    }
    return static_cast<int>(value);
  }

  void reject_unknown() const {
    for (const auto& [key, value] : params_) {
      if (used_.count(key) == 0) {
        throw ParameterError(key, energy_ + ": unknown parameter '" + key + "'");
      }
    }
  }

 private:
  std::string energy_;
  const ParamMap& params_;
  std::set<std::string> used_;
};

}  // namespace

double dev_log_norm_sq(const Stretches& s) { return dev_norm_log(s.logs()).value; }

std::vector<std::string> builtin_names() {
  return {"dev-hencky", "quad-hencky", "exp-hencky-iso-2", "exp-hencky-3", "vol-exp"};
}

EnergySpec make_builtin(std::string_view name, const ParamMap& params) {
  ParamReader in(name, params);
  EnergySpec spec;
  spec.name = std::string(name);

  if (name == "dev-hencky") {
    const int n = in.dimension(in.required("n"), "n");
    const double mu = in.at_least(in.optional("mu", 1.0), 0.0, false, "mu");
    in.reject_unknown();
    spec.dim = n;
    spec.params = {{"n", n}, {"mu", mu}};
    spec.scale_invariant = true;
    wire(spec, [mu](const Vector& l) { return scaled(dev_norm_log(l), mu); });
  } else if (name == "quad-hencky") {
    const double mu = in.at_least(in.required("mu"), 0.0, false, "mu");
    const double lame = in.required("lame_lambda");
    const int n = in.dimension(in.optional("n", 3.0), "n");
    in.reject_unknown();
    spec.dim = n;
    spec.params = {{"mu", mu}, {"lame_lambda", lame}, {"n", n}};
    wire(spec, [mu, lame](const Vector& l) {
      const int dim = static_cast<int>(l.size());
      LogForm f;
      const double tau = l.sum();
      f.value = mu * l.squaredNorm() + 0.5 * lame * tau * tau;
      f.grad = 2.0 * mu * l + Vector::Constant(dim, lame * tau);
      f.hess = Matrix::Constant(dim, dim, lame);
      f.hess.diagonal().array() += 2.0 * mu;
      return f;
    });
  } else if (name == "exp-hencky-iso-2") {
    const double mu = in.at_least(in.required("mu"), 0.0, false, "mu");
    const double k = in.at_least(in.required("k"), 0.0, true, "k");
    in.reject_unknown();
    spec.dim = 2;
    spec.params = {{"mu", mu}, {"k", k}};
    spec.scale_invariant = true;
    wire(spec, [mu, k](const Vector& l) { return exp_of(dev_norm_log(l), mu / k, k); });
  } else if (name == "exp-hencky-3") {
    const double mu = in.at_least(in.required("mu"), 0.0, false, "mu");
    const double kappa = in.at_least(in.required("kappa"), 0.0, false, "kappa");
    const double khat = in.at_least(in.required("khat"), 0.0, true, "khat");
    const double k = in.at_least(in.optional("k", 1.0), 0.0, true, "k");
    in.reject_unknown();
    spec.dim = 3;
    spec.params = {{"mu", mu}, {"kappa", kappa}, {"khat", khat}, {"k", k}};
    wire(spec, [mu, kappa, khat, k](const Vector& l) {
      return sum(exp_of(dev_norm_log(l), mu / k, k),
                 exp_of(trace_sq_log(l), kappa / (2.0 * khat), khat));
    });
  } else if (name == "vol-exp") {
    const double khat = in.at_least(in.required("khat"), 0.0, true, "khat");
    const int n = in.dimension(in.optional("n", 3.0), "n");
    in.reject_unknown();
    spec.dim = n;
    spec.params = {{"khat", khat}, {"n", n}};
    wire(spec, [khat](const Vector& l) { return exp_of(trace_sq_log(l), 1.0, khat); });
  } else {
    throw ParameterError(std::string(name), "unknown energy '" + std::string(name) + "'");
  }
  return spec;
}

EnergySpec without_analytic_derivatives(EnergySpec spec) {
  spec.grad = nullptr;
  spec.hess = nullptr;
  return spec;
}

Vector fd_gradient(const std::function<double(const Stretches&)>& f, const Stretches& s) {
  const int n = s.dim();
  Vector g(n);
  for (int i = 0; i < n; ++i) {
    const double h = std::min(std::sqrt(kEps) * std::max(1.0, s[i]), s[i] / 4.0);
    const double fp2 = f(s.with(i, s[i] + 2 * h));
    const double fp1 = f(s.with(i, s[i] + h));
    const double fm1 = f(s.with(i, s[i] - h));
    const double fm2 = f(s.with(i, s[i] - 2 * h));
    g[i] = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
  }
  return g;
}

Matrix fd_hessian(const std::function<double(const Stretches&)>& f, const Stretches& s) {
  // Differencing the energy twice: eps^(1/4) balances O(h^2) truncation
  // against O(eps/h^2) rounding.
  const int n = s.dim();
  Vector h(n);
  for (int i = 0; i < n; ++i) {
    h[i] = std::min(std::pow(kEps, 0.25) * std::max(1.0, s[i]), s[i] / 4.0);
  }
  const double f0 = f(s);
  Matrix H(n, n);
  for (int i = 0; i < n; ++i) {
    const double fp = f(s.with(i, s[i] + h[i]));
    const double fm = f(s.with(i, s[i] - h[i]));
    H(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    for (int j = i + 1; j < n; ++j) {
      auto at = [&](double di, double dj) {
        return f(s.with(i, s[i] + di).with(j, s[j] + dj));
      };
      const double v = (at(h[i], h[j]) - at(h[i], -h[j]) - at(-h[i], h[j]) + at(-h[i], -h[j])) /
                       (4.0 * h[i] * h[j]);
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return H;
}

Matrix fd_jacobian_of_gradient(const std::function<Vector(const Stretches&)>& grad,
                               const Stretches& s) {
  const int n = s.dim();
  Matrix J(n, n);
  for (int j = 0; j < n; ++j) {
    const double h = std::min(std::cbrt(kEps) * std::max(1.0, s[j]), s[j] / 4.0);
    J.col(j) = (grad(s.with(j, s[j] + h)) - grad(s.with(j, s[j] - h))) / (2.0 * h);
  }
  return 0.5 * (J + J.transpose());
}

Vector grad_g(const EnergySpec& spec, const Stretches& s) {
  if (spec.grad) return spec.grad(s);
  return fd_gradient(spec.eval, s);
}

Matrix hess_g(const EnergySpec& spec, const Stretches& s) {
  Matrix h;
  if (spec.hess) {
    h = spec.hess(s);
  } else if (spec.grad) {
    h = fd_jacobian_of_gradient(spec.grad, s);
  } else {
    h = fd_hessian(spec.eval, s);
  }
  return 0.5 * (h + h.transpose());
}

FdReport fd_consistency_report(const EnergySpec& spec, int samples, double lo, double hi,
                               std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("fd_consistency_report: samples must be >= 1");
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("fd_consistency_report: need 0 < lo < hi");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  auto rel = [](const auto& analytic, const auto& fd) {
    const double scale = std::max(1.0, fd.cwiseAbs().maxCoeff());
    return (analytic - fd).cwiseAbs().maxCoeff() / scale;
  };

  FdReport report;
  report.samples = samples;
  std::vector<double> buf(static_cast<std::size_t>(spec.dim));
  for (int k = 0; k < samples; ++k) {
    for (auto& x : buf) x = dist(rng);
    const Stretches s(buf);
    if (spec.grad) {
      const double e = rel(spec.grad(s), fd_gradient(spec.eval, s));
      if (e >= report.max_grad_rel_err) {
        report.max_grad_rel_err = e;
        report.worst_grad_point = buf;
      }
    }
    if (spec.hess) {
      const Matrix analytic = spec.hess(s);
      const double e_eval = rel(analytic, fd_hessian(spec.eval, s));
      report.max_hess_eval_rel_err = std::max(report.max_hess_eval_rel_err, e_eval);
      // Without an analytic gradient the eval-only difference is the reference.
      const double e = spec.grad ? rel(analytic, fd_jacobian_of_gradient(spec.grad, s)) : e_eval;
      if (e >= report.max_hess_rel_err) {
        report.max_hess_rel_err = e;
        report.worst_hess_point = buf;
      }
    }
  }
  return report;
}

}  // namespace ellscope
