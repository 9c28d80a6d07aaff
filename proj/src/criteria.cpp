#include "ellscope/criteria.hpp"

#include <cmath>
#include <stdexcept>

namespace ellscope {

const char* to_string(Status s) {
  switch (s) {
    case Status::Elliptic: return "Elliptic";
    case Status::Violated: return "Violated";
    case Status::Indeterminate: return "Indeterminate";
  }
  return "?";
}

char status_letter(Status s) {
  switch (s) {
    case Status::Elliptic: return 'E';
    case Status::Violated: return 'V';
    case Status::Indeterminate: return 'I';
  }
  return '?';
}

const char* to_string(Condition c) {
  switch (c) {
    case Condition::TE: return "TE";
    case Condition::BE: return "BE";
    case Condition::C3: return "C3";
    case Condition::C4: return "C4";
  }
  return "?";
}

std::string WorstMargin::tag() const {
  std::string t = std::string(to_string(condition)) + "_" + std::to_string(i + 1);
  if (j >= 0) t += "_" + std::to_string(j + 1);
  return t;
}

std::vector<double> EllipticityVerdict::all_margins() const {
  std::vector<double> out(te_margins);
  for (const auto* group : {&be_margins, &c3_margins, &c4_margins}) {
    for (const auto& m : *group) out.push_back(m.value);
  }
  return out;
}

PointDerivatives::PointDerivatives(const EnergySpec& spec_, const Stretches& s)
    : spec(&spec_), stretches(s), grad(grad_g(spec_, s)), hess(hess_g(spec_, s)) {
  if (s.dim() != spec_.dim) {
    throw std::invalid_argument("energy '" + spec_.name + "' is " + std::to_string(spec_.dim) +
                                "-dimensional but got " + std::to_string(s.dim()) + " stretches");
  }
}

namespace {

void check_pair(const PointDerivatives& d, int i, int j) {
  const int n = d.stretches.dim();
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
    throw std::invalid_argument("criteria: need distinct indices in [0, n)");
  }
}

bool coalescent(double a, double b) {
  return std::abs(a - b) <= kCoalescentRelTol * std::max(a, b);
}

// Derivatives at the point with lambda_i and lambda_j both replaced by their
// mean; used for the coalescent limits.
PointDerivatives at_midpoint(const PointDerivatives& d, int i, int j) {
  const double m = 0.5 * (d.stretches[i] + d.stretches[j]);
  return PointDerivatives(*d.spec, d.stretches.with(i, m).with(j, m));
}

PairMargin sqrt_condition(const PointDerivatives& d, int i, int j, bool with_difference) {
  const int n = d.stretches.dim();
  const double li = d.stretches[i];
  const double lj = d.stretches[j];
  const double radicand = d.hess(i, i) * d.hess(j, j);
  const double root = std::sqrt(std::max(radicand, 0.0)) / (n - 1);

  PairMargin out{i, j, 0.0, radicand < 0.0};
  if (with_difference) {
    const double quotient = (d.grad[i] - d.grad[j]) / (li - lj);
    out.value = li * lj * (root + d.hess(i, j) + quotient);
  } else {
    const double quotient = (d.grad[i] + d.grad[j]) / (li + lj);
    out.value = li * lj * (root - d.hess(i, j) + quotient);
  }
  return out;
}

}  // namespace

double te_margin(const PointDerivatives& d, int i) {
  if (i < 0 || i >= d.stretches.dim()) throw std::invalid_argument("criteria: index out of range");
  const double li = d.stretches[i];
  return li * li * d.hess(i, i);
}

double be_margin(const PointDerivatives& d, int i, int j) {
  check_pair(d, i, j);
  const double li = d.stretches[i];
  const double lj = d.stretches[j];
  if (coalescent(li, lj)) {
    const PointDerivatives mid = at_midpoint(d, i, j);
    const double m = mid.stretches[i];
    return m * (mid.grad[i] + m * (mid.hess(i, i) - mid.hess(i, j)));
  }
  return std::sqrt(li * lj) * (li * d.grad[i] - lj * d.grad[j]) / (li - lj);
}

PairMargin c3_margin(const PointDerivatives& d, int i, int j) {
  check_pair(d, i, j);
  if (coalescent(d.stretches[i], d.stretches[j])) {
    const PointDerivatives mid = at_midpoint(d, i, j);
    const int n = mid.stretches.dim();
    const double m = mid.stretches[i];
    const double radicand = mid.hess(i, i) * mid.hess(j, j);
    const double root = std::sqrt(std::max(radicand, 0.0)) / (n - 1);
    // (g_i - g_j)/(lambda_i - lambda_j) -> g_ii - g_ij
    const double quotient = mid.hess(i, i) - mid.hess(i, j);
    return {i, j, m * m * (root + mid.hess(i, j) + quotient), radicand < 0.0};
  }
  return sqrt_condition(d, i, j, true);
}

PairMargin c4_margin(const PointDerivatives& d, int i, int j) {
  check_pair(d, i, j);
  return sqrt_condition(d, i, j, false);
}

double te_margin(const EnergySpec& spec, const Stretches& s, int i) {
  return te_margin(PointDerivatives(spec, s), i);
}
double be_margin(const EnergySpec& spec, const Stretches& s, int i, int j) {
  return be_margin(PointDerivatives(spec, s), i, j);
}
PairMargin c3_margin(const EnergySpec& spec, const Stretches& s, int i, int j) {
  return c3_margin(PointDerivatives(spec, s), i, j);
}
PairMargin c4_margin(const EnergySpec& spec, const Stretches& s, int i, int j) {
  return c4_margin(PointDerivatives(spec, s), i, j);
}

EllipticityVerdict check_point(const EnergySpec& spec, const Stretches& s, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("check_point: tol must be >= 0");
  const PointDerivatives d(spec, s);
  const int n = s.dim();

  EllipticityVerdict v;
  v.tol = tol;
  bool first = true;
  auto consider = [&](Condition c, int i, int j, double m) {
    if (first || m < v.worst.margin) {
      v.worst = {c, i, j, m};
      first = false;
    }
  };

  for (int i = 0; i < n; ++i) {
    v.te_margins.push_back(te_margin(d, i));
    consider(Condition::TE, i, -1, v.te_margins.back());
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      v.be_margins.push_back({i, j, be_margin(d, i, j), false});
      v.c3_margins.push_back(c3_margin(d, i, j));
      v.c4_margins.push_back(c4_margin(d, i, j));
    }
  }
  for (const auto* group : {&v.be_margins, &v.c3_margins, &v.c4_margins}) {
    const Condition c = group == &v.be_margins   ? Condition::BE
                        : group == &v.c3_margins ? Condition::C3
                                                 : Condition::C4;
    for (const auto& m : *group) consider(c, m.i, m.j, m.value);
  }

  bool negative_radicand = false;
  for (const auto* group : {&v.c3_margins, &v.c4_margins}) {
    for (const auto& m : *group) negative_radicand = negative_radicand || m.negative_radicand;
  }
  bool te_degenerate = true;
  for (double m : v.te_margins) te_degenerate = te_degenerate && std::abs(m) <= tol;

  if (v.worst.margin < -tol) {
    v.status = Status::Violated;
  } else if (negative_radicand && te_degenerate) {
    v.status = Status::Indeterminate;
  } else {
    v.status = Status::Elliptic;
  }
  return v;
}

}  // namespace ellscope
