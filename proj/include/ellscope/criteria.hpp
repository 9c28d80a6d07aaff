#pragma once

#include <string>
#include <vector>

#include "ellscope/energy.hpp"

namespace ellscope {

enum class Status { Elliptic, Violated, Indeterminate };

/// TE: tension-extension, BE: Baker-Ericksen, C3/C4: the two square-root
/// conditions of the sufficient criterion (with the divided difference and
/// with the sum quotient, respectively).
enum class Condition { TE, BE, C3, C4 };

const char* to_string(Status s);
char status_letter(Status s);  // 'E', 'V', 'I'
const char* to_string(Condition c);

/// Gradient and Hessian of g at one point, evaluated once and shared by all
/// margin computations.
struct PointDerivatives {
  PointDerivatives(const EnergySpec& spec, const Stretches& s);

  const EnergySpec* spec;
  Stretches stretches;
  Vector grad;
  Matrix hess;
};

struct PairMargin {
  int i = 0;
  int j = 0;
  double value = 0.0;
  bool negative_radicand = false;  // C3/C4 only; value uses sqrt(max(r, 0))
};

/// Location of the smallest margin. j is -1 for TE entries.
struct WorstMargin {
  Condition condition = Condition::TE;
  int i = 0;
  int j = -1;
  double margin = 0.0;

  std::string tag() const;  // e.g. "TE_1", "C3_1_3" (1-based)
};

struct EllipticityVerdict {
  Status status = Status::Elliptic;
  std::vector<double> te_margins;
  std::vector<PairMargin> be_margins;
  std::vector<PairMargin> c3_margins;
  std::vector<PairMargin> c4_margins;
  WorstMargin worst;
  double tol = 0.0;

  /// Every stored margin, TE first then BE, C3, C4 in pair order.
  std::vector<double> all_margins() const;
};

inline constexpr double kDefaultTol = 1e-9;

/// Stretches are treated as coalescent when |li - lj| <= this * max(li, lj).
inline constexpr double kCoalescentRelTol = 1e-6;

// Margins are normalized: TE by lambda_i^2, C3/C4 by lambda_i * lambda_j and
// BE by sqrt(lambda_i * lambda_j) (its raw quotient carries one fewer power
// of lambda). This makes every margin scale invariant for isochoric
// energies. Indices are 0-based.
double te_margin(const PointDerivatives& d, int i);
double be_margin(const PointDerivatives& d, int i, int j);
PairMargin c3_margin(const PointDerivatives& d, int i, int j);
PairMargin c4_margin(const PointDerivatives& d, int i, int j);

double te_margin(const EnergySpec& spec, const Stretches& s, int i);
double be_margin(const EnergySpec& spec, const Stretches& s, int i, int j);
PairMargin c3_margin(const EnergySpec& spec, const Stretches& s, int i, int j);
PairMargin c4_margin(const EnergySpec& spec, const Stretches& s, int i, int j);

/// Evaluates TE for every index and BE/C3/C4 for every unordered pair.
///   Violated       some margin < -tol
///   Indeterminate  otherwise, if some C3/C4 radicand is negative while every
///                  TE margin lies within [-tol, tol]
/// A negative radicand outside that case is clipped to zero.
///   Elliptic       otherwise
/// For n = 2 the criterion is necessary and sufficient.
EllipticityVerdict check_point(const EnergySpec& spec, const Stretches& s,
                               double tol = kDefaultTol);

}  // namespace ellscope
