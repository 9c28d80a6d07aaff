#pragma once

#include <array>
#include <initializer_list>
#include <span>
#include <string>

#include <Eigen/Dense>

namespace ellscope {

// Small fixed-capacity storage; n is 2 or 3 everywhere in this library.
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

/// Principal stretches (singular values of F), n in {2,3}, all strictly
/// positive. No ordering is implied.
class Stretches {
 public:
  Stretches(std::initializer_list<double> values);
  explicit Stretches(std::span<const double> values);
  explicit Stretches(const Vector& values);

  int dim() const { return n_; }
  double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  std::span<const double> values() const { return {v_.data(), static_cast<std::size_t>(n_)}; }

  Vector as_vector() const;
  Vector logs() const;

  Stretches scaled(double factor) const;
  Stretches with(int i, double value) const;
  Stretches permuted(std::span<const int> order) const;

  std::string to_string() const;

 private:
  void validate() const;

  std::array<double, 3> v_{};
  int n_ = 0;
};

}  // namespace ellscope
