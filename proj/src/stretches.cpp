#include "ellscope/stretches.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ellscope {

Stretches::Stretches(std::initializer_list<double> values)
    : Stretches(std::span<const double>(values.begin(), values.size())) {}

Stretches::Stretches(std::span<const double> values) {
  if (values.size() != 2 && values.size() != 3) {
    throw std::invalid_argument("stretches: dimension must be 2 or 3, got " +
                                std::to_string(values.size()));
  }
  n_ = static_cast<int>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v_[i] = values[i];
  validate();
}

Stretches::Stretches(const Vector& values)
    : Stretches(std::span<const double>(values.data(), static_cast<std::size_t>(values.size()))) {}

void Stretches::validate() const {
  for (int i = 0; i < n_; ++i) {
    const double x = v_[static_cast<std::size_t>(i)];
    if (!std::isfinite(x) || x <= 0.0) {
      throw std::invalid_argument("stretches: every stretch must be finite and > 0 (index " +
                                  std::to_string(i) + ")");
    }
  }
}

Vector Stretches::as_vector() const {
  Vector out(n_);
  for (int i = 0; i < n_; ++i) out[i] = (*this)[i];
  return out;
}

Vector Stretches::logs() const {
  Vector out(n_);
  for (int i = 0; i < n_; ++i) out[i] = std::log((*this)[i]);
  return out;
}

Stretches Stretches::scaled(double factor) const {
  Stretches out = *this;
  for (int i = 0; i < n_; ++i) out.v_[static_cast<std::size_t>(i)] *= factor;
  out.validate();
  return out;
}

Stretches Stretches::with(int i, double value) const {
  if (i < 0 || i >= n_) throw std::out_of_range("stretches: index out of range");
  Stretches out = *this;
  out.v_[static_cast<std::size_t>(i)] = value;
  out.validate();
  return out;
}

Stretches Stretches::permuted(std::span<const int> order) const {
  if (static_cast<int>(order.size()) != n_) {
    throw std::invalid_argument("stretches: permutation length mismatch");
  }
  std::array<bool, 3> seen{};
  for (int k : order) {
    if (k < 0 || k >= n_ || seen[static_cast<std::size_t>(k)]) {
      throw std::invalid_argument("stretches: not a permutation");
    }
    seen[static_cast<std::size_t>(k)] = true;
  }
  Stretches out = *this;
  for (int i = 0; i < n_; ++i) out.v_[static_cast<std::size_t>(i)] = (*this)[order[static_cast<std::size_t>(i)]];
  return out;
}

std::string Stretches::to_string() const {
  std::string s = "(";
  char buf[32];
  for (int i = 0; i < n_; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", (*this)[i]);
    if (i) s += ", ";
    s += buf;
  }
  return s + ")";
}

}  // namespace ellscope
