// SPDX-License-Identifier: Apache-2.0
#include "defcast/vector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "defcast/errors.hpp"

namespace defcast {

bool Vector::all_finite() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](double c) { return std::isfinite(c); });
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_dim(*this, other, "Vector +=");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_dim(*this, other, "Vector -=");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Vector& Vector::operator*=(double scale) noexcept {
  for (auto& c : coords_) c *= scale;
  return *this;
}

double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += a[i] * b[i];
  return acc;
}

double squared_norm(const Vector& v) noexcept {
  double acc = 0.0;
  for (double c : v) acc += c * c;
  return acc;
}

double norm(const Vector& v) noexcept { return std::sqrt(squared_norm(v)); }

double distance(const Vector& a, const Vector& b) { return norm(a - b); }

bool lexicographically_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw ContractViolation(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()) + ")");
  }
}

void require_finite(const Vector& v, const char* what) {
  if (!v.all_finite()) throw ValidationError(std::string(what) + ": non-finite coordinate");
}

std::string to_string(const Vector& v) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (std::size_t i = 0; i < v.dim(); ++i) out << (i ? ", " : "") << v[i];
  out << ')';
  return out.str();
}

} // namespace defcast
