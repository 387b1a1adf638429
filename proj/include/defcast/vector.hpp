// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace defcast {

/// A point of R^m, the finite-dimensional Hilbert space every protocol lives in.
/// Dimension zero is allowed: it models an absent datum.
class Vector {
public:
  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0) : coords_(dim, fill) {}
  Vector(std::initializer_list<double> values) : coords_(values) {}
  explicit Vector(std::vector<double> coords) : coords_(std::move(coords)) {}

  std::size_t dim() const noexcept { return coords_.size(); }
  bool empty() const noexcept { return coords_.empty(); }

  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }

  std::span<const double> span() const noexcept { return coords_; }
  std::span<double> span() noexcept { return coords_; }
  const std::vector<double>& coords() const noexcept { return coords_; }

  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  bool all_finite() const noexcept;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double scale) noexcept;

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend Vector operator*(double s, Vector a) { return a *= s; }
  friend bool operator==(const Vector& a, const Vector& b) = default;

private:
  std::vector<double> coords_;
};

double dot(const Vector& a, const Vector& b);
double squared_norm(const Vector& v) noexcept;
double norm(const Vector& v) noexcept;
double distance(const Vector& a, const Vector& b);

/// Lexicographic strict order; used for deterministic tie-breaking.
bool lexicographically_less(const Vector& a, const Vector& b);

/// Throws ContractViolation when the dimensions differ.
void require_same_dim(const Vector& a, const Vector& b, const char* what);
/// Throws ValidationError naming `what` when a coordinate is NaN or infinite.
void require_finite(const Vector& v, const char* what);

std::string to_string(const Vector& v);

} // namespace defcast
