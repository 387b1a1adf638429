// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "defcast/kernels.hpp"
#include "defcast/vector.hpp"

namespace defcast {

/// Structure-of-arrays store of points: one contiguous column per coordinate of z = (f, x),
/// the layout the SIMD kernels stream over.
class PointColumns {
public:
  PointColumns(std::size_t forecast_dim, std::size_t datum_dim);

  void push(const Point& p);
  std::size_t size() const noexcept { return size_; }
  std::size_t forecast_dim() const noexcept { return forecast_dim_; }
  std::size_t datum_dim() const noexcept { return datum_dim_; }
  const double* column(std::size_t coord) const noexcept { return columns_[coord].data(); }
  Point point(std::size_t i) const;

private:
  std::size_t forecast_dim_;
  std::size_t datum_dim_;
  std::size_t size_ = 0;
  std::vector<std::vector<double>> columns_;
};

/// Completed rounds: points (f_i, x_i) with residuals r_i = y_i - f_i.
class History {
public:
  History(std::size_t forecast_dim, std::size_t datum_dim, std::size_t obs_dim);

  void push(const Point& p, const Vector& residual);
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return size() == 0; }
  std::size_t obs_dim() const noexcept { return residuals_.size(); }

  const PointColumns& points() const noexcept { return points_; }
  Point point(std::size_t i) const { return points_.point(i); }
  Vector residual(std::size_t i) const;
  const double* residual_column(std::size_t k) const noexcept { return residuals_[k].data(); }

  /// sum_i weights[i] * r_i.
  Vector weighted_residual_sum(std::span<const double> weights) const;

  /// sum_i K(p_i, q) * r_i, the kernel-weighted residual field at q.
  Vector kernel_field(const Kernel& kernel, const Point& q) const;

  /// sum_i ||r_i|| (used for tolerance scaling).
  double residual_norm_sum() const noexcept { return residual_norm_sum_; }

private:
  PointColumns points_;
  std::vector<std::vector<double>> residuals_;
  double residual_norm_sum_ = 0.0;
};

} // namespace defcast
