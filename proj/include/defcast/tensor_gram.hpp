// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "defcast/history.hpp"
#include "defcast/kernels.hpp"
#include "defcast/vector.hpp"

namespace defcast {

/// Tracks N_n = ||sum_i r_i (x) Phi(f_i, x_i)||^2 and D_n = sum_i ||r_i||^2 K_ii through the
/// kernel alone, one O(n) update per round. The capital N_n - D_n is the process a Skeptic
/// playing 2 sum_{i<n} K(p_i, p_n) r_i accumulates from zero.
///
/// Not thread-safe for concurrent push; const access may be shared.
class TensorAccumulator {
public:
  TensorAccumulator(Kernel kernel, std::size_t obs_dim);

  void push(const Vector& residual, const Point& p);

  std::size_t size() const noexcept { return history_.size(); }
  double gram_norm_sq() const noexcept { return gram_norm_sq_; }
  double diag_sum() const noexcept { return diag_sum_; }
  double capital() const noexcept { return gram_norm_sq_ - diag_sum_; }
  /// sqrt(max(N_n, 0)); the raw N_n stays available through gram_norm_sq().
  double tensor_norm() const noexcept;

  /// Full double sum sum_{i,j} <r_i, r_j> K(p_i, p_j) from the stored history, O(n^2).
  double recompute_gram_norm_sq() const;

  const History& history() const noexcept { return history_; }
  const Kernel& kernel() const noexcept { return kernel_; }

private:
  Kernel kernel_;
  History history_;
  double gram_norm_sq_ = 0.0;
  double diag_sum_ = 0.0;
};

/// Explicit element of L (x) H for finite-dimensional H, stored row-major as a
/// dim_L x dim_H matrix.
class FiniteTensor {
public:
  FiniteTensor(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  /// l (x) h, the matrix l h^T.
  static FiniteTensor outer(const Vector& l, const Vector& h);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  FiniteTensor& operator+=(const FiniteTensor& other);
  double frobenius_norm() const noexcept;

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// The product v h in L for v in L (x) H and h in H.
Vector product_apply(const FiniteTensor& v, const Vector& h);

/// ||sum_i r_i (x) h_i|| computed from materialized features; the test oracle for the Gram path.
double oracle_norm(std::span<const Vector> residuals, std::span<const Vector> features);

} // namespace defcast
