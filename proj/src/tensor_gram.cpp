// SPDX-License-Identifier: Apache-2.0
#include "defcast/tensor_gram.hpp"

#include <cmath>

#include "defcast/errors.hpp"

namespace defcast {

TensorAccumulator::TensorAccumulator(Kernel kernel, std::size_t obs_dim)
    : kernel_(std::move(kernel)), history_(kernel_.forecast_dim(), kernel_.datum_dim(), obs_dim) {}

void TensorAccumulator::push(const Vector& residual, const Point& p) {
  kernel_.require_point(p, "TensorAccumulator::push");
  if (residual.dim() != history_.obs_dim()) throw ContractViolation("TensorAccumulator::push: residual dimension");
  // sum_{i<n} <r_i, r> K(p_i, p) = <sum_{i<n} K(p_i, p) r_i, r>
  const Vector field = history_.kernel_field(kernel_, p);
  const double self = squared_norm(residual) * kernel_.eval(p, p);
  gram_norm_sq_ += 2.0 * dot(field, residual) + self;
  diag_sum_ += self;
  history_.push(p, residual);
}

double TensorAccumulator::tensor_norm() const noexcept { return std::sqrt(std::max(gram_norm_sq_, 0.0)); }

double TensorAccumulator::recompute_gram_norm_sq() const {
  const std::size_t n = history_.size();
  std::vector<Point> pts;
  std::vector<Vector> res;
  pts.reserve(n);
  res.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(history_.point(i));
    res.push_back(history_.residual(i));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) total += dot(res[i], res[j]) * kernel_.eval(pts[i], pts[j]);
  }
  return total;
}

FiniteTensor FiniteTensor::outer(const Vector& l, const Vector& h) {
  FiniteTensor t(l.dim(), h.dim());
  for (std::size_t i = 0; i < l.dim(); ++i) {
    for (std::size_t j = 0; j < h.dim(); ++j) t(i, j) = l[i] * h[j];
  }
  return t;
}

FiniteTensor& FiniteTensor::operator+=(const FiniteTensor& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ContractViolation("FiniteTensor +=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

double FiniteTensor::frobenius_norm() const noexcept {
  double acc = 0.0;
  for (double v : data_) acc += v * v;
  return std::sqrt(acc);
}

Vector product_apply(const FiniteTensor& v, const Vector& h) {
  if (h.dim() != v.cols()) throw ContractViolation("product_apply: h dimension does not match tensor");
  Vector out(v.rows());
  for (std::size_t i = 0; i < v.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < v.cols(); ++j) acc += v(i, j) * h[j];
    out[i] = acc;
  }
  return out;
}

double oracle_norm(std::span<const Vector> residuals, std::span<const Vector> features) {
  if (residuals.size() != features.size()) throw ContractViolation("oracle_norm: list lengths differ");
  if (residuals.empty()) return 0.0;
  FiniteTensor total(residuals.front().dim(), features.front().dim());
  for (std::size_t i = 0; i < residuals.size(); ++i) total += FiniteTensor::outer(residuals[i], features[i]);
  return total.frobenius_norm();
}

} // namespace defcast
