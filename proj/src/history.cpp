// SPDX-License-Identifier: Apache-2.0
#include "defcast/history.hpp"

#include "defcast/errors.hpp"
#include "defcast/simd.hpp"

namespace defcast {

PointColumns::PointColumns(std::size_t forecast_dim, std::size_t datum_dim)
    : forecast_dim_(forecast_dim), datum_dim_(datum_dim), columns_(forecast_dim + datum_dim) {}

void PointColumns::push(const Point& p) {
  if (p.f.dim() != forecast_dim_ || p.x.dim() != datum_dim_) {
    throw ContractViolation("PointColumns::push: point dims do not match");
  }
  for (std::size_t c = 0; c < forecast_dim_; ++c) columns_[c].push_back(p.f[c]);
  for (std::size_t c = 0; c < datum_dim_; ++c) columns_[forecast_dim_ + c].push_back(p.x[c]);
  ++size_;
}

Point PointColumns::point(std::size_t i) const {
  Point p{Vector(forecast_dim_), Vector(datum_dim_)};
  for (std::size_t c = 0; c < forecast_dim_; ++c) p.f[c] = columns_[c][i];
  for (std::size_t c = 0; c < datum_dim_; ++c) p.x[c] = columns_[forecast_dim_ + c][i];
  return p;
}

History::History(std::size_t forecast_dim, std::size_t datum_dim, std::size_t obs_dim)
    : points_(forecast_dim, datum_dim), residuals_(obs_dim) {}

void History::push(const Point& p, const Vector& residual) {
  if (residual.dim() != residuals_.size()) throw ContractViolation("History::push: residual dimension mismatch");
  points_.push(p);
  for (std::size_t k = 0; k < residual.dim(); ++k) residuals_[k].push_back(residual[k]);
  residual_norm_sum_ += norm(residual);
}

Vector History::residual(std::size_t i) const {
  Vector r(residuals_.size());
  for (std::size_t k = 0; k < r.dim(); ++k) r[k] = residuals_[k][i];
  return r;
}

Vector History::weighted_residual_sum(std::span<const double> weights) const {
  const std::size_t n = std::min(weights.size(), size());
  const simd::Ops& ops = simd::ops();
  Vector out(residuals_.size());
  for (std::size_t k = 0; k < out.dim(); ++k) out[k] = ops.dot(weights.data(), residuals_[k].data(), n);
  return out;
}

Vector History::kernel_field(const Kernel& kernel, const Point& q) const {
  if (empty()) return Vector(obs_dim());
  thread_local std::vector<double> weights;
  weights.resize(size());
  kernel.eval_batch(points_, q, weights);
  return weighted_residual_sum(weights);
}

} // namespace defcast
