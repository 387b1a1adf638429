// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "defcast/simd.hpp"

namespace defcast::simd::detail {
namespace {

void abs_diff_accumulate(const double* col, double q, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += std::abs(col[i] - q);
}

void sq_diff_accumulate(const double* col, double q, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = col[i] - q;
    acc[i] += d * d;
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void mul_inplace(double* y, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

} // namespace

const Ops& scalar_ops() noexcept {
  static const Ops table{abs_diff_accumulate, sq_diff_accumulate, axpy, mul_inplace, dot};
  return table;
}

} // namespace defcast::simd::detail
