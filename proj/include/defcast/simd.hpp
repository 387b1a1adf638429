// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace defcast::simd {

enum class Backend { Scalar, Avx2 };

/// Inner loops over the round history. Element-wise kernels produce bit-identical results
/// across backends (same operation order per lane, no FMA); `dot` is a reduction and only
/// matches the scalar reference up to reassociation.
struct Ops {
  // acc[i] += |col[i] - q|
  void (*abs_diff_accumulate)(const double* col, double q, double* acc, std::size_t n);
  // acc[i] += (col[i] - q)^2
  void (*sq_diff_accumulate)(const double* col, double q, double* acc, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y[i] *= x[i]
  void (*mul_inplace)(double* y, const double* x, std::size_t n);
  // sum a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const Ops& ops() noexcept;
const Ops& ops_for(Backend backend);

bool backend_available(Backend backend) noexcept;
Backend active_backend() noexcept;
/// Overrides runtime detection (tests, benchmarks). Throws if the backend is unavailable.
void set_backend(Backend backend);
std::string_view backend_name(Backend backend) noexcept;
std::vector<Backend> available_backends();

/// y[i] = coeff * exp(scale * y[i]). Shared by all backends so kernel values stay bit-identical.
void exp_scaled_inplace(double* y, double scale, double coeff, std::size_t n) noexcept;

namespace detail {
const Ops& scalar_ops() noexcept;
#if defined(DEFCAST_HAVE_AVX2)
const Ops& avx2_ops() noexcept;
#endif
} // namespace detail

} // namespace defcast::simd
