// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "defcast/simd.hpp"

namespace defcast::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(DEFCAST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

// DEFCAST_SIMD=scalar|avx2 pins the backend; otherwise the best available one is used.
Backend detect() noexcept {
  if (const char* env = std::getenv("DEFCAST_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Backend::Scalar;
    if (want == "avx2" && cpu_has_avx2()) return Backend::Avx2;
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<const Ops*>& active_table() noexcept {
  static std::atomic<const Ops*> table{&ops_for(detect())};
  return table;
}

std::atomic<Backend>& active_kind() noexcept {
  static std::atomic<Backend> kind{detect()};
  return kind;
}

} // namespace

bool backend_available(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return cpu_has_avx2();
  }
  return false;
}

const Ops& ops_for(Backend backend) {
  if (!backend_available(backend)) {
    throw std::runtime_error("SIMD backend unavailable: " + std::string(backend_name(backend)));
  }
  switch (backend) {
#if defined(DEFCAST_HAVE_AVX2)
    case Backend::Avx2: return detail::avx2_ops();
#endif
    default: return detail::scalar_ops();
  }
}

const Ops& ops() noexcept { return *active_table().load(std::memory_order_relaxed); }

Backend active_backend() noexcept {
  active_table();
  return active_kind().load(std::memory_order_relaxed);
}

void set_backend(Backend backend) {
  const Ops& table = ops_for(backend);
  active_table().store(&table, std::memory_order_relaxed);
  active_kind().store(backend, std::memory_order_relaxed);
}

std::string_view backend_name(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::Scalar};
  if (backend_available(Backend::Avx2)) out.push_back(Backend::Avx2);
  return out;
}

void exp_scaled_inplace(double* y, double scale, double coeff, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] = coeff * std::exp(scale * y[i]);
}

} // namespace defcast::simd
