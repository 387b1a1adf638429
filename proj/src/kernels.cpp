// SPDX-License-Identifier: Apache-2.0
#include "defcast/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "defcast/errors.hpp"
#include "defcast/history.hpp"
#include "defcast/simd.hpp"

namespace defcast {
namespace {

using namespace kernel_family;

template <class... Ts> struct Overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::size_t> resolve_coords(std::vector<std::size_t> coords, std::size_t total,
                                        const char* family) {
  if (coords.empty()) {
    coords.resize(total);
    for (std::size_t c = 0; c < total; ++c) coords[c] = c;
    return coords;
  }
  for (std::size_t c : coords) {
    if (c >= total) {
      throw ValidationError(std::string(family) + ": coordinate " + std::to_string(c) +
                            " out of range (point has " + std::to_string(total) + " coordinates)");
    }
  }
  return coords;
}

inline double coordinate(const Point& p, std::size_t c) {
  const std::size_t fd = p.f.dim();
  return c < fd ? p.f[c] : p.x[c - fd];
}

double rbf_scale(double bandwidth) { return -1.0 / (2.0 * bandwidth * bandwidth); }

double sobolev_coeff(std::size_t d) { return std::ldexp(1.0, -static_cast<int>(d)); }

void require_children(const std::vector<Kernel>& children, const char* family) {
  if (children.empty()) throw ValidationError(std::string(family) + " requires at least one kernel");
  for (const auto& k : children) {
    if (k.forecast_dim() != children.front().forecast_dim() || k.datum_dim() != children.front().datum_dim()) {
      throw ValidationError(std::string(family) + ": children disagree on point dimensions");
    }
  }
}

std::string coords_string(const std::vector<std::size_t>& coords) {
  std::string out = "[";
  for (std::size_t i = 0; i < coords.size(); ++i) out += (i ? "," : "") + std::to_string(coords[i]);
  return out + "]";
}

} // namespace

Kernel::Kernel(Family family, std::size_t forecast_dim, std::size_t datum_dim)
    : family_(std::make_shared<const Family>(std::move(family))), forecast_dim_(forecast_dim),
      datum_dim_(datum_dim) {}

Kernel Kernel::constant(double value, std::size_t forecast_dim, std::size_t datum_dim) {
  if (!std::isfinite(value) || value < 0.0) throw ValidationError("Constant kernel requires c >= 0");
  return Kernel(Constant{value}, forecast_dim, datum_dim);
}

Kernel Kernel::gaussian_rbf(double bandwidth, std::size_t forecast_dim, std::size_t datum_dim,
                            std::vector<std::size_t> coords) {
  if (!std::isfinite(bandwidth) || bandwidth <= 0.0) {
    throw ValidationError("GaussianRBF bandwidth must be > 0");
  }
  return Kernel(GaussianRbf{bandwidth, resolve_coords(std::move(coords), forecast_dim + datum_dim, "GaussianRBF")},
                forecast_dim, datum_dim);
}

Kernel Kernel::sobolev_exp(std::size_t forecast_dim, std::size_t datum_dim, std::vector<std::size_t> coords) {
  return Kernel(SobolevExp{resolve_coords(std::move(coords), forecast_dim + datum_dim, "SobolevExp")},
                forecast_dim, datum_dim);
}

Kernel Kernel::linear(double offset, std::size_t forecast_dim, std::size_t datum_dim,
                      std::vector<std::size_t> coords) {
  if (!std::isfinite(offset) || offset < 0.0) throw ValidationError("Linear kernel offset must be >= 0");
  return Kernel(Linear{offset, resolve_coords(std::move(coords), forecast_dim + datum_dim, "Linear")},
                forecast_dim, datum_dim);
}

Kernel Kernel::product(std::vector<Kernel> factors) {
  require_children(factors, "Product");
  const auto fd = factors.front().forecast_dim();
  const auto dd = factors.front().datum_dim();
  return Kernel(Product{std::move(factors)}, fd, dd);
}

Kernel Kernel::sum(std::vector<Kernel> terms, std::vector<double> weights) {
  require_children(terms, "Sum");
  if (weights.size() != terms.size()) throw ValidationError("Sum: one weight per term required");
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw ValidationError("Sum weights must be >= 0");
  }
  const auto fd = terms.front().forecast_dim();
  const auto dd = terms.front().datum_dim();
  return Kernel(Sum{std::move(terms), std::move(weights)}, fd, dd);
}

void Kernel::require_point(const Point& p, const char* what) const {
  if (p.f.dim() != forecast_dim_ || p.x.dim() != datum_dim_) {
    throw ContractViolation(std::string(what) + ": point dims (" + std::to_string(p.f.dim()) + "," +
                            std::to_string(p.x.dim()) + ") do not match kernel (" +
                            std::to_string(forecast_dim_) + "," + std::to_string(datum_dim_) + ")");
  }
}

double Kernel::eval(const Point& a, const Point& b) const {
  require_point(a, "Kernel::eval");
  require_point(b, "Kernel::eval");
  return std::visit(Overloaded{
                        [](const Constant& k) { return k.value; },
                        [&](const GaussianRbf& k) {
                          double acc = 0.0;
                          for (std::size_t c : k.coords) {
                            const double d = coordinate(a, c) - coordinate(b, c);
                            acc += d * d;
                          }
                          return 1.0 * std::exp(rbf_scale(k.bandwidth) * acc);
                        },
                        [&](const SobolevExp& k) {
                          double acc = 0.0;
                          for (std::size_t c : k.coords) acc += std::abs(coordinate(a, c) - coordinate(b, c));
                          return sobolev_coeff(k.coords.size()) * std::exp(-1.0 * acc);
                        },
                        [&](const Linear& k) {
                          double acc = k.offset;
                          for (std::size_t c : k.coords) acc += coordinate(b, c) * coordinate(a, c);
                          return acc;
                        },
                        [&](const Product& k) {
                          double acc = k.factors.front().eval(a, b);
                          for (std::size_t j = 1; j < k.factors.size(); ++j) acc *= k.factors[j].eval(a, b);
                          return acc;
                        },
                        [&](const Sum& k) {
                          double acc = 0.0;
                          for (std::size_t j = 0; j < k.terms.size(); ++j) acc += k.weights[j] * k.terms[j].eval(a, b);
                          return acc;
                        },
                    },
                    *family_);
}

void Kernel::eval_batch(const PointColumns& columns, const Point& q, std::span<double> out) const {
  require_point(q, "Kernel::eval_batch");
  if (columns.forecast_dim() != forecast_dim_ || columns.datum_dim() != datum_dim_) {
    throw ContractViolation("Kernel::eval_batch: history dims do not match kernel");
  }
  const std::size_t n = std::min(out.size(), columns.size());
  const simd::Ops& ops = simd::ops();
  double* y = out.data();
  std::visit(Overloaded{
                 [&](const Constant& k) { std::fill_n(y, n, k.value); },
                 [&](const GaussianRbf& k) {
                   std::fill_n(y, n, 0.0);
                   for (std::size_t c : k.coords) ops.sq_diff_accumulate(columns.column(c), coordinate(q, c), y, n);
                   simd::exp_scaled_inplace(y, rbf_scale(k.bandwidth), 1.0, n);
                 },
                 [&](const SobolevExp& k) {
                   std::fill_n(y, n, 0.0);
                   for (std::size_t c : k.coords) ops.abs_diff_accumulate(columns.column(c), coordinate(q, c), y, n);
                   simd::exp_scaled_inplace(y, -1.0, sobolev_coeff(k.coords.size()), n);
                 },
                 [&](const Linear& k) {
                   std::fill_n(y, n, k.offset);
                   for (std::size_t c : k.coords) ops.axpy(coordinate(q, c), columns.column(c), y, n);
                 },
                 [&](const Product& k) {
                   k.factors.front().eval_batch(columns, q, out.first(n));
                   std::vector<double> tmp(n);
                   for (std::size_t j = 1; j < k.factors.size(); ++j) {
                     k.factors[j].eval_batch(columns, q, tmp);
                     ops.mul_inplace(y, tmp.data(), n);
                   }
                 },
                 [&](const Sum& k) {
                   std::fill_n(y, n, 0.0);
                   std::vector<double> tmp(n);
                   for (std::size_t j = 0; j < k.terms.size(); ++j) {
                     k.terms[j].eval_batch(columns, q, tmp);
                     ops.axpy(k.weights[j], tmp.data(), y, n);
                   }
                 },
             },
             *family_);
}

CPhi Kernel::c_phi(const ConvexDomain& domain, const Box& datum_box) const {
  if (domain.dim() != forecast_dim_ || datum_box.dim() != datum_dim_) {
    throw ContractViolation("Kernel::c_phi: region dims do not match kernel");
  }
  return std::visit(
      Overloaded{
          [](const Constant& k) { return CPhi{std::sqrt(k.value), true}; },
          [](const GaussianRbf&) { return CPhi{1.0, true}; },
          [](const SobolevExp& k) { return CPhi{std::sqrt(sobolev_coeff(k.coords.size())), true}; },
          [&](const Linear& k) {
            const Box fbox = bounding_box(domain);
            double acc = k.offset;
            for (std::size_t c : k.coords) {
              const Interval side = c < forecast_dim_ ? fbox.sides[c] : datum_box.sides[c - forecast_dim_];
              if (!std::isfinite(side.lo) || !std::isfinite(side.hi)) {
                throw CPhiUnavailable("Linear kernel on an unbounded coordinate");
              }
              acc += std::max(side.lo * side.lo, side.hi * side.hi);
            }
            const bool box_domain = domain.as<Interval>() || domain.as<Box>();
            return CPhi{std::sqrt(acc), box_domain};
          },
          [&](const Product& k) {
            CPhi total{1.0, true};
            int varying = 0;
            for (const auto& f : k.factors) {
              const CPhi c = f.c_phi(domain, datum_box);
              total.value *= c.value;
              total.exact = total.exact && c.exact;
              varying += f.stationary() ? 0 : 1;
            }
            total.exact = total.exact && varying <= 1;
            return total;
          },
          [&](const Sum& k) {
            double acc = 0.0;
            bool exact = true;
            int varying = 0;
            for (std::size_t j = 0; j < k.terms.size(); ++j) {
              const CPhi c = k.terms[j].c_phi(domain, datum_box);
              acc += k.weights[j] * c.value * c.value;
              exact = exact && c.exact;
              varying += (k.weights[j] > 0.0 && !k.terms[j].stationary()) ? 1 : 0;
            }
            return CPhi{std::sqrt(acc), exact && varying <= 1};
          },
      },
      *family_);
}

bool Kernel::stationary() const noexcept {
  return std::visit(Overloaded{
                        [](const Linear&) { return false; },
                        [](const Product& k) {
                          return std::all_of(k.factors.begin(), k.factors.end(),
                                             [](const Kernel& f) { return f.stationary(); });
                        },
                        [](const Sum& k) {
                          return std::all_of(k.terms.begin(), k.terms.end(),
                                             [](const Kernel& f) { return f.stationary(); });
                        },
                        [](const auto&) { return true; },
                    },
                    *family_);
}

std::string Kernel::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const Constant& k) { out << "constant(" << k.value << ")"; },
                 [&](const GaussianRbf& k) { out << "gaussian_rbf(" << k.bandwidth << ")" << coords_string(k.coords); },
                 [&](const SobolevExp& k) { out << "sobolev_exp" << coords_string(k.coords); },
                 [&](const Linear& k) { out << "linear(" << k.offset << ")" << coords_string(k.coords); },
                 [&](const Product& k) {
                   out << "product(";
                   for (std::size_t j = 0; j < k.factors.size(); ++j) out << (j ? "," : "") << k.factors[j].describe();
                   out << ")";
                 },
                 [&](const Sum& k) {
                   out << "sum(";
                   for (std::size_t j = 0; j < k.terms.size(); ++j) {
                     out << (j ? "," : "") << k.weights[j] << "*" << k.terms[j].describe();
                   }
                   out << ")";
                 },
             },
             *family_);
  return out.str();
}

} // namespace defcast
