// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "defcast/geometry.hpp"
#include "defcast/vector.hpp"

namespace defcast {

/// An element (f, x) of F x X: a forecast and the datum it was issued for.
struct Point {
  Vector f;
  Vector x;
};

class Kernel;
class PointColumns;

namespace kernel_family {

struct Constant {
  double value = 1.0;
};
/// exp(-|z - z'|^2 / (2 bandwidth^2)) over `coords`.
struct GaussianRbf {
  double bandwidth = 1.0;
  std::vector<std::size_t> coords;
};
/// Product over `coords` of the one-dimensional Sobolev kernel (1/2) exp(-|z - z'|).
struct SobolevExp {
  std::vector<std::size_t> coords;
};
/// offset + <z, z'> over `coords`. Bounded only on bounded regions.
struct Linear {
  double offset = 0.0;
  std::vector<std::size_t> coords;
};
struct Product {
  std::vector<Kernel> factors;
};
struct Sum {
  std::vector<Kernel> terms;
  std::vector<double> weights;
};

using Family = std::variant<Constant, GaussianRbf, SobolevExp, Linear, Product, Sum>;

} // namespace kernel_family

/// sup sqrt(K(z, z)); `exact` is false when only an upper bound is known.
struct CPhi {
  double value = 0.0;
  bool exact = true;
};

/// Symmetric positive-definite kernel K((f, x), (f', x')) on concatenated coordinates
/// z = (f_0..f_{m-1}, x_0..x_{l-1}). Leaf families act on a subset of those coordinates.
/// Immutable and cheap to copy.
class Kernel {
public:
  static Kernel constant(double value, std::size_t forecast_dim, std::size_t datum_dim);
  static Kernel gaussian_rbf(double bandwidth, std::size_t forecast_dim, std::size_t datum_dim,
                             std::vector<std::size_t> coords = {});
  static Kernel sobolev_exp(std::size_t forecast_dim, std::size_t datum_dim,
                            std::vector<std::size_t> coords = {});
  static Kernel linear(double offset, std::size_t forecast_dim, std::size_t datum_dim,
                       std::vector<std::size_t> coords = {});
  static Kernel product(std::vector<Kernel> factors);
  static Kernel sum(std::vector<Kernel> terms, std::vector<double> weights);

  std::size_t forecast_dim() const noexcept { return forecast_dim_; }
  std::size_t datum_dim() const noexcept { return datum_dim_; }
  std::size_t point_dim() const noexcept { return forecast_dim_ + datum_dim_; }
  const kernel_family::Family& family() const noexcept { return *family_; }

  double eval(const Point& a, const Point& b) const;

  /// out[i] = K(columns[i], q) for every stored point. Bit-identical to `eval(columns[i], q)`.
  void eval_batch(const PointColumns& columns, const Point& q, std::span<double> out) const;

  /// Bound on sup ||Phi(f, x)|| over domain x datum_box. Throws CPhiUnavailable when the
  /// family is unbounded on the region.
  CPhi c_phi(const ConvexDomain& domain, const Box& datum_box) const;

  /// K(z, z) does not depend on z.
  bool stationary() const noexcept;

  std::string describe() const;

  void require_point(const Point& p, const char* what) const;

private:
  Kernel(kernel_family::Family family, std::size_t forecast_dim, std::size_t datum_dim);

  std::shared_ptr<const kernel_family::Family> family_;
  std::size_t forecast_dim_ = 0;
  std::size_t datum_dim_ = 0;
};

} // namespace defcast
