// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "defcast/vector.hpp"

namespace defcast {

/// A point is treated as a member of a domain when its projection moves it by at most this much.
inline constexpr double kMembershipTol = 1e-9;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Axis-aligned box. As a forecast domain all sides are finite; as a datum region
/// (see `Kernel::c_phi`) sides may be unbounded.
struct Box {
  std::vector<Interval> sides;
  std::size_t dim() const noexcept { return sides.size(); }
};

/// Probability simplex {p in R^m : p_i >= 0, sum p_i = 1}.
struct Simplex {
  std::size_t dim = 1;
};

/// co{(t, t^2) : t in [lo, hi]}: the region between the parabola and its chord.
struct ParabolaHull {
  double lo = 0.0;
  double hi = 1.0;
  double chord(double a) const noexcept { return (lo + hi) * a - lo * hi; }
};

struct FiniteHull {
  std::vector<Vector> vertices;
};

/// Forecaster's move space co(Y). Immutable; construction validates every invariant.
class ConvexDomain {
public:
  using Variant = std::variant<Interval, Box, Simplex, ParabolaHull, FiniteHull>;

  static ConvexDomain interval(double lo, double hi);
  static ConvexDomain box(std::vector<Interval> sides);
  static ConvexDomain simplex(std::size_t dim);
  static ConvexDomain parabola_hull(double lo, double hi);
  static ConvexDomain finite_hull(std::vector<Vector> vertices);

  const Variant& variant() const noexcept { return variant_; }
  std::size_t dim() const noexcept { return dim_; }
  std::string name() const;

  template <class T> const T* as() const noexcept { return std::get_if<T>(&variant_); }

private:
  ConvexDomain(Variant v, std::size_t dim) : variant_(std::move(v)), dim_(dim) {}

  Variant variant_;
  std::size_t dim_;
};

/// Closest point of the domain to `p` (the metric projection).
Vector project(const ConvexDomain& domain, const Vector& p);

double distance_to(const ConvexDomain& domain, const Vector& p);
bool contains(const ConvexDomain& domain, const Vector& p, double tol = kMembershipTol);

struct SupportPoint {
  Vector point;
  double value = 0.0;
};

/// argmax and max of <direction, y> over the domain. Ties go to the lexicographically
/// smallest maximizing extreme point.
SupportPoint support_max(const ConvexDomain& domain, const Vector& direction);

/// True iff sup_{y in domain} <s, y - f> <= tol, i.e. `s` is an exterior normal at `f`
/// (or vanishes). Throws ContractViolation if `f` is farther than tol from the domain.
bool is_normal_exterior(const ConvexDomain& domain, const Vector& f, const Vector& s, double tol);

/// sup_{y in domain} <s, y - f>; never negative when f is in the domain.
double exterior_slack(const ConvexDomain& domain, const Vector& f, const Vector& s);

Vector barycenter(const ConvexDomain& domain);

/// Diameter of the observation set Y whose hull is this domain: Simplex over its vertices,
/// ParabolaHull over the arc, Box over its corners.
double diameter(const ConvexDomain& domain);

/// Extreme points used as solver restarts: vertices, box corners, arc endpoints and midpoint.
std::vector<Vector> extreme_points(const ConvexDomain& domain);

/// Deterministic point cloud covering the domain at the given resolution.
std::vector<Vector> grid_points(const ConvexDomain& domain, int resolution);

Box bounding_box(const ConvexDomain& domain);

} // namespace defcast
