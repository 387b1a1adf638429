// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "defcast/geometry.hpp"
#include "defcast/vector.hpp"

namespace defcast {

enum class ProtocolKind { Binary, BoundedRegression, MultiClass, MeanVariance };

std::string to_string(ProtocolKind kind);

/// A linear protocol: how raw outcomes embed into L = R^m as the observation set Y, and the
/// forecast domain co(Y).
///
///   Binary               Y = {0, 1}                 F = [0, 1]
///   BoundedRegression    Y = [A, B]                 F = [A, B]
///   MultiClass(m)        Y = {e_1, ..., e_m}        F = Simplex(m)
///   MeanVariance(A, B)   Y = {(t, t^2) : t in [A,B]} F = ParabolaHull(A, B)
class ProtocolSpec {
public:
  static ProtocolSpec binary();
  static ProtocolSpec bounded_regression(double lo, double hi);
  static ProtocolSpec multi_class(std::size_t classes);
  static ProtocolSpec mean_variance(double lo, double hi);

  ProtocolKind kind() const noexcept { return kind_; }
  std::size_t obs_dim() const noexcept { return domain_.dim(); }
  const ConvexDomain& domain() const noexcept { return domain_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t classes() const noexcept { return classes_; }
  std::string name() const;

  /// y in Y up to `tol`.
  bool contains_observation(const Vector& y, double tol = kMembershipTol) const;

  /// Y itself when finite; otherwise an evenly spaced sample with parameter step
  /// `step * (B - A)`.
  std::vector<Vector> observation_grid(double step = 1e-3) const;

  /// diam(Y).
  double observation_diameter() const { return diameter(domain_); }

private:
  ProtocolSpec(ProtocolKind kind, ConvexDomain domain, double lo, double hi, std::size_t classes)
      : kind_(kind), domain_(std::move(domain)), lo_(lo), hi_(hi), classes_(classes) {}

  ProtocolKind kind_;
  ConvexDomain domain_;
  double lo_;
  double hi_;
  std::size_t classes_;
};

struct BinaryOutcome {
  bool value = false;
};
struct RealOutcome {
  double value = 0.0;
};
/// 1-based class label.
struct ClassLabel {
  std::size_t value = 1;
};

using RawObservation = std::variant<BinaryOutcome, RealOutcome, ClassLabel>;

/// Embeds a raw outcome as y in Y. Throws ValidationError naming the violated bound.
Vector encode_observation(const ProtocolSpec& protocol, const RawObservation& raw);

/// Reads a raw outcome from its text form ("0"/"1", a real, or a class label).
RawObservation parse_raw_observation(const ProtocolSpec& protocol, const std::string& text);

struct ProbabilityForecast {
  double probability = 0.0;
};
struct PointEstimate {
  double value = 0.0;
};
struct ClassDistribution {
  std::vector<double> probabilities;
};
struct MeanVarianceForecast {
  double mean = 0.0;
  double variance = 0.0;
};

using DomainForecast = std::variant<ProbabilityForecast, PointEstimate, ClassDistribution, MeanVarianceForecast>;

/// Reports a forecast in the protocol's natural terms. Mean-variance forecasts (f', f'') map
/// to (m, v) = (f', f'' - f'^2). Throws ValidationError if f is outside the domain.
DomainForecast decode_forecast(const ProtocolSpec& protocol, const Vector& f);

/// Inverse of the mean-variance decoding: (m, v) -> (m, v + m^2).
Vector encode_mean_variance(double mean, double variance);

/// Skeptic's move (s', s'') in the (t, t^2) representation, re-expressed as (M, V) for the
/// gain M (t - m) + V ((t - m)^2 - v).
std::pair<double, double> mv_skeptic_map(double s_first, double s_second, double mean);

struct MultiClassEmbedding {
  Vector forecast;
  Vector move;
};

/// Binary forecast f and move s as the equivalent two-class forecast (1 - f, f) and move (0, s).
MultiClassEmbedding binary_multiclass_iso(double f, double s);

} // namespace defcast
