// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "defcast/geometry.hpp"
#include "defcast/history.hpp"
#include "defcast/kernels.hpp"
#include "defcast/protocols.hpp"
#include "defcast/vector.hpp"

namespace defcast {

struct SolverConfig {
  /// Absolute tolerance on ||S(f)|| (Zero) and on sup_y <S(f), y - f> (BoundaryNormal).
  double field_tol = 1e-8;
  /// Iteration budget of each zero-finding stage.
  int max_iters = 10000;
  /// Fixed-point step eta for f <- project(f + eta S(f)); 0 selects it from the field scale.
  double step = 0.0;
  /// Lattice density of the last-resort grid scan.
  int grid_resolution = 100;

  void validate() const;
  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

enum class CertificateKind {
  Zero,            ///< ||S(f)|| <= field_tol
  BoundaryNormal,  ///< S(f) is an exterior normal at f, up to field_tol
  Default,         ///< no history yet, or a field vanishing at the barycenter: the barycenter itself
  External,        ///< forecast not produced by K29; only the measured slack is meaningful
};

std::string to_string(CertificateKind kind);
CertificateKind certificate_kind_from_string(const std::string& name);

struct ForecastCertificate {
  CertificateKind kind = CertificateKind::Default;
  double field_norm = 0.0;
  /// max(0, sup_{y in Y} <S(f), y - f>); the most Skeptic's capital can rise, halved.
  double boundary_slack = 0.0;
};

struct Forecast {
  Vector f;
  ForecastCertificate certificate;
};

/// Measures field and slack at f and classifies them against `field_tol`.
ForecastCertificate certify(const ConvexDomain& domain, const Vector& f, const Vector& field, double field_tol,
                            bool history_empty);

/// The K29 defensive forecaster with kernel parameter K. Each round it returns a point of
/// co(Y) where the kernel-weighted residual field
///
///   S(f) = sum_{i<n} K((f_i, x_i), (f, x_n)) (y_i - f_i)
///
/// vanishes, or where it is an exterior normal of the domain, so no continuous Skeptic
/// strategy of the form 2 S can gain more than the certified slack.
///
/// next_forecast/field are const and may run concurrently; observe needs exclusive access.
class K29Forecaster {
public:
  K29Forecaster(Kernel kernel, ProtocolSpec protocol, SolverConfig config = {});
  /// Bare domain without an observation codec; observations are only checked for domain membership.
  K29Forecaster(Kernel kernel, ConvexDomain domain, SolverConfig config = {});

  /// S(f) for datum x. f must lie in the domain.
  Vector field(const Vector& f, const Vector& x) const;

  /// Certified forecast for datum x. Throws SolverFailure if no stage certifies a point.
  Forecast next_forecast(const Vector& x) const;

  /// Records the completed round (x, f, y).
  void observe(const Vector& x, const Vector& f, const Vector& y);

  const History& history() const noexcept { return history_; }
  const Kernel& kernel() const noexcept { return kernel_; }
  const ConvexDomain& domain() const noexcept { return domain_; }
  const SolverConfig& config() const noexcept { return config_; }

private:
  Vector raw_field(const Vector& f, const Vector& x) const;
  Forecast solve_interval(const Vector& x) const;
  Forecast solve_general(const Vector& x) const;
  std::optional<Forecast> try_accept(const Vector& f, const Vector& x, Forecast& best) const;
  std::optional<Forecast> newton_from(const Vector& start, const Vector& x, Forecast& best) const;
  std::optional<Forecast> winding_search(const Vector& x, Forecast& best) const;

  Kernel kernel_;
  ConvexDomain domain_;
  std::optional<ProtocolSpec> protocol_;
  SolverConfig config_;
  History history_;
};

} // namespace defcast
