// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "defcast/geometry.hpp"
#include "defcast/history.hpp"
#include "defcast/kernels.hpp"
#include "defcast/vector.hpp"

namespace defcast {

/// Capital of a Skeptic under K_n = K_{n-1} + <s_n, y_n - f_n>. Gains are recorded raw;
/// ever dipping below zero is flagged, not prevented.
class CapitalLedger {
public:
  explicit CapitalLedger(double initial = 0.0) : initial_(initial) {}

  /// Appends one round and returns its gain.
  double update(const Vector& move, const Vector& f, const Vector& y);

  double initial() const noexcept { return initial_; }
  double current() const noexcept { return series_.empty() ? initial_ : series_.back(); }
  const std::vector<double>& series() const noexcept { return series_; }
  const std::vector<double>& gains() const noexcept { return gains_; }
  /// 1-based round of the first negative capital.
  std::optional<std::size_t> restriction_violated_at() const noexcept { return violated_at_; }

private:
  double initial_;
  std::vector<double> series_;
  std::vector<double> gains_;
  std::optional<std::size_t> violated_at_;
};

enum class SkepticKind { Wlln, Exploit, Null };

std::string to_string(SkepticKind kind);

/// The Skeptic strategies a game can be played against:
///  - Wlln: s_n = 2 sum_{i<n} K(p_i, p_n) (y_i - f_i), whose capital from K_0 = 0 is
///    ||sum r_i (x) Phi_i||^2 - sum ||r_i||^2 ||Phi_i||^2;
///  - Exploit: the separating move against forecasts outside co(Y), zero otherwise;
///  - Null: never bets.
class SkepticStrategy {
public:
  static SkepticStrategy wlln(Kernel kernel, std::size_t obs_dim);
  static SkepticStrategy exploit(ConvexDomain domain, double scale);
  static SkepticStrategy null(std::size_t obs_dim);

  SkepticKind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }

  /// Move s_n for datum x and forecast f, given the rounds observed so far.
  Vector move(const Vector& x, const Vector& f) const;
  void observe(const Vector& x, const Vector& f, const Vector& y);

  const History* history() const noexcept { return history_ ? &*history_ : nullptr; }

private:
  SkepticStrategy(SkepticKind kind, std::size_t obs_dim) : kind_(kind), obs_dim_(obs_dim) {}

  SkepticKind kind_;
  std::size_t obs_dim_;
  std::optional<Kernel> kernel_;
  std::optional<History> history_;
  std::optional<ConvexDomain> domain_;
  double scale_ = 0.0;
};

/// 2 S(f) for the history and kernel given.
Vector wlln_move(const Kernel& kernel, const History& history, const Vector& x, const Vector& f);

/// s = scale * (project(domain, f) - f): earns at least scale * dist(f, domain)^2 against
/// every y in the domain. Throws ContractViolation("no separation exists") for f inside.
Vector exploit_move(const ConvexDomain& domain, const Vector& f_outside, double scale);

/// diam * c_phi / sqrt(N delta): the deviation bound attained with lower probability 1 - delta.
double bernoulli_bound(std::size_t horizon, double delta, double diam, double c_phi);

} // namespace defcast
