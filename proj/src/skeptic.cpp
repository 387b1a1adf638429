// SPDX-License-Identifier: Apache-2.0
#include "defcast/skeptic.hpp"

#include <cmath>

#include "defcast/errors.hpp"

namespace defcast {

double CapitalLedger::update(const Vector& move, const Vector& f, const Vector& y) {
  const double gain = dot(move, y - f);
  series_.push_back(current() + gain);
  gains_.push_back(gain);
  if (!violated_at_ && series_.back() < 0.0) violated_at_ = series_.size();
  return gain;
}

std::string to_string(SkepticKind kind) {
  switch (kind) {
    case SkepticKind::Wlln: return "wlln";
    case SkepticKind::Exploit: return "exploit";
    case SkepticKind::Null: return "null";
  }
  return "unknown";
}

SkepticStrategy SkepticStrategy::wlln(Kernel kernel, std::size_t obs_dim) {
  SkepticStrategy s(SkepticKind::Wlln, obs_dim);
  s.history_.emplace(kernel.forecast_dim(), kernel.datum_dim(), obs_dim);
  s.kernel_ = std::move(kernel);
  return s;
}

SkepticStrategy SkepticStrategy::exploit(ConvexDomain domain, double scale) {
  if (!std::isfinite(scale) || scale <= 0.0) throw ValidationError("Exploit scale C must be > 0");
  SkepticStrategy s(SkepticKind::Exploit, domain.dim());
  s.domain_ = std::move(domain);
  s.scale_ = scale;
  return s;
}

SkepticStrategy SkepticStrategy::null(std::size_t obs_dim) { return SkepticStrategy(SkepticKind::Null, obs_dim); }

Vector SkepticStrategy::move(const Vector& x, const Vector& f) const {
  switch (kind_) {
    case SkepticKind::Wlln: return wlln_move(*kernel_, *history_, x, f);
    case SkepticKind::Exploit:
      if (distance_to(*domain_, f) <= kMembershipTol) return Vector(obs_dim_);
      return exploit_move(*domain_, f, scale_);
    case SkepticKind::Null: return Vector(obs_dim_);
  }
  return Vector(obs_dim_);
}

void SkepticStrategy::observe(const Vector& x, const Vector& f, const Vector& y) {
  if (history_) history_->push(Point{f, x}, y - f);
}

Vector wlln_move(const Kernel& kernel, const History& history, const Vector& x, const Vector& f) {
  return history.kernel_field(kernel, Point{f, x}) * 2.0;
}

Vector exploit_move(const ConvexDomain& domain, const Vector& f_outside, double scale) {
  const Vector nearest = project(domain, f_outside);
  if (distance(nearest, f_outside) <= kMembershipTol) throw ContractViolation("no separation exists");
  return (nearest - f_outside) * scale;
}

double bernoulli_bound(std::size_t horizon, double delta, double diam, double c_phi) {
  if (horizon < 1) throw ValidationError("bernoulli_bound: N >= 1 required");
  if (!(delta > 0.0) || delta > 1.0) throw ValidationError("bernoulli_bound: delta must lie in (0, 1]");
  return diam * c_phi / std::sqrt(static_cast<double>(horizon) * delta);
}

} // namespace defcast
