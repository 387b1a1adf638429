// SPDX-License-Identifier: Apache-2.0
#include "defcast/forecaster_k29.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "defcast/errors.hpp"

namespace defcast {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool accepted(const ForecastCertificate& c, double tol) {
  return c.kind == CertificateKind::Default || c.field_norm <= tol || c.boundary_slack <= tol;
}

} // namespace

void SolverConfig::validate() const {
  if (!(field_tol > 0.0) || !std::isfinite(field_tol)) throw ValidationError("solver.field_tol must be > 0");
  if (max_iters < 1) throw ValidationError("solver.max_iters must be >= 1");
  if (!(step >= 0.0) || !std::isfinite(step)) throw ValidationError("solver.step must be >= 0");
  if (grid_resolution < 2) throw ValidationError("solver.grid_resolution must be >= 2");
}

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Zero: return "Zero";
    case CertificateKind::BoundaryNormal: return "BoundaryNormal";
    case CertificateKind::Default: return "Default";
    case CertificateKind::External: return "External";
  }
  return "unknown";
}

CertificateKind certificate_kind_from_string(const std::string& name) {
  if (name == "Zero") return CertificateKind::Zero;
  if (name == "BoundaryNormal") return CertificateKind::BoundaryNormal;
  if (name == "Default") return CertificateKind::Default;
  if (name == "External") return CertificateKind::External;
  throw ValidationError("unknown certificate kind '" + name + "'");
}

ForecastCertificate certify(const ConvexDomain& domain, const Vector& f, const Vector& field, double field_tol,
                            bool history_empty) {
  ForecastCertificate c;
  c.field_norm = norm(field);
  c.boundary_slack = std::max(0.0, exterior_slack(domain, f, field));
  if (history_empty) {
    c.kind = CertificateKind::Default;
  } else if (c.field_norm <= field_tol) {
    c.kind = CertificateKind::Zero;
  } else {
    c.kind = CertificateKind::BoundaryNormal;
  }
  return c;
}

K29Forecaster::K29Forecaster(Kernel kernel, ProtocolSpec protocol, SolverConfig config)
    : K29Forecaster(std::move(kernel), protocol.domain(), config) {
  protocol_ = std::move(protocol);
}

K29Forecaster::K29Forecaster(Kernel kernel, ConvexDomain domain, SolverConfig config)
    : kernel_(std::move(kernel)), domain_(std::move(domain)), config_(config),
      history_(kernel_.forecast_dim(), kernel_.datum_dim(), domain_.dim()) {
  config_.validate();
  if (kernel_.forecast_dim() != domain_.dim()) {
    throw ValidationError("kernel forecast dimension " + std::to_string(kernel_.forecast_dim()) +
                          " does not match domain " + domain_.name());
  }
}

Vector K29Forecaster::raw_field(const Vector& f, const Vector& x) const {
  return history_.kernel_field(kernel_, Point{f, x});
}

Vector K29Forecaster::field(const Vector& f, const Vector& x) const {
  require_same_dim(f, Vector(domain_.dim()), "K29Forecaster::field");
  if (x.dim() != kernel_.datum_dim()) throw ContractViolation("K29Forecaster::field: datum dimension mismatch");
  if (distance_to(domain_, f) > kMembershipTol) {
    throw ContractViolation("K29Forecaster::field: " + to_string(f) + " outside " + domain_.name());
  }
  return raw_field(f, x);
}

Forecast K29Forecaster::next_forecast(const Vector& x) const {
  if (x.dim() != kernel_.datum_dim()) throw ContractViolation("K29Forecaster::next_forecast: datum dimension mismatch");
  if (history_.empty()) {
    const Vector f = barycenter(domain_);
    return {f, certify(domain_, f, Vector(domain_.dim()), config_.field_tol, true)};
  }
  const Vector center = barycenter(domain_);
  const Vector s = raw_field(center, x);
  if (std::all_of(s.begin(), s.end(), [](double c) { return c == 0.0; })) {
    return {center, certify(domain_, center, s, config_.field_tol, true)};
  }
  if (domain_.as<Interval>()) return solve_interval(x);
  return solve_general(x);
}

void K29Forecaster::observe(const Vector& x, const Vector& f, const Vector& y) {
  if (x.dim() != kernel_.datum_dim()) throw ContractViolation("K29Forecaster::observe: datum dimension mismatch");
  if (f.dim() != domain_.dim() || distance_to(domain_, f) > kMembershipTol) {
    throw ContractViolation("K29Forecaster::observe: forecast " + to_string(f) + " outside " + domain_.name());
  }
  const bool in_y = protocol_ ? protocol_->contains_observation(y) : contains(domain_, y);
  if (!in_y) throw ValidationError("observation " + to_string(y) + " is not in Y");
  history_.push(Point{f, x}, y - f);
}

std::optional<Forecast> K29Forecaster::try_accept(const Vector& f, const Vector& x, Forecast& best) const {
  const Vector s = raw_field(f, x);
  Forecast candidate{f, certify(domain_, f, s, config_.field_tol, false)};
  if (accepted(candidate.certificate, config_.field_tol)) return candidate;
  if (candidate.certificate.boundary_slack < best.certificate.boundary_slack) best = candidate;
  return std::nullopt;
}

// Scalar field on [lo, hi]: endpoints first, then a safeguarded Illinois bracket.
Forecast K29Forecaster::solve_interval(const Vector& x) const {
  const auto& iv = *domain_.as<Interval>();
  auto scalar = [&](double t) { return raw_field(Vector{t}, x)[0]; };
  auto finish = [&](double t) {
    const Vector f{t};
    const Vector s = raw_field(f, x);
    return Forecast{f, certify(domain_, f, s, config_.field_tol, false)};
  };

  double a = iv.lo;
  double b = iv.hi;
  double fa = scalar(a);
  double fb = scalar(b);
  if (fa == 0.0) return finish(a);
  if (fb == 0.0) return finish(b);
  if ((fa > 0.0) == (fb > 0.0)) return finish(fa > 0.0 ? b : a);

  const double target = 1e-3 * config_.field_tol;
  double best_t = std::abs(fa) <= std::abs(fb) ? a : b;
  double best_abs = std::min(std::abs(fa), std::abs(fb));
  int side = 0;
  for (int iter = 0; iter < config_.max_iters; ++iter) {
    double c = 0.5 * (a + b);
    if (iter % 4 != 3) {
      const double secant = (a * fb - b * fa) / (fb - fa);
      if (secant > a && secant < b) c = secant;
    }
    if (!(c > a && c < b)) break;
    const double fc = scalar(c);
    if (std::abs(fc) < best_abs) {
      best_abs = std::abs(fc);
      best_t = c;
    }
    if (best_abs <= target) break;
    if ((fc > 0.0) == (fb > 0.0)) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == +1) fb *= 0.5;
      side = +1;
    }
  }
  Forecast out = finish(best_t);
  if (!accepted(out.certificate, config_.field_tol)) {
    throw SolverFailure("interval solver could not certify a forecast", out.f, out.certificate.boundary_slack);
  }
  return out;
}

// Semismooth Newton on the natural map F(f) = f - project(f + eta S(f)), whose zeros are
// exactly the certified forecasts; falls back to the damped fixed-point step when the
// line search fails.
std::optional<Forecast> K29Forecaster::newton_from(const Vector& start, const Vector& x, Forecast& best) const {
  const std::size_t m = domain_.dim();
  Vector f = project(domain_, start);
  const double scale = std::max(diameter(domain_), 1e-12);
  const double s0 = norm(raw_field(f, x));
  if (s0 == 0.0) return try_accept(f, x, best);
  double eta = config_.step > 0.0 ? config_.step : 0.5 * scale / s0;

  auto natural = [&](const Vector& p, Vector* projected) {
    Vector u = project(domain_, p + raw_field(p, x) * eta);
    Vector r = p - u;
    if (projected) *projected = std::move(u);
    return r;
  };

  const int budget = std::min(config_.max_iters, 200);
  for (int iter = 0; iter < budget; ++iter) {
    Vector u;
    const Vector r = natural(f, &u);
    if (auto done = try_accept(u, x, best)) return done;
    const double phi = squared_norm(r);
    if (phi == 0.0) break;

    Eigen::MatrixXd jac(m, m);
    for (std::size_t j = 0; j < m; ++j) {
      Vector probe = f;
      const double h = 1e-7 * (1.0 + std::abs(f[j]));
      probe[j] += h;
      const Vector rj = natural(probe, nullptr);
      for (std::size_t i = 0; i < m; ++i) jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (rj[i] - r[i]) / h;
    }
    Eigen::VectorXd rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs(static_cast<Eigen::Index>(i)) = -r[i];
    const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(rhs);

    Vector next;
    bool moved = false;
    if (step.allFinite()) {
      for (double alpha = 1.0; alpha >= 1.0 / 64.0; alpha *= 0.5) {
        Vector trial = f;
        for (std::size_t i = 0; i < m; ++i) trial[i] += alpha * step(static_cast<Eigen::Index>(i));
        if (squared_norm(natural(trial, nullptr)) < (1.0 - 1e-4 * alpha) * phi) {
          next = std::move(trial);
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      next = u;
      if (squared_norm(natural(next, nullptr)) >= phi) eta *= 0.5;
    }
    if (distance(next, f) <= 1e-15 * (1.0 + norm(f))) break;
    f = std::move(next);
  }
  return std::nullopt;
}

// Planar fallback for fields with kinks, where Newton stalls: bisect boxes that carry a nonzero
// winding number of h(z) = z - P(P(z) + eta S(P(z))). The second term lies in the domain, so
// h has degree one on any box around it.
std::optional<Forecast> K29Forecaster::winding_search(const Vector& x, Forecast& best) const {
  if (domain_.dim() != 2) return std::nullopt;
  const double scale = std::max(diameter(domain_), 1e-12);
  const double s0 = norm(raw_field(barycenter(domain_), x));
  const double eta = config_.step > 0.0 ? config_.step : 0.5 * scale / std::max(s0, 1e-300);

  std::optional<Forecast> found;
  struct Sample {
    double hx = 0.0, hy = 0.0;
    double size() const { return std::hypot(hx, hy); }
  };
  auto eval = [&](double zx, double zy) {
    const Vector p = project(domain_, Vector{zx, zy});
    const Vector u = project(domain_, p + raw_field(p, x) * eta);
    const Sample h{zx - u[0], zy - u[1]};
    if (!found && h.size() <= 1e-6 * scale) found = try_accept(u, x, best);
    return h;
  };
  // Signed angle swept by h along the segment a -> b, refined until neighbours differ by
  // less than half their length (so each piece turns by under 30 degrees).
  std::function<double(double, double, const Sample&, double, double, const Sample&, int)> sweep =
      [&](double ax, double ay, const Sample& ha, double bx, double by, const Sample& hb, int depth) -> double {
    const double gap = std::hypot(ha.hx - hb.hx, ha.hy - hb.hy);
    if (found || depth >= 48 || gap < 0.5 * std::min(ha.size(), hb.size())) {
      return std::atan2(ha.hx * hb.hy - ha.hy * hb.hx, ha.hx * hb.hx + ha.hy * hb.hy);
    }
    const double mx = 0.5 * (ax + bx), my = 0.5 * (ay + by);
    const Sample hm = eval(mx, my);
    return sweep(ax, ay, ha, mx, my, hm, depth + 1) + sweep(mx, my, hm, bx, by, hb, depth + 1);
  };
  struct Rect {
    double x0, x1, y0, y1;
  };
  auto winding = [&](const Rect& r) {
    const double cx[4] = {r.x0, r.x1, r.x1, r.x0};
    const double cy[4] = {r.y0, r.y0, r.y1, r.y1};
    Sample hc[4];
    for (int k = 0; k < 4; ++k) hc[k] = eval(cx[k], cy[k]);
    double total = 0.0;
    for (int k = 0; k < 4 && !found; ++k) {
      const int j = (k + 1) % 4;
      total += sweep(cx[k], cy[k], hc[k], cx[j], cy[j], hc[j], 0);
    }
    return static_cast<long>(std::lround(total / (2.0 * M_PI)));
  };

  const Box bb = bounding_box(domain_);
  const double pad = 0.05 * scale;
  Rect box{bb.sides[0].lo - pad, bb.sides[0].hi + pad, bb.sides[1].lo - pad, bb.sides[1].hi + pad};
  for (int level = 0; level < 200 && !found; ++level) {
    const double w = box.x1 - box.x0, h = box.y1 - box.y0;
    if (std::max(w, h) <= 1e-15 * scale) break;
    Rect a = box, b = box;
    if (w >= h) {
      a.x1 = b.x0 = box.x0 + 0.5 * w;
    } else {
      a.y1 = b.y0 = box.y0 + 0.5 * h;
    }
    if (winding(a) != 0) {
      box = a;
    } else if (found) {
      break;
    } else if (winding(b) != 0) {
      box = b;
    } else {
      break;
    }
  }
  if (found) return found;
  const Vector c = project(domain_, Vector{0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1)});
  if (auto done = try_accept(c, x, best)) return done;
  if (auto done = try_accept(project(domain_, c + raw_field(c, x) * eta), x, best)) return done;
  return newton_from(c, x, best);
}

Forecast K29Forecaster::solve_general(const Vector& x) const {
  Forecast best{barycenter(domain_), {CertificateKind::BoundaryNormal, kInf, kInf}};

  // The previous forecast first: consecutive fields differ by one term.
  std::vector<Vector> starts{history_.point(history_.size() - 1).f, barycenter(domain_)};
  for (auto& v : extreme_points(domain_)) starts.push_back(std::move(v));
  for (const auto& s : starts) {
    if (auto done = try_accept(s, x, best)) return *done;
  }
  for (const auto& s : starts) {
    if (auto done = newton_from(s, x, best)) return *done;
  }
  if (auto done = winding_search(x, best)) return *done;

  // Last resort: scan a lattice and polish the most promising points.
  std::vector<std::pair<double, Vector>> scored;
  for (auto& g : grid_points(domain_, config_.grid_resolution)) {
    const Vector s = raw_field(g, x);
    const ForecastCertificate c = certify(domain_, g, s, config_.field_tol, false);
    if (accepted(c, config_.field_tol)) return {g, c};
    scored.emplace_back(c.boundary_slack, std::move(g));
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  const std::size_t polish = std::min<std::size_t>(scored.size(), 8);
  for (std::size_t k = 0; k < polish; ++k) {
    if (auto done = newton_from(scored[k].second, x, best)) return *done;
  }
  throw SolverFailure("no certified forecast found in " + domain_.name(), best.f, best.certificate.boundary_slack);
}

} // namespace defcast
