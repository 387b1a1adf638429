// SPDX-License-Identifier: Apache-2.0
#include "defcast/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "defcast/errors.hpp"
#include "defcast/simd.hpp"
#include "defcast/tensor_gram.hpp"

namespace defcast {
namespace {

std::string describe_reality(const RealitySpec& spec) {
  if (const auto* r = std::get_if<ReplaySpec>(&spec)) return "replay(" + r->path + ")";
  if (const auto* s = std::get_if<IidSpec>(&spec)) return "iid(" + to_string(s->link.kind) + ")";
  return "adversarial(" + to_string(std::get<AdversarialSpec>(spec).policy) + ")";
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); }

double max_abs_diff(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

std::optional<double> round_bound(const GameRecord& r, std::size_t n) {
  if (!r.c_phi) return std::nullopt;
  return r.diameter * *r.c_phi * std::sqrt(static_cast<double>(n));
}

} // namespace

std::string to_string(ForecasterSpec::Kind kind) { return kind == ForecasterSpec::Kind::K29 ? "k29" : "constant"; }

void GameConfig::validate() const {
  if (horizon < 1) throw ValidationError("horizon: N >= 1 required");
  if (kernel.forecast_dim() != protocol.obs_dim()) {
    throw ValidationError("kernel: forecast dimension " + std::to_string(kernel.forecast_dim()) + " does not match " +
                          protocol.name() + " (dimension " + std::to_string(protocol.obs_dim()) + ")");
  }
  solver.validate();
  validate_reality(reality, protocol, datum_dim());
  if (forecaster.kind == ForecasterSpec::Kind::Constant) {
    if (forecaster.value.dim() != protocol.obs_dim()) {
      throw ValidationError("forecaster.value: expected " + std::to_string(protocol.obs_dim()) + " coordinates");
    }
    require_finite(forecaster.value, "forecaster.value");
  }
  if (skeptic.kind == SkepticKind::Exploit && !(skeptic.scale > 0.0)) {
    throw ValidationError("skeptic.C: must be > 0");
  }
  if (!std::isfinite(skeptic.initial_capital)) throw ValidationError("skeptic.initial_capital: must be finite");
}

GameRecord run_game(const GameConfig& config, const std::string& config_hash) {
  config.validate();
  const ProtocolSpec& protocol = config.protocol;
  const ConvexDomain& domain = protocol.domain();

  GameRecord record;
  record.protocol = protocol;
  record.kernel = config.kernel;
  record.forecaster = config.forecaster;
  record.skeptic = config.skeptic;
  record.solver = config.solver;
  record.reality = describe_reality(config.reality);
  record.datum_box = datum_region(config.reality, config.datum_dim());
  record.horizon = config.horizon;
  record.seed = config.seed;
  record.config_hash = config_hash;
  record.simd_backend = std::string(simd::backend_name(simd::active_backend()));
  record.diameter = diameter(domain);
  try {
    const CPhi c = config.kernel.c_phi(domain, record.datum_box.value_or(Box{}));
    record.c_phi = c.value;
    record.c_phi_exact = c.exact;
  } catch (const CPhiUnavailable&) {
    record.c_phi.reset();
  }

  Reality reality(config.reality, protocol, config.datum_dim(), config.seed);
  std::optional<K29Forecaster> k29;
  if (config.forecaster.kind == ForecasterSpec::Kind::K29) k29.emplace(config.kernel, protocol, config.solver);

  SkepticStrategy skeptic = [&] {
    switch (config.skeptic.kind) {
      case SkepticKind::Wlln: return SkepticStrategy::wlln(config.kernel, protocol.obs_dim());
      case SkepticKind::Exploit: return SkepticStrategy::exploit(domain, config.skeptic.scale);
      case SkepticKind::Null: break;
    }
    return SkepticStrategy::null(protocol.obs_dim());
  }();

  TensorAccumulator acc(config.kernel, protocol.obs_dim());
  CapitalLedger ledger(config.skeptic.initial_capital);
  record.rounds.reserve(config.horizon);

  for (std::size_t n = 1; n <= config.horizon; ++n) {
    auto datum = reality.next_datum();
    if (!datum) {
      record.truncated = true;
      break;
    }
    RoundRecord round;
    round.n = n;
    round.x = std::move(*datum);

    if (k29) {
      try {
        Forecast fc = k29->next_forecast(round.x);
        round.f = std::move(fc.f);
        round.certificate = fc.certificate;
      } catch (SolverFailure& e) {
        e.round = n;
        throw;
      }
    } else {
      round.f = config.forecaster.value;
      const Vector s = acc.history().kernel_field(config.kernel, Point{round.f, round.x});
      round.certificate = certify(domain, round.f, s, config.solver.field_tol, acc.size() == 0);
      round.certificate.kind = CertificateKind::External;
    }

    round.skeptic_move = skeptic.move(round.x, round.f);
    round.y = reality.next_observation(round.x, round.f);
    round.residual = round.y - round.f;
    round.gain = ledger.update(round.skeptic_move, round.f, round.y);
    round.capital = ledger.current();

    acc.push(round.residual, Point{round.f, round.x});
    if (k29) k29->observe(round.x, round.f, round.y);
    skeptic.observe(round.x, round.f, round.y);

    round.tensor_norm = acc.tensor_norm();
    round.bound = round_bound(record, n);
    record.rounds.push_back(std::move(round));
  }
  return record;
}

std::vector<GameRecord> run_games(const std::vector<GameConfig>& configs, unsigned threads) {
  std::vector<GameRecord> out(configs.size());
  if (configs.empty()) return out;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(configs.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < configs.size(); k = next++) {
      try {
        out[k] = run_game(configs[k]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

VerifyReport replay_verify(const GameRecord& record, const VerifyOptions& options) {
  VerifyReport report;
  const ProtocolSpec& protocol = record.protocol;
  const ConvexDomain& domain = protocol.domain();
  const std::size_t obs = protocol.obs_dim();
  const double slack_tol = options.slack_tol > 0.0 ? options.slack_tol : record.solver.field_tol;
  auto flag = [&](std::size_t n, std::string check, double recorded, double recomputed) {
    report.issues.push_back({n, std::move(check), recorded, recomputed});
  };

  std::optional<SkepticStrategy> skeptic;
  switch (record.skeptic.kind) {
    case SkepticKind::Wlln: skeptic = SkepticStrategy::wlln(record.kernel, obs); break;
    case SkepticKind::Exploit: skeptic = SkepticStrategy::exploit(domain, record.skeptic.scale); break;
    case SkepticKind::Null: skeptic = SkepticStrategy::null(obs); break;
  }

  std::optional<double> c_phi;
  try {
    c_phi = record.kernel.c_phi(domain, record.datum_box.value_or(Box{})).value;
  } catch (const CPhiUnavailable&) {
  }
  if (c_phi.has_value() != record.c_phi.has_value() || (c_phi && !close(*c_phi, *record.c_phi, options.rel_tol))) {
    flag(0, "c_phi", record.c_phi.value_or(-1.0), c_phi.value_or(-1.0));
  }
  if (!close(diameter(domain), record.diameter, options.rel_tol)) flag(0, "diameter", record.diameter, diameter(domain));

  TensorAccumulator acc(record.kernel, obs);
  double capital = record.skeptic.initial_capital;
  for (std::size_t k = 0; k < record.rounds.size(); ++k) {
    const RoundRecord& r = record.rounds[k];
    const std::size_t n = k + 1;
    ++report.rounds_checked;
    if (r.n != n) {
      flag(n, "round_order", static_cast<double>(r.n), static_cast<double>(n));
      break;
    }
    if (r.f.dim() != obs || r.y.dim() != obs || r.x.dim() != record.kernel.datum_dim() ||
        r.skeptic_move.dim() != obs || r.residual.dim() != obs) {
      flag(n, "dimensions", 0.0, 0.0);
      break;
    }
    if (!protocol.contains_observation(r.y)) flag(n, "observation_in_Y", 0.0, 1.0);
    const Vector residual = r.y - r.f;
    const double dres = max_abs_diff(residual, r.residual);
    if (dres > options.rel_tol * (1.0 + norm(residual))) flag(n, "residual", norm(r.residual), norm(residual));

    const Vector s = acc.history().kernel_field(record.kernel, Point{r.f, r.x});
    const double field_norm = norm(s);
    const double slack = std::max(0.0, exterior_slack(domain, r.f, s));
    if (std::abs(field_norm - r.certificate.field_norm) > 1e-9 * (1.0 + field_norm)) {
      flag(n, "certificate.field_norm", r.certificate.field_norm, field_norm);
    }
    if (std::abs(slack - r.certificate.boundary_slack) > 1e-9 * (1.0 + field_norm)) {
      flag(n, "certificate.slack", r.certificate.boundary_slack, slack);
    }
    switch (r.certificate.kind) {
      case CertificateKind::Default:
        if ((n != 1 && field_norm != 0.0) || max_abs_diff(r.f, barycenter(domain)) > 1e-12) {
          flag(n, "certificate.default", 0.0, field_norm);
        }
        break;
      case CertificateKind::Zero:
        if (field_norm > slack_tol) flag(n, "certificate.zero", 0.0, field_norm);
        break;
      case CertificateKind::BoundaryNormal:
        if (slack > slack_tol || distance_to(domain, r.f) > kMembershipTol) flag(n, "certificate.boundary", 0.0, slack);
        break;
      case CertificateKind::External: break;
    }
    if (record.forecaster.kind == ForecasterSpec::Kind::K29 && r.certificate.kind == CertificateKind::External) {
      flag(n, "certificate.kind", 0.0, slack);
    }

    const Vector move = skeptic->move(r.x, r.f);
    if (max_abs_diff(move, r.skeptic_move) > options.rel_tol * (1.0 + norm(move))) {
      flag(n, "skeptic_move", norm(r.skeptic_move), norm(move));
    }
    const double gain = dot(r.skeptic_move, residual);
    if (!close(gain, r.gain, options.rel_tol)) flag(n, "gain", r.gain, gain);
    capital += r.gain;
    if (!close(capital, r.capital, options.rel_tol)) {
      flag(n, "capital", r.capital, capital);
      capital = r.capital;
    }

    acc.push(residual, Point{r.f, r.x});
    skeptic->observe(r.x, r.f, r.y);
    const double tn = acc.tensor_norm();
    if (!close(tn, r.tensor_norm, options.rel_tol)) flag(n, "tensor_norm", r.tensor_norm, tn);
    const auto bound = round_bound(record, n);
    if (bound.has_value() != r.bound.has_value() || (bound && !close(*bound, *r.bound, options.rel_tol))) {
      flag(n, "bound", r.bound.value_or(-1.0), bound.value_or(-1.0));
    }
  }
  if (!record.truncated && record.rounds.size() != record.horizon) {
    flag(record.rounds.size(), "horizon", static_cast<double>(record.horizon), static_cast<double>(record.rounds.size()));
  }
  return report;
}

} // namespace defcast
