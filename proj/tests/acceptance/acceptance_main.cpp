// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "defcast/cli.hpp"
#include "defcast/diagnostics.hpp"
#include "defcast/engine.hpp"
#include "defcast/errors.hpp"
#include "defcast/forecaster_k29.hpp"
#include "defcast/skeptic.hpp"
#include "defcast/tensor_gram.hpp"
#include "defcast/transcript.hpp"
#include "oracles.hpp"

using namespace defcast;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------------------------------------
// Shared oracles for games played through the engine.

enum class KernelChoice { Constant, Sobolev, Rbf };

Kernel make_kernel(KernelChoice k, std::size_t fd, std::size_t dd) {
  switch (k) {
    case KernelChoice::Constant: return Kernel::constant(1.0, fd, dd);
    case KernelChoice::Sobolev: return Kernel::sobolev_exp(fd, dd);
    case KernelChoice::Rbf: return Kernel::gaussian_rbf(1.0, fd, dd);
  }
  return Kernel::constant(1.0, fd, dd);
}

// Closed-form kernel on concatenated (f, x).
double kernel_value(KernelChoice k, const Vector& a, const Vector& b) {
  switch (k) {
    case KernelChoice::Constant: return 1.0;
    case KernelChoice::Sobolev: return oracle::sobolev(a, b);
    case KernelChoice::Rbf: return oracle::rbf(a, b, 1.0);
  }
  return 0.0;
}

// sup_{y in Y} <s, y - f> by enumeration (finite Y), endpoints (interval) or the quadratic's
// maximum on [A, B] (arc).
double sup_over_y(const ProtocolSpec& p, const Vector& s, const Vector& f) {
  const double sf = dot(s, f);
  switch (p.kind()) {
    case ProtocolKind::Binary: return std::max(0.0, s[0]) - sf;
    case ProtocolKind::BoundedRegression: return std::max(s[0] * p.lo(), s[0] * p.hi()) - sf;
    case ProtocolKind::MultiClass: return *std::max_element(s.begin(), s.end()) - sf;
    case ProtocolKind::MeanVariance: {
      auto q = [&](double t) { return s[0] * t + s[1] * t * t; };
      double best = std::max(q(p.lo()), q(p.hi()));
      if (s[1] < 0.0) {
        const double t = std::clamp(-s[0] / (2.0 * s[1]), p.lo(), p.hi());
        best = std::max(best, q(t));
      }
      return best - sf;
    }
  }
  return 0.0;
}

double closed_form_diameter(const ProtocolSpec& p) {
  switch (p.kind()) {
    case ProtocolKind::Binary: return 1.0;
    case ProtocolKind::BoundedRegression: return p.hi() - p.lo();
    case ProtocolKind::MultiClass: return std::sqrt(2.0);
    case ProtocolKind::MeanVariance: {
      const double a = p.lo(), b = p.hi();
      return std::hypot(b - a, b * b - a * a);
    }
  }
  return 0.0;
}

double closed_form_c_phi(KernelChoice k, std::size_t coords) {
  return k == KernelChoice::Sobolev ? std::pow(0.5, 0.5 * static_cast<double>(coords)) : 1.0;
}

struct GameAudit {
  double worst_slack = 0.0;         // max_n sup_y <S_n(f_n), y - f_n>
  double worst_capital_step = -1e300;  // max_n K_n - K_{n-1}
  double worst_bound_excess = -1e300;  // max_n tensor_norm_n - diam C sqrt(n)
  double worst_record_gap = 0.0;    // recorded vs recomputed tensor norm
};

// Replays a record with independent arithmetic: the field from closed-form kernels, the tensor
// norm from the incremental Gram identity, the bound from closed-form constants.
GameAudit audit(const GameRecord& rec, KernelChoice kc) {
  GameAudit a;
  const auto& p = rec.protocol;
  const std::size_t coords = p.obs_dim() + rec.kernel.datum_dim();
  const double rhs_unit = closed_form_diameter(p) * closed_form_c_phi(kc, coords);
  std::vector<Vector> zs, rs;
  double gram = 0.0;
  for (std::size_t k = 0; k < rec.rounds.size(); ++k) {
    const auto& r = rec.rounds[k];
    const Vector z = oracle::concat(r.f, r.x);
    Vector s(p.obs_dim());
    for (std::size_t i = 0; i < zs.size(); ++i) s += rs[i] * kernel_value(kc, zs[i], z);
    a.worst_slack = std::max(a.worst_slack, sup_over_y(p, s, r.f));
    const double prev = k == 0 ? rec.skeptic.initial_capital : rec.rounds[k - 1].capital;
    a.worst_capital_step = std::max(a.worst_capital_step, r.capital - prev);
    // Recomputed WLLN gain 2 <S, y - f> must obey the same step bound.
    const Vector res = r.y - r.f;
    a.worst_capital_step = std::max(a.worst_capital_step, 2.0 * dot(s, res));
    gram += 2.0 * dot(s, res) + squared_norm(res) * kernel_value(kc, z, z);
    const double tn = std::sqrt(std::max(gram, 0.0));
    const double n = static_cast<double>(k + 1);
    a.worst_bound_excess = std::max(a.worst_bound_excess, tn - rhs_unit * std::sqrt(n));
    a.worst_record_gap = std::max(a.worst_record_gap, std::abs(tn - r.tensor_norm) / (1.0 + tn));
    zs.push_back(z);
    rs.push_back(res);
  }
  return a;
}

struct Battery {
  std::vector<GameRecord> records;
  std::vector<KernelChoice> kernels;
  std::vector<std::string> labels;
  double seconds = 0.0;
};

const Battery& criterion1_battery() {
  static const Battery battery = [] {
    Battery b;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<ProtocolSpec> protocols{ProtocolSpec::binary(), ProtocolSpec::multi_class(3),
                                              ProtocolSpec::bounded_regression(0, 1), ProtocolSpec::mean_variance(0, 1)};
    const std::vector<std::pair<KernelChoice, const char*>> kernels{
        {KernelChoice::Constant, "Constant"}, {KernelChoice::Sobolev, "SobolevExp"}, {KernelChoice::Rbf, "GaussianRBF(1)"}};
    std::vector<GameConfig> configs;
    for (const auto& p : protocols) {
      for (const auto& [kc, kname] : kernels) {
        for (int adversarial = 0; adversarial < 2; ++adversarial) {
          for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            DatumSpec datum{{Interval{-1.0, 1.0}}};
            RealitySpec reality;
            if (adversarial) {
              reality = AdversarialSpec{seed % 2 ? AdversaryPolicy::MaxResidual : AdversaryPolicy::AntiForecast, datum};
            } else {
              IidSpec iid;
              iid.datum = datum;
              if (p.kind() == ProtocolKind::MultiClass) {
                iid.link.kind = LinkSpec::Kind::Softmax;
                iid.link.weights = {1.5, 0.0, -1.5};
                iid.link.biases = {0.0, 0.3, 0.0};
              } else {
                iid.link.kind = LinkSpec::Kind::Logistic;
                iid.link.weights = {1.5};
                iid.link.biases = {0.2};
              }
              reality = iid;
            }
            configs.push_back(GameConfig{p, make_kernel(kc, p.obs_dim(), 1), reality, {}, {}, {}, 500, seed});
            b.kernels.push_back(kc);
            b.labels.push_back(p.name() + "/" + kname + "/" + (adversarial ? "adversarial" : "iid") + "/seed" +
                               std::to_string(seed));
          }
        }
      }
    }
    b.records = run_games(configs, 0);
    b.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return b;
  }();
  return battery;
}

// ---------------------------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const Battery* b = nullptr;
  try {
    b = &criterion1_battery();
  } catch (const SolverFailure& e) {
    return {false, std::string("solver failure at round ") + std::to_string(e.round) + ": " + e.what()};
  }
  double worst_slack = 0.0, worst_step = -1e300;
  std::string worst_label;
  std::size_t rounds = 0;
  for (std::size_t k = 0; k < b->records.size(); ++k) {
    const GameAudit a = audit(b->records[k], b->kernels[k]);
    rounds += b->records[k].rounds.size();
    if (b->records[k].rounds.size() != 500) o.pass = false;
    if (a.worst_slack > worst_slack) worst_slack = a.worst_slack, worst_label = b->labels[k];
    worst_step = std::max(worst_step, a.worst_capital_step);
  }
  o.pass = o.pass && worst_slack <= 1e-6 && worst_step <= 2e-6 && b->seconds < 120.0;
  o.detail = std::to_string(b->records.size()) + " games, " + std::to_string(rounds) +
             " rounds; max sup_y <S,y-f> = " + fmt("%.3g", worst_slack) +
             (worst_label.empty() ? "" : " (" + worst_label + ")") + "; max K_n - K_{n-1} = " + fmt("%.3g", worst_step) +
             "; games took " + fmt("%.1f", b->seconds) + " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const Battery* b = nullptr;
  try {
    b = &criterion1_battery();
  } catch (const SolverFailure& e) {
    return {false, std::string("solver failure: ") + e.what()};
  }
  double worst = -1e300, worst_strict = -1e300, worst_gap = 0.0;
  for (std::size_t k = 0; k < b->records.size(); ++k) {
    const GameAudit a = audit(b->records[k], b->kernels[k]);
    const bool strict = b->records[k].protocol.kind() == ProtocolKind::Binary && b->kernels[k] == KernelChoice::Constant;
    (strict ? worst_strict : worst) = std::max(strict ? worst_strict : worst, a.worst_bound_excess);
    worst_gap = std::max(worst_gap, a.worst_record_gap);
  }
  o.pass = worst <= 1e-3 && worst_strict <= 1e-6 && worst_gap <= 1e-9;
  o.detail = "max tensor_norm - diam C_Phi sqrt(n) = " + fmt("%.4g", worst) + " (allowance 1e-3); Binary+Constant " +
             fmt("%.4g", worst_strict) + " (allowance 1e-6); recorded vs recomputed norm gap " + fmt("%.2g", worst_gap);
  return o;
}

Outcome criterion3() {
  oracle::Rng rng(303);
  const std::vector<ProtocolSpec> protocols{ProtocolSpec::binary(), ProtocolSpec::multi_class(3),
                                            ProtocolSpec::bounded_regression(-1, 2), ProtocolSpec::mean_variance(0, 1)};
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto& p = protocols[static_cast<std::size_t>(t) % protocols.size()];
    const std::size_t dd = rng.index(3);
    const std::vector<Kernel> ks{Kernel::sobolev_exp(p.obs_dim(), dd), Kernel::gaussian_rbf(0.5, p.obs_dim(), dd),
                                 Kernel::constant(1.5, p.obs_dim(), dd), Kernel::linear(1.0, p.obs_dim(), dd)};
    const Kernel& kernel = ks[rng.index(ks.size())];
    const double k0 = rng.uniform(0.0, 5.0);
    auto skeptic = SkepticStrategy::wlln(kernel, p.obs_dim());
    CapitalLedger ledger(k0);
    TensorAccumulator acc(kernel, p.obs_dim());
    for (int n = 0; n < 100; ++n) {
      const Vector x = rng.normal_vector(dd);
      const Vector f = oracle::sample_in(p.domain(), rng);
      const Vector y = oracle::sample_observation(p, rng);
      ledger.update(skeptic.move(x, f), f, y);
      skeptic.observe(x, f, y);
      acc.push(y - f, {f, x});
    }
    const double lhs = ledger.current(), rhs = k0 + acc.capital();
    worst = std::max(worst, std::abs(lhs - rhs) / std::max({std::abs(rhs), acc.diag_sum(), 1e-300}));
  }
  return {worst <= 1e-9, "50 transcripts, max |K_0 + sum gains - (K_0 + N_n - D_n)| / max(|K_N|, D_N) = " +
                             fmt("%.3g", worst)};
}

Outcome criterion4() {
  oracle::Rng rng(404);
  double worst_norm = 0.0, worst_b1 = 0.0, worst_b2 = -1e300;
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 1 + rng.index(5);
    const std::size_t fd = 1 + rng.index(d), dd = d - fd;
    const std::size_t m = 1 + rng.index(4);
    const std::size_t n = 1 + rng.index(50);
    // Feature map h(z) = z; its kernel is <z, z'>.
    TensorAccumulator acc(Kernel::linear(0.0, fd, dd), m);
    FiniteTensor explicit_sum(m, d);
    for (std::size_t i = 0; i < n; ++i) {
      const Vector f = rng.normal_vector(fd), x = rng.normal_vector(dd), r = rng.normal_vector(m);
      acc.push(r, {f, x});
      // Outer product built entry by entry, not via the library.
      const Vector h = oracle::concat(f, x);
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < d; ++b) explicit_sum(a, b) += r[a] * h[b];
      }
    }
    double frob_sq = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < d; ++b) frob_sq += explicit_sum(a, b) * explicit_sum(a, b);
    }
    const double tn = acc.tensor_norm();
    worst_norm = std::max(worst_norm, std::abs(tn * tn - frob_sq) / std::max(frob_sq, 1e-300));

    // (l (x) h1) h2 = <h1, h2> l
    const Vector l = rng.normal_vector(m), h1 = rng.normal_vector(d), h2 = rng.normal_vector(d);
    const Vector got = product_apply(FiniteTensor::outer(l, h1), h2);
    const double ip = dot(h1, h2);
    for (std::size_t a = 0; a < m; ++a) worst_b1 = std::max(worst_b1, std::abs(got[a] - ip * l[a]) / (1.0 + std::abs(ip * l[a])));
    // ||v h|| <= ||v|| ||h|| for a general v
    FiniteTensor v(m, d);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < d; ++b) v(a, b) = rng.normal();
    }
    worst_b2 = std::max(worst_b2, norm(product_apply(v, h2)) - v.frobenius_norm() * norm(h2));
  }
  return {worst_norm <= 1e-9 && worst_b1 <= 1e-12 && worst_b2 <= 1e-12,
          "100 cases: Gram vs Frobenius rel err " + fmt("%.2g", worst_norm) + "; rank-one product identity err " +
              fmt("%.2g", worst_b1) + "; max ||vh|| - ||v|| ||h|| = " + fmt("%.2g", worst_b2)};
}

ConvexDomain random_domain(int variant, oracle::Rng& rng) {
  switch (variant) {
    case 0: {
      const double a = rng.uniform(-3, 3);
      return ConvexDomain::interval(a, a + rng.uniform(0.1, 4));
    }
    case 1: {
      std::vector<Interval> sides;
      for (std::size_t k = 0, d = 1 + rng.index(4); k < d; ++k) {
        const double a = rng.uniform(-3, 3);
        sides.push_back({a, a + rng.uniform(0.1, 4)});
      }
      return ConvexDomain::box(sides);
    }
    case 2: return ConvexDomain::simplex(1 + rng.index(6));
    case 3: {
      const double a = rng.uniform(-2, 1);
      return ConvexDomain::parabola_hull(a, a + rng.uniform(0.1, 3));
    }
    default: {
      std::vector<Vector> verts;
      for (std::size_t k = 0, n = 3 + rng.index(6); k < n; ++k) verts.push_back(rng.normal_vector(2, 2.0));
      return ConvexDomain::finite_hull(verts);
    }
  }
}

Outcome criterion5() {
  const char* names[] = {"Interval", "Box", "Simplex", "ParabolaHull", "FiniteHull(2-D)"};
  bool pass = true;
  std::string detail;
  for (int variant = 0; variant < 5; ++variant) {
    oracle::Rng rng(500 + static_cast<std::uint64_t>(variant));
    double idem = 0.0, expand = -1e300, vi = -1e300;
    int outside = 0;
    for (int c = 0; c < 1000; ++c) {
      const ConvexDomain d = random_domain(variant, rng);
      const Vector center = barycenter(d);
      const Vector p = center + rng.normal_vector(d.dim(), 3.0);
      const Vector q = center + rng.normal_vector(d.dim(), 3.0);
      const Vector pp = project(d, p), pq = project(d, q);
      idem = std::max(idem, distance(project(d, pp), pp));
      expand = std::max(expand, distance(pp, pq) - distance(p, q));
      if (!oracle::member(d, pp, 1e-12)) ++outside;
      std::vector<Vector> ys = extreme_points(d);
      for (int j = 0; j < 8; ++j) ys.push_back(oracle::sample_in(d, rng));
      for (const auto& y : ys) vi = std::max(vi, dot(p - pp, y - pp));
    }
    const bool ok = idem <= 1e-12 && expand <= 1e-12 && vi <= 1e-10 && outside == 0;
    pass = pass && ok;
    detail += std::string(detail.empty() ? "" : "; ") + names[variant] + ": idem " + fmt("%.1g", idem) + ", expand " +
              fmt("%.1g", expand) + ", VI " + fmt("%.1g", vi) + ", outside " + std::to_string(outside);
  }
  return {pass, detail};
}

Outcome criterion6() {
  oracle::Rng rng(606);
  int agree = 0, disagree = 0;
  double worst_gap = 0.0;
  for (int t = 0; t < 200; ++t) {
    const bool binary = t % 4 == 0;
    const ProtocolSpec p = binary ? ProtocolSpec::binary() : ProtocolSpec::bounded_regression(-1.0, rng.uniform(0.0, 2.0));
    const std::size_t dd = rng.index(2);
    const KernelChoice kc = std::vector<KernelChoice>{KernelChoice::Constant, KernelChoice::Sobolev, KernelChoice::Rbf}[rng.index(3)];
    K29Forecaster k(make_kernel(kc, 1, dd), p);
    const std::size_t n = 1 + rng.index(50);
    std::vector<Vector> zs, rs;
    for (std::size_t i = 0; i < n; ++i) {
      const Vector f{rng.uniform(p.lo(), p.hi())}, x = rng.normal_vector(dd);
      const Vector y = oracle::sample_observation(p, rng);
      k.observe(x, f, y);
      zs.push_back(oracle::concat(f, x));
      rs.push_back(y - f);
    }
    const Vector x = rng.normal_vector(dd);
    const auto S = [&](double f) {
      const Vector z = oracle::concat(Vector{f}, x);
      double s = 0.0;
      for (std::size_t i = 0; i < zs.size(); ++i) s += kernel_value(kc, zs[i], z) * rs[i][0];
      return s;
    };
    const auto set = oracle::scalar_certified_set(S, p.lo(), p.hi(), 1e-4);
    const double f = k.next_forecast(x).f[0];
    double gap = 1e300;
    for (double root : set.roots) gap = std::min(gap, std::abs(root - f));
    const bool endpoint = (f == p.lo() && set.lo_certified) || (f == p.hi() && set.hi_certified);
    if (gap <= 1e-3 || endpoint) {
      ++agree;
    } else {
      ++disagree;
    }
    if (!endpoint) worst_gap = std::max(worst_gap, gap);
  }

  int verified = 0;
  const auto verts = oracle::simplex_vertices(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t dd = rng.index(2);
    const KernelChoice kc = std::vector<KernelChoice>{KernelChoice::Constant, KernelChoice::Sobolev, KernelChoice::Rbf}[rng.index(3)];
    K29Forecaster k(make_kernel(kc, 3, dd), ProtocolSpec::multi_class(3));
    const std::size_t n = 1 + rng.index(50);
    std::vector<Vector> zs, rs;
    for (std::size_t i = 0; i < n; ++i) {
      const Vector f = oracle::sample_in(ConvexDomain::simplex(3), rng), x = rng.normal_vector(dd);
      const Vector y = verts[rng.index(3)];
      k.observe(x, f, y);
      zs.push_back(oracle::concat(f, x));
      rs.push_back(y - f);
    }
    const Vector x = rng.normal_vector(dd);
    const Forecast out = k.next_forecast(x);
    Vector s(3);
    const Vector z = oracle::concat(out.f, x);
    for (std::size_t i = 0; i < zs.size(); ++i) s += rs[i] * kernel_value(kc, zs[i], z);
    const double tol = k.config().field_tol;
    const bool in_simplex = oracle::member(ConvexDomain::simplex(3), out.f, 1e-12);
    if (in_simplex && (norm(s) <= tol || oracle::vertex_slack(verts, s, out.f) <= tol)) ++verified;
  }
  return {disagree == 0 && verified == 100,
          "1-D: " + std::to_string(agree) + "/200 agree with grid+bisection (max interior gap " + fmt("%.2g", worst_gap) +
              "); Simplex(3): " + std::to_string(verified) + "/100 certificates re-verified by vertex enumeration"};
}

Outcome criterion7() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Neighborhood> nbs;
  for (double fc : {0.3, 0.4, 0.5, 0.6, 0.7}) {
    for (double xc = -0.75; xc <= 0.75 + 1e-12; xc += 0.25) nbs.push_back({Vector{fc}, Vector{xc}, Vector{0.25}, Vector{0.5}});
  }
  std::size_t active = 0, violations = 0, missing_bound = 0;
  double worst_ratio = 0.0, worst_bound = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    IidSpec iid;
    iid.link.kind = LinkSpec::Kind::Logistic;
    iid.link.weights = {1.5};
    iid.link.biases = {0.0};
    iid.datum.uniform = {Interval{-1.0, 1.0}};
    const auto rec = run_game(GameConfig{ProtocolSpec::binary(), Kernel::sobolev_exp(1, 1), iid, {}, {}, {}, 5000, seed});
    const auto rep = calibration_report(rec, nbs);
    for (const auto& row : rep.rows) {
      if (row.bound && row.ratio && *row.ratio > *row.bound) ++violations;
      if (!row.active) continue;
      ++active;
      if (!row.bound) ++missing_bound;
      worst_ratio = std::max(worst_ratio, row.ratio.value_or(1e300));
      worst_bound = std::max(worst_bound, row.bound.value_or(0.0));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {active > 0 && worst_ratio <= 0.05 && violations == 0 && missing_bound == 0 && secs < 300.0,
          "5 seeds x " + std::to_string(nbs.size()) + " neighborhoods, " + std::to_string(active) +
              " active; max active ratio " + fmt("%.4f", worst_ratio) + " (<= 0.05); bound violations " +
              std::to_string(violations) + " (max active bound " + fmt("%.3f", worst_bound) + "); " + fmt("%.1f", secs) + " s"};
}

Outcome criterion8() {
  IidSpec coin;
  GameConfig g{ProtocolSpec::binary(), Kernel::constant(1, 1, 0), coin, {}, {}, {}, 100, 8};
  g.forecaster = {ForecasterSpec::Kind::Constant, Vector{1.2}};
  g.skeptic = {SkepticKind::Exploit, 10.0, 0.0};
  const auto rec = run_game(g);
  const double d = distance_to(ProtocolSpec::binary().domain(), Vector{1.2});
  const double required = 10.0 * d * d;
  double min_gain = 1e300, min_oracle = 1e300;
  bool increasing = rec.rounds.size() == 100;
  double prev = 0.0;
  for (const auto& r : rec.rounds) {
    min_gain = std::min(min_gain, r.gain);
    // Worst case over Y of the same move.
    for (double y : {0.0, 1.0}) min_oracle = std::min(min_oracle, r.skeptic_move[0] * (y - r.f[0]));
    increasing = increasing && r.capital > prev;
    prev = r.capital;
  }
  const bool ok = increasing && min_gain >= required - 1e-12 && min_oracle >= required - 1e-12;
  return {ok, "100 rounds, capital strictly increasing: " + std::string(increasing ? "yes" : "no") +
                  "; min gain " + fmt("%.17g", min_gain) + ", min over Y " + fmt("%.17g", min_oracle) +
                  " vs C d^2 = " + fmt("%.17g", required) + " (tolerance 1e-12); final capital " +
                  fmt("%.6g", rec.rounds.back().capital)};
}

Outcome criterion9() {
  const double b = bernoulli_bound(100, 1.0, 1.0, 1.0);
  bool ok = b == 0.1;
  double worst = 0.0;
  oracle::Rng rng(909);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.index(100000);
    const double diam = rng.uniform(0.1, 3.0), c = rng.uniform(0.1, 2.0);
    const double per_round = diam * c * std::sqrt(static_cast<double>(n)) / static_cast<double>(n);
    worst = std::max(worst, std::abs(bernoulli_bound(n, 1.0, diam, c) - per_round) / per_round);
  }
  ok = ok && worst <= 1e-15;
  return {ok, "bernoulli_bound(100, 1, 1, 1) = " + fmt("%.17g", b) +
                  "; delta = 1 vs diam C sqrt(N) / N over 1000 cases, max rel diff " + fmt("%.2g", worst)};
}

Outcome criterion10() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "defcast_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "game.json";
  std::ofstream(cfg) << R"({
  "protocol": {"type": "mean_variance", "A": 0, "B": 1},
  "datum_dim": 1,
  "kernel": {"family": "sobolev_exp", "on": "fx"},
  "reality": {"source": "iid", "link": {"type": "logistic", "weights": [1.0], "bias": 0.0},
              "datum": {"uniform": [[-1, 1]]}},
  "horizon": 300,
  "seed": 10
})";
  std::ostringstream out, err;
  cli::Overrides a, b;
  a.output_dir = (dir / "a").string();
  b.output_dir = (dir / "b").string();
  const int ca = cli::cmd_simulate({cfg.string()}, a, out, err);
  const int cb = cli::cmd_simulate({cfg.string()}, b, out, err);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string ta = slurp(dir / "a" / "game.jsonl"), tb = slurp(dir / "b" / "game.jsonl");
  const bool same = ca == 0 && cb == 0 && !ta.empty() && ta == tb;
  // In-process repeat through the engine with several workers.
  const auto& battery = criterion1_battery();
  const GameRecord again = run_game(GameConfig{ProtocolSpec::multi_class(3), Kernel::sobolev_exp(3, 1),
                                               AdversarialSpec{AdversaryPolicy::MaxResidual, {{Interval{-1.0, 1.0}}}},
                                               {}, {}, {}, 500, 1});
  const auto it = std::find(battery.labels.begin(), battery.labels.end(), "MultiClass(3)/SobolevExp/adversarial/seed1");
  const bool same_batch = it != battery.labels.end() &&
                          transcript_string(battery.records[static_cast<std::size_t>(it - battery.labels.begin())]) ==
                              transcript_string(again);
  return {same && same_batch, "two CLI runs: " + std::to_string(ta.size()) + " bytes, identical: " +
                                  (same ? "yes" : "no") + "; batch vs single run identical: " + (same_batch ? "yes" : "no")};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 defensive certificates and capital steps", criterion1},
      {"2 tensor norm bound", criterion2},
      {"3 WLLN capital identity", criterion3},
      {"4 Gram path vs explicit tensors", criterion4},
      {"5 projection laws", criterion5},
      {"6 solver vs oracle", criterion6},
      {"7 calibration at desk scale", criterion7},
      {"8 exploit of an out-of-hull forecast", criterion8},
      {"9 Bernoulli bound arithmetic", criterion9},
      {"10 determinism", criterion10},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << name << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
