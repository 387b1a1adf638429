// SPDX-License-Identifier: Apache-2.0
#include "defcast/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "defcast/errors.hpp"
#include "defcast/tensor_gram.hpp"

namespace defcast {
namespace {

double tent_1d(double z, double center, double half_width) {
  return std::max(0.0, 1.0 - std::abs(z - center) / half_width);
}

// Accumulated solver slack, counted for certified rounds only.
double slack_increment(const RoundRecord& r) {
  return r.certificate.kind == CertificateKind::External ? 0.0 : r.certificate.boundary_slack;
}

void require_positive_widths(const Vector& w, const char* what) {
  for (double h : w) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError(std::string(what) + ": half widths must be > 0");
  }
}

} // namespace

BoundSeries theorem3_series(const GameRecord& record) {
  BoundSeries out;
  if (!record.c_phi) {
    out.notice = "tensor-norm bound series skipped: C_Phi unavailable for kernel " + record.kernel.describe();
    return out;
  }
  const double scale = record.diameter * *record.c_phi;
  TensorAccumulator acc(record.kernel, record.protocol.obs_dim());
  double slack_sum = 0.0;
  out.rows.reserve(record.rounds.size());
  for (const auto& r : record.rounds) {
    acc.push(r.y - r.f, Point{r.f, r.x});
    slack_sum += slack_increment(r);
    BoundRow row;
    row.n = r.n;
    row.lhs = acc.tensor_norm();
    row.lhs_sq_raw = acc.gram_norm_sq();
    row.rhs = scale * std::sqrt(static_cast<double>(r.n));
    row.margin = row.rhs - row.lhs;
    row.slack_budget = std::sqrt(2.0 * slack_sum);
    if (row.margin + row.slack_budget < -1e-9 * row.rhs) out.violations.push_back(row.n);
    out.rows.push_back(row);
  }
  return out;
}

double tent_sobolev_norm_sq(double h) {
  if (!(h > 0.0)) throw ValidationError("tent half width must be > 0");
  return 2.0 * h / 3.0 + 2.0 / h;
}

TestFunction TestFunction::constant(double c) {
  return {"constant(" + std::to_string(c) + ")", [c](const Vector&, const Vector&) { return c; }, std::abs(c)};
}

TestFunction TestFunction::tent(const Vector& center, const Vector& half_widths, std::size_t forecast_dim) {
  require_same_dim(center, half_widths, "TestFunction::tent");
  require_positive_widths(half_widths, "TestFunction::tent");
  if (forecast_dim > center.dim()) throw ContractViolation("TestFunction::tent: forecast_dim exceeds center");
  double norm_sq = 1.0;
  for (double h : half_widths) norm_sq *= tent_sobolev_norm_sq(h);
  auto eval = [center, half_widths, forecast_dim](const Vector& f, const Vector& x) {
    if (f.dim() + x.dim() != center.dim() || f.dim() != forecast_dim) {
      throw ContractViolation("TestFunction::tent: point dimension mismatch");
    }
    double v = 1.0;
    for (std::size_t c = 0; c < center.dim() && v > 0.0; ++c) {
      const double z = c < forecast_dim ? f[c] : x[c - forecast_dim];
      v *= tent_1d(z, center[c], half_widths[c]);
    }
    return v;
  };
  return {"tent" + to_string(center), eval, std::sqrt(norm_sq)};
}

RkhsBoundReport rkhs_bound_check(const GameRecord& record, const TestFunction& F, double c_f) {
  RkhsBoundReport out;
  out.function = F.name;
  const std::size_t obs = record.protocol.obs_dim();
  Vector sum(obs);
  double slack_sum = 0.0;
  for (const auto& r : record.rounds) {
    const double w = F.eval(r.f, r.x);
    for (std::size_t k = 0; k < obs; ++k) sum[k] += w * (r.y[k] - r.f[k]);
    slack_sum += slack_increment(r);
    RkhsBoundRow row;
    row.n = r.n;
    row.lhs = norm(sum);
    row.rhs = record.diameter * c_f * F.norm_bound * std::sqrt(static_cast<double>(r.n));
    row.slack_allowance = F.norm_bound * std::sqrt(2.0 * slack_sum);
    if (row.lhs > row.rhs + row.slack_allowance + 1e-9 * std::max(1.0, row.rhs)) out.violations.push_back(row.n);
    out.rows.push_back(row);
  }
  return out;
}

double Neighborhood::eval(const Vector& f, const Vector& x) const {
  require_same_dim(f, f_center, "Neighborhood::eval");
  require_same_dim(x, x_center, "Neighborhood::eval");
  double v = 1.0;
  for (std::size_t c = 0; c < f.dim() && v > 0.0; ++c) v *= tent_1d(f[c], f_center[c], f_half_widths[c]);
  for (std::size_t c = 0; c < x.dim() && v > 0.0; ++c) v *= tent_1d(x[c], x_center[c], x_half_widths[c]);
  return v;
}

double Neighborhood::norm_bound() const {
  double sq = 1.0;
  for (double h : f_half_widths) sq *= tent_sobolev_norm_sq(h);
  for (double h : x_half_widths) sq *= tent_sobolev_norm_sq(h);
  return std::sqrt(sq);
}

bool is_full_sobolev(const Kernel& kernel) {
  std::vector<std::size_t> covered;
  const auto collect = [&](const Kernel& k) {
    if (const auto* s = std::get_if<kernel_family::SobolevExp>(&k.family())) {
      covered.insert(covered.end(), s->coords.begin(), s->coords.end());
      return true;
    }
    return false;
  };
  bool ok = collect(kernel);
  if (!ok) {
    if (const auto* p = std::get_if<kernel_family::Product>(&kernel.family())) {
      ok = std::all_of(p->factors.begin(), p->factors.end(), collect);
    }
  }
  if (!ok) return false;
  std::sort(covered.begin(), covered.end());
  std::vector<std::size_t> all(kernel.point_dim());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return covered == all;
}

std::optional<double> constant_function_norm(const Kernel& kernel, double c, const Box& region) {
  if (region.dim() != kernel.point_dim()) throw ContractViolation("constant_function_norm: region dimension");
  if (const auto* k = std::get_if<kernel_family::Constant>(&kernel.family())) {
    if (!(k->value > 0.0)) return std::nullopt;
    return std::abs(c) / std::sqrt(k->value);
  }
  if (!is_full_sobolev(kernel)) return std::nullopt;
  double sq = c * c;
  for (const auto& side : region.sides) {
    if (!std::isfinite(side.lo) || !std::isfinite(side.hi)) return std::nullopt;
    sq *= side.hi - side.lo + 2.0;
  }
  return std::sqrt(sq);
}

std::size_t CalibrationReport::active_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.active; }));
}

std::size_t CalibrationReport::violation_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.violated; }));
}

CalibrationReport calibration_report(const GameRecord& record, const std::vector<Neighborhood>& neighborhoods,
                                     const CalibrationOptions& options) {
  CalibrationReport out;
  out.n = record.rounds.size();
  const std::size_t m = record.protocol.obs_dim();
  const std::size_t l = record.kernel.datum_dim();
  const bool sobolev = is_full_sobolev(record.kernel);
  if (!sobolev) out.notice = "kernel " + record.kernel.describe() + " is not the SobolevExp tensor kernel; bounds omitted";
  const double space_constant = std::pow(2.0, -0.5 * static_cast<double>(m + l));
  double slack_sum = 0.0;
  for (const auto& r : record.rounds) slack_sum += slack_increment(r);
  const double budget = std::sqrt(2.0 * slack_sum);
  const double root_n = std::sqrt(static_cast<double>(out.n));

  for (const auto& nb : neighborhoods) {
    if (nb.f_center.dim() != m || nb.f_half_widths.dim() != m || nb.x_center.dim() != l || nb.x_half_widths.dim() != l) {
      throw ValidationError("neighborhood dimensions do not match protocol (" + std::to_string(m) + ") and datum (" +
                            std::to_string(l) + ")");
    }
    require_positive_widths(nb.f_half_widths, "neighborhood.f");
    require_positive_widths(nb.x_half_widths, "neighborhood.x");
    CalibrationRow row;
    row.neighborhood = nb;
    Vector weighted(m);
    for (const auto& r : record.rounds) {
      const double w = nb.eval(r.f, r.x);
      if (w == 0.0) continue;
      row.weight_sum += w;
      for (std::size_t k = 0; k < m; ++k) weighted[k] += w * (r.y[k] - r.f[k]);
    }
    if (row.weight_sum > 0.0) {
      row.ratio = norm(weighted) / row.weight_sum;
      if (sobolev) {
        const double norm_i = nb.norm_bound();
        row.bound = (space_constant * record.diameter * norm_i * root_n + norm_i * budget) / row.weight_sum;
        row.violated = *row.ratio > *row.bound * (1.0 + 1e-12);
      }
    }
    row.active = out.n > 0 && row.weight_sum >= options.activity_factor * root_n;
    out.rows.push_back(std::move(row));
  }
  return out;
}

void write_bound_csv(std::ostream& out, const BoundSeries& series) {
  out << "n,lhs,lhs_sq_raw,rhs,margin,slack_budget\n" << std::setprecision(17);
  for (const auto& r : series.rows) {
    out << r.n << ',' << r.lhs << ',' << r.lhs_sq_raw << ',' << r.rhs << ',' << r.margin << ',' << r.slack_budget << '\n';
  }
}

void write_rkhs_csv(std::ostream& out, const RkhsBoundReport& report) {
  out << "n,lhs,rhs,slack_allowance\n" << std::setprecision(17);
  for (const auto& r : report.rows) out << r.n << ',' << r.lhs << ',' << r.rhs << ',' << r.slack_allowance << '\n';
}

void write_calibration_csv(std::ostream& out, const CalibrationReport& report) {
  out << "f_center,x_center,f_half_widths,x_half_widths,weight_sum,ratio,bound,active,violated\n"
      << std::setprecision(17);
  auto joined = [](const Vector& v) {
    std::ostringstream s;
    s << std::setprecision(17);
    for (std::size_t k = 0; k < v.dim(); ++k) s << (k ? ";" : "") << v[k];
    return s.str();
  };
  for (const auto& r : report.rows) {
    out << joined(r.neighborhood.f_center) << ',' << joined(r.neighborhood.x_center) << ','
        << joined(r.neighborhood.f_half_widths) << ',' << joined(r.neighborhood.x_half_widths) << ',' << r.weight_sum
        << ',';
    if (r.ratio) out << *r.ratio;
    out << ',';
    if (r.bound) out << *r.bound;
    out << ',' << (r.active ? 1 : 0) << ',' << (r.violated ? 1 : 0) << '\n';
  }
}

std::string summarize(const BoundSeries& series, const CalibrationReport* calibration) {
  std::ostringstream s;
  s << std::setprecision(6);
  if (series.skipped()) {
    s << *series.notice << '\n';
  } else if (series.rows.empty()) {
    s << "tensor-norm bound series: empty transcript\n";
  } else {
    double worst = series.rows.front().margin + series.rows.front().slack_budget;
    for (const auto& r : series.rows) worst = std::min(worst, r.margin + r.slack_budget);
    const auto& last = series.rows.back();
    s << "tensor-norm bound series: n=" << last.n << " lhs=" << last.lhs << " rhs=" << last.rhs
      << " min(margin+slack_budget)=" << worst << " violations=" << series.violations.size() << '\n';
  }
  if (calibration) {
    if (calibration->notice) s << *calibration->notice << '\n';
    s << "calibration: neighborhoods=" << calibration->rows.size() << " active=" << calibration->active_count()
      << " violations=" << calibration->violation_count() << '\n';
  }
  return s.str();
}

} // namespace defcast
