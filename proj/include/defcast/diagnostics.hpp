// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "defcast/engine.hpp"
#include "defcast/vector.hpp"

namespace defcast {

struct BoundRow {
  std::size_t n = 0;
  double lhs = 0.0;           ///< ||sum r_i (x) Phi_i||
  double lhs_sq_raw = 0.0;    ///< N_n before clamping at 0
  double rhs = 0.0;           ///< diam(Y) C_Phi sqrt(n)
  double margin = 0.0;        ///< rhs - lhs
  double slack_budget = 0.0;  ///< sqrt(2 sum_i slack_i) over certified (non-External) rounds
};

struct BoundSeries {
  std::vector<BoundRow> rows;
  /// Set when C_Phi is unavailable and the series was skipped.
  std::optional<std::string> notice;
  /// Rounds with margin + slack_budget < -1e-9 rhs.
  std::vector<std::size_t> violations;
  bool skipped() const noexcept { return notice.has_value(); }
};

/// lhs from a fresh Gram accumulation over the transcript, rhs from the record's geometry and kernel.
BoundSeries theorem3_series(const GameRecord& record);

/// Scalar test function F(f, x) with a caller-declared norm bound in its RKHS.
struct TestFunction {
  std::string name;
  std::function<double(const Vector& f, const Vector& x)> eval;
  double norm_bound = 0.0;

  static TestFunction constant(double c);
  /// prod_c max(0, 1 - |z_c - center_c| / half_width_c) over coordinates z = (f, x), with the
  /// product of the one-dimensional Sobolev norms as its bound.
  static TestFunction tent(const Vector& center, const Vector& half_widths, std::size_t forecast_dim);
};

/// ||F||^2 in the Sobolev space for the 1-D tent of half-width h and unit height: 2h/3 + 2/h.
double tent_sobolev_norm_sq(double half_width);

struct RkhsBoundRow {
  std::size_t n = 0;
  double lhs = 0.0;  ///< ||sum_i F(f_i, x_i) (y_i - f_i)||
  double rhs = 0.0;  ///< diam(Y) c_f ||F|| sqrt(n)
  double slack_allowance = 0.0;
};

struct RkhsBoundReport {
  std::string function;
  std::vector<RkhsBoundRow> rows;
  std::vector<std::size_t> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks ||sum F(f_i,x_i)(y_i - f_i)|| <= diam c_f ||F|| sqrt(n) round by round, allowing
/// ||F|| sqrt(2 sum slack_i) for solver slack.
RkhsBoundReport rkhs_bound_check(const GameRecord& record, const TestFunction& F, double c_f);

/// Soft neighborhood of (f*, x*): a tent on the box of the given half-widths.
struct Neighborhood {
  Vector f_center;
  Vector x_center;
  Vector f_half_widths;
  Vector x_half_widths;

  double eval(const Vector& f, const Vector& x) const;
  /// Product of the one-dimensional tent Sobolev norms.
  double norm_bound() const;
};

struct CalibrationRow {
  Neighborhood neighborhood;
  double weight_sum = 0.0;
  /// ||sum I (y_i - f_i)|| / sum I; absent when sum I = 0.
  std::optional<double> ratio;
  /// 2^{-(m+l)/2} diam ||I|| sqrt(n) / sum I plus ||I|| slack_budget / sum I; absent when
  /// sum I = 0 or the kernel lies outside the Sobolev tensor space.
  std::optional<double> bound;
  bool active = false;
  bool violated = false;
};

struct CalibrationOptions {
  /// Active iff sum I >= activity_factor sqrt(n).
  double activity_factor = 10.0;
};

struct CalibrationReport {
  std::size_t n = 0;
  /// Set when the record's kernel is not the SobolevExp tensor kernel, so no bound is reported.
  std::optional<std::string> notice;
  std::vector<CalibrationRow> rows;
  std::size_t active_count() const noexcept;
  std::size_t violation_count() const noexcept;
};

CalibrationReport calibration_report(const GameRecord& record, const std::vector<Neighborhood>& neighborhoods,
                                     const CalibrationOptions& options = {});

/// True when the record's kernel is the SobolevExp kernel on every (f, x) coordinate.
bool is_full_sobolev(const Kernel& kernel);

/// Norm of F = c restricted to `region` (one side per (f, x) coordinate) in the kernel's RKHS:
/// |c| / sqrt(v) for Constant(v), |c| prod_k sqrt(L_k + 2) for the full SobolevExp space
/// (side lengths L_k, exponential tails outside the box). nullopt for other kernels.
std::optional<double> constant_function_norm(const Kernel& kernel, double c, const Box& region);

void write_bound_csv(std::ostream& out, const BoundSeries& series);
void write_rkhs_csv(std::ostream& out, const RkhsBoundReport& report);
void write_calibration_csv(std::ostream& out, const CalibrationReport& report);
std::string summarize(const BoundSeries& series, const CalibrationReport* calibration);

} // namespace defcast
