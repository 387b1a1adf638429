// SPDX-License-Identifier: Apache-2.0
#include "defcast/protocols.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "defcast/errors.hpp"

namespace defcast {
namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

void require_range(double t, double lo, double hi, const char* what) {
  if (!std::isfinite(t) || t < lo || t > hi) {
    throw ValidationError(std::string(what) + " outcome " + fmt(t) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
  }
}

} // namespace

std::string to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::Binary: return "binary";
    case ProtocolKind::BoundedRegression: return "bounded_regression";
    case ProtocolKind::MultiClass: return "multiclass";
    case ProtocolKind::MeanVariance: return "mean_variance";
  }
  return "unknown";
}

ProtocolSpec ProtocolSpec::binary() { return {ProtocolKind::Binary, ConvexDomain::interval(0.0, 1.0), 0.0, 1.0, 2}; }

ProtocolSpec ProtocolSpec::bounded_regression(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ValidationError("BoundedRegression requires finite A < B");
  }
  return {ProtocolKind::BoundedRegression, ConvexDomain::interval(lo, hi), lo, hi, 0};
}

ProtocolSpec ProtocolSpec::multi_class(std::size_t classes) {
  if (classes < 2) throw ValidationError("MultiClass m >= 2");
  return {ProtocolKind::MultiClass, ConvexDomain::simplex(classes), 0.0, 1.0, classes};
}

ProtocolSpec ProtocolSpec::mean_variance(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ValidationError("MeanVariance requires finite A < B");
  }
  return {ProtocolKind::MeanVariance, ConvexDomain::parabola_hull(lo, hi), lo, hi, 0};
}

std::string ProtocolSpec::name() const {
  switch (kind_) {
    case ProtocolKind::Binary: return "Binary";
    case ProtocolKind::BoundedRegression: return "BoundedRegression(" + fmt(lo_) + "," + fmt(hi_) + ")";
    case ProtocolKind::MultiClass: return "MultiClass(" + std::to_string(classes_) + ")";
    case ProtocolKind::MeanVariance: return "MeanVariance(" + fmt(lo_) + "," + fmt(hi_) + ")";
  }
  return "unknown";
}

bool ProtocolSpec::contains_observation(const Vector& y, double tol) const {
  if (y.dim() != obs_dim() || !y.all_finite()) return false;
  switch (kind_) {
    case ProtocolKind::Binary: return std::abs(y[0]) <= tol || std::abs(y[0] - 1.0) <= tol;
    case ProtocolKind::BoundedRegression: return y[0] >= lo_ - tol && y[0] <= hi_ + tol;
    case ProtocolKind::MultiClass: {
      std::size_t ones = 0;
      for (double c : y) {
        if (std::abs(c - 1.0) <= tol) {
          ++ones;
        } else if (std::abs(c) > tol) {
          return false;
        }
      }
      return ones == 1;
    }
    case ProtocolKind::MeanVariance:
      return y[0] >= lo_ - tol && y[0] <= hi_ + tol && std::abs(y[1] - y[0] * y[0]) <= tol;
  }
  return false;
}

std::vector<Vector> ProtocolSpec::observation_grid(double step) const {
  std::vector<Vector> out;
  switch (kind_) {
    case ProtocolKind::Binary:
      out = {Vector{0.0}, Vector{1.0}};
      break;
    case ProtocolKind::MultiClass:
      for (std::size_t k = 0; k < classes_; ++k) {
        Vector e(classes_);
        e[k] = 1.0;
        out.push_back(std::move(e));
      }
      break;
    case ProtocolKind::BoundedRegression:
    case ProtocolKind::MeanVariance: {
      const auto count = static_cast<std::size_t>(std::ceil(1.0 / step));
      for (std::size_t k = 0; k <= count; ++k) {
        const double t = k == count ? hi_ : lo_ + (hi_ - lo_) * static_cast<double>(k) / static_cast<double>(count);
        out.push_back(kind_ == ProtocolKind::MeanVariance ? Vector{t, t * t} : Vector{t});
      }
      break;
    }
  }
  return out;
}

Vector encode_observation(const ProtocolSpec& protocol, const RawObservation& raw) {
  switch (protocol.kind()) {
    case ProtocolKind::Binary: {
      if (const auto* b = std::get_if<BinaryOutcome>(&raw)) return Vector{b->value ? 1.0 : 0.0};
      if (const auto* r = std::get_if<RealOutcome>(&raw)) {
        if (r->value == 0.0 || r->value == 1.0) return Vector{r->value};
        throw ValidationError("Binary outcome " + fmt(r->value) + " is not 0 or 1");
      }
      throw ValidationError("Binary protocol expects a bit outcome");
    }
    case ProtocolKind::BoundedRegression:
    case ProtocolKind::MeanVariance: {
      const auto* r = std::get_if<RealOutcome>(&raw);
      if (!r) throw ValidationError(protocol.name() + " expects a real outcome");
      require_range(r->value, protocol.lo(), protocol.hi(), protocol.name().c_str());
      if (protocol.kind() == ProtocolKind::MeanVariance) return Vector{r->value, r->value * r->value};
      return Vector{r->value};
    }
    case ProtocolKind::MultiClass: {
      const auto* c = std::get_if<ClassLabel>(&raw);
      if (!c) throw ValidationError("MultiClass expects a class label");
      if (c->value < 1 || c->value > protocol.classes()) {
        throw ValidationError("class label " + std::to_string(c->value) + " outside 1.." +
                              std::to_string(protocol.classes()));
      }
      Vector y(protocol.classes());
      y[c->value - 1] = 1.0;
      return y;
    }
  }
  throw ValidationError("unknown protocol");
}

RawObservation parse_raw_observation(const ProtocolSpec& protocol, const std::string& text) {
  auto trimmed = text;
  while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\r')) trimmed.pop_back();
  while (!trimmed.empty() && trimmed.front() == ' ') trimmed.erase(trimmed.begin());
  switch (protocol.kind()) {
    case ProtocolKind::Binary:
      if (trimmed == "0") return BinaryOutcome{false};
      if (trimmed == "1") return BinaryOutcome{true};
      throw ValidationError("Binary outcome '" + trimmed + "' is not 0 or 1");
    case ProtocolKind::MultiClass: {
      std::size_t label = 0;
      const auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), label);
      if (ec != std::errc{} || ptr != trimmed.data() + trimmed.size()) {
        throw ValidationError("class label '" + trimmed + "' is not an integer");
      }
      return ClassLabel{label};
    }
    case ProtocolKind::BoundedRegression:
    case ProtocolKind::MeanVariance: {
      try {
        std::size_t used = 0;
        const double v = std::stod(trimmed, &used);
        if (used != trimmed.size()) throw std::invalid_argument("trailing");
        return RealOutcome{v};
      } catch (const std::exception&) {
        throw ValidationError("outcome '" + trimmed + "' is not a number");
      }
    }
  }
  throw ValidationError("unknown protocol");
}

DomainForecast decode_forecast(const ProtocolSpec& protocol, const Vector& f) {
  if (!contains(protocol.domain(), f)) {
    throw ValidationError("forecast " + to_string(f) + " outside " + protocol.domain().name());
  }
  switch (protocol.kind()) {
    case ProtocolKind::Binary: return ProbabilityForecast{f[0]};
    case ProtocolKind::BoundedRegression: return PointEstimate{f[0]};
    case ProtocolKind::MultiClass: return ClassDistribution{f.coords()};
    case ProtocolKind::MeanVariance: {
      const double variance = f[1] - f[0] * f[0];
      if (variance < -1e-9) throw ValidationError("decoded variance " + fmt(variance) + " is negative");
      return MeanVarianceForecast{f[0], std::max(variance, 0.0)};
    }
  }
  throw ValidationError("unknown protocol");
}

Vector encode_mean_variance(double mean, double variance) { return Vector{mean, variance + mean * mean}; }

std::pair<double, double> mv_skeptic_map(double s_first, double s_second, double mean) {
  return {s_first + 2.0 * mean * s_second, s_second};
}

MultiClassEmbedding binary_multiclass_iso(double f, double s) {
  if (!(f >= 0.0 && f <= 1.0)) throw ContractViolation("binary_multiclass_iso: f must lie in [0, 1]");
  return {Vector{1.0 - f, f}, Vector{0.0, s}};
}

} // namespace defcast
