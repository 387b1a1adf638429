// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "defcast/geometry.hpp"
#include "defcast/protocols.hpp"
#include "defcast/vector.hpp"

namespace defcast {

/// Ground-truth link from datum x to the outcome distribution of IID Reality.
/// Scalar links give P(y = 1) for Binary and the mean of (t - A) / (B - A) for the
/// real-valued protocols; MultiClass takes a probability vector or a softmax.
struct LinkSpec {
  enum class Kind { Constant, Logistic, Piecewise, Softmax };

  Kind kind = Kind::Constant;
  std::vector<double> probs{0.5};   ///< Constant
  std::vector<double> weights;      ///< Logistic: one per datum coordinate; Softmax: classes x datum, row-major
  std::vector<double> biases;       ///< Logistic: one; Softmax: one per class
  std::vector<double> thresholds;   ///< Piecewise, on x_0, ascending
  std::vector<double> values;       ///< Piecewise, thresholds.size() + 1 levels

  friend bool operator==(const LinkSpec&, const LinkSpec&) = default;
};

std::string to_string(LinkSpec::Kind kind);

/// Data x_n drawn uniformly from a box; an empty box means no data.
struct DatumSpec {
  std::vector<Interval> uniform;
  std::size_t dim() const noexcept { return uniform.size(); }
};

enum class AdversaryPolicy {
  MaxResidual,   ///< y in Y farthest from f_n
  AntiForecast,  ///< y in Y minimizing <y - c, f_n - c>, c the barycenter
};

std::string to_string(AdversaryPolicy policy);

struct ReplayRow {
  Vector x;
  RawObservation raw;
  std::size_t line = 0;
};

struct ReplaySpec {
  std::string path;
  std::vector<ReplayRow> rows;
};

struct IidSpec {
  LinkSpec link;
  DatumSpec datum;
};

struct AdversarialSpec {
  AdversaryPolicy policy = AdversaryPolicy::MaxResidual;
  DatumSpec datum;
};

using RealitySpec = std::variant<ReplaySpec, IidSpec, AdversarialSpec>;

/// Reads a replay CSV: header row, then one row per round with `datum_dim` datum columns
/// followed by the raw observation. Out-of-range rows raise ParseError with their line.
std::vector<ReplayRow> load_replay_csv(std::istream& in, const ProtocolSpec& protocol, std::size_t datum_dim);
std::vector<ReplayRow> load_replay_csv_file(const std::string& path, const ProtocolSpec& protocol,
                                            std::size_t datum_dim);

/// Region the data range over, when known in advance (for C_Phi of unbounded kernels).
std::optional<Box> datum_region(const RealitySpec& spec, std::size_t datum_dim);

/// Stateful Reality player. Every emitted y lies in Y.
class Reality {
public:
  Reality(RealitySpec spec, ProtocolSpec protocol, std::size_t datum_dim, std::uint64_t seed);

  /// x_n, or nullopt when a replay is exhausted.
  std::optional<Vector> next_datum();
  /// y_n after seeing the forecast.
  Vector next_observation(const Vector& x, const Vector& f);

private:
  double uniform01();
  Vector draw_datum(const DatumSpec& datum);
  double scalar_link(const LinkSpec& link, const Vector& x) const;
  std::vector<double> class_probabilities(const LinkSpec& link, const Vector& x) const;
  Vector pick(const std::vector<Vector>& candidates, const std::vector<double>& scores);

  RealitySpec spec_;
  ProtocolSpec protocol_;
  std::size_t datum_dim_;
  std::mt19937_64 rng_;
  std::size_t cursor_ = 0;
  std::vector<Vector> grid_;
};

void validate_reality(const RealitySpec& spec, const ProtocolSpec& protocol, std::size_t datum_dim);

} // namespace defcast
