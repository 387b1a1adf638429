// SPDX-License-Identifier: Apache-2.0
#include "defcast/reality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "defcast/errors.hpp"

namespace defcast {
namespace {

template <class... Ts> struct Overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void validate_datum(const DatumSpec& datum, std::size_t datum_dim, const char* where) {
  if (datum.dim() != datum_dim) {
    throw ValidationError(std::string(where) + ".datum: " + std::to_string(datum.dim()) +
                          " coordinates given, kernel expects " + std::to_string(datum_dim));
  }
  for (const auto& side : datum.uniform) {
    if (!std::isfinite(side.lo) || !std::isfinite(side.hi) || side.lo > side.hi) {
      throw ValidationError(std::string(where) + ".datum: uniform sides need finite lo <= hi");
    }
  }
}

} // namespace

std::string to_string(LinkSpec::Kind kind) {
  switch (kind) {
    case LinkSpec::Kind::Constant: return "constant";
    case LinkSpec::Kind::Logistic: return "logistic";
    case LinkSpec::Kind::Piecewise: return "piecewise";
    case LinkSpec::Kind::Softmax: return "softmax";
  }
  return "unknown";
}

std::string to_string(AdversaryPolicy policy) {
  return policy == AdversaryPolicy::MaxResidual ? "max_residual" : "anti_forecast";
}

std::vector<ReplayRow> load_replay_csv(std::istream& in, const ProtocolSpec& protocol, std::size_t datum_dim) {
  std::vector<ReplayRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto cells = split_csv(line);
    if (cells.size() != datum_dim + 1) {
      throw ParseError("expected " + std::to_string(datum_dim + 1) + " columns, found " + std::to_string(cells.size()),
                       line_no);
    }
    ReplayRow row{Vector(datum_dim), BinaryOutcome{}, line_no};
    try {
      for (std::size_t c = 0; c < datum_dim; ++c) {
        std::size_t used = 0;
        row.x[c] = std::stod(cells[c], &used);
        if (!std::isfinite(row.x[c])) throw ValidationError("non-finite datum");
      }
      row.raw = parse_raw_observation(protocol, cells[datum_dim]);
      encode_observation(protocol, row.raw);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    } catch (const std::exception&) {
      throw ParseError("malformed datum value", line_no);
    }
    rows.push_back(std::move(row));
  }
  if (header) throw ParseError("replay input is empty (missing header)", 0);
  return rows;
}

std::vector<ReplayRow> load_replay_csv_file(const std::string& path, const ProtocolSpec& protocol,
                                            std::size_t datum_dim) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open replay input '" + path + "'");
  return load_replay_csv(in, protocol, datum_dim);
}

std::optional<Box> datum_region(const RealitySpec& spec, std::size_t datum_dim) {
  return std::visit(Overloaded{
                        [&](const ReplaySpec& r) -> std::optional<Box> {
                          if (r.rows.empty()) return std::nullopt;
                          Box b{std::vector<Interval>(datum_dim, Interval{std::numeric_limits<double>::infinity(),
                                                                          -std::numeric_limits<double>::infinity()})};
                          for (const auto& row : r.rows) {
                            for (std::size_t c = 0; c < datum_dim; ++c) {
                              b.sides[c].lo = std::min(b.sides[c].lo, row.x[c]);
                              b.sides[c].hi = std::max(b.sides[c].hi, row.x[c]);
                            }
                          }
                          return b;
                        },
                        [](const IidSpec& s) -> std::optional<Box> { return Box{s.datum.uniform}; },
                        [](const AdversarialSpec& s) -> std::optional<Box> { return Box{s.datum.uniform}; },
                    },
                    spec);
}

void validate_reality(const RealitySpec& spec, const ProtocolSpec& protocol, std::size_t datum_dim) {
  std::visit(
      Overloaded{
          [&](const ReplaySpec& r) {
            for (const auto& row : r.rows) {
              if (row.x.dim() != datum_dim) throw ParseError("replay row has wrong datum dimension", row.line);
            }
          },
          [&](const IidSpec& s) {
            validate_datum(s.datum, datum_dim, "reality");
            const auto& link = s.link;
            const bool multi = protocol.kind() == ProtocolKind::MultiClass;
            switch (link.kind) {
              case LinkSpec::Kind::Constant: {
                const std::size_t want = multi ? protocol.classes() : 1;
                if (link.probs.size() != want) {
                  throw ValidationError("reality.link.probs: expected " + std::to_string(want) + " values");
                }
                for (double p : link.probs) {
                  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("reality.link.probs: values must lie in [0, 1]");
                }
                if (multi && std::abs(std::accumulate(link.probs.begin(), link.probs.end(), 0.0) - 1.0) > 1e-9) {
                  throw ValidationError("reality.link.probs: class probabilities must sum to 1");
                }
                break;
              }
              case LinkSpec::Kind::Logistic:
                if (multi) throw ValidationError("reality.link: MultiClass uses 'constant' or 'softmax'");
                if (link.weights.size() != datum_dim) {
                  throw ValidationError("reality.link.weights: expected " + std::to_string(datum_dim) + " values");
                }
                if (link.biases.size() > 1) throw ValidationError("reality.link.bias: a single value");
                break;
              case LinkSpec::Kind::Piecewise:
                if (multi) throw ValidationError("reality.link: MultiClass uses 'constant' or 'softmax'");
                if (datum_dim == 0) throw ValidationError("reality.link: piecewise needs a datum");
                if (link.values.size() != link.thresholds.size() + 1) {
                  throw ValidationError("reality.link.values: need thresholds + 1 levels");
                }
                if (!std::is_sorted(link.thresholds.begin(), link.thresholds.end())) {
                  throw ValidationError("reality.link.thresholds: must be ascending");
                }
                for (double p : link.values) {
                  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("reality.link.values: must lie in [0, 1]");
                }
                break;
              case LinkSpec::Kind::Softmax:
                if (!multi) throw ValidationError("reality.link: softmax is for MultiClass");
                if (link.weights.size() != protocol.classes() * datum_dim) {
                  throw ValidationError("reality.link.weights: expected classes x datum_dim values");
                }
                if (link.biases.size() != protocol.classes()) {
                  throw ValidationError("reality.link.biases: expected one per class");
                }
                break;
            }
          },
          [&](const AdversarialSpec& s) { validate_datum(s.datum, datum_dim, "reality"); },
      },
      spec);
}

Reality::Reality(RealitySpec spec, ProtocolSpec protocol, std::size_t datum_dim, std::uint64_t seed)
    : spec_(std::move(spec)), protocol_(std::move(protocol)), datum_dim_(datum_dim), rng_(seed) {
  validate_reality(spec_, protocol_, datum_dim_);
  if (std::holds_alternative<AdversarialSpec>(spec_)) grid_ = protocol_.observation_grid(1e-3);
}

double Reality::uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

Vector Reality::draw_datum(const DatumSpec& datum) {
  Vector x(datum.dim());
  for (std::size_t c = 0; c < datum.dim(); ++c) {
    x[c] = datum.uniform[c].lo + (datum.uniform[c].hi - datum.uniform[c].lo) * uniform01();
  }
  return x;
}

std::optional<Vector> Reality::next_datum() {
  return std::visit(Overloaded{
                        [&](const ReplaySpec& r) -> std::optional<Vector> {
                          if (cursor_ >= r.rows.size()) return std::nullopt;
                          return r.rows[cursor_].x;
                        },
                        [&](const IidSpec& s) -> std::optional<Vector> { return draw_datum(s.datum); },
                        [&](const AdversarialSpec& s) -> std::optional<Vector> { return draw_datum(s.datum); },
                    },
                    spec_);
}

double Reality::scalar_link(const LinkSpec& link, const Vector& x) const {
  switch (link.kind) {
    case LinkSpec::Kind::Constant: return link.probs.front();
    case LinkSpec::Kind::Logistic: {
      double z = link.biases.empty() ? 0.0 : link.biases.front();
      for (std::size_t c = 0; c < x.dim(); ++c) z += link.weights[c] * x[c];
      return 1.0 / (1.0 + std::exp(-z));
    }
    case LinkSpec::Kind::Piecewise: {
      const auto k = std::upper_bound(link.thresholds.begin(), link.thresholds.end(), x[0]) - link.thresholds.begin();
      return link.values[static_cast<std::size_t>(k)];
    }
    case LinkSpec::Kind::Softmax: break;
  }
  throw ValidationError("link kind not valid for this protocol");
}

std::vector<double> Reality::class_probabilities(const LinkSpec& link, const Vector& x) const {
  if (link.kind == LinkSpec::Kind::Constant) return link.probs;
  const std::size_t m = protocol_.classes();
  std::vector<double> logits(m);
  for (std::size_t k = 0; k < m; ++k) {
    double z = link.biases[k];
    for (std::size_t c = 0; c < x.dim(); ++c) z += link.weights[k * x.dim() + c] * x[c];
    logits[k] = z;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (auto& z : logits) total += (z = std::exp(z - top));
  for (auto& z : logits) z /= total;
  return logits;
}

Vector Reality::pick(const std::vector<Vector>& candidates, const std::vector<double>& scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<std::size_t> tied;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (scores[k] >= top - 1e-12 * (1.0 + std::abs(top))) tied.push_back(k);
  }
  const auto choice = tied.size() == 1 ? 0 : static_cast<std::size_t>(uniform01() * static_cast<double>(tied.size()));
  return candidates[tied[std::min(choice, tied.size() - 1)]];
}

Vector Reality::next_observation(const Vector& x, const Vector& f) {
  return std::visit(
      Overloaded{
          [&](const ReplaySpec& r) { return encode_observation(protocol_, r.rows[cursor_++].raw); },
          [&](const IidSpec& s) -> Vector {
            switch (protocol_.kind()) {
              case ProtocolKind::Binary:
                return encode_observation(protocol_, BinaryOutcome{uniform01() < scalar_link(s.link, x)});
              case ProtocolKind::MultiClass: {
                const auto probs = class_probabilities(s.link, x);
                const double u = uniform01();
                double cumulative = 0.0;
                std::size_t label = probs.size();
                for (std::size_t k = 0; k < probs.size(); ++k) {
                  cumulative += probs[k];
                  if (u < cumulative) {
                    label = k + 1;
                    break;
                  }
                }
                return encode_observation(protocol_, ClassLabel{label});
              }
              case ProtocolKind::BoundedRegression:
              case ProtocolKind::MeanVariance: {
                // Uniform on [p - w, p + w] with w = min(p, 1 - p): mean p, support inside [0, 1].
                const double p = std::clamp(scalar_link(s.link, x), 0.0, 1.0);
                const double w = std::min(p, 1.0 - p);
                const double b = std::clamp(p + w * (2.0 * uniform01() - 1.0), 0.0, 1.0);
                const double t = std::clamp(protocol_.lo() + (protocol_.hi() - protocol_.lo()) * b, protocol_.lo(),
                                            protocol_.hi());
                return encode_observation(protocol_, RealOutcome{t});
              }
            }
            throw ValidationError("unknown protocol");
          },
          [&](const AdversarialSpec& s) {
            std::vector<double> scores(grid_.size());
            if (s.policy == AdversaryPolicy::MaxResidual) {
              for (std::size_t k = 0; k < grid_.size(); ++k) scores[k] = squared_norm(grid_[k] - f);
            } else {
              const Vector c = barycenter(protocol_.domain());
              const Vector lean = f - c;
              for (std::size_t k = 0; k < grid_.size(); ++k) scores[k] = -dot(grid_[k] - c, lean);
            }
            return pick(grid_, scores);
          },
      },
      spec_);
}

} // namespace defcast
