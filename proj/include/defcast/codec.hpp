// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "defcast/engine.hpp"
#include "defcast/forecaster_k29.hpp"
#include "defcast/kernels.hpp"
#include "defcast/protocols.hpp"
#include "defcast/reality.hpp"

namespace defcast {

using Json = nlohmann::ordered_json;

/// Wraps a ValidationError with the dotted key it concerns ("kernel.terms[1].bandwidth: ...").
[[noreturn]] void key_error(const std::string& key, const std::string& message);

/// Strict reader over one JSON object: typed lookups name the offending key on error,
/// and `finish` rejects keys that were never read.
class ObjectReader {
public:
  ObjectReader(const Json& json, std::string path);

  bool has(const std::string& key) const;
  const Json& raw(const std::string& key);
  std::string key_path(const std::string& key) const;

  double number(const std::string& key);
  double number_or(const std::string& key, double fallback);
  std::int64_t integer(const std::string& key);
  std::int64_t integer_or(const std::string& key, std::int64_t fallback);
  std::uint64_t unsigned_or(const std::string& key, std::uint64_t fallback);
  std::string string(const std::string& key);
  std::string string_or(const std::string& key, const std::string& fallback);
  bool boolean_or(const std::string& key, bool fallback);
  std::vector<double> numbers(const std::string& key);
  std::vector<double> numbers_or(const std::string& key, std::vector<double> fallback);

  void finish() const;
  const std::string& path() const noexcept { return path_; }

private:
  const Json& json_;
  std::string path_;
  std::vector<std::string> used_;
};

Json to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& path);

Json to_json(const Box& box);
Box box_from_json(const Json& j, const std::string& path);

Json to_json(const ProtocolSpec& protocol);
ProtocolSpec protocol_from_json(const Json& j, const std::string& path = "protocol");

Json to_json(const Kernel& kernel);
Kernel kernel_from_json(const Json& j, std::size_t forecast_dim, std::size_t datum_dim,
                        const std::string& path = "kernel");

Json to_json(const SolverConfig& solver);
SolverConfig solver_from_json(const Json& j, const std::string& path = "solver");

Json to_json(const ForecasterSpec& forecaster);
ForecasterSpec forecaster_from_json(const Json& j, const std::string& path = "forecaster");

Json to_json(const SkepticSpec& skeptic);
SkepticSpec skeptic_from_json(const Json& j, const std::string& path = "skeptic");

Json to_json(const LinkSpec& link);
LinkSpec link_from_json(const Json& j, const std::string& path);

Json to_json(const RealitySpec& reality);
/// Replay sources load their CSV, resolving relative paths against `base_dir`.
RealitySpec reality_from_json(const Json& j, const ProtocolSpec& protocol, std::size_t datum_dim,
                              const std::string& base_dir, const std::string& path = "reality");

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

} // namespace defcast
