// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "defcast/forecaster_k29.hpp"
#include "defcast/geometry.hpp"
#include "defcast/kernels.hpp"
#include "defcast/protocols.hpp"
#include "defcast/reality.hpp"
#include "defcast/skeptic.hpp"
#include "defcast/vector.hpp"

namespace defcast {

inline constexpr int kSchemaVersion = 1;

struct ForecasterSpec {
  enum class Kind { K29, Constant };
  Kind kind = Kind::K29;
  /// Constant rule: the forecast played every round, possibly outside co(Y).
  Vector value;

  friend bool operator==(const ForecasterSpec&, const ForecasterSpec&) = default;
};

std::string to_string(ForecasterSpec::Kind kind);

struct SkepticSpec {
  SkepticKind kind = SkepticKind::Wlln;
  /// Exploit multiplier C.
  double scale = 1.0;
  double initial_capital = 0.0;

  friend bool operator==(const SkepticSpec&, const SkepticSpec&) = default;
};

struct GameConfig {
  ProtocolSpec protocol;
  Kernel kernel;
  RealitySpec reality;
  ForecasterSpec forecaster;
  SkepticSpec skeptic;
  SolverConfig solver;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;

  std::size_t datum_dim() const noexcept { return kernel.datum_dim(); }
  void validate() const;
};

struct RoundRecord {
  std::size_t n = 0;
  Vector x;
  Vector f;
  ForecastCertificate certificate;
  Vector y;
  Vector residual;
  Vector skeptic_move;
  double gain = 0.0;
  double capital = 0.0;
  double tensor_norm = 0.0;
  /// diam(Y) C_Phi sqrt(n), absent when C_Phi is unavailable.
  std::optional<double> bound;
};

struct GameRecord {
  int schema_version = kSchemaVersion;
  ProtocolSpec protocol = ProtocolSpec::binary();
  Kernel kernel = Kernel::constant(1.0, 1, 0);
  ForecasterSpec forecaster;
  SkepticSpec skeptic;
  SolverConfig solver;
  std::string reality;
  std::optional<Box> datum_box;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string simd_backend;
  double diameter = 0.0;
  std::optional<double> c_phi;
  bool c_phi_exact = false;
  bool truncated = false;
  std::vector<RoundRecord> rounds;
};

/// Plays the game in round order: datum, forecast, Skeptic move, observation.
/// SolverFailure propagates with its `round` set; an exhausted replay truncates the record.
GameRecord run_game(const GameConfig& config, const std::string& config_hash = "");

/// Independent games, each with isolated state, spread over `threads` workers (0: hardware).
std::vector<GameRecord> run_games(const std::vector<GameConfig>& configs, unsigned threads = 0);

struct VerifyIssue {
  std::size_t round = 0;
  std::string check;
  double recorded = 0.0;
  double recomputed = 0.0;
};

struct VerifyReport {
  std::size_t rounds_checked = 0;
  std::vector<VerifyIssue> issues;
  bool ok() const noexcept { return issues.empty(); }
};

struct VerifyOptions {
  double rel_tol = 1e-9;
  /// Certificates of K29 forecasts must re-verify with slack at most this much; 0 takes the record's solver tolerance.
  double slack_tol = 0.0;
};

/// Recomputes residuals, moves, gains, capitals, tensor norms, bounds and certificate slacks.
VerifyReport replay_verify(const GameRecord& record, const VerifyOptions& options = {});

} // namespace defcast
