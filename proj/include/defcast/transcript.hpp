// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "defcast/engine.hpp"

namespace defcast {

/// Transcript layout (UTF-8, one JSON object per line, keys in this order):
///
///   header: record, schema_version, protocol, datum_dim, kernel, datum_box, forecaster, skeptic, solver,
///           reality, horizon, seed, config_hash, simd_backend, diameter, c_phi, c_phi_exact
///   round:  record, n, x, f, certificate{kind, field_norm, slack}, y, residual, skeptic_move,
///           gain, capital, tensor_norm, bound
///   footer: record, rounds, truncated
///
/// Unavailable values (c_phi, bound) are written as null.
void write_transcript(std::ostream& out, const GameRecord& record);
void write_transcript_file(const std::string& path, const GameRecord& record);
std::string transcript_string(const GameRecord& record);

/// Parses a transcript. Structural problems raise ParseError carrying the line number;
/// with `spot_check`, recorded tensor norms at rounds 1, 2, 4, ... and the last are recomputed
/// and a mismatch is a ParseError. An unsupported schema_version raises SchemaVersionError.
GameRecord read_transcript(std::istream& in, bool spot_check = true);
GameRecord read_transcript_file(const std::string& path, bool spot_check = true);

/// Columns: n, K_n, tensor_norm, bound, margin, certificate_kind, slack.
void write_summary_csv(std::ostream& out, const GameRecord& record);
void write_summary_csv_file(const std::string& path, const GameRecord& record);

} // namespace defcast
