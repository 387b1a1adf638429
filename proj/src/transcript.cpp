// SPDX-License-Identifier: Apache-2.0
#include "defcast/transcript.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "defcast/codec.hpp"
#include "defcast/errors.hpp"
#include "defcast/tensor_gram.hpp"

namespace defcast {
namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json header_json(const GameRecord& r) {
  Json h;
  h["record"] = "header";
  h["schema_version"] = r.schema_version;
  h["protocol"] = to_json(r.protocol);
  h["datum_dim"] = r.kernel.datum_dim();
  h["kernel"] = to_json(r.kernel);
  h["datum_box"] = r.datum_box ? to_json(*r.datum_box) : Json(nullptr);
  h["forecaster"] = to_json(r.forecaster);
  h["skeptic"] = to_json(r.skeptic);
  h["solver"] = to_json(r.solver);
  h["reality"] = r.reality;
  h["horizon"] = r.horizon;
  h["seed"] = r.seed;
  h["config_hash"] = r.config_hash;
  h["simd_backend"] = r.simd_backend;
  h["diameter"] = r.diameter;
  h["c_phi"] = optional_number(r.c_phi);
  h["c_phi_exact"] = r.c_phi_exact;
  return h;
}

Json round_json(const RoundRecord& r) {
  Json o;
  o["record"] = "round";
  o["n"] = r.n;
  o["x"] = to_json(r.x);
  o["f"] = to_json(r.f);
  Json c;
  c["kind"] = to_string(r.certificate.kind);
  c["field_norm"] = r.certificate.field_norm;
  c["slack"] = r.certificate.boundary_slack;
  o["certificate"] = std::move(c);
  o["y"] = to_json(r.y);
  o["residual"] = to_json(r.residual);
  o["skeptic_move"] = to_json(r.skeptic_move);
  o["gain"] = r.gain;
  o["capital"] = r.capital;
  o["tensor_norm"] = r.tensor_norm;
  o["bound"] = optional_number(r.bound);
  return o;
}

double finite_number(ObjectReader& r, const std::string& key) {
  const double v = r.number(key);
  if (!std::isfinite(v)) key_error(r.key_path(key), "not finite");
  return v;
}

std::optional<double> nullable_number(ObjectReader& r, const std::string& key) {
  const Json& v = r.raw(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) key_error(r.key_path(key), "expected a number or null");
  return v.get<double>();
}

void parse_header(const Json& j, GameRecord& rec) {
  ObjectReader r(j, "header");
  r.raw("record");
  rec.schema_version = static_cast<int>(r.integer("schema_version"));
  if (rec.schema_version != kSchemaVersion) {
    throw SchemaVersionError("transcript schema_version " + std::to_string(rec.schema_version) +
                                 " is not supported (this build reads version " + std::to_string(kSchemaVersion) +
                                 "); regenerate the transcript with this build",
                             1);
  }
  rec.protocol = protocol_from_json(r.raw("protocol"), "header.protocol");
  const auto datum_dim = static_cast<std::size_t>(r.integer("datum_dim"));
  rec.kernel = kernel_from_json(r.raw("kernel"), rec.protocol.obs_dim(), datum_dim, "header.kernel");
  const Json& box = r.raw("datum_box");
  if (!box.is_null()) rec.datum_box = box_from_json(box, "header.datum_box");
  rec.forecaster = forecaster_from_json(r.raw("forecaster"), "header.forecaster");
  rec.skeptic = skeptic_from_json(r.raw("skeptic"), "header.skeptic");
  rec.solver = solver_from_json(r.raw("solver"), "header.solver");
  rec.reality = r.string("reality");
  rec.horizon = static_cast<std::size_t>(r.integer("horizon"));
  rec.seed = r.unsigned_or("seed", 0);
  rec.config_hash = r.string("config_hash");
  rec.simd_backend = r.string("simd_backend");
  rec.diameter = finite_number(r, "diameter");
  rec.c_phi = nullable_number(r, "c_phi");
  rec.c_phi_exact = r.boolean_or("c_phi_exact", false);
  r.finish();
}

RoundRecord parse_round(const Json& j) {
  ObjectReader r(j, "round");
  r.raw("record");
  RoundRecord out;
  out.n = static_cast<std::size_t>(r.integer("n"));
  out.x = vector_from_json(r.raw("x"), "round.x");
  out.f = vector_from_json(r.raw("f"), "round.f");
  {
    ObjectReader c(r.raw("certificate"), "round.certificate");
    out.certificate.kind = certificate_kind_from_string(c.string("kind"));
    out.certificate.field_norm = c.number("field_norm");
    out.certificate.boundary_slack = c.number("slack");
    c.finish();
  }
  out.y = vector_from_json(r.raw("y"), "round.y");
  out.residual = vector_from_json(r.raw("residual"), "round.residual");
  out.skeptic_move = vector_from_json(r.raw("skeptic_move"), "round.skeptic_move");
  out.gain = finite_number(r, "gain");
  out.capital = finite_number(r, "capital");
  out.tensor_norm = finite_number(r, "tensor_norm");
  out.bound = nullable_number(r, "bound");
  r.finish();
  return out;
}

void spot_check_norms(const GameRecord& rec, const std::vector<std::size_t>& lines) {
  if (rec.rounds.empty()) return;
  TensorAccumulator acc(rec.kernel, rec.protocol.obs_dim());
  std::size_t next_check = 1;
  for (std::size_t k = 0; k < rec.rounds.size(); ++k) {
    const auto& r = rec.rounds[k];
    acc.push(r.y - r.f, Point{r.f, r.x});
    const std::size_t n = k + 1;
    if (n == next_check || n == rec.rounds.size()) {
      const double tn = acc.tensor_norm();
      if (std::abs(tn - r.tensor_norm) > 1e-9 * std::max(1.0, tn)) {
        std::ostringstream msg;
        msg << std::setprecision(17) << "tensor_norm " << r.tensor_norm << " does not match recomputed " << tn;
        throw ParseError(msg.str(), lines[k]);
      }
      if (n == next_check) next_check *= 2;
    }
  }
}

} // namespace

void write_transcript(std::ostream& out, const GameRecord& record) {
  out << header_json(record).dump() << '\n';
  for (const auto& r : record.rounds) out << round_json(r).dump() << '\n';
  Json footer;
  footer["record"] = "footer";
  footer["rounds"] = record.rounds.size();
  footer["truncated"] = record.truncated;
  out << footer.dump() << '\n';
}

std::string transcript_string(const GameRecord& record) {
  std::ostringstream out;
  write_transcript(out, record);
  return out.str();
}

void write_transcript_file(const std::string& path, const GameRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write transcript '" + path + "'");
  write_transcript(out, record);
  if (!out) throw ValidationError("error writing transcript '" + path + "'");
}

GameRecord read_transcript(std::istream& in, bool spot_check) {
  GameRecord rec;
  std::vector<std::size_t> round_lines;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_footer = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (have_footer) throw ParseError("content after footer", line_no);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!j.is_object() || !j.contains("record") || !j["record"].is_string()) {
      throw ParseError("missing 'record' field", line_no);
    }
    const std::string kind = j["record"].get<std::string>();
    try {
      if (kind == "header") {
        if (have_header) throw ParseError("duplicate header", line_no);
        if (j.contains("schema_version") && j["schema_version"].is_number_integer() &&
            j["schema_version"].get<int>() != kSchemaVersion) {
          throw SchemaVersionError("transcript schema_version " + j["schema_version"].dump() +
                                       " is not supported (this build reads version " +
                                       std::to_string(kSchemaVersion) + "); regenerate the transcript with this build",
                                   line_no);
        }
        parse_header(j, rec);
        have_header = true;
      } else if (kind == "round") {
        if (!have_header) throw ParseError("round before header", line_no);
        RoundRecord r = parse_round(j);
        if (r.n != rec.rounds.size() + 1) {
          throw ParseError("round n = " + std::to_string(r.n) + " out of order (expected " +
                               std::to_string(rec.rounds.size() + 1) + ")",
                           line_no);
        }
        rec.rounds.push_back(std::move(r));
        round_lines.push_back(line_no);
      } else if (kind == "footer") {
        if (!have_header) throw ParseError("footer before header", line_no);
        ObjectReader r(j, "footer");
        r.raw("record");
        const auto count = static_cast<std::size_t>(r.integer("rounds"));
        rec.truncated = r.boolean_or("truncated", false);
        r.finish();
        if (count != rec.rounds.size()) {
          throw ParseError("footer counts " + std::to_string(count) + " rounds, found " +
                               std::to_string(rec.rounds.size()),
                           line_no);
        }
        have_footer = true;
      } else {
        throw ParseError("unknown record kind '" + kind + "'", line_no);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!have_header) throw ParseError("transcript has no header", line_no);
  if (!have_footer) throw ParseError("transcript has no footer (incomplete file)", line_no);
  for (std::size_t k = 0; k < rec.rounds.size(); ++k) {
    const auto& r = rec.rounds[k];
    const std::size_t obs = rec.protocol.obs_dim();
    if (r.f.dim() != obs || r.y.dim() != obs || r.residual.dim() != obs || r.skeptic_move.dim() != obs ||
        r.x.dim() != rec.kernel.datum_dim()) {
      throw ParseError("round vectors have the wrong dimension", round_lines[k]);
    }
  }
  if (spot_check) spot_check_norms(rec, round_lines);
  return rec;
}

GameRecord read_transcript_file(const std::string& path, bool spot_check) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open transcript '" + path + "'");
  return read_transcript(in, spot_check);
}

void write_summary_csv(std::ostream& out, const GameRecord& record) {
  out << "n,K_n,tensor_norm,bound,margin,certificate_kind,slack\n";
  out << std::setprecision(17);
  for (const auto& r : record.rounds) {
    out << r.n << ',' << r.capital << ',' << r.tensor_norm << ',';
    if (r.bound) {
      out << *r.bound << ',' << (*r.bound - r.tensor_norm);
    } else {
      out << ',';
    }
    out << ',' << to_string(r.certificate.kind) << ',' << r.certificate.boundary_slack << '\n';
  }
}

void write_summary_csv_file(const std::string& path, const GameRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write summary '" + path + "'");
  write_summary_csv(out, record);
}

} // namespace defcast
