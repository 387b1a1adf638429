// SPDX-License-Identifier: Apache-2.0
#include "defcast/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "defcast/errors.hpp"

namespace defcast {

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return Json::parse(text.str());
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
}

RunConfig parse_run_config(const Json& j, const std::string& base_dir) {
  ObjectReader r(j, "");
  ProtocolSpec protocol = protocol_from_json(r.raw("protocol"), "protocol");
  const auto datum_dim_raw = r.integer_or("datum_dim", 0);
  if (datum_dim_raw < 0) key_error("datum_dim", "must be >= 0");
  const auto datum_dim = static_cast<std::size_t>(datum_dim_raw);
  Kernel kernel = kernel_from_json(r.raw("kernel"), protocol.obs_dim(), datum_dim, "kernel");
  RealitySpec reality = reality_from_json(r.raw("reality"), protocol, datum_dim, base_dir, "reality");
  ForecasterSpec forecaster = r.has("forecaster") ? forecaster_from_json(r.raw("forecaster")) : ForecasterSpec{};
  SkepticSpec skeptic = r.has("skeptic") ? skeptic_from_json(r.raw("skeptic")) : SkepticSpec{};
  SolverConfig solver = r.has("solver") ? solver_from_json(r.raw("solver")) : SolverConfig{};
  const auto horizon = r.integer("horizon");
  if (horizon < 1) key_error("horizon", "N >= 1 required");
  const auto seed = r.unsigned_or("seed", 0);
  OutputSpec output;
  if (r.has("output")) {
    ObjectReader o(r.raw("output"), "output");
    output.transcript = o.string_or("transcript", "");
    output.summary = o.string_or("summary", "");
    o.finish();
  }
  r.finish();

  RunConfig out{GameConfig{std::move(protocol), std::move(kernel), std::move(reality), std::move(forecaster),
                           skeptic, solver, static_cast<std::size_t>(horizon), seed},
                std::move(output), base_dir};
  out.game.validate();
  return out;
}

RunConfig parse_run_config_text(const std::string& text, const std::string& base_dir) {
  try {
    return parse_run_config(Json::parse(text), base_dir);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_run_config(read_json_file(path), dir);
}

Json to_json(const RunConfig& config) {
  const GameConfig& g = config.game;
  Json o;
  o["protocol"] = to_json(g.protocol);
  o["datum_dim"] = g.datum_dim();
  o["kernel"] = to_json(g.kernel);
  o["reality"] = to_json(g.reality);
  o["forecaster"] = to_json(g.forecaster);
  o["skeptic"] = to_json(g.skeptic);
  o["solver"] = to_json(g.solver);
  o["horizon"] = g.horizon;
  o["seed"] = g.seed;
  Json out;
  out["transcript"] = config.output.transcript;
  out["summary"] = config.output.summary;
  o["output"] = std::move(out);
  return o;
}

std::string canonical_text(const RunConfig& config) { return to_json(config).dump(2); }

std::string config_hash(const RunConfig& config) { return fnv1a_hex(to_json(config).dump()); }

DiagnoseConfig parse_diagnose_config(const Json& j, std::size_t forecast_dim) {
  ObjectReader r(j, "");
  DiagnoseConfig out;
  if (r.has("neighborhoods")) {
    const Json& list = r.raw("neighborhoods");
    if (!list.is_array()) key_error("neighborhoods", "expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      ObjectReader n(list[k], "neighborhoods[" + std::to_string(k) + "]");
      Neighborhood nb;
      nb.f_center = Vector(n.numbers("f"));
      nb.x_center = Vector(n.numbers_or("x", {}));
      nb.f_half_widths = Vector(n.numbers("f_half_widths"));
      nb.x_half_widths = Vector(n.numbers_or("x_half_widths", {}));
      n.finish();
      out.neighborhoods.push_back(std::move(nb));
    }
  }
  out.calibration.activity_factor = r.number_or("activity_factor", out.calibration.activity_factor);
  if (!(out.calibration.activity_factor > 0.0)) key_error("activity_factor", "must be > 0");
  if (r.has("tests")) {
    const Json& list = r.raw("tests");
    if (!list.is_array()) key_error("tests", "expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string path = "tests[" + std::to_string(k) + "]";
      ObjectReader t(list[k], path);
      const std::string type = t.string("type");
      std::optional<double> c_f;
      if (t.has("c_f")) c_f = t.number("c_f");
      std::optional<double> norm;
      if (t.has("norm")) {
        norm = t.number("norm");
        if (!(*norm >= 0.0)) key_error(path + ".norm", "must be >= 0");
      }
      if (type == "constant") {
        const double c = t.number_or("c", 1.0);
        out.tests.push_back({TestFunction::constant(c), c_f, norm, c});
      } else if (type == "tent") {
        const Vector center(t.numbers("center"));
        const Vector widths(t.numbers("half_widths"));
        if (center.dim() != widths.dim() || center.dim() < forecast_dim) {
          key_error(path + ".center", "center and half_widths need one entry per (f, x) coordinate");
        }
        try {
          out.tests.push_back({TestFunction::tent(center, widths, forecast_dim), c_f, norm, std::nullopt});
        } catch (const std::exception& e) {
          key_error(path + ".half_widths", e.what());
        }
      } else {
        key_error(path + ".type", "unknown test function '" + type + "' (constant, tent)");
      }
      t.finish();
    }
  }
  r.finish();
  return out;
}

DiagnoseConfig load_diagnose_config(const std::string& path, std::size_t forecast_dim) {
  return parse_diagnose_config(read_json_file(path), forecast_dim);
}

} // namespace defcast
