// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "defcast/cli.hpp"
#include "defcast/config.hpp"
#include "defcast/errors.hpp"
#include "defcast/transcript.hpp"

using namespace defcast;
namespace fs = std::filesystem;

namespace {

fs::path data_dir() {
  const char* env = std::getenv("DEFCAST_TEST_DATA");
  return env ? fs::path(env) : fs::path("tests/data");
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("defcast_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "defcast");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const char* kBinary = R"({
  "protocol": {"type": "binary"},
  "datum_dim": 1,
  "kernel": {"family": "sobolev_exp", "on": "fx"},
  "reality": {"source": "iid", "link": {"type": "logistic", "weights": [1.0], "bias": 0.0},
              "datum": {"uniform": [[-1, 1]]}},
  "horizon": 40,
  "seed": 3
})";

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_CASE("simulate writes a transcript and a summary") {
  const auto dir = scratch("simulate");
  const auto cfg = write_file(dir / "bin.json", kBinary);
  const auto r = invoke({"simulate", "--config", cfg.string(), "--output-dir", (dir / "out").string()});
  CHECK(r.code == cli::kOk);
  const std::string transcript = read_file(dir / "out" / "bin.jsonl");
  CHECK(line_count(transcript) == 40 + 2);
  const std::string summary = read_file(dir / "out" / "bin.summary.csv");
  CHECK(summary.rfind("n,K_n,tensor_norm,bound,margin,certificate_kind,slack\n", 0) == 0);
  CHECK(line_count(summary) == 41);

  CHECK(invoke({"verify", "--input", (dir / "out" / "bin.jsonl").string()}).code == cli::kOk);
  const auto d = invoke({"diagnose", "--input", (dir / "out" / "bin.jsonl").string()});
  CHECK(d.code == cli::kOk);
  CHECK(fs::exists(dir / "out" / "bin.bound.csv"));
}

TEST_CASE("seed override changes the run, same seed reproduces it") {
  const auto dir = scratch("seed");
  const auto cfg = write_file(dir / "bin.json", kBinary);
  for (const char* sub : {"a", "b"}) {
    CHECK(invoke({"simulate", "--config", cfg.string(), "--output-dir", (dir / sub).string(), "--seed", "11"}).code == 0);
  }
  CHECK(invoke({"simulate", "--config", cfg.string(), "--output-dir", (dir / "c").string()}).code == 0);
  const auto a = read_file(dir / "a" / "bin.jsonl");
  CHECK(a == read_file(dir / "b" / "bin.jsonl"));
  CHECK(a != read_file(dir / "c" / "bin.jsonl"));
}

TEST_CASE("validation errors name the offending key") {
  const auto dir = scratch("invalid");
  const auto mc = write_file(dir / "mc.json", R"({"protocol": {"type": "multiclass", "m": 0},
    "kernel": {"family": "constant"}, "reality": {"source": "iid"}, "horizon": 5})");
  const auto r1 = invoke({"simulate", "--config", mc.string()});
  CHECK(r1.code == cli::kValidation);
  CHECK(r1.err.find("protocol.m") != std::string::npos);
  CHECK(r1.err.find("MultiClass m >= 2") != std::string::npos);

  const auto rbf = write_file(dir / "rbf.json", R"({"protocol": {"type": "binary"},
    "kernel": {"family": "gaussian_rbf", "bandwidth": -1}, "reality": {"source": "iid"}, "horizon": 5})");
  const auto r2 = invoke({"simulate", "--config", rbf.string()});
  CHECK(r2.code == cli::kValidation);
  CHECK(r2.err.find("kernel.bandwidth") != std::string::npos);

  const auto zero = write_file(dir / "zero.json", R"({"protocol": {"type": "binary"},
    "kernel": {"family": "constant"}, "reality": {"source": "iid"}, "horizon": 0})");
  CHECK(invoke({"simulate", "--config", zero.string()}).err.find("horizon") != std::string::npos);

  const auto typo = write_file(dir / "typo.json", R"({"protocol": {"type": "binary"},
    "kernel": {"family": "constant"}, "reality": {"source": "iid"}, "horizon": 5, "horizn": 3})");
  const auto r4 = invoke({"simulate", "--config", typo.string()});
  CHECK(r4.code == cli::kValidation);
  CHECK(r4.err.find("horizn") != std::string::npos);

  CHECK(invoke({"simulate", "--config", (dir / "missing.json").string()}).code == cli::kValidation);
  CHECK(invoke({"nonsense"}).code == cli::kValidation);
}

TEST_CASE("replay input drives the game") {
  const auto dir = scratch("replay");
  const auto cfg = data_dir() / "replay_config.json";
  const auto r = invoke({"simulate", "--config", cfg.string(), "--output-dir", dir.string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("truncated") != std::string::npos);
  const auto record = read_transcript_file((dir / "replay_config.jsonl").string());
  CHECK(record.rounds.size() == 6);
  CHECK(record.truncated);
  CHECK(record.rounds[2].x == Vector{1.2});

  const auto bad = invoke({"simulate", "--config", cfg.string(), "--output-dir", dir.string(), "--input",
                        (data_dir() / "replay_bad.csv").string()});
  CHECK(bad.code == cli::kValidation);
  CHECK(bad.err.find("line 3") != std::string::npos);
}

TEST_CASE("tampered transcripts fail verify and diagnose") {
  const auto dir = scratch("tamper");
  const auto cfg = write_file(dir / "bin.json", kBinary);
  REQUIRE(invoke({"simulate", "--config", cfg.string(), "--output-dir", dir.string()}).code == 0);
  std::string text = read_file(dir / "bin.jsonl");
  // Round 3 is not spot-checked on load; edit its capital.
  std::size_t line_start = 0;
  for (int k = 0; k < 3; ++k) line_start = text.find('\n', line_start) + 1;
  const auto pos = text.find("\"capital\":", line_start);
  text.insert(pos + 10, "1");
  write_file(dir / "bad.jsonl", text);
  const auto v = invoke({"verify", "--input", (dir / "bad.jsonl").string()});
  CHECK(v.code != cli::kOk);
  CHECK(v.out.find("mismatch at round 3: capital") != std::string::npos);
  CHECK(invoke({"diagnose", "--input", (dir / "bad.jsonl").string()}).code != cli::kOk);

  std::string versioned = read_file(dir / "bin.jsonl");
  versioned.replace(versioned.find("\"schema_version\":1"), 18, "\"schema_version\":2");
  write_file(dir / "v2.jsonl", versioned);
  const auto s = invoke({"verify", "--input", (dir / "v2.jsonl").string()});
  CHECK(s.code == cli::kValidation);
  CHECK(s.err.find("schema version") != std::string::npos);
}

TEST_CASE("diagnose reports tensor-norm bound violations of non-defensive forecasters") {
  const auto dir = scratch("violation");
  const auto cfg = write_file(dir / "const.json", R"({"protocol": {"type": "binary"},
    "kernel": {"family": "constant"}, "reality": {"source": "adversarial"},
    "forecaster": {"type": "constant", "value": [0.1]}, "horizon": 50})");
  REQUIRE(invoke({"simulate", "--config", cfg.string(), "--output-dir", dir.string()}).code == 0);
  const auto d = invoke({"diagnose", "--input", (dir / "const.jsonl").string()});
  CHECK(d.code == cli::kBoundViolation);
  CHECK(d.out.find("violation") != std::string::npos);
}

TEST_CASE("diagnose with neighborhoods and test functions writes every report") {
  const auto dir = scratch("diag");
  const auto cfg = write_file(dir / "bin.json", kBinary);
  REQUIRE(invoke({"simulate", "--config", cfg.string(), "--output-dir", dir.string()}).code == 0);
  const auto diag = write_file(dir / "diag.json", R"({
    "neighborhoods": [{"f": [0.5], "x": [0.0], "f_half_widths": [0.25], "x_half_widths": [0.5]}],
    "tests": [{"type": "tent", "center": [0.5, 0.0], "half_widths": [0.25, 0.5]}, {"type": "constant", "c": 1}]
  })");
  const auto d = invoke({"diagnose", "--input", (dir / "bin.jsonl").string(), "--config", diag.string()});
  CHECK(d.code == cli::kOk);
  CHECK(fs::exists(dir / "bin.calibration.csv"));
  CHECK(fs::exists(dir / "bin.rkhs0.csv"));
  CHECK(fs::exists(dir / "bin.rkhs1.csv"));

  const auto rbf_cfg = write_file(dir / "rbf.json", R"({"protocol": {"type": "binary"}, "datum_dim": 1,
    "kernel": {"family": "gaussian_rbf", "bandwidth": 1.0, "on": "fx"},
    "reality": {"source": "iid", "link": {"type": "logistic", "weights": [1.0], "bias": 0.0},
                "datum": {"uniform": [[-1, 1]]}}, "horizon": 20})");
  REQUIRE(invoke({"simulate", "--config", rbf_cfg.string(), "--output-dir", dir.string()}).code == 0);
  const auto r = invoke({"diagnose", "--input", (dir / "rbf.jsonl").string(), "--config", diag.string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("tent(0.5, 0) skipped") != std::string::npos);
  CHECK(r.out.find("constant(1.000000) skipped") != std::string::npos);
  const auto declared = write_file(dir / "declared.json", R"({"tests": [{"type": "constant", "c": 1, "norm": 1e6}]})");
  const auto dd = invoke({"diagnose", "--input", (dir / "rbf.jsonl").string(), "--config", declared.string()});
  CHECK(dd.code == cli::kOk);
  CHECK(dd.out.find("constant(1.000000): violations=0") != std::string::npos);

  const auto bad = write_file(dir / "bad.json", R"({"neighborhoods": [{"f": [0.5]}]})");
  CHECK(invoke({"diagnose", "--input", (dir / "bin.jsonl").string(), "--config", bad.string()}).code == cli::kValidation);
}

TEST_CASE("exploit demo") {
  const auto dir = scratch("exploit");
  const auto out_hull = write_file(dir / "x.json", R"({"protocol": {"type": "binary"},
    "kernel": {"family": "constant"}, "reality": {"source": "iid"},
    "forecaster": {"type": "constant", "value": [1.2]}, "skeptic": {"type": "exploit", "C": 10}, "horizon": 20})");
  const auto r = invoke({"exploit-demo", "--config", out_hull.string(), "--output-dir", dir.string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("guaranteed gain") != std::string::npos);
  const auto rec = read_transcript_file((dir / "x.exploit.jsonl").string());
  for (std::size_t k = 1; k < rec.rounds.size(); ++k) CHECK(rec.rounds[k].capital > rec.rounds[k - 1].capital);

  const auto inside = write_file(dir / "in.json", R"({"protocol": {"type": "binary"},
    "kernel": {"family": "constant"}, "reality": {"source": "iid"},
    "forecaster": {"type": "constant", "value": [0.5]}, "skeptic": {"type": "exploit", "C": 10}, "horizon": 20})");
  const auto n = invoke({"exploit-demo", "--config", inside.string(), "--output-dir", dir.string()});
  CHECK(n.code == cli::kOk);
  CHECK(n.out.find("no exploitation possible") != std::string::npos);
  for (const auto& r2 : read_transcript_file((dir / "in.exploit.jsonl").string()).rounds) CHECK(r2.capital == 0.0);

  const auto mc = write_file(dir / "mc.json", R"({"protocol": {"type": "multiclass", "m": 3},
    "kernel": {"family": "constant"}, "reality": {"source": "adversarial"},
    "forecaster": {"type": "constant", "value": [0.6, 0.6, 0.1]}, "skeptic": {"type": "exploit", "C": 2}, "horizon": 20})");
  CHECK(invoke({"exploit-demo", "--config", mc.string(), "--output-dir", dir.string()}).code == cli::kOk);
  const auto mrec = read_transcript_file((dir / "mc.exploit.jsonl").string());
  for (std::size_t k = 1; k < mrec.rounds.size(); ++k) CHECK(mrec.rounds[k].capital > mrec.rounds[k - 1].capital);
}

TEST_CASE("config round-trip is the identity") {
  const auto dir = scratch("roundtrip");
  write_file(dir / "replay_binary.csv", read_file(data_dir() / "replay_binary.csv"));
  for (const std::string& text : {std::string(kBinary), read_file(data_dir() / "replay_config.json")}) {
    const RunConfig a = parse_run_config_text(text, dir.string());
    const std::string canon = canonical_text(a);
    const RunConfig b = parse_run_config_text(canon, dir.string());
    CHECK(canonical_text(b) == canon);
    CHECK(config_hash(a) == config_hash(b));
  }
}

TEST_CASE("bench prints a timing row per backend and size") {
  std::ostringstream out, err;
  CHECK(cli::cmd_bench({}, out, err, {10, 20}) == cli::kOk);
  CHECK(out.str().find("push_us") != std::string::npos);
  CHECK(line_count(out.str()) >= 3);
}
