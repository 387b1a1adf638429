// SPDX-License-Identifier: Apache-2.0
#include "defcast/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "defcast/config.hpp"
#include "defcast/diagnostics.hpp"
#include "defcast/engine.hpp"
#include "defcast/errors.hpp"
#include "defcast/simd.hpp"
#include "defcast/tensor_gram.hpp"
#include "defcast/transcript.hpp"

namespace defcast::cli {
namespace {

namespace fs = std::filesystem;

template <class F> int guarded(std::ostream& err, const std::string& context, F&& body) {
  const std::string prefix = context.empty() ? "" : context + ": ";
  try {
    return body();
  } catch (const SolverFailure& e) {
    err << prefix << "solver failure at round " << e.round << ": " << e.what() << " (best slack "
        << std::setprecision(6) << e.best_slack() << " at " << to_string(e.best_point()) << ")\n";
    return kSolverFailure;
  } catch (const SchemaVersionError& e) {
    err << prefix << "schema version mismatch: " << e.what() << '\n';
    return kValidation;
  } catch (const ParseError& e) {
    err << prefix << "parse error: " << e.what() << '\n';
    return kValidation;
  } catch (const ValidationError& e) {
    err << prefix << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const ContractViolation& e) {
    err << prefix << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const CPhiUnavailable& e) {
    err << prefix << e.what() << '\n';
    return kValidation;
  }
}

Json load_config_json(const std::string& path, const Overrides& ov, const std::string& input) {
  Json j = read_json_file(path);
  if (!j.is_object()) throw ValidationError(path + ": top level must be an object");
  if (!input.empty()) {
    Json replay;
    replay["source"] = "replay";
    replay["input"] = fs::absolute(input).string();
    j["reality"] = std::move(replay);
  }
  if (ov.seed) j["seed"] = *ov.seed;
  if (ov.tolerance) {
    if (!j.contains("solver") || !j["solver"].is_object()) j["solver"] = Json::object();
    j["solver"]["field_tol"] = *ov.tolerance;
  }
  return j;
}

RunConfig load_with_overrides(const std::string& path, const Overrides& ov, const std::string& input = "") {
  const auto dir = fs::path(path).parent_path().string();
  return parse_run_config(load_config_json(path, ov, input), dir);
}

fs::path output_path(const RunConfig& cfg, const Overrides& ov, const std::string& configured, const std::string& stem,
                     const std::string& suffix) {
  const fs::path dir = !ov.output_dir.empty() ? fs::path(ov.output_dir)
                       : !cfg.base_dir.empty() ? fs::path(cfg.base_dir)
                                               : fs::path(".");
  if (configured.empty()) return dir / (stem + suffix);
  const fs::path p(configured);
  return p.is_absolute() ? p : dir / p;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void print_issues(std::ostream& out, const VerifyReport& report) {
  out << "replay_verify: " << report.rounds_checked << " rounds checked, " << report.issues.size() << " mismatches\n";
  const std::size_t shown = std::min<std::size_t>(report.issues.size(), 50);
  for (std::size_t k = 0; k < shown; ++k) {
    const auto& i = report.issues[k];
    out << "  mismatch at round " << i.round << ": " << i.check << " recorded=" << std::setprecision(17) << i.recorded
        << " recomputed=" << i.recomputed << '\n';
  }
  if (shown < report.issues.size()) out << "  ... " << report.issues.size() - shown << " more\n";
}

template <class F> void parallel_for(std::size_t count, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) body(k);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

// Box over (f, x): the forecast domain's bounding box, then the datum box.
Box record_region(const GameRecord& record) {
  Box region = bounding_box(record.protocol.domain());
  const std::size_t dd = record.kernel.point_dim() - region.dim();
  for (std::size_t c = 0; c < dd; ++c) {
    region.sides.push_back(record.datum_box && c < record.datum_box->dim()
                               ? record.datum_box->sides[c]
                               : Interval{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()});
  }
  return region;
}

} // namespace

int cmd_simulate(const std::vector<std::string>& config_paths, const Overrides& ov, std::ostream& out,
                 std::ostream& err, const std::string& input) {
  if (config_paths.empty()) {
    err << "simulate: --config is required\n";
    return kValidation;
  }
  std::vector<int> codes(config_paths.size(), kOk);
  std::vector<std::string> logs(config_paths.size());
  parallel_for(config_paths.size(), ov.threads, [&](std::size_t k) {
    std::ostringstream log;
    std::ostringstream elog;
    codes[k] = guarded(elog, config_paths[k], [&] {
      const RunConfig cfg = load_with_overrides(config_paths[k], ov, input);
      const GameRecord record = run_game(cfg.game, config_hash(cfg));
      const std::string stem = fs::path(config_paths[k]).stem().string();
      const fs::path transcript = output_path(cfg, ov, cfg.output.transcript, stem, ".jsonl");
      const fs::path summary = output_path(cfg, ov, cfg.output.summary, stem, ".summary.csv");
      ensure_parent(transcript);
      ensure_parent(summary);
      write_transcript_file(transcript.string(), record);
      write_summary_csv_file(summary.string(), record);
      log << config_paths[k] << ": " << record.rounds.size() << " rounds";
      if (record.truncated) log << " (replay exhausted before N = " << record.horizon << ", truncated)";
      if (!record.rounds.empty()) {
        log << ", K_n = " << std::setprecision(6) << record.rounds.back().capital
            << ", tensor_norm = " << record.rounds.back().tensor_norm;
      }
      log << "\n  transcript " << transcript.string() << "\n  summary    " << summary.string() << '\n';
      return static_cast<int>(kOk);
    });
    logs[k] = log.str() + elog.str();
  });
  int worst = kOk;
  for (std::size_t k = 0; k < config_paths.size(); ++k) {
    (codes[k] == kOk ? out : err) << logs[k];
    worst = std::max(worst, codes[k]);
  }
  return worst;
}

int cmd_verify(const std::string& transcript_path, const Overrides& ov, std::ostream& out, std::ostream& err) {
  return guarded(err, transcript_path, [&] {
    const GameRecord record = read_transcript_file(transcript_path, false);
    VerifyOptions options;
    if (ov.tolerance) options.slack_tol = *ov.tolerance;
    const VerifyReport report = replay_verify(record, options);
    print_issues(out, report);
    return report.ok() ? static_cast<int>(kOk) : static_cast<int>(kValidation);
  });
}

int cmd_diagnose(const std::string& transcript_path, const std::string& diagnose_config_path, const Overrides& ov,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, transcript_path, [&] {
    const GameRecord record = read_transcript_file(transcript_path, false);
    DiagnoseConfig diag;
    if (!diagnose_config_path.empty()) diag = load_diagnose_config(diagnose_config_path, record.protocol.obs_dim());

    VerifyOptions options;
    if (ov.tolerance) options.slack_tol = *ov.tolerance;
    const VerifyReport verify = replay_verify(record, options);
    print_issues(out, verify);

    const fs::path dir = !ov.output_dir.empty() ? fs::path(ov.output_dir) : fs::path(transcript_path).parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    const std::string stem = fs::path(transcript_path).stem().string();
    auto open = [&](const std::string& suffix) {
      const fs::path p = dir / (stem + suffix);
      std::ofstream f(p, std::ios::binary);
      if (!f) throw ValidationError("cannot write '" + p.string() + "'");
      out << "  wrote " << p.string() << '\n';
      return f;
    };

    bool violated = false;
    const BoundSeries series = theorem3_series(record);
    if (!series.skipped()) {
      auto f = open(".bound.csv");
      write_bound_csv(f, series);
    }
    violated |= !series.violations.empty();
    for (std::size_t k = 0; k < std::min<std::size_t>(series.violations.size(), 20); ++k) {
      const std::size_t n = series.violations[k];
      const auto& row = series.rows[n - 1];
      out << "  tensor-norm bound violation at round " << n << ": lhs=" << std::setprecision(10) << row.lhs
          << " rhs=" << row.rhs << " slack_budget=" << row.slack_budget << '\n';
    }

    for (std::size_t k = 0; k < diag.tests.size(); ++k) {
      const auto& t = diag.tests[k];
      const double c_f = t.c_f ? *t.c_f : record.c_phi.value_or(0.0);
      if (!t.c_f && !record.c_phi) {
        out << "RKHS check " << t.function.name << " skipped: no c_f given and C_Phi unavailable\n";
        continue;
      }
      TestFunction F = t.function;
      if (t.norm) {
        F.norm_bound = *t.norm;
      } else if (t.constant) {
        const auto n = constant_function_norm(record.kernel, *t.constant, record_region(record));
        if (!n) {
          out << "RKHS check " << F.name << " skipped: no norm given and none known for kernel "
              << record.kernel.describe() << '\n';
          continue;
        }
        F.norm_bound = *n;
      } else if (!is_full_sobolev(record.kernel)) {
        out << "RKHS check " << F.name << " skipped: tent norms hold in the SobolevExp space only; give \"norm\"\n";
        continue;
      }
      const RkhsBoundReport report = rkhs_bound_check(record, F, c_f);
      auto f = open(".rkhs" + std::to_string(k) + ".csv");
      write_rkhs_csv(f, report);
      out << "RKHS check " << report.function << ": violations=" << report.violations.size() << '\n';
      violated |= !report.ok();
    }

    std::optional<CalibrationReport> calibration;
    if (!diag.neighborhoods.empty()) {
      calibration = calibration_report(record, diag.neighborhoods, diag.calibration);
      auto f = open(".calibration.csv");
      write_calibration_csv(f, *calibration);
      violated |= calibration->violation_count() > 0;
    }
    out << summarize(series, calibration ? &*calibration : nullptr);
    if (!verify.ok()) return static_cast<int>(kValidation);
    return violated ? static_cast<int>(kBoundViolation) : static_cast<int>(kOk);
  });
}

int cmd_exploit_demo(const std::string& config_path, const Overrides& ov, std::ostream& out, std::ostream& err) {
  return guarded(err, config_path, [&] {
    RunConfig cfg = load_with_overrides(config_path, ov);
    GameConfig& game = cfg.game;
    if (game.forecaster.kind != ForecasterSpec::Kind::Constant) {
      throw ValidationError("forecaster: exploit-demo needs {\"type\": \"constant\", \"value\": [...]}");
    }
    if (game.skeptic.kind != SkepticKind::Exploit) {
      game.skeptic.kind = SkepticKind::Exploit;
      game.skeptic.scale = 10.0;
    }
    const ConvexDomain& domain = game.protocol.domain();
    const double d = distance_to(domain, game.forecaster.value);
    if (d <= kMembershipTol) {
      out << "no exploitation possible: forecast " << to_string(game.forecaster.value) << " lies in "
          << domain.name() << '\n';
    } else {
      out << "forecast " << to_string(game.forecaster.value) << " is " << std::setprecision(6) << d << " outside "
          << domain.name() << "; guaranteed gain per round >= C d^2 = " << game.skeptic.scale * d * d << '\n';
    }
    const GameRecord record = run_game(game, config_hash(cfg));
    out << std::setw(8) << "n" << std::setw(16) << "y" << std::setw(16) << "gain" << std::setw(16) << "capital\n";
    const std::size_t total = record.rounds.size();
    for (std::size_t k = 0; k < total; ++k) {
      if (total > 40 && k >= 15 && k + 10 < total) {
        if (k == 15) out << std::setw(8) << "..." << '\n';
        continue;
      }
      const auto& r = record.rounds[k];
      out << std::setw(8) << r.n << std::setw(16) << to_string(r.y) << std::setw(16) << std::setprecision(8) << r.gain
          << std::setw(16) << r.capital << '\n';
    }
    if (!ov.output_dir.empty()) {
      const fs::path p = fs::path(ov.output_dir) / (fs::path(config_path).stem().string() + ".exploit.jsonl");
      ensure_parent(p);
      write_transcript_file(p.string(), record);
      out << "transcript " << p.string() << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_bench(const Overrides& ov, std::ostream& out, std::ostream& err, const std::vector<std::size_t>& sizes) {
  return guarded(err, "bench", [&] {
    using Clock = std::chrono::steady_clock;
    const auto initial = simd::active_backend();
    const ProtocolSpec protocol = ProtocolSpec::binary();
    const Kernel kernel = Kernel::sobolev_exp(1, 1);
    out << std::left << std::setw(8) << "backend" << std::right << std::setw(8) << "n" << std::setw(16) << "push_us"
        << std::setw(16) << "solve_us" << '\n';
    for (auto backend : simd::available_backends()) {
      simd::set_backend(backend);
      for (std::size_t n : sizes) {
        std::mt19937_64 rng(ov.seed.value_or(1));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        TensorAccumulator acc(kernel, 1);
        K29Forecaster k29(kernel, protocol);
        std::vector<std::pair<Point, Vector>> rounds;
        rounds.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
          const Vector x{2.0 * unit(rng) - 1.0};
          const Vector f{unit(rng)};
          const Vector y{unit(rng) < 1.0 / (1.0 + std::exp(-2.0 * x[0])) ? 1.0 : 0.0};
          rounds.push_back({Point{f, x}, y});
        }
        const auto t0 = Clock::now();
        for (const auto& [p, y] : rounds) acc.push(y - p.f, p);
        const auto t1 = Clock::now();
        for (const auto& [p, y] : rounds) k29.observe(p.x, p.f, y);
        const std::size_t reps = std::max<std::size_t>(1, 20000 / n);
        const auto t2 = Clock::now();
        double sink = 0.0;
        for (std::size_t r = 0; r < reps; ++r) sink += k29.next_forecast(Vector{2.0 * unit(rng) - 1.0}).f[0];
        const auto t3 = Clock::now();
        const double push_us = std::chrono::duration<double, std::micro>(t1 - t0).count() / static_cast<double>(n);
        const double solve_us = std::chrono::duration<double, std::micro>(t3 - t2).count() / static_cast<double>(reps);
        out << std::left << std::setw(8) << simd::backend_name(backend) << std::right << std::setw(8) << n
            << std::setw(16) << std::fixed << std::setprecision(3) << push_us << std::setw(16) << solve_us
            << std::defaultfloat << '\n';
        if (!(sink >= 0.0)) err << "bench: unexpected forecast\n";
      }
    }
    simd::set_backend(initial);
    return static_cast<int>(kOk);
  });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"defcast: defensive forecasting games, K29 forecaster and diagnostics"};
  app.require_subcommand(1);
  Overrides ov;
  unsigned long long seed = 0;
  double tolerance = 0.0;
  std::vector<std::string> configs;
  std::string config;
  std::string input;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output-dir", ov.output_dir, "Directory for outputs");
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_option("--tolerance", tolerance, "Override solver field_tol (simulate) or slack tolerance (verify)");
  };

  auto* simulate = app.add_subcommand("simulate", "Run games and write transcripts and summaries");
  simulate->add_option("--config,configs", configs, "Run config JSON files (several run in parallel)")->required();
  simulate->add_option("--input", input, "Replay CSV replacing the config's reality source");
  simulate->add_option("--threads", ov.threads, "Worker threads (0: all cores)");
  add_common(simulate);

  auto* diagnose = app.add_subcommand("diagnose", "Verify a transcript and check its bounds");
  diagnose->add_option("--input", input, "Transcript JSONL")->required();
  diagnose->add_option("--config", config, "Diagnostics config JSON (neighborhoods, test functions)");
  add_common(diagnose);

  auto* exploit = app.add_subcommand("exploit-demo", "Exploit Skeptic against a constant forecasting rule");
  exploit->add_option("--config", config, "Run config JSON with a constant forecaster")->required();
  add_common(exploit);

  auto* verify = app.add_subcommand("verify", "Recompute a transcript and list mismatches");
  verify->add_option("--input", input, "Transcript JSONL")->required();
  add_common(verify);

  auto* bench = app.add_subcommand("bench", "Timing table for the solver and Gram updates");
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed")) ov.seed = seed;
    if (sub->count("--tolerance")) {
      if (!(tolerance > 0.0)) {
        err << "--tolerance must be > 0\n";
        return kValidation;
      }
      ov.tolerance = tolerance;
    }
  }
  if (*simulate) return cmd_simulate(configs, ov, out, err, input);
  if (*diagnose) return cmd_diagnose(input, config, ov, out, err);
  if (*exploit) return cmd_exploit_demo(config, ov, out, err);
  if (*verify) return cmd_verify(input, ov, out, err);
  if (*bench) return cmd_bench(ov, out, err);
  return kValidation;
}

} // namespace defcast::cli
