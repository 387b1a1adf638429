// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace defcast::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kSolverFailure = 2,
  kBoundViolation = 3,
};

struct Overrides {
  std::optional<unsigned long long> seed;
  std::optional<double> tolerance;
  std::string output_dir;
  unsigned threads = 0;
};

/// `input`, when set, replaces each config's reality with a replay of that CSV.
int cmd_simulate(const std::vector<std::string>& config_paths, const Overrides& overrides, std::ostream& out,
                 std::ostream& err, const std::string& input = "");
int cmd_diagnose(const std::string& transcript_path, const std::string& diagnose_config_path,
                 const Overrides& overrides, std::ostream& out, std::ostream& err);
int cmd_exploit_demo(const std::string& config_path, const Overrides& overrides, std::ostream& out,
                     std::ostream& err);
int cmd_verify(const std::string& transcript_path, const Overrides& overrides, std::ostream& out,
               std::ostream& err);
int cmd_bench(const Overrides& overrides, std::ostream& out, std::ostream& err,
              const std::vector<std::size_t>& sizes = {100, 1000, 10000});

/// Parses argv and dispatches to the commands above.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace defcast::cli
