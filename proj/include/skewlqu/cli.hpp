#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skewlqu/report.hpp"

namespace skewlqu::cli {

enum class Command { Help, Skew, Q, Lqu, Steer, VerifyClaim1, VerifyClaim2, VerifyClaim2Lemma, VerifyAvg };

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitError = 3;  // runtime failure (bad input file, IO)

struct RunConfig {
  Command command = Command::Help;
  Eigen::Index n_a = 2;
  Eigen::Index n_b = 2;
  std::size_t trials = 1000;
  std::optional<RVector> spectrum;  // nullopt = default spectrum
  int restarts = 16;
  double tol = 1e-7;
  std::uint64_t master_seed = 42;
  std::size_t kraus_count = 2;
  std::size_t bases_per_trial = 20;
  std::string out_path;
  ReportFormat out_format = ReportFormat::JsonLines;
  std::string state_file;
  std::string basis_file;
  Subsystem side = Subsystem::A;
  Claim2Mode mode = Claim2Mode::ArgminK;
  std::string help_text;
};

/// Parses everything after the program name. Throws Error(UsageError) with the
/// relevant help text appended on malformed input or when no command is given.
RunConfig parse_args(const std::vector<std::string>& args);

/// "v1,v2,..." -> strictly ascending spectrum; UsageError otherwise.
RVector parse_spectrum(const std::string& text);

/// Executes a parsed command, printing a summary to `out`. Returns the exit status.
int run(const RunConfig& config, std::ostream& out);

/// parse_args + run with errors mapped to exit statuses and one-line diagnostics on `err`.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skewlqu::cli
