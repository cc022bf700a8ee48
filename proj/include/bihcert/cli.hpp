#pragma once

#include <optional>
#include <string>

#include "bihcert/report.hpp"

namespace bihcert::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCertificationFailure = 1;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitDomainError = 3;

/// Command-line overrides applied on top of the scenario file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::string out_path;
};

struct RunResult {
  int status = kExitPass;
  std::string report_path;
  std::string report_text;
};

/// Loads a scenario file and runs the named command pipeline
/// ("certify", "classify", "scan-curvature", "ode", "product"), writing the
/// report atomically. Returns status 0 (all stages pass) or 1 (a stage
/// failed). Throws kv::ParseError for syntax/shape/command-mismatch
/// problems (exit 2) and std::domain_error / std::invalid_argument for
/// parameter-domain violations (exit 3).
RunResult run_scenario_file(const std::string& command,
                            const std::string& scenario_path,
                            const Overrides& overrides = {});

/// Full command-line entry point; maps exceptions to the exit-code
/// contract and prints diagnostics to stderr.
int run(int argc, const char* const* argv);

}  // namespace bihcert::cli
