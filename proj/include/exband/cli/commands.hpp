#ifndef EXBAND_CLI_COMMANDS_HPP
#define EXBAND_CLI_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "exband/cli/config.hpp"
#include "exband/cli/report.hpp"
#include "exband/validation.hpp"

namespace exband::cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumeric = 2, kExitValidation = 3 };

const char* tool_version();

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;   ///< overrides the config seed
    std::optional<std::size_t> trials;   ///< overrides the config trial count
    bool svg = false;                    ///< also write SVG charts
};

/// Applies --seed / --trials / --svg overrides to a parsed configuration.
ExperimentConfig apply_overrides(ExperimentConfig cfg, const RunOptions& opt);

/// Notes attached to every manifest: formula corrections and unreported parameters.
std::vector<std::string> erratum_notes(const ExperimentConfig& cfg);

// Each command writes its CSV (plus manifest.json and optional SVG) into
// opt.out_dir and returns the files written. Errors propagate as
// ConfigError / NumericError.
std::vector<std::filesystem::path> cmd_roc(const ExperimentConfig& cfg, const RunOptions& opt);
std::vector<std::filesystem::path> cmd_cdf(const ExperimentConfig& cfg, const RunOptions& opt);
std::vector<std::filesystem::path> cmd_curves(const ExperimentConfig& cfg, const RunOptions& opt);
std::vector<std::filesystem::path> cmd_calibrate(const ExperimentConfig& cfg, const RunOptions& opt, double target_pfa);

/// Runs the oracle suite, prints one line per check and returns the results.
std::vector<CheckResult> cmd_validate(const ValidationOptions& opt, std::ostream& out);

/// Full command dispatch with exit-code mapping; messages go to err.
/// `command` is one of roc, cdf, curves, calibrate, validate.
int run_command(const std::string& command, const std::string& config_path, const RunOptions& opt, double target_pfa,
                std::ostream& out, std::ostream& err);

}  // namespace exband::cli

#endif  // EXBAND_CLI_COMMANDS_HPP
