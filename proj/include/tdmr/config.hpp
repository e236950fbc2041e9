#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdmr {

inline constexpr const char* kVersion = "0.1.0";

/// Process exit codes; each validation failure class gets its own code so
/// scripts can tell them apart.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,      // runtime/numerical failure
    kExitUnknownFlag = 2,
    kExitMissingField = 3,
    kExitBadValue = 4,
    kExitCapExceeded = 5,
    kExitIo = 6,
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(ExitCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}
    ExitCode code() const { return code_; }

private:
    ExitCode code_;
};

/// Thrown by parse_config when --help is requested; carries the help text.
struct HelpRequested {
    std::string text;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& path, const std::string& what)
        : std::runtime_error(what + ": " + path), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

enum class RunMode { kMiMc, kMiQuad, kRegions, kSample, kCovariance };

std::string to_string(RunMode mode);

/// Fully validated run description. Defaults describe the two-cell model
/// (1x2 grid, alpha = 3/2, beta = 1/2).
struct RunConfig {
    RunMode mode = RunMode::kMiMc;
    int rows = 1;
    int cols = 2;
    double alpha = 1.5;
    double beta = 0.5;
    std::vector<double> sigma_s;
    std::vector<double> sigma_j;
    std::int64_t t_max = 0;
    std::uint64_t seed = 1;
    double window = 6.0;    // raster half-width: labels cover [-window, window]^2
    int resolution = 601;   // raster grid points per axis
    int threads = 1;
    std::string pattern;    // fixed write pattern ("+-.."); empty = mode default
    std::string output;     // output CSV path; empty = default name in TDMR_OUTPUT_DIR

    bool operator==(const RunConfig&) const = default;
};

/// Parses command-line style arguments (no program name). Throws ConfigError
/// with the matching exit code on unknown flags, missing required fields,
/// malformed values, or cell counts over the exhaustive cap. Values may also
/// come from an INI file via --config; explicit flags win.
RunConfig parse_config(const std::vector<std::string>& args);

/// Renders a config back to flags such that parse_config(render_cli_args(c))
/// reproduces c exactly.
std::vector<std::string> render_cli_args(const RunConfig& config);

/// Executes the configured mode: writes the mode's CSV and a JSON manifest
/// next to it. Returns the output path actually written.
std::string run(const RunConfig& config);

}  // namespace tdmr
