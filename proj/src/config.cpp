#include "tdmr/config.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>

#include "tdmr/csv.hpp"
#include "tdmr/grid.hpp"

namespace tdmr {

namespace {

const std::vector<std::pair<std::string, RunMode>> kModeNames = {
    {"mi-mc", RunMode::kMiMc},         {"mi-quad", RunMode::kMiQuad},
    {"regions", RunMode::kRegions},    {"sample", RunMode::kSample},
    {"covariance", RunMode::kCovariance},
};

RunMode mode_from_string(const std::string& name) {
    for (const auto& [text, mode] : kModeNames) {
        if (text == name) return mode;
    }
    throw ConfigError(kExitBadValue, "unknown mode '" + name +
                                         "' (expected mi-mc, mi-quad, regions, sample or covariance)");
}

std::vector<double> parse_real_list(const std::string& text, const std::string& field) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            values.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError(kExitBadValue,
                              field + ": '" + item + "' is not a real number");
        }
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    return values;
}

std::string render_real_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out.push_back(',');
        out += format_real(values[i]);
    }
    return out;
}

void require(bool present, const std::string& field) {
    if (!present) {
        throw ConfigError(kExitMissingField, "missing required field " + field);
    }
}

void require_single(const std::vector<double>& list, const std::string& field) {
    require(!list.empty(), field);
    if (list.size() != 1) {
        throw ConfigError(kExitBadValue, field + " must be a single value in this mode");
    }
}

void validate(RunConfig& cfg, bool has_t_max, bool has_sigma_s, bool has_sigma_j) {
    if (cfg.rows < 1 || cfg.cols < 1) {
        throw ConfigError(kExitBadValue, "rows and cols must be positive");
    }
    if (cfg.threads < 1) throw ConfigError(kExitBadValue, "threads must be positive");
    const long long n = static_cast<long long>(cfg.rows) * cfg.cols;
    if (n > 1 << 20) {
        throw ConfigError(kExitCapExceeded, "grid of " + std::to_string(n) + " cells is too large");
    }
    for (double v : cfg.sigma_s) {
        if (!(v >= 0.0)) throw ConfigError(kExitBadValue, "sigma-s values must be >= 0");
    }
    for (double v : cfg.sigma_j) {
        if (!(v >= 0.0)) throw ConfigError(kExitBadValue, "sigma-j values must be >= 0");
    }
    if (!cfg.pattern.empty()) {
        if (cfg.pattern.size() != static_cast<std::size_t>(n)) {
            throw ConfigError(kExitBadValue, "pattern length must equal rows*cols");
        }
        if (cfg.pattern.find_first_not_of("+-") != std::string::npos) {
            throw ConfigError(kExitBadValue, "pattern must contain only '+' and '-'");
        }
    }

    switch (cfg.mode) {
        case RunMode::kMiMc:
            require(has_sigma_s, "sigma-s");
            require(has_sigma_j, "sigma-j");
            require(has_t_max, "t-max");
            if (cfg.t_max < 1) throw ConfigError(kExitBadValue, "t-max must be at least 1");
            if (n > kMaxExhaustiveCells) {
                throw ConfigError(kExitCapExceeded,
                                  "mi-mc needs the exhaustive pattern table; " + std::to_string(n) +
                                      " cells exceeds the cap of " +
                                      std::to_string(kMaxExhaustiveCells));
            }
            for (double v : cfg.sigma_s) {
                if (!(v > 0.0)) {
                    throw ConfigError(kExitBadValue, "sigma-s must be positive for mi-mc");
                }
            }
            break;
        case RunMode::kMiQuad:
            require(has_sigma_s, "sigma-s");
            require(has_sigma_j, "sigma-j");
            if (n > 2) {
                throw ConfigError(kExitCapExceeded, "mi-quad supports at most 2 cells");
            }
            for (double v : cfg.sigma_s) {
                if (!(v > 0.0)) {
                    throw ConfigError(kExitBadValue, "sigma-s must be positive for mi-quad");
                }
            }
            break;
        case RunMode::kRegions:
            require(has_sigma_s, "sigma-s");
            require(has_sigma_j, "sigma-j");
            require_single(cfg.sigma_s, "sigma-s");
            require_single(cfg.sigma_j, "sigma-j");
            if (n != 2) throw ConfigError(kExitBadValue, "regions mode needs a two-cell grid");
            if (!(cfg.sigma_s[0] > 0.0)) {
                throw ConfigError(kExitBadValue, "sigma-s must be positive for regions");
            }
            if (cfg.resolution < 2) throw ConfigError(kExitBadValue, "resolution must be >= 2");
            if (!(cfg.window > 0.0)) throw ConfigError(kExitBadValue, "window must be positive");
            break;
        case RunMode::kSample:
            require(has_sigma_s, "sigma-s");
            require(has_sigma_j, "sigma-j");
            require_single(cfg.sigma_s, "sigma-s");
            require_single(cfg.sigma_j, "sigma-j");
            require(has_t_max, "t-max");
            if (cfg.t_max < 1) throw ConfigError(kExitBadValue, "t-max must be at least 1");
            break;
        case RunMode::kCovariance:
            require(has_sigma_s, "sigma-s");
            require(has_sigma_j, "sigma-j");
            require_single(cfg.sigma_s, "sigma-s");
            require_single(cfg.sigma_j, "sigma-j");
            break;
    }
}

}  // namespace

std::string to_string(RunMode mode) {
    for (const auto& [text, value] : kModeNames) {
        if (value == mode) return text;
    }
    return "?";
}

RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"simplified TDMR channel experiments"};
    app.set_config("--config", "", "read options from an INI file (flags override)");

    std::string mode_text;
    std::string sigma_s_text;
    std::string sigma_j_text;
    RunConfig cfg;

    app.add_option("--mode", mode_text, "mi-mc | mi-quad | regions | sample | covariance")
        ->required();
    app.add_option("--rows", cfg.rows, "grid rows");
    app.add_option("--cols", cfg.cols, "grid columns");
    app.add_option("--alpha", cfg.alpha, "intended-signal gain");
    app.add_option("--beta", cfg.beta, "adjacent-cell interference gain");
    auto* opt_ss = app.add_option("--sigma-s", sigma_s_text, "system noise std. dev. list");
    auto* opt_sj = app.add_option("--sigma-j", sigma_j_text, "jitter noise std. dev. list");
    auto* opt_t = app.add_option("--t-max", cfg.t_max, "Monte Carlo trials / sample rows");
    app.add_option("--seed", cfg.seed, "master seed");
    app.add_option("--window", cfg.window, "raster half-width");
    app.add_option("--resolution", cfg.resolution, "raster points per axis");
    app.add_option("--threads", cfg.threads, "worker threads");
    app.add_option("--pattern", cfg.pattern, "fixed write pattern, e.g. +--+");
    app.add_option("--output", cfg.output, "output CSV path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ExtrasError& e) {
        throw ConfigError(kExitUnknownFlag, e.what());
    } catch (const CLI::ConfigError& e) {
        throw ConfigError(kExitBadValue, e.what());
    } catch (const CLI::RequiredError& e) {
        throw ConfigError(kExitMissingField, e.what());
    } catch (const CLI::ConversionError& e) {
        throw ConfigError(kExitBadValue, e.what());
    } catch (const CLI::ParseError& e) {
        throw ConfigError(kExitBadValue, e.what());
    }

    cfg.mode = mode_from_string(mode_text);
    if (opt_ss->count() > 0) cfg.sigma_s = parse_real_list(sigma_s_text, "sigma-s");
    if (opt_sj->count() > 0) cfg.sigma_j = parse_real_list(sigma_j_text, "sigma-j");
    validate(cfg, opt_t->count() > 0, opt_ss->count() > 0, opt_sj->count() > 0);
    return cfg;
}

std::vector<std::string> render_cli_args(const RunConfig& config) {
    std::vector<std::string> args{
        "--mode",   to_string(config.mode),
        "--rows",   std::to_string(config.rows),
        "--cols",   std::to_string(config.cols),
        "--alpha",  format_real(config.alpha),
        "--beta",   format_real(config.beta),
        "--seed",   std::to_string(config.seed),
        "--window", format_real(config.window),
        "--resolution", std::to_string(config.resolution),
        "--threads", std::to_string(config.threads),
    };
    if (!config.sigma_s.empty()) {
        args.insert(args.end(), {"--sigma-s", render_real_list(config.sigma_s)});
    }
    if (!config.sigma_j.empty()) {
        args.insert(args.end(), {"--sigma-j", render_real_list(config.sigma_j)});
    }
    if (config.mode == RunMode::kMiMc || config.mode == RunMode::kSample) {
        args.insert(args.end(), {"--t-max", std::to_string(config.t_max)});
    }
    if (!config.pattern.empty()) args.insert(args.end(), {"--pattern", config.pattern});
    if (!config.output.empty()) args.insert(args.end(), {"--output", config.output});
    return args;
}

}  // namespace tdmr
