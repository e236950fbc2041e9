#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "tdmr/channel.hpp"
#include "tdmr/config.hpp"
#include "tdmr/csv.hpp"
#include "tdmr/detector.hpp"
#include "tdmr/grid.hpp"
#include "tdmr/infotheory.hpp"

namespace tdmr {

namespace {

std::string default_output_name(RunMode mode) {
    switch (mode) {
        case RunMode::kMiMc: return "mi_mc.csv";
        case RunMode::kMiQuad: return "mi_quad.csv";
        case RunMode::kRegions: return "regions.csv";
        case RunMode::kSample: return "sample.csv";
        case RunMode::kCovariance: return "covariance.csv";
    }
    return "out.csv";
}

std::string resolve_output_path(const RunConfig& config) {
    if (!config.output.empty()) return config.output;
    std::filesystem::path dir = ".";
    if (const char* env = std::getenv("TDMR_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        dir = env;
    }
    return (dir / default_output_name(config.mode)).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open output file");
    out << content;
    out.flush();
    if (!out) throw IoError(path, "failed while writing");
}

void write_manifest(const RunConfig& config, const std::string& output_path, double wall_ms) {
    nlohmann::ordered_json manifest;
    manifest["mode"] = to_string(config.mode);
    manifest["rows"] = config.rows;
    manifest["cols"] = config.cols;
    manifest["alpha"] = config.alpha;
    manifest["beta"] = config.beta;
    manifest["sigma_s"] = config.sigma_s;
    manifest["sigma_j"] = config.sigma_j;
    manifest["t_max"] = config.t_max;
    manifest["seed"] = config.seed;
    manifest["window"] = config.window;
    manifest["resolution"] = config.resolution;
    manifest["threads"] = config.threads;
    manifest["pattern"] = config.pattern;
    manifest["output"] = output_path;
    manifest["version"] = kVersion;
    manifest["wall_ms"] = wall_ms;
    write_file(output_path + ".manifest.json", manifest.dump(2) + "\n");
}

BipolarPattern configured_pattern(const RunConfig& config, const GridTopology& topology) {
    if (config.pattern.empty()) return BipolarPattern::checkerboard(topology);
    return BipolarPattern::from_string(config.pattern);
}

// Uniform random pattern; consumes ceil(n/64) words before any noise draws.
BipolarPattern random_pattern(RngStream& rng, int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::uint64_t word = 0;
    for (int i = 0; i < n; ++i) {
        if (i % 64 == 0) word = rng.next_u64();
        v[static_cast<std::size_t>(i)] = (word >> (i % 64)) & 1u ? -1 : 1;
    }
    return BipolarPattern(std::move(v));
}

std::string run_mi_mc(const RunConfig& config) {
    const GridTopology topo = build_grid(config.rows, config.cols, kMaxExhaustiveCells);
    const auto points = sweep(topo, config.alpha, config.beta, config.sigma_s, config.sigma_j,
                              config.t_max, config.seed, config.threads);
    std::ostringstream out;
    write_sweep_csv(out, points, topo.n);
    return out.str();
}

std::string run_mi_quad(const RunConfig& config) {
    const GridTopology topo = build_grid(config.rows, config.cols, kMaxExhaustiveCells);
    std::vector<SweepPoint> points;
    for (double sj : config.sigma_j) {
        for (double ss : config.sigma_s) {
            const PatternTable table(topo, {config.alpha, config.beta, ss, sj});
            MIEstimate est;
            est.value_bits = quad_symmetric_mi(table);
            est.h_y_given_x_bits = conditional_entropy_bits(table);
            est.h_y_bits = est.value_bits + est.h_y_given_x_bits;
            points.push_back({ss, sj, est});
        }
    }
    std::ostringstream out;
    write_sweep_csv(out, points, topo.n);
    return out.str();
}

std::string run_regions(const RunConfig& config) {
    const GridTopology topo = build_grid(config.rows, config.cols, kMaxExhaustiveCells);
    const PatternTable table(topo,
                             {config.alpha, config.beta, config.sigma_s[0], config.sigma_j[0]});
    const DecisionRaster raster =
        decision_raster(table, -config.window, config.window, config.resolution);
    std::ostringstream out;
    write_raster_csv(out, raster, table);
    return out.str();
}

std::string run_sample(const RunConfig& config) {
    const GridTopology topo = build_grid(config.rows, config.cols);
    const ChannelParams params{config.alpha, config.beta, config.sigma_s[0], config.sigma_j[0]};
    std::ostringstream out;
    out << "trial,x_bits";
    for (int i = 1; i <= topo.n; ++i) out << ",y" << i;  // 1-based cell labels
    out << '\n';
    for (std::int64_t t = 0; t < config.t_max; ++t) {
        RngStream rng = RngStream::for_trial(config.seed, static_cast<std::uint64_t>(t));
        const BipolarPattern x = config.pattern.empty()
                                     ? random_pattern(rng, topo.n)
                                     : BipolarPattern::from_string(config.pattern);
        const Eigen::VectorXd y = sample_readback(rng, topo, params, x);
        out << t << ',' << x.to_string();
        for (int i = 0; i < topo.n; ++i) out << ',' << format_real(y[i]);
        out << '\n';
    }
    return out.str();
}

std::string run_covariance(const RunConfig& config) {
    const GridTopology topo = build_grid(config.rows, config.cols);
    const ChannelParams params{config.alpha, config.beta, config.sigma_s[0], config.sigma_j[0]};
    const BipolarPattern x = configured_pattern(config, topo);
    const Eigen::MatrixXd s = covariance_matrix(topo, params, x);
    std::ostringstream out;
    for (int i = 0; i < topo.n; ++i) {
        for (int j = 0; j < topo.n; ++j) {
            if (j) out << ',';
            out << format_real(s(i, j));
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace

std::string run(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    std::string csv;
    switch (config.mode) {
        case RunMode::kMiMc: csv = run_mi_mc(config); break;
        case RunMode::kMiQuad: csv = run_mi_quad(config); break;
        case RunMode::kRegions: csv = run_regions(config); break;
        case RunMode::kSample: csv = run_sample(config); break;
        case RunMode::kCovariance: csv = run_covariance(config); break;
    }
    const std::string output_path = resolve_output_path(config);
    write_file(output_path, csv);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    write_manifest(config, output_path, wall_ms);
    return output_path;
}

}  // namespace tdmr
