#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tdmr/channel.hpp"
#include "tdmr/config.hpp"
#include "tdmr/grid.hpp"
#include "tdmr/rng.hpp"

using namespace tdmr;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("tdmr_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        fields.push_back(line.substr(pos, comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return fields;
}

ExitCode code_of(const std::vector<std::string>& args) {
    try {
        parse_config(args);
    } catch (const ConfigError& e) {
        return e.code();
    }
    return kExitOk;
}

}  // namespace

TEST_CASE("parsing the 3x3 Monte Carlo command line") {
    const RunConfig cfg = parse_config({"--mode", "mi-mc", "--rows", "3", "--cols", "3",
                                        "--alpha", "1.0", "--beta", "0.5", "--sigma-j", "0.8",
                                        "--sigma-s", "0.3", "--t-max", "1000", "--seed", "7"});
    CHECK(cfg.mode == RunMode::kMiMc);
    CHECK(cfg.rows == 3);
    CHECK(cfg.cols == 3);
    CHECK(cfg.alpha == 1.0);
    CHECK(cfg.beta == 0.5);
    CHECK(cfg.sigma_s == std::vector<double>{0.3});
    CHECK(cfg.sigma_j == std::vector<double>{0.8});
    CHECK(cfg.t_max == 1000);
    CHECK(cfg.seed == 7);
}

TEST_CASE("regions mode defaults to the two-cell model") {
    const RunConfig cfg = parse_config({"--mode", "regions", "--sigma-j", "0.25", "--sigma-s",
                                        "0.5", "--window", "6", "--resolution", "601"});
    CHECK(cfg.rows == 1);
    CHECK(cfg.cols == 2);
    CHECK(cfg.alpha == 1.5);
    CHECK(cfg.beta == 0.5);
    CHECK(cfg.window == 6.0);
    CHECK(cfg.resolution == 601);
}

TEST_CASE("validation failures carry distinct exit codes") {
    // missing required t-max in mi-mc mode
    try {
        parse_config({"--mode", "mi-mc", "--sigma-s", "0.3", "--sigma-j", "0.8"});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.code() == kExitMissingField);
        CHECK(std::string(e.what()).find("t-max") != std::string::npos);
    }

    CHECK(code_of({"--mode", "mi-mc", "--sigma-s", "0.3", "--sigma-j", "0.8", "--t-max", "10",
                   "--frobnicate", "1"}) == kExitUnknownFlag);
    CHECK(code_of({"--mode", "mi-mc", "--sigma-s", "0.3,zzz", "--sigma-j", "0.8", "--t-max",
                   "10"}) == kExitBadValue);
    CHECK(code_of({"--mode", "mi-mc", "--rows", "abc", "--sigma-s", "0.3", "--sigma-j", "0.8",
                   "--t-max", "10"}) == kExitBadValue);
    CHECK(code_of({"--mode", "mi-mc", "--rows", "5", "--cols", "5", "--sigma-s", "0.3",
                   "--sigma-j", "0.8", "--t-max", "10"}) == kExitCapExceeded);
    CHECK(code_of({"--mode", "mi-quad", "--rows", "2", "--cols", "2", "--sigma-s", "0.3",
                   "--sigma-j", "0.8"}) == kExitCapExceeded);
    CHECK(code_of({"--mode", "regions", "--rows", "3", "--cols", "3", "--sigma-s", "0.5",
                   "--sigma-j", "0.25"}) == kExitBadValue);
    CHECK(code_of({"--mode", "sample", "--sigma-s", "0.5", "--sigma-j", "0.25", "--t-max",
                   "5", "--pattern", "+*"}) == kExitBadValue);
    CHECK(code_of({"--mode", "covariance", "--sigma-s", "-0.5", "--sigma-j", "0.25"}) ==
          kExitBadValue);
}

TEST_CASE("help request surfaces as its own signal") {
    CHECK_THROWS_AS(parse_config({"--help"}), HelpRequested);
}

TEST_CASE("config file values are overridden by flags") {
    const fs::path dir = fresh_dir("cfgfile");
    const fs::path ini = dir / "run.ini";
    std::ofstream(ini) << "mode=mi-mc\nrows=1\ncols=2\nsigma-s=0.4\nsigma-j=0.4\nt-max=100\n"
                          "seed=5\n";
    const RunConfig from_file = parse_config({"--config", ini.string()});
    CHECK(from_file.t_max == 100);
    CHECK(from_file.seed == 5);
    const RunConfig overridden = parse_config({"--config", ini.string(), "--t-max", "250"});
    CHECK(overridden.t_max == 250);
    CHECK(overridden.seed == 5);
}

TEST_CASE("render and parse round trip on randomized configs") {
    RngStream rng(20240810);
    auto pick_real = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform01(); };
    for (int rep = 0; rep < 200; ++rep) {
        RunConfig cfg;
        const int mode_pick = static_cast<int>(rng.next_u64() % 5);
        cfg.mode = static_cast<RunMode>(mode_pick);
        cfg.alpha = pick_real(0.5, 2.0);
        cfg.beta = pick_real(0.0, 1.0);
        cfg.seed = rng.next_u64();
        cfg.threads = 1 + static_cast<int>(rng.next_u64() % 8);
        cfg.window = pick_real(1.0, 8.0);
        cfg.resolution = 2 + static_cast<int>(rng.next_u64() % 600);
        switch (cfg.mode) {
            case RunMode::kMiMc: {
                cfg.rows = 1 + static_cast<int>(rng.next_u64() % 3);
                cfg.cols = 1 + static_cast<int>(rng.next_u64() % 4);
                const std::size_t len_s = 1 + rng.next_u64() % 3;
                const std::size_t len_j = 1 + rng.next_u64() % 3;
                for (std::size_t i = 0; i < len_s; ++i) cfg.sigma_s.push_back(pick_real(0.1, 1.5));
                for (std::size_t i = 0; i < len_j; ++i) cfg.sigma_j.push_back(pick_real(0.0, 1.5));
                cfg.t_max = 1 + static_cast<std::int64_t>(rng.next_u64() % 100000);
                break;
            }
            case RunMode::kMiQuad: {
                cfg.rows = 1;
                cfg.cols = 1 + static_cast<int>(rng.next_u64() % 2);
                cfg.sigma_s.push_back(pick_real(0.1, 1.5));
                cfg.sigma_j.push_back(pick_real(0.0, 1.5));
                break;
            }
            case RunMode::kRegions: {
                cfg.rows = 1;
                cfg.cols = 2;
                cfg.sigma_s.push_back(pick_real(0.1, 1.5));
                cfg.sigma_j.push_back(pick_real(0.0, 1.5));
                break;
            }
            case RunMode::kSample: {
                cfg.rows = 1 + static_cast<int>(rng.next_u64() % 4);
                cfg.cols = 1 + static_cast<int>(rng.next_u64() % 6);
                cfg.sigma_s.push_back(pick_real(0.0, 1.5));
                cfg.sigma_j.push_back(pick_real(0.0, 1.5));
                cfg.t_max = 1 + static_cast<std::int64_t>(rng.next_u64() % 1000);
                break;
            }
            case RunMode::kCovariance: {
                cfg.rows = 2;
                cfg.cols = 2;
                cfg.sigma_s.push_back(pick_real(0.0, 1.5));
                cfg.sigma_j.push_back(pick_real(0.0, 1.5));
                if (rng.next_u64() % 2) cfg.pattern = "+--+";
                break;
            }
        }
        if (rng.next_u64() % 2) cfg.output = "out.csv";
        const RunConfig reparsed = parse_config(render_cli_args(cfg));
        CHECK(reparsed == cfg);
    }
}

TEST_CASE("sample mode without noise writes the exact means") {
    const fs::path dir = fresh_dir("sample");
    RunConfig cfg;
    cfg.mode = RunMode::kSample;
    cfg.rows = 2;
    cfg.cols = 2;
    cfg.alpha = 1.0;
    cfg.beta = 0.5;
    cfg.sigma_s = {0.0};
    cfg.sigma_j = {0.0};
    cfg.t_max = 16;
    cfg.seed = 3;
    cfg.output = (dir / "sample.csv").string();
    run(cfg);

    const GridTopology g = build_grid(2, 2);
    std::ifstream in(cfg.output);
    std::string line;
    std::getline(in, line);
    CHECK(line == "trial,x_bits,y1,y2,y3,y4");
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        REQUIRE(fields.size() == 6);
        const BipolarPattern x = BipolarPattern::from_string(fields[1]);
        const Eigen::VectorXd mu = mean_readback(g, {cfg.alpha, cfg.beta, 0.0, 0.0}, x);
        for (int i = 0; i < 4; ++i) {
            CHECK(std::stod(fields[static_cast<std::size_t>(2 + i)]) == mu[i]);
        }
        ++rows;
    }
    CHECK(rows == 16);
}

TEST_CASE("covariance mode dumps the checkerboard matrix") {
    const fs::path dir = fresh_dir("cov");
    RunConfig cfg;
    cfg.mode = RunMode::kCovariance;
    cfg.rows = 2;
    cfg.cols = 2;
    cfg.alpha = 1.0;
    cfg.beta = 0.5;
    cfg.sigma_s = {0.3};
    cfg.sigma_j = {0.7};
    cfg.output = (dir / "cov.csv").string();
    run(cfg);

    const GridTopology g = build_grid(2, 2);
    const Eigen::MatrixXd expected =
        covariance_matrix(g, {1.0, 0.5, 0.3, 0.7}, BipolarPattern::checkerboard(g));
    std::ifstream in(cfg.output);
    std::string line;
    for (int i = 0; i < 4; ++i) {
        REQUIRE(std::getline(in, line));
        const auto fields = split_csv_line(line);
        REQUIRE(fields.size() == 4);
        for (int j = 0; j < 4; ++j) {
            CHECK(std::stod(fields[static_cast<std::size_t>(j)]) == expected(i, j));
        }
    }
}

TEST_CASE("mi-quad and regions modes write well-formed CSVs") {
    const fs::path dir = fresh_dir("modes");

    RunConfig quad;
    quad.mode = RunMode::kMiQuad;
    quad.sigma_s = {0.4};
    quad.sigma_j = {0.4};
    quad.output = (dir / "quad.csv").string();
    run(quad);
    {
        std::ifstream in(quad.output);
        std::string header, row, extra;
        REQUIRE(std::getline(in, header));
        CHECK(header ==
              "sigma_s,sigma_j,mi_bits,mi_rate,h_y_bits,h_ygx_bits,stderr_bits,t_max,seed");
        REQUIRE(std::getline(in, row));
        const auto fields = split_csv_line(row);
        REQUIRE(fields.size() == 9);
        const double mi = std::stod(fields[2]);
        CHECK(mi > 0.0);
        CHECK(mi < 2.0);
        CHECK(fields[6] == "0");  // no sampling error in quadrature rows
        CHECK(fields[7] == "0");
        CHECK_FALSE(std::getline(in, extra));
    }

    RunConfig regions;
    regions.mode = RunMode::kRegions;
    regions.sigma_s = {0.5};
    regions.sigma_j = {0.25};
    regions.window = 3.0;
    regions.resolution = 21;
    regions.output = (dir / "regions.csv").string();
    run(regions);
    {
        std::ifstream in(regions.output);
        std::string line;
        REQUIRE(std::getline(in, line));
        CHECK(line == "y1,y2,label_index,x_bits");
        int rows = 0;
        while (std::getline(in, line)) {
            if (!line.empty()) ++rows;
        }
        CHECK(rows == 21 * 21);
    }
}

TEST_CASE("identical config and seed give byte-identical CSVs across thread counts") {
    const fs::path dir = fresh_dir("repro");
    RunConfig cfg;
    cfg.mode = RunMode::kMiMc;
    cfg.rows = 1;
    cfg.cols = 2;
    cfg.alpha = 1.5;
    cfg.beta = 0.5;
    cfg.sigma_s = {0.4, 0.8};
    cfg.sigma_j = {0.4};
    cfg.t_max = 3000;
    cfg.seed = 97;
    cfg.output = (dir / "a.csv").string();
    run(cfg);

    RunConfig again = cfg;
    again.threads = 3;
    again.output = (dir / "b.csv").string();
    run(again);

    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(fs::exists(dir / "a.csv.manifest.json"));
    const std::string manifest = slurp(dir / "a.csv.manifest.json");
    CHECK(manifest.find("\"mode\": \"mi-mc\"") != std::string::npos);
    CHECK(manifest.find("\"seed\": 97") != std::string::npos);
    CHECK(manifest.find("\"version\": \"0.1.0\"") != std::string::npos);
}

TEST_CASE("default output honors TDMR_OUTPUT_DIR") {
    const fs::path dir = fresh_dir("envdir");
    setenv("TDMR_OUTPUT_DIR", dir.c_str(), 1);
    RunConfig cfg;
    cfg.mode = RunMode::kCovariance;
    cfg.rows = 1;
    cfg.cols = 2;
    cfg.sigma_s = {0.5};
    cfg.sigma_j = {0.25};
    const std::string written = run(cfg);
    unsetenv("TDMR_OUTPUT_DIR");
    CHECK(fs::path(written).parent_path() == dir);
    CHECK(fs::exists(dir / "covariance.csv"));
}

TEST_CASE("missing output directory reports the path") {
    RunConfig cfg;
    cfg.mode = RunMode::kCovariance;
    cfg.rows = 1;
    cfg.cols = 2;
    cfg.sigma_s = {0.5};
    cfg.sigma_j = {0.25};
    cfg.output = "/nonexistent_dir_tdmr/x.csv";
    CHECK_THROWS_AS(run(cfg), IoError);
}
