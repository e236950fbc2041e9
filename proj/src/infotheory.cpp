#include "tdmr/infotheory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "tdmr/csv.hpp"
#include "tdmr/rng.hpp"

namespace tdmr {

namespace {

const double kLog2TwoPiE = std::log2(2.0 * std::numbers::pi * std::numbers::e);

// Trials are accumulated per fixed-size block; block sums are combined in
// block order regardless of which worker produced them.
constexpr std::int64_t kTrialBlock = 1024;

struct EdgeBits {
    int shift_a;
    int shift_b;
};

}  // namespace

double conditional_entropy_bits(const PatternTable& table) {
    const std::size_t count = table.size();
    double sum_log_det = 0.0;
    for (std::size_t k = 0; k < count; ++k) sum_log_det += table.log_det(k);
    const double mean_log_det = sum_log_det / static_cast<double>(count);
    return 0.5 * table.n() * kLog2TwoPiE + mean_log_det / (2.0 * std::numbers::ln2);
}

MIEstimate mc_symmetric_mi(const GridTopology& topology, const ChannelParams& params,
                           std::int64_t t_max, std::uint64_t seed, int threads) {
    if (t_max < 1) throw std::invalid_argument("mc_symmetric_mi: t_max must be at least 1");
    const PatternTable table(topology, params);  // enforces sigma_s > 0 and the cell cap
    const double h_ygx = conditional_entropy_bits(table);

    const int n = topology.n;
    const std::size_t pattern_mask = table.size() - 1;
    const std::size_t edge_count = topology.edges.size();

    // bit positions of each edge's endpoints within a pattern rank
    std::vector<EdgeBits> edge_bits(edge_count);
    for (std::size_t e = 0; e < edge_count; ++e) {
        edge_bits[e] = {n - 1 - topology.edges[e].a, n - 1 - topology.edges[e].b};
    }

    const std::int64_t block_count = (t_max + kTrialBlock - 1) / kTrialBlock;
    std::vector<double> block_sum(static_cast<std::size_t>(block_count), 0.0);
    std::vector<double> block_sum_sq(static_cast<std::size_t>(block_count), 0.0);

    std::atomic<std::int64_t> next_block{0};
    auto worker = [&]() {
        DensityScratch scratch = table.make_scratch();
        std::vector<double> y(static_cast<std::size_t>(n));
        for (;;) {
            const std::int64_t b = next_block.fetch_add(1);
            if (b >= block_count) break;
            const std::int64_t t_end = std::min(t_max, (b + 1) * kTrialBlock);
            double sum = 0.0;
            double sum_sq = 0.0;
            for (std::int64_t t = b * kTrialBlock; t < t_end; ++t) {
                RngStream rng = RngStream::for_trial(seed, static_cast<std::uint64_t>(t));
                const std::size_t k = static_cast<std::size_t>(rng.next_u64()) & pattern_mask;
                const auto mu = table.mean(k);
                for (int i = 0; i < n; ++i) {
                    y[static_cast<std::size_t>(i)] = mu[i] + params.sigma_s * rng.normal();
                }
                for (std::size_t e = 0; e < edge_count; ++e) {
                    const double z = rng.normal();
                    if (((k >> edge_bits[e].shift_a) ^ (k >> edge_bits[e].shift_b)) & 1u) {
                        const double q = params.sigma_j * (2.0 * z);  // |x_i - x_j| = 2
                        y[static_cast<std::size_t>(topology.edges[e].a)] += q;
                        y[static_cast<std::size_t>(topology.edges[e].b)] += q;
                    }
                }
                const double v = -table.mixture_log_density(y, scratch) / std::numbers::ln2;
                sum += v;
                sum_sq += v * v;
            }
            block_sum[static_cast<std::size_t>(b)] = sum;
            block_sum_sq[static_cast<std::size_t>(b)] = sum_sq;
        }
    };

    const int worker_count = std::max(1, std::min<int>(threads, static_cast<int>(block_count)));
    if (worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(worker_count));
        for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::int64_t b = 0; b < block_count; ++b) {
        sum += block_sum[static_cast<std::size_t>(b)];
        sum_sq += block_sum_sq[static_cast<std::size_t>(b)];
    }

    const double t = static_cast<double>(t_max);
    const double theta = sum / t;
    double std_error = 0.0;
    if (t_max > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / t) / (t - 1.0));
        std_error = std::sqrt(var / t);
    }

    MIEstimate est;
    est.h_y_bits = theta;
    est.h_y_given_x_bits = h_ygx;
    est.value_bits = theta - h_ygx;
    est.std_error_bits = std_error;
    est.t_max = t_max;
    est.seed = seed;
    return est;
}

QuadratureSpec QuadratureSpec::defaults_for(const PatternTable& table) {
    const int n = table.n();
    if (n > 2) throw std::invalid_argument("QuadratureSpec: quadrature is limited to n <= 2");
    const ChannelParams& p = table.params();
    const double spread =
        std::sqrt(p.sigma_s * p.sigma_s + 8.0 * p.sigma_j * p.sigma_j);

    QuadratureSpec spec;
    spec.lower.resize(static_cast<std::size_t>(n));
    spec.upper.resize(static_cast<std::size_t>(n));
    double max_len = 0.0;
    for (int axis = 0; axis < n; ++axis) {
        double lo = table.mean(0)[axis];
        double hi = lo;
        for (std::size_t k = 1; k < table.size(); ++k) {
            lo = std::min(lo, table.mean(k)[axis]);
            hi = std::max(hi, table.mean(k)[axis]);
        }
        spec.lower[static_cast<std::size_t>(axis)] = lo - 8.0 * spread;
        spec.upper[static_cast<std::size_t>(axis)] = hi + 8.0 * spread;
        max_len = std::max(max_len, spec.upper[static_cast<std::size_t>(axis)] -
                                        spec.lower[static_cast<std::size_t>(axis)]);
    }
    // even interval count per axis, about 16 points per noise std. dev.
    auto intervals = static_cast<long long>(std::ceil(max_len / (spread / 16.0)));
    intervals += intervals % 2;
    spec.step = max_len / static_cast<double>(intervals);
    spec.rule = Rule::kSimpson;
    return spec;
}

QuadratureSpec QuadratureSpec::halved() const {
    QuadratureSpec spec = *this;
    spec.step = step / 2.0;
    return spec;
}

namespace {

// Per-axis nodes and composite weights for one quadrature axis.
struct AxisRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

AxisRule build_axis(double lo, double hi, double step, QuadratureSpec::Rule rule) {
    const double len = hi - lo;
    if (!(step > 0.0) || !(len > 0.0)) {
        throw std::invalid_argument("quadrature: window and step must be positive");
    }
    const double count_real = len / step;
    const auto count = static_cast<long long>(std::llround(count_real));
    if (count < 2 || std::abs(count_real - static_cast<double>(count)) > 1e-6) {
        throw std::invalid_argument("quadrature: step must divide the window evenly");
    }
    if (rule == QuadratureSpec::Rule::kSimpson && count % 2 != 0) {
        throw std::invalid_argument("quadrature: Simpson rule needs an even interval count");
    }
    const double h = len / static_cast<double>(count);
    AxisRule axis;
    axis.nodes.resize(static_cast<std::size_t>(count) + 1);
    axis.weights.resize(static_cast<std::size_t>(count) + 1);
    for (long long k = 0; k <= count; ++k) {
        axis.nodes[static_cast<std::size_t>(k)] =
            (lo * static_cast<double>(count - k) + hi * static_cast<double>(k)) /
            static_cast<double>(count);
        double w;
        if (rule == QuadratureSpec::Rule::kSimpson) {
            w = (k == 0 || k == count) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
            w *= h / 3.0;
        } else {
            w = (k == 0 || k == count) ? 0.5 : 1.0;
            w *= h;
        }
        axis.weights[static_cast<std::size_t>(k)] = w;
    }
    return axis;
}

void check_coverage(const PatternTable& table, const QuadratureSpec& spec) {
    const int n = table.n();
    if (n > 2) throw std::invalid_argument("quadrature: only n <= 2 tables are supported");
    if (spec.lower.size() != static_cast<std::size_t>(n) ||
        spec.upper.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("quadrature: spec has wrong number of axes");
    }
    // largest per-cell noise std. dev. over all patterns; six of them keep
    // the truncated tail below ~1e-9, far inside the 1e-3-bit budget
    double max_var = 0.0;
    const double sj2 = table.params().sigma_j * table.params().sigma_j;
    for (int i = 0; i < n; ++i) {
        const double deg = static_cast<double>(table.topology().neighbors[static_cast<std::size_t>(i)].size());
        max_var = std::max(max_var,
                           table.params().sigma_s * table.params().sigma_s + 4.0 * deg * sj2);
    }
    const double radius = 6.0 * std::sqrt(max_var);
    for (int axis = 0; axis < n; ++axis) {
        double lo = table.mean(0)[axis];
        double hi = lo;
        for (std::size_t k = 1; k < table.size(); ++k) {
            lo = std::min(lo, table.mean(k)[axis]);
            hi = std::max(hi, table.mean(k)[axis]);
        }
        const double tol = 1e-9 * (1.0 + std::abs(hi - lo) + radius);
        if (spec.lower[static_cast<std::size_t>(axis)] > lo - radius + tol ||
            spec.upper[static_cast<std::size_t>(axis)] < hi + radius - tol) {
            throw std::invalid_argument(
                "quadrature: window does not cover the mixture mass on axis " +
                std::to_string(axis));
        }
    }
}

}  // namespace

MixtureQuadrature quad_mixture_stats(const PatternTable& table, const QuadratureSpec& spec) {
    check_coverage(table, spec);
    const int n = table.n();
    DensityScratch scratch = table.make_scratch();
    MixtureQuadrature result;

    if (n == 1) {
        const AxisRule axis = build_axis(spec.lower[0], spec.upper[0], spec.step, spec.rule);
        double y[1];
        for (std::size_t k = 0; k < axis.nodes.size(); ++k) {
            y[0] = axis.nodes[k];
            const double log_p = table.mixture_log_density({y, 1}, scratch);
            const double p = std::exp(log_p);
            result.mass += axis.weights[k] * p;
            result.h_y_bits -= axis.weights[k] * p * (log_p / std::numbers::ln2);
        }
        return result;
    }

    const AxisRule axis0 = build_axis(spec.lower[0], spec.upper[0], spec.step, spec.rule);
    const AxisRule axis1 = build_axis(spec.lower[1], spec.upper[1], spec.step, spec.rule);
    double y[2];
    for (std::size_t i = 0; i < axis0.nodes.size(); ++i) {
        y[0] = axis0.nodes[i];
        double row_mass = 0.0;
        double row_ent = 0.0;
        for (std::size_t j = 0; j < axis1.nodes.size(); ++j) {
            y[1] = axis1.nodes[j];
            const double log_p = table.mixture_log_density({y, 2}, scratch);
            const double p = std::exp(log_p);
            row_mass += axis1.weights[j] * p;
            row_ent -= axis1.weights[j] * p * (log_p / std::numbers::ln2);
        }
        result.mass += axis0.weights[i] * row_mass;
        result.h_y_bits += axis0.weights[i] * row_ent;
    }
    return result;
}

double quad_symmetric_mi(const PatternTable& table, const QuadratureSpec& spec) {
    const double coarse = quad_mixture_stats(table, spec).h_y_bits;
    const double fine = quad_mixture_stats(table, spec.halved()).h_y_bits;
    if (std::abs(fine - coarse) > 1e-3) {
        throw std::runtime_error("quad_symmetric_mi: step refinement did not converge (H(Y) moved " +
                                 std::to_string(std::abs(fine - coarse)) + " bits)");
    }
    return fine - conditional_entropy_bits(table);
}

double quad_symmetric_mi(const PatternTable& table) {
    return quad_symmetric_mi(table, QuadratureSpec::defaults_for(table));
}

std::vector<SweepPoint> sweep(const GridTopology& topology, double alpha, double beta,
                              const std::vector<double>& sigma_s_list,
                              const std::vector<double>& sigma_j_list, std::int64_t t_max,
                              std::uint64_t seed, int threads) {
    if (sigma_s_list.empty() || sigma_j_list.empty()) {
        throw std::invalid_argument("sweep: sigma lists must be non-empty");
    }
    std::vector<SweepPoint> points;
    points.reserve(sigma_s_list.size() * sigma_j_list.size());
    std::uint64_t pair_index = 0;
    for (double sj : sigma_j_list) {
        for (double ss : sigma_s_list) {
            const ChannelParams params{alpha, beta, ss, sj};
            const std::uint64_t pair_seed = derive_seed(seed, pair_index++);
            points.push_back({ss, sj, mc_symmetric_mi(topology, params, t_max, pair_seed, threads)});
        }
    }
    return points;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points, int n) {
    out << "sigma_s,sigma_j,mi_bits,mi_rate,h_y_bits,h_ygx_bits,stderr_bits,t_max,seed\n";
    for (const auto& p : points) {
        const MIEstimate& e = p.estimate;
        out << format_real(p.sigma_s) << ',' << format_real(p.sigma_j) << ','
            << format_real(e.value_bits) << ',' << format_real(e.value_bits / n) << ','
            << format_real(e.h_y_bits) << ',' << format_real(e.h_y_given_x_bits) << ','
            << format_real(e.std_error_bits) << ',' << e.t_max << ',' << e.seed << '\n';
    }
}

}  // namespace tdmr
