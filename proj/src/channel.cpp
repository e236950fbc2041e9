#include "tdmr/channel.hpp"

#include <stdexcept>

namespace tdmr {

BipolarPattern::BipolarPattern(std::vector<int> values) {
    if (values.empty()) throw std::invalid_argument("BipolarPattern: empty pattern");
    values_.reserve(values.size());
    for (int v : values) {
        if (v != 1 && v != -1) {
            throw std::invalid_argument("BipolarPattern: entries must be +1 or -1");
        }
        values_.push_back(static_cast<std::int8_t>(v));
    }
}

BipolarPattern BipolarPattern::from_index(std::uint32_t index, int n) {
    if (n < 1 || n > kMaxExhaustiveCells) {
        throw std::invalid_argument("BipolarPattern::from_index: n out of range");
    }
    if (n < 32 && index >> n) {
        throw std::invalid_argument("BipolarPattern::from_index: index out of range");
    }
    BipolarPattern p;
    p.values_.resize(n);
    for (int i = 0; i < n; ++i) {
        p.values_[i] = ((index >> (n - 1 - i)) & 1u) ? -1 : 1;
    }
    return p;
}

BipolarPattern BipolarPattern::from_string(const std::string& bits) {
    std::vector<int> v;
    v.reserve(bits.size());
    for (char c : bits) {
        if (c == '+') {
            v.push_back(1);
        } else if (c == '-') {
            v.push_back(-1);
        } else {
            throw std::invalid_argument("BipolarPattern::from_string: expected only '+'/'-'");
        }
    }
    return BipolarPattern(std::move(v));
}

BipolarPattern BipolarPattern::all_plus(int n) {
    return BipolarPattern(std::vector<int>(static_cast<std::size_t>(n), 1));
}

BipolarPattern BipolarPattern::checkerboard(const GridTopology& topology) {
    std::vector<int> v(static_cast<std::size_t>(topology.n));
    for (int r = 0; r < topology.rows; ++r) {
        for (int c = 0; c < topology.cols; ++c) {
            v[static_cast<std::size_t>(topology.cell_index(r, c))] = ((r + c) % 2 == 0) ? 1 : -1;
        }
    }
    return BipolarPattern(std::move(v));
}

std::uint32_t BipolarPattern::index() const {
    std::uint32_t k = 0;
    for (std::int8_t v : values_) k = (k << 1) | (v < 0 ? 1u : 0u);
    return k;
}

BipolarPattern BipolarPattern::negated() const {
    BipolarPattern p;
    p.values_.resize(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        p.values_[i] = static_cast<std::int8_t>(-values_[i]);
    }
    return p;
}

std::string BipolarPattern::to_string() const {
    std::string s;
    s.reserve(values_.size());
    for (std::int8_t v : values_) s.push_back(v > 0 ? '+' : '-');
    return s;
}

Eigen::VectorXd BipolarPattern::as_vector() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i) v[static_cast<Eigen::Index>(i)] = values_[i];
    return v;
}

namespace {

void check_size(const GridTopology& topology, const BipolarPattern& x, const char* where) {
    if (x.size() != topology.n) {
        throw std::invalid_argument(std::string(where) + ": pattern size does not match grid");
    }
}

}  // namespace

Eigen::VectorXd mean_readback(const GridTopology& topology, const ChannelParams& params,
                              const BipolarPattern& x) {
    check_size(topology, x, "mean_readback");
    Eigen::VectorXd y(topology.n);
    for (int i = 0; i < topology.n; ++i) {
        int s = 0;  // neighbor sum is a small exact integer
        for (int j : topology.neighbors[i]) s += x[j];
        y[i] = params.alpha * x[i] + params.beta * static_cast<double>(s);
    }
    return y;
}

Eigen::MatrixXd covariance_matrix(const GridTopology& topology, const ChannelParams& params,
                                  const BipolarPattern& x) {
    check_size(topology, x, "covariance_matrix");
    const double sig_s2 = params.sigma_s * params.sigma_s;
    const double sig_j2 = params.sigma_j * params.sigma_j;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(topology.n, topology.n);
    std::vector<double> jitter_sum(static_cast<std::size_t>(topology.n), 0.0);
    for (const auto& e : topology.edges) {
        const double d = static_cast<double>(x[e.a] - x[e.b]);  // 0 or +-2, exact
        const double d2 = d * d;
        s(e.a, e.b) = sig_j2 * d2;
        s(e.b, e.a) = sig_j2 * d2;
        jitter_sum[static_cast<std::size_t>(e.a)] += d2;
        jitter_sum[static_cast<std::size_t>(e.b)] += d2;
    }
    for (int i = 0; i < topology.n; ++i) {
        s(i, i) = sig_s2 + sig_j2 * jitter_sum[static_cast<std::size_t>(i)];
    }
    return s;
}

Eigen::VectorXd apply_noise(const GridTopology& topology, const ChannelParams& params,
                            const BipolarPattern& x, std::span<const double> cell_noise,
                            std::span<const double> edge_noise) {
    check_size(topology, x, "apply_noise");
    if (cell_noise.size() != static_cast<std::size_t>(topology.n) ||
        edge_noise.size() != topology.edges.size()) {
        throw std::invalid_argument("apply_noise: noise vector sizes do not match grid");
    }
    Eigen::VectorXd y = mean_readback(topology, params, x);
    for (int i = 0; i < topology.n; ++i) {
        y[i] += params.sigma_s * cell_noise[static_cast<std::size_t>(i)];
    }
    for (std::size_t e = 0; e < topology.edges.size(); ++e) {
        const auto& edge = topology.edges[e];
        const double w = std::abs(static_cast<double>(x[edge.a] - x[edge.b]));  // |x_i - x_j|
        if (w != 0.0) {
            const double z = params.sigma_j * (w * edge_noise[e]);
            y[edge.a] += z;
            y[edge.b] += z;  // same draw on both endpoints
        }
    }
    return y;
}

Eigen::VectorXd sample_readback(RngStream& rng, const GridTopology& topology,
                                const ChannelParams& params, const BipolarPattern& x) {
    check_size(topology, x, "sample_readback");
    std::vector<double> cell_noise(static_cast<std::size_t>(topology.n));
    std::vector<double> edge_noise(topology.edges.size());
    for (auto& z : cell_noise) z = rng.normal();
    for (auto& z : edge_noise) z = rng.normal();
    return apply_noise(topology, params, x, cell_noise, edge_noise);
}

}  // namespace tdmr
