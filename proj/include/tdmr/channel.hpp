#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tdmr/grid.hpp"
#include "tdmr/rng.hpp"

namespace tdmr {

/// Scalar parameters of the channel: y_i = alpha*x_i + beta*sum_{j in N(i)} x_j
/// + sum_{j in N(i)} |x_i - x_j| z_ij + z_i, with z_i ~ N(0, sigma_s^2) per cell
/// and z_ij = z_ji ~ N(0, sigma_j^2) per edge.
struct ChannelParams {
    double alpha = 1.5;
    double beta = 0.5;
    double sigma_s = 0.0;  // system (signal-independent) noise std. dev.
    double sigma_j = 0.0;  // edge jitter noise std. dev.
};

/// A write pattern over {+1,-1}^n.
///
/// Patterns have a canonical rank used by the pattern table: cell 0 is the
/// most significant digit with +1 < -1, so rank 0 is all-(+1), rank 2^n - 1
/// is all-(-1), and the negated pattern sits at the mirrored rank.
class BipolarPattern {
public:
    explicit BipolarPattern(std::vector<int> values);

    static BipolarPattern from_index(std::uint32_t index, int n);
    static BipolarPattern from_string(const std::string& bits);  // "+-+" style
    static BipolarPattern all_plus(int n);
    static BipolarPattern checkerboard(const GridTopology& topology);

    int size() const { return static_cast<int>(values_.size()); }
    int operator[](int i) const { return values_[i]; }
    std::uint32_t index() const;
    BipolarPattern negated() const;
    std::string to_string() const;
    Eigen::VectorXd as_vector() const;

    bool operator==(const BipolarPattern& other) const { return values_ == other.values_; }

private:
    BipolarPattern() = default;
    std::vector<std::int8_t> values_;
};

/// Noiseless readback Ax, computed cell-wise from the neighbor sums.
Eigen::VectorXd mean_readback(const GridTopology& topology, const ChannelParams& params,
                              const BipolarPattern& x);

/// Signal-dependent noise covariance S(x):
///   S_ii = sigma_s^2 + sigma_j^2 * sum_{k in N(i)} (x_i - x_k)^2
///   S_ij = sigma_j^2 * (x_i - x_j)^2 for adjacent i,j, else 0.
Eigen::MatrixXd covariance_matrix(const GridTopology& topology, const ChannelParams& params,
                                  const BipolarPattern& x);

/// Assembles y = Ax + q(x) from unit-variance draws: cell_noise has one entry
/// per cell, edge_noise one entry per edge (shared by both endpoints).
Eigen::VectorXd apply_noise(const GridTopology& topology, const ChannelParams& params,
                            const BipolarPattern& x, std::span<const double> cell_noise,
                            std::span<const double> edge_noise);

/// Draws one readback vector. Consumes exactly n + |edges| normals from rng,
/// cells first (ascending index), then edges (stable edge order).
Eigen::VectorXd sample_readback(RngStream& rng, const GridTopology& topology,
                                const ChannelParams& params, const BipolarPattern& x);

}  // namespace tdmr
