#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "tdmr/channel.hpp"
#include "tdmr/grid.hpp"

namespace tdmr {

/// Cholesky factor of a covariance matrix together with its log determinant
/// (natural log). lower * lower^T reconstructs the input.
struct FactoredCovariance {
    Eigen::MatrixXd lower;
    double log_det = 0.0;
};

/// Factors a symmetric positive definite matrix. Throws std::domain_error if
/// the matrix is not positive definite (e.g. sigma_s = 0 with no active edges).
FactoredCovariance factor_covariance(const Eigen::MatrixXd& s);

/// Caller-owned scratch for density evaluations, so a shared PatternTable can
/// be used from several threads at once.
struct DensityScratch {
    std::vector<double> solve;      // length n
    std::vector<double> log_terms;  // length 2^n
};

/// All 2^n write patterns of a grid with their precomputed means, packed
/// Cholesky factors and log determinants.
///
/// Ranks follow BipolarPattern::from_index, so pattern ~k (the global sign
/// flip of pattern k) sits at rank 2^n - 1 - k. Densities are natural-log;
/// conversion to bits happens in the entropy/MI layer only.
///
/// Requires sigma_s > 0 (otherwise some covariances are singular) and
/// n <= kMaxExhaustiveCells.
class PatternTable {
public:
    PatternTable(const GridTopology& topology, const ChannelParams& params);

    const GridTopology& topology() const { return topology_; }
    const ChannelParams& params() const { return params_; }
    int n() const { return topology_.n; }
    std::size_t size() const { return count_; }
    std::size_t mirror(std::size_t rank) const { return count_ - 1 - rank; }

    BipolarPattern pattern(std::size_t rank) const;
    Eigen::Map<const Eigen::VectorXd> mean(std::size_t rank) const;
    double log_det(std::size_t rank) const;
    /// Unpacks the stored factor into a dense lower-triangular matrix.
    Eigen::MatrixXd factor(std::size_t rank) const;

    DensityScratch make_scratch() const;

    /// log P(y|x_rank): -(n/2) log 2pi - log_det/2 - ||L^-1 (y - mean)||^2 / 2,
    /// via forward substitution on the packed factor.
    double log_conditional_density(std::span<const double> y, std::size_t rank,
                                   DensityScratch& scratch) const;
    double log_conditional_density(std::span<const double> y, std::size_t rank) const;

    /// Mahalanobis form (y - mean)^T S^-1 (y - mean) for the detector.
    double mahalanobis(std::span<const double> y, std::size_t rank,
                       DensityScratch& scratch) const;

    /// log P_Y(y) = logsumexp_k log P(y|x_k) - n log 2. The shifted exponentials
    /// are summed over mirrored pattern pairs so that a global sign flip of y
    /// permutes addends only within a pair, keeping the result bit-identical.
    double mixture_log_density(std::span<const double> y, DensityScratch& scratch) const;
    double mixture_log_density(std::span<const double> y) const;

private:
    double solve_quadratic_form(std::span<const double> y, std::size_t rank,
                                DensityScratch& scratch) const;

    GridTopology topology_;
    ChannelParams params_;
    std::size_t count_ = 0;
    std::size_t factor_stride_ = 0;        // n(n+1)/2
    std::vector<double> means_;            // count x n
    std::vector<double> factors_;          // count x stride, packed row-wise lower
    std::vector<double> inv_diag_;         // count x n, reciprocals of L_kk
    std::vector<double> log_dets_;         // count
};

}  // namespace tdmr
