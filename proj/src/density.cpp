#include "tdmr/density.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tdmr {

namespace {

const double kLn2Pi = std::log(2.0 * std::numbers::pi);

}  // namespace

FactoredCovariance factor_covariance(const Eigen::MatrixXd& s) {
    if (s.rows() != s.cols()) {
        throw std::invalid_argument("factor_covariance: matrix must be square");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    FactoredCovariance f;
    f.lower = llt.matrixL();
    if (llt.info() != Eigen::Success) {
        throw std::domain_error("factor_covariance: matrix is not positive definite");
    }
    double log_det = 0.0;
    for (Eigen::Index k = 0; k < f.lower.rows(); ++k) {
        const double d = f.lower(k, k);
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw std::domain_error("factor_covariance: matrix is not positive definite");
        }
        log_det += std::log(d);
    }
    f.log_det = 2.0 * log_det;
    return f;
}

PatternTable::PatternTable(const GridTopology& topology, const ChannelParams& params)
    : topology_(topology), params_(params) {
    if (topology_.n < 1 || topology_.n > kMaxExhaustiveCells) {
        throw std::invalid_argument("PatternTable: grid has " + std::to_string(topology_.n) +
                                    " cells, exhaustive table is limited to " +
                                    std::to_string(kMaxExhaustiveCells));
    }
    if (!(params_.sigma_s > 0.0)) {
        throw std::invalid_argument("PatternTable: sigma_s must be positive for densities");
    }

    const int n = topology_.n;
    count_ = std::size_t{1} << n;
    factor_stride_ = static_cast<std::size_t>(n) * (n + 1) / 2;
    means_.resize(count_ * static_cast<std::size_t>(n));
    factors_.resize(count_ * factor_stride_);
    inv_diag_.resize(count_ * static_cast<std::size_t>(n));
    log_dets_.resize(count_);

    for (std::size_t k = 0; k < count_; ++k) {
        const BipolarPattern x = BipolarPattern::from_index(static_cast<std::uint32_t>(k), n);
        const Eigen::VectorXd mu = mean_readback(topology_, params_, x);
        const FactoredCovariance f = factor_covariance(covariance_matrix(topology_, params_, x));

        double* mean_row = means_.data() + k * static_cast<std::size_t>(n);
        for (int i = 0; i < n; ++i) mean_row[i] = mu[i];

        double* factor_row = factors_.data() + k * factor_stride_;
        double* inv_row = inv_diag_.data() + k * static_cast<std::size_t>(n);
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) factor_row[idx++] = f.lower(i, j);
            inv_row[i] = 1.0 / f.lower(i, i);
        }
        log_dets_[k] = f.log_det;
    }
}

BipolarPattern PatternTable::pattern(std::size_t rank) const {
    return BipolarPattern::from_index(static_cast<std::uint32_t>(rank), topology_.n);
}

Eigen::Map<const Eigen::VectorXd> PatternTable::mean(std::size_t rank) const {
    return {means_.data() + rank * static_cast<std::size_t>(topology_.n), topology_.n};
}

double PatternTable::log_det(std::size_t rank) const { return log_dets_[rank]; }

Eigen::MatrixXd PatternTable::factor(std::size_t rank) const {
    const int n = topology_.n;
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    const double* row = factors_.data() + rank * factor_stride_;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) l(i, j) = row[idx++];
    }
    return l;
}

DensityScratch PatternTable::make_scratch() const {
    DensityScratch s;
    s.solve.resize(static_cast<std::size_t>(topology_.n));
    s.log_terms.resize(count_);
    return s;
}

double PatternTable::solve_quadratic_form(std::span<const double> y, std::size_t rank,
                                          DensityScratch& scratch) const {
    const int n = topology_.n;
    const double* mu = means_.data() + rank * static_cast<std::size_t>(n);
    const double* l = factors_.data() + rank * factor_stride_;
    const double* inv = inv_diag_.data() + rank * static_cast<std::size_t>(n);
    double* w = scratch.solve.data();
    double q = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        double t = y[static_cast<std::size_t>(i)] - mu[i];
        for (int j = 0; j < i; ++j) t -= l[idx + static_cast<std::size_t>(j)] * w[j];
        idx += static_cast<std::size_t>(i) + 1;
        const double wi = t * inv[i];
        w[i] = wi;
        q += wi * wi;
    }
    return q;
}

double PatternTable::log_conditional_density(std::span<const double> y, std::size_t rank,
                                             DensityScratch& scratch) const {
    if (y.size() != static_cast<std::size_t>(topology_.n)) {
        throw std::invalid_argument("log_conditional_density: y size does not match grid");
    }
    const double q = solve_quadratic_form(y, rank, scratch);
    return -0.5 * (topology_.n * kLn2Pi + log_dets_[rank] + q);
}

double PatternTable::log_conditional_density(std::span<const double> y, std::size_t rank) const {
    DensityScratch scratch = make_scratch();
    return log_conditional_density(y, rank, scratch);
}

double PatternTable::mahalanobis(std::span<const double> y, std::size_t rank,
                                 DensityScratch& scratch) const {
    if (y.size() != static_cast<std::size_t>(topology_.n)) {
        throw std::invalid_argument("mahalanobis: y size does not match grid");
    }
    return solve_quadratic_form(y, rank, scratch);
}

double PatternTable::mixture_log_density(std::span<const double> y,
                                         DensityScratch& scratch) const {
    if (y.size() != static_cast<std::size_t>(topology_.n)) {
        throw std::invalid_argument("mixture_log_density: y size does not match grid");
    }
    double* terms = scratch.log_terms.data();
    double max_term = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < count_; ++k) {
        const double q = solve_quadratic_form(y, k, scratch);
        const double t = -0.5 * (topology_.n * kLn2Pi + log_dets_[k] + q);
        terms[k] = t;
        if (t > max_term) max_term = t;
    }
    // count_ is even (n >= 1); pair k with its mirror
    double sum = 0.0;
    for (std::size_t k = 0; k < count_ / 2; ++k) {
        sum += std::exp(terms[k] - max_term) + std::exp(terms[count_ - 1 - k] - max_term);
    }
    return max_term + std::log(sum) - topology_.n * std::numbers::ln2;
}

double PatternTable::mixture_log_density(std::span<const double> y) const {
    DensityScratch scratch = make_scratch();
    return mixture_log_density(y, scratch);
}

}  // namespace tdmr
