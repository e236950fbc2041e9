#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "tdmr/density.hpp"

namespace tdmr {

/// Result of one symmetric-MI estimation run. All entropies in bits.
/// value_bits is h_y_bits - h_y_given_x_bits by construction.
struct MIEstimate {
    double value_bits = 0.0;
    double h_y_bits = 0.0;
    double h_y_given_x_bits = 0.0;
    double std_error_bits = 0.0;  // standard error of the -log2 P_Y sample mean
    std::int64_t t_max = 0;
    std::uint64_t seed = 0;
};

/// Exact H(Y|X) = 2^-n sum_x (1/2) log2((2pi e)^n |S(x)|), from the cached
/// log determinants.
double conditional_entropy_bits(const PatternTable& table);

/// Monte Carlo estimate of the symmetric mutual information:
/// draw x uniformly, sample y through the channel, average -log2 P_Y(y)
/// (P_Y evaluated exactly over all 2^n patterns), subtract H(Y|X).
///
/// Trials are keyed by (seed, trial index) and reduced over fixed-size
/// blocks combined in index order, so the result is bit-identical for any
/// thread count.
MIEstimate mc_symmetric_mi(const GridTopology& topology, const ChannelParams& params,
                           std::int64_t t_max, std::uint64_t seed, int threads = 1);

/// Truncated-window quadrature controls for the low-dimensional oracle.
struct QuadratureSpec {
    enum class Rule { kTrapezoid, kSimpson };

    std::vector<double> lower;  // per axis
    std::vector<double> upper;
    double step = 0.0;
    Rule rule = Rule::kSimpson;

    /// Window [min mean - 8s, max mean + 8s] per axis, s = sqrt(sigma_s^2 +
    /// 8 sigma_j^2); step about s/16 adjusted to divide the window evenly.
    static QuadratureSpec defaults_for(const PatternTable& table);

    QuadratureSpec halved() const;
};

struct MixtureQuadrature {
    double mass = 0.0;      // integral of P_Y over the window
    double h_y_bits = 0.0;  // integral of -P_Y log2 P_Y
};

/// One quadrature pass of the mixture over the window (n <= 2).
MixtureQuadrature quad_mixture_stats(const PatternTable& table, const QuadratureSpec& spec);

/// Deterministic symmetric-MI oracle for n <= 2: H(Y) by quadrature minus the
/// exact H(Y|X). Runs the rule at step and step/2 and requires the two H(Y)
/// values to agree within 1e-3 bits; returns the finer result.
double quad_symmetric_mi(const PatternTable& table, const QuadratureSpec& spec);
double quad_symmetric_mi(const PatternTable& table);

struct SweepPoint {
    double sigma_s = 0.0;
    double sigma_j = 0.0;
    MIEstimate estimate;
};

/// One mc_symmetric_mi run per (sigma_j, sigma_s) pair, sigma_j outermost.
/// Pair p uses the derived seed derive_seed(seed, p).
std::vector<SweepPoint> sweep(const GridTopology& topology, double alpha, double beta,
                              const std::vector<double>& sigma_s_list,
                              const std::vector<double>& sigma_j_list, std::int64_t t_max,
                              std::uint64_t seed, int threads = 1);

/// CSV schema: sigma_s,sigma_j,mi_bits,mi_rate,h_y_bits,h_ygx_bits,
/// stderr_bits,t_max,seed with mi_rate = mi_bits / n.
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points, int n);

}  // namespace tdmr
