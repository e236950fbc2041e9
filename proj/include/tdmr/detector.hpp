#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "tdmr/density.hpp"

namespace tdmr {

/// Log-likelihood distance D(y|x) = (y-Ax)^T S(x)^-1 (y-Ax) + log|S(x)|.
/// Smaller is more likely; equals -2 log P(y|x) - n log 2pi.
double distance(std::span<const double> y, const PatternTable& table, std::size_t rank,
                DensityScratch& scratch);
double distance(std::span<const double> y, const PatternTable& table, std::size_t rank);

/// Exact ML detection: rank of the pattern minimizing D(y|x). Exact ties
/// break by rank, directed by the sign of y's first nonzero component, so
/// ml_detect(-y) always decodes to the negated pattern of ml_detect(y)
/// (except at y = 0, where no pattern equals its own negation).
std::size_t ml_detect_index(std::span<const double> y, const PatternTable& table,
                            DensityScratch& scratch);
BipolarPattern ml_detect(std::span<const double> y, const PatternTable& table);

/// ML decision labels on a square raster over [y_min, y_max]^2 (two-cell
/// grids only). Grid points are endpoint-inclusive and negation-symmetric:
/// point k mirrors to point resolution-1-k exactly.
struct DecisionRaster {
    double y_min = 0.0;
    double y_max = 0.0;
    int resolution = 0;
    std::vector<std::uint32_t> labels;  // row-major: labels[i*resolution + j] for (y1_i, y2_j)

    std::uint32_t label(int i, int j) const {
        return labels[static_cast<std::size_t>(i) * static_cast<std::size_t>(resolution) +
                      static_cast<std::size_t>(j)];
    }
    double point(int k) const;
};

DecisionRaster decision_raster(const PatternTable& table, double y_min, double y_max,
                               int resolution);

/// CSV export: header "y1,y2,label_index,x_bits", rows in raster order.
void write_raster_csv(std::ostream& out, const DecisionRaster& raster, const PatternTable& table);

}  // namespace tdmr
