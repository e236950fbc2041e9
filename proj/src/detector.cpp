#include "tdmr/detector.hpp"

#include <array>
#include <stdexcept>

#include "tdmr/csv.hpp"

namespace tdmr {

double distance(std::span<const double> y, const PatternTable& table, std::size_t rank,
                DensityScratch& scratch) {
    return table.mahalanobis(y, rank, scratch) + table.log_det(rank);
}

double distance(std::span<const double> y, const PatternTable& table, std::size_t rank) {
    DensityScratch scratch = table.make_scratch();
    return distance(y, table, rank, scratch);
}

std::size_t ml_detect_index(std::span<const double> y, const PatternTable& table,
                            DensityScratch& scratch) {
    std::size_t best_low = 0;
    std::size_t best_high = 0;
    double best_d = distance(y, table, 0, scratch);
    for (std::size_t k = 1; k < table.size(); ++k) {
        const double d = distance(y, table, k, scratch);
        if (d < best_d) {
            best_d = d;
            best_low = k;
            best_high = k;
        } else if (d == best_d) {
            best_high = k;
        }
    }
    if (best_low == best_high) return best_low;
    // Exact ties sit on decision boundaries. Break them by rank, directed by
    // the sign of y's first nonzero component: mirrored inputs then decode to
    // mirrored ranks, since D(y|x) = D(-y|-x) bit-exactly.
    for (const double v : y) {
        if (v > 0.0) return best_low;
        if (v < 0.0) return best_high;
    }
    return best_low;  // y == 0: any choice; antisymmetry is vacuous here
}

BipolarPattern ml_detect(std::span<const double> y, const PatternTable& table) {
    DensityScratch scratch = table.make_scratch();
    return table.pattern(ml_detect_index(y, table, scratch));
}

double DecisionRaster::point(int k) const {
    // lerp form: mirrors exactly under k -> resolution-1-k when y_min == -y_max
    const int last = resolution - 1;
    return (y_min * static_cast<double>(last - k) + y_max * static_cast<double>(k)) /
           static_cast<double>(last);
}

DecisionRaster decision_raster(const PatternTable& table, double y_min, double y_max,
                               int resolution) {
    if (table.n() != 2) {
        throw std::invalid_argument("decision_raster: only two-cell tables are supported");
    }
    if (resolution < 2) {
        throw std::invalid_argument("decision_raster: resolution must be at least 2");
    }
    if (!(y_min < y_max)) {
        throw std::invalid_argument("decision_raster: empty window");
    }
    DecisionRaster raster;
    raster.y_min = y_min;
    raster.y_max = y_max;
    raster.resolution = resolution;
    raster.labels.resize(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));

    DensityScratch scratch = table.make_scratch();
    std::array<double, 2> y{};
    std::size_t idx = 0;
    for (int i = 0; i < resolution; ++i) {
        y[0] = raster.point(i);
        for (int j = 0; j < resolution; ++j) {
            y[1] = raster.point(j);
            raster.labels[idx++] =
                static_cast<std::uint32_t>(ml_detect_index(y, table, scratch));
        }
    }
    return raster;
}

void write_raster_csv(std::ostream& out, const DecisionRaster& raster,
                      const PatternTable& table) {
    out << "y1,y2,label_index,x_bits\n";
    std::size_t idx = 0;
    for (int i = 0; i < raster.resolution; ++i) {
        const double y1 = raster.point(i);
        for (int j = 0; j < raster.resolution; ++j) {
            const double y2 = raster.point(j);
            const std::uint32_t label = raster.labels[idx++];
            out << format_real(y1) << ',' << format_real(y2) << ',' << label << ','
                << table.pattern(label).to_string() << '\n';
        }
    }
}

}  // namespace tdmr
