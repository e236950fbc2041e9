#pragma once

#include <Eigen/Core>
#include <vector>

namespace tdmr {

/// Largest cell count for which the exhaustive 2^n pattern machinery
/// (pattern tables, exact P_Y sums, conditional entropy) is allowed.
inline constexpr int kMaxExhaustiveCells = 20;

/// Rectangular writable region with 4-adjacency.
///
/// Cells are indexed 0-based in row-major order; CSV headers and logs label
/// them 1-based, so external cell k is internal k-1. Cells outside the
/// region simply do not exist: no wraparound, and border cells have fewer
/// neighbors.
struct GridTopology {
    struct Edge {
        int a;  // lower cell index
        int b;  // higher cell index
    };

    int rows = 0;
    int cols = 0;
    int n = 0;  // rows * cols
    std::vector<std::vector<int>> neighbors;  // sorted adjacency lists
    std::vector<Edge> edges;                  // stable order: row-major, right then down

    int cell_index(int r, int c) const { return r * cols + c; }
};

/// Builds the topology for a rows x cols region.
///
/// If max_cells > 0, rejects regions with more than max_cells cells (used by
/// callers that will go on to build exhaustive pattern tables).
GridTopology build_grid(int rows, int cols, int max_cells = 0);

/// Dense interference matrix: alpha on the diagonal, beta on adjacent pairs.
Eigen::MatrixXd interference_matrix(const GridTopology& topology, double alpha, double beta);

}  // namespace tdmr
