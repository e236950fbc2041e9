#include "tdmr/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tdmr {

GridTopology build_grid(int rows, int cols, int max_cells) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("build_grid: rows and cols must be positive (got " +
                                    std::to_string(rows) + "x" + std::to_string(cols) + ")");
    }
    const long long n = static_cast<long long>(rows) * cols;
    if (max_cells > 0 && n > max_cells) {
        throw std::invalid_argument("build_grid: " + std::to_string(n) +
                                    " cells exceeds the configured limit of " +
                                    std::to_string(max_cells));
    }

    GridTopology g;
    g.rows = rows;
    g.cols = cols;
    g.n = static_cast<int>(n);
    g.neighbors.assign(g.n, {});
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int i = g.cell_index(r, c);
            if (c + 1 < cols) {
                const int j = g.cell_index(r, c + 1);
                g.neighbors[i].push_back(j);
                g.neighbors[j].push_back(i);
                g.edges.push_back({i, j});
            }
            if (r + 1 < rows) {
                const int j = g.cell_index(r + 1, c);
                g.neighbors[i].push_back(j);
                g.neighbors[j].push_back(i);
                g.edges.push_back({i, j});
            }
        }
    }
    for (auto& adj : g.neighbors) std::sort(adj.begin(), adj.end());
    return g;
}

Eigen::MatrixXd interference_matrix(const GridTopology& topology, double alpha, double beta) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(topology.n, topology.n);
    for (int i = 0; i < topology.n; ++i) a(i, i) = alpha;
    for (const auto& e : topology.edges) {
        a(e.a, e.b) = beta;
        a(e.b, e.a) = beta;
    }
    return a;
}

}  // namespace tdmr
