#include <doctest.h>

#include <algorithm>
#include <set>

#include "tdmr/grid.hpp"

using namespace tdmr;

TEST_CASE("5x5 grid adjacency of the center-region cell 13 (1-based)") {
    const GridTopology g = build_grid(5, 5);
    // 1-based cell 13 is internal 12; its neighbors {8,12,14,18} map to
    // internal {7,11,13,17}
    CHECK(g.neighbors[12] == std::vector<int>{7, 11, 13, 17});
}

TEST_CASE("smallest connected grid") {
    const GridTopology g = build_grid(1, 2);
    CHECK(g.n == 2);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].a == 0);
    CHECK(g.edges[0].b == 1);
    CHECK(g.neighbors[0] == std::vector<int>{1});
    CHECK(g.neighbors[1] == std::vector<int>{0});
}

TEST_CASE("3x3 grid has 12 edges") {
    CHECK(build_grid(3, 3).edges.size() == 12);
}

TEST_CASE("adjacency symmetry, degree classes and edge count for all small grids") {
    for (int rows = 1; rows <= 6; ++rows) {
        for (int cols = 1; cols <= 6; ++cols) {
            const GridTopology g = build_grid(rows, cols);
            CHECK(g.n == rows * cols);
            CHECK(static_cast<int>(g.edges.size()) == rows * (cols - 1) + cols * (rows - 1));

            std::set<std::pair<int, int>> edge_set;
            for (const auto& e : g.edges) {
                CHECK(e.a < e.b);
                edge_set.insert({e.a, e.b});
            }
            CHECK(edge_set.size() == g.edges.size());

            for (int i = 0; i < g.n; ++i) {
                for (int j : g.neighbors[i]) {
                    CHECK(i != j);
                    const auto& back = g.neighbors[j];
                    CHECK(std::find(back.begin(), back.end(), i) != back.end());
                }
                const auto degree = g.neighbors[i].size();
                if (rows >= 2 && cols >= 2) {
                    // corner / side / interior
                    CHECK(degree >= 2);
                    CHECK(degree <= 4);
                } else if (g.n >= 2) {
                    // strip grids: ends have one neighbor
                    CHECK(degree >= 1);
                    CHECK(degree <= 2);
                }
            }
        }
    }
}

TEST_CASE("build_grid rejects empty and over-cap regions") {
    CHECK_THROWS_AS(build_grid(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(3, 7, kMaxExhaustiveCells), std::invalid_argument);
    CHECK_NOTHROW(build_grid(4, 5, kMaxExhaustiveCells));
    CHECK_NOTHROW(build_grid(5, 5));  // no cap configured: geometry-only uses
}

TEST_CASE("interference matrix of the two-cell model") {
    const GridTopology g = build_grid(1, 2);
    const Eigen::MatrixXd a = interference_matrix(g, 1.5, 0.5);
    CHECK(a(0, 0) == 1.5);
    CHECK(a(1, 1) == 1.5);
    CHECK(a(0, 1) == 0.5);
    CHECK(a(1, 0) == 0.5);
}

TEST_CASE("interference matrix with beta = 0 is alpha * identity") {
    const GridTopology g = build_grid(3, 4);
    const Eigen::MatrixXd a = interference_matrix(g, 0.7, 0.0);
    CHECK(a == Eigen::MatrixXd(0.7 * Eigen::MatrixXd::Identity(12, 12)));
}

TEST_CASE("interference matrix row sum at an interior cell counts 4 neighbors") {
    const GridTopology g = build_grid(3, 3);
    const Eigen::MatrixXd a = interference_matrix(g, 1.0, 0.5);
    CHECK(a.row(g.cell_index(1, 1)).sum() == 3.0);
}

TEST_CASE("interference matrix is bitwise symmetric") {
    const GridTopology g = build_grid(4, 5);
    const Eigen::MatrixXd a = interference_matrix(g, 1.3, 0.21);
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            CHECK(a(i, j) == a(j, i));
        }
    }
}
