#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "pathdist/paths.hpp"
#include "test_support.hpp"

namespace pathdist {
namespace {

using testing::brute_force_path_count;
using testing::grid_graph;
using testing::make_graph;
using testing::star_graph;

TEST(EnumeratePathsTest, SingleEdge) {
    const auto g = make_graph({{0, 0}, {1, 0}}, {{0, 1}});
    const auto paths = collect_paths(g, 1);
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(paths[0].vertices, (std::vector<std::size_t>{0, 1}));
    // Backtracking walks <0 1 0> and <1 0 1> are their own reversals.
    EXPECT_EQ(count_paths(g, 2), 2u);
}

TEST(EnumeratePathsTest, StarWithFourLeaves) {
    const auto g = star_graph({0, 90, 180, 270}, {1, 1, 1, 1});
    // leaf-center-leaf: (16 ordered pairs + 4 palindromes) / 2 = 10;
    // center-leaf-center: 4 palindromes.
    EXPECT_EQ(count_paths(g, 2), 14u);
    std::size_t centered = 0;
    enumerate_paths(g, 2, [&](const VertexPath& p) { centered += p.vertices[1] == 0 ? 1 : 0; });
    EXPECT_EQ(centered, 10u);
    EXPECT_EQ(count_paths(g, 1), 4u);
}

TEST(EnumeratePathsTest, ZeroLinkLengthRejected) {
    EXPECT_THROW(count_paths(grid_graph(2, 1.0), 0), InputError);
}

TEST(EnumeratePathsTest, MatchesBruteForceCount) {
    const auto grid = grid_graph(6, 2.0);
    for (std::size_t k = 1; k <= 4; ++k) {
        EXPECT_EQ(count_paths(grid, k), brute_force_path_count(grid, k)) << "k=" << k;
    }
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = testing::random_graph(rng, 9, 6, 50.0, false, true);
        for (std::size_t k = 1; k <= 3; ++k) {
            EXPECT_EQ(count_paths(g, k), brute_force_path_count(g, k));
        }
    }
}

TEST(EnumeratePathsTest, NoReverseDuplicatesAndValid) {
    const auto g = grid_graph(4, 1.0);
    const auto paths = collect_paths(g, 3);
    std::set<VertexPath> seen;
    for (const auto& p : paths) {
        EXPECT_NO_THROW(validate_path(g, p));
        EXPECT_TRUE(p.is_canonical());
        EXPECT_EQ(p.link_length(), 3u);
        EXPECT_TRUE(seen.insert(p).second);
        if (p.reversed() != p) {
            EXPECT_FALSE(seen.contains(p.reversed()));
        }
    }
    for (const auto& p : paths) {
        EXPECT_TRUE(seen.contains(p) || seen.contains(p.reversed()));
    }
}

TEST(EnumeratePathsTest, DeterministicOrder) {
    const auto g = grid_graph(4, 1.0);
    EXPECT_EQ(collect_paths(g, 3), collect_paths(g, 3));
}

TEST(PathsThroughTest, MatchesFilteredEnumeration) {
    const auto g = grid_graph(4, 1.0);
    const auto all = collect_paths(g, 3);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        std::vector<VertexPath> expected;
        std::ranges::copy_if(all, std::back_inserter(expected), [&](const VertexPath& p) { return p.contains_vertex(v); });
        std::ranges::sort(expected);
        EXPECT_EQ(paths_through_vertex(g, g.vertex(v).id, 3), expected) << "vertex " << v;
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        std::vector<VertexPath> expected;
        std::ranges::copy_if(all, std::back_inserter(expected), [&](const VertexPath& p) { return p.contains_edge(e); });
        std::ranges::sort(expected);
        EXPECT_EQ(paths_through_edge(g, g.edge(e).id, 3), expected) << "edge " << e;
    }
}

TEST(PathsThroughTest, EdgePathsAreInBothEndpointSets) {
    const auto g = grid_graph(5, 1.0);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const auto through_e = paths_through_edge(g, g.edge(e).id, 3);
        const auto through_a = paths_through_vertex(g, g.vertex(g.edge(e).a).id, 3);
        const auto through_b = paths_through_vertex(g, g.vertex(g.edge(e).b).id, 3);
        for (const auto& p : through_e) {
            EXPECT_TRUE(std::ranges::binary_search(through_a, p));
            EXPECT_TRUE(std::ranges::binary_search(through_b, p));
        }
    }
}

TEST(PathsThroughTest, UnknownIdThrows) {
    const auto g = grid_graph(2, 1.0);
    EXPECT_THROW(paths_through_vertex(g, VertexId{99}, 2), LookupError);
    EXPECT_THROW(paths_through_edge(g, EdgeId{99}, 2), LookupError);
}

TEST(PathGeometryTest, JoinsOrientedEdges) {
    const auto g = make_graph({{0, 0}, {2, 0}, {2, 2}}, {{1, 0}, {1, 2}}, {{}, {{3, 1}}});
    const VertexPath p{{0, 1, 2}, {0, 1}};
    EXPECT_EQ(path_geometry(g, p), (PolyLine{{0, 0}, {2, 0}, {3, 1}, {2, 2}}));
    EXPECT_EQ(path_geometry(g, p.reversed()), (PolyLine{{2, 2}, {3, 1}, {2, 0}, {0, 0}}));
    EXPECT_EQ(vertex_sequence(g, p), "0 1 2");
}

TEST(PathGeometryTest, BacktrackKeepsTurningPoint) {
    const auto g = make_graph({{0, 0}, {1, 0}}, {{0, 1}});
    const VertexPath p{{0, 1, 0}, {0, 0}};
    EXPECT_EQ(path_geometry(g, p), (PolyLine{{0, 0}, {1, 0}, {0, 0}}));
}

TEST(ValidatePathTest, RejectsBrokenPath) {
    const auto g = grid_graph(3, 1.0);
    EXPECT_THROW(validate_path(g, VertexPath{{0, 2}, {0}}), InputError);
    EXPECT_THROW(validate_path(g, VertexPath{{0, 1}, {}}), InputError);
}

}  // namespace
}  // namespace pathdist
