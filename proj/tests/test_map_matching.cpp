#include <gtest/gtest.h>

#include <random>

#include "pathdist/frechet.hpp"
#include "pathdist/map_matching.hpp"
#include "pathdist/paths.hpp"
#include "test_support.hpp"

namespace pathdist {
namespace {

using testing::grid_graph;
using testing::make_graph;
using testing::random_graph;
using testing::random_polyline;

TEST(MatchIndexTest, SplitsBendsIntoLinks) {
    const auto g = make_graph({{0, 0}, {4, 0}}, {{0, 1}}, {{{2, 2}}});
    const MatchIndex h(g);
    EXPECT_EQ(h.node_count(), 3u);
    EXPECT_EQ(h.link_count(), 2u);
    EXPECT_DOUBLE_EQ(h.nearest_distance({2, 3}), 1.0);
}

TEST(MatchIndexTest, NearestDistanceFarFromGrid) {
    const MatchIndex h(grid_graph(3, 10.0), MatchOptions{.cell_size = 5.0});
    EXPECT_DOUBLE_EQ(h.nearest_distance({5, 4}), 4.0);
    EXPECT_DOUBLE_EQ(h.nearest_distance({-300, 10}), 300.0);
}

TEST(MatchDecisionTest, EdgeOfGraphAtZero) {
    const auto g = grid_graph(3, 1.0);
    const MatchIndex h(g);
    EXPECT_TRUE(match_decision(PolyLine{{0, 0}, {1, 0}}, h, 0.0));
    EXPECT_TRUE(match_decision(PolyLine{{0, 0}, {2, 0}, {2, 2}}, h, 0.0));
    EXPECT_TRUE(match_decision(PolyLine{{0.5, 0}, {1, 0}, {1, 1.5}}, h, 1e-12));
}

TEST(MatchDecisionTest, ParallelOffsetSegment) {
    const MatchIndex h(make_graph({{0, 0}, {10, 0}}, {{0, 1}}));
    const PolyLine curve{{0, 1}, {10, 1}};
    EXPECT_FALSE(match_decision(curve, h, 0.999));
    EXPECT_TRUE(match_decision(curve, h, 1.001));
}

TEST(MatchDecisionTest, CannotJumpBetweenComponents) {
    // Two disjoint parallel segments; the curve hops from one to the other.
    const MatchIndex h(make_graph({{0, 0}, {1, 0}, {2, 3}, {3, 3}}, {{0, 1}, {2, 3}}));
    const PolyLine curve{{0, 0}, {1, 0}, {2, 3}, {3, 3}};
    EXPECT_FALSE(match_decision(curve, h, 0.5));
}

TEST(MatchDecisionTest, TurnsBackOnlyAtVertices) {
    const MatchIndex h(make_graph({{0, 0}, {10, 0}}, {{0, 1}}));
    EXPECT_TRUE(match_decision(PolyLine{{0, 0}, {10, 0}, {2, 0}}, h, 1e-9));
    // Reversing at x = 8 or x = 2 would need a turn inside the edge; the
    // best path turns at 10 and 0, two units beyond the curve.
    const PolyLine curve{{0, 0}, {8, 0}, {2, 0}, {9, 0}};
    EXPECT_FALSE(match_decision(curve, h, 1.99));
    EXPECT_TRUE(match_decision(curve, h, 2.0));
    EXPECT_NEAR(map_match_distance(curve, h, 1e-6), 2.0, 1e-6);
}

TEST(MatchDecisionTest, DoesNotTurnBackAtBendPoint) {
    // Edge 0 -> (10,0) bend -> (10,10); the curve goes to the bend and back.
    const MatchIndex h(make_graph({{0, 0}, {10, 10}}, {{0, 1}}, {{{10, 0}}}));
    const PolyLine curve{{0, 0}, {10, 0}, {0, 0}};
    EXPECT_FALSE(match_decision(curve, h, 1.0));
    const MatchIndex vertex(make_graph({{0, 0}, {10, 0}, {10, 10}}, {{0, 1}, {1, 2}}));
    EXPECT_TRUE(match_decision(curve, vertex, 1e-9));
}

TEST(MatchDecisionTest, StopsInsideEdgeWithoutTurning) {
    const MatchIndex h(make_graph({{0, 0}, {10, 0}}, {{0, 1}}));
    EXPECT_TRUE(match_decision(PolyLine{{0, 0}, {5, 1}, {5, -1}, {9, 0}}, h, 1.0));
}

TEST(MatchDecisionTest, SinglePointCurve) {
    const MatchIndex h(grid_graph(2, 4.0));
    EXPECT_TRUE(match_decision(PolyLine{{2, 1}}, h, 1.0));
    EXPECT_FALSE(match_decision(PolyLine{{2, 1.5}}, h, 1.0));
}

TEST(MapMatchTest, EmptyTargetThrows) {
    const MatchIndex h{EmbeddedGraph{}};
    EXPECT_FALSE(match_decision(PolyLine{{0, 0}, {1, 0}}, h, 10.0));
    EXPECT_THROW(map_match(PolyLine{{0, 0}, {1, 0}}, h), MatchError);
}

TEST(MapMatchTest, OffsetSegmentDistance) {
    const MatchIndex h(make_graph({{0, 0}, {10, 0}}, {{0, 1}}));
    EXPECT_NEAR(map_match_distance(PolyLine{{0, 2.5}, {10, 2.5}}, h, 1e-6), 2.5, 1e-6);
}

TEST(MapMatchTest, AgreesWithDenseOracle) {
    std::mt19937_64 rng(11);
    const double tol = 1e-3;
    const double s = 0.05;
    for (int trial = 0; trial < 12; ++trial) {
        const auto g = random_graph(rng, 7, 3, 10.0, trial % 2 == 0);
        const PolyLine curve = random_polyline(rng, 3 + trial % 3, 0.0, 10.0);
        const double value = map_match_distance(curve, MatchIndex(g), tol);
        const double oracle = testing::dense_match_oracle(curve, g, s);
        EXPECT_LE(value, oracle + tol) << "trial " << trial;
        EXPECT_GE(value + s + tol, oracle) << "trial " << trial;
    }
}

TEST(MapMatchTest, BoundedByEnumeratedPaths) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 4; ++trial) {
        const auto g = random_graph(rng, 5, 1, 10.0, false);
        const PolyLine curve = random_polyline(rng, 3, 0.0, 10.0);
        const double value = map_match_distance(curve, MatchIndex(g), 1e-4);
        EXPECT_LE(value, testing::enumerated_match_upper_bound(curve, g, 3, 0.5) + 1e-3) << "trial " << trial;
    }
}

TEST(MapMatchTest, LowerBoundedByEndpoints) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = random_graph(rng, 8, 4, 20.0, true);
        const MatchIndex h(g);
        const PolyLine curve = random_polyline(rng, 4, -5.0, 25.0);
        const double value = map_match_distance(curve, h, 1e-4);
        EXPECT_GE(value + 1e-4, h.nearest_distance(curve.front()));
        EXPECT_GE(value + 1e-4, h.nearest_distance(curve.back()));
    }
}

TEST(MapMatchPropertyTest, MonotoneInEps) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        const MatchIndex h(random_graph(rng, 8, 3, 10.0, true));
        const PolyLine curve = random_polyline(rng, 4, 0.0, 10.0);
        bool seen = false;
        for (double eps = 0.0; eps < 10.0; eps += 0.05) {
            const bool ok = match_decision(curve, h, eps);
            if (seen) {
                EXPECT_TRUE(ok) << "trial " << trial << " eps " << eps;
            }
            seen = seen || ok;
        }
        EXPECT_TRUE(seen);
    }
}

TEST(MapMatchPropertyTest, ReversalInvariant) {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 15; ++trial) {
        const MatchIndex h(random_graph(rng, 8, 3, 10.0, true));
        const PolyLine curve = random_polyline(rng, 4, 0.0, 10.0);
        EXPECT_NEAR(map_match_distance(curve, h, 1e-5), map_match_distance(curve.reversed(), h, 1e-5), 2e-5);
    }
}

TEST(MapMatchPropertyTest, SubgraphCannotDoBetter) {
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 15; ++trial) {
        const auto g = random_graph(rng, 8, 4, 10.0, false);
        EmbeddedGraph::Builder b;
        for (const Vertex& v : g.vertices()) {
            b.add_vertex(v.id, v.position);
        }
        for (std::size_t e = 0; e + 2 < g.edge_count(); ++e) {
            b.add_edge(g.edge(e).id, g.vertex(g.edge(e).a).id, g.vertex(g.edge(e).b).id);
        }
        const auto sub = std::move(b).build();
        const PolyLine curve = random_polyline(rng, 4, 0.0, 10.0);
        EXPECT_LE(map_match_distance(curve, MatchIndex(g), 1e-5),
                  map_match_distance(curve, MatchIndex(sub), 1e-5) + 2e-5);
    }
}

TEST(MapMatchPropertyTest, GridIndexMatchesExhaustiveScan) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 15; ++trial) {
        const auto g = random_graph(rng, 10, 5, 200.0, true);
        const PolyLine curve = random_polyline(rng, 5, 0.0, 200.0);
        const MatchIndex fast(g, MatchOptions{.cell_size = 10.0});
        const MatchIndex slow(g, MatchOptions{.exhaustive = true});
        EXPECT_NEAR(map_match_distance(curve, fast, 1e-5), map_match_distance(curve, slow, 1e-5), 2e-5);
    }
}

TEST(MapMatchPropertyTest, GraphPathsMatchThemselves) {
    const auto g = grid_graph(4, 3.0);
    const MatchIndex h(g);
    for (const auto& p : collect_paths(g, 3)) {
        EXPECT_LT(map_match_distance(path_geometry(g, p), h, 1e-4), 1e-4);
    }
}

TEST(MatchWitnessTest, WitnessIsWithinEpsAndOnGraph) {
    std::mt19937_64 rng(18);
    for (int trial = 0; trial < 15; ++trial) {
        const auto g = random_graph(rng, 8, 4, 10.0, true);
        const MatchIndex h(g);
        const PolyLine curve = random_polyline(rng, 4, 0.0, 10.0);
        const MatchResult r = map_match(curve, h, 1e-4, true);
        ASSERT_TRUE(r.witness.has_value());
        const PolyLine& w = *r.witness;
        EXPECT_LE(frechet_distance(curve, w, 1e-5), r.distance + 1e-4) << "trial " << trial;
        for (const Point2D& q : w.points()) {
            EXPECT_LT(h.nearest_distance(q), 1e-9);
        }
        // Consecutive witness points lie on a common link.
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            bool shared = false;
            for (std::size_t l = 0; l < h.link_count() && !shared; ++l) {
                const Segment& s = h.link(l).segment;
                shared = point_segment_distance(w[i], s) < 1e-9 && point_segment_distance(w[i + 1], s) < 1e-9;
            }
            EXPECT_TRUE(shared) << "trial " << trial << " step " << i;
        }
    }
}

TEST(MatchWitnessTest, NoWitnessBelowDistance) {
    const MatchIndex h(make_graph({{0, 0}, {10, 0}}, {{0, 1}}));
    EXPECT_FALSE(match_witness(PolyLine{{0, 1}, {10, 1}}, h, 0.5).has_value());
    EXPECT_TRUE(match_witness(PolyLine{{0, 1}, {10, 1}}, h, 1.5).has_value());
}

}  // namespace
}  // namespace pathdist
