#pragma once

// Shared fixtures, generators and brute-force oracles for the test suites.
// Oracles here deliberately avoid the library's free-space code paths.

#include <cstdint>
#include <random>
#include <vector>

#include "pathdist/geometry.hpp"
#include "pathdist/graph.hpp"

namespace pathdist::testing {

inline PolyLine random_polyline(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> coord(lo, hi);
    std::vector<Point2D> pts;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({coord(rng), coord(rng)});
    }
    return PolyLine(std::move(pts));
}

/// Builds a graph from positions and (u, v) index pairs; ids are the indices.
EmbeddedGraph make_graph(const std::vector<Point2D>& positions,
                         const std::vector<std::pair<int, int>>& edges,
                         const std::vector<std::vector<Point2D>>& bends = {});

/// Square grid with n x n vertices at multiples of `spacing`; vertex id
/// = row * n + col; horizontal edges first, then vertical.
EmbeddedGraph grid_graph(int n, double spacing);

/// Star: center id 0 at the origin, leaves 1..directions.size() at the given
/// angles (degrees) and lengths.
EmbeddedGraph star_graph(const std::vector<double>& angles_deg, const std::vector<double>& lengths);

/// Random connected graph: `n` points in [0, extent]^2, a random spanning
/// tree plus `extra` random edges (no self-loops; parallel edges possible
/// only if allow_parallel). Some edges get one bend point when bends is set.
EmbeddedGraph random_graph(std::mt19937_64& rng, int n, int extra, double extent, bool bends,
                           bool allow_parallel = false);

/// Copy of g with every position jittered uniformly by up to `amount` per
/// coordinate and the listed edge ids dropped.
EmbeddedGraph jitter_graph(std::mt19937_64& rng, const EmbeddedGraph& g, double amount,
                           const std::vector<std::int64_t>& drop_edges = {});

/// Sub-polyline of `line` between arc positions s0 <= s1.
PolyLine arc_slice(const PolyLine& line, double s0, double s1);

/// Independent DFS count of link-length-k walks up to reversal:
/// (walks + palindromic walks) / 2.
std::size_t brute_force_path_count(const EmbeddedGraph& g, std::size_t k);

/// Discrete map-matching oracle: both the curve and every edge of g are
/// resampled at `spacing`; returns the bottleneck cost of the best monotone
/// coupling between the curve samples and any walk over the sample graph
/// that turns back only at vertices of g.
double dense_match_oracle(const PolyLine& curve, const EmbeddedGraph& g, double spacing);

/// Minimum Fréchet distance (by the library's two-curve routine) over every
/// vertex-path of link-length 1..max_k, each optionally trimmed at both ends
/// to sample points spaced `spacing` along the first and last edge.
double enumerated_match_upper_bound(const PolyLine& curve, const EmbeddedGraph& g, std::size_t max_k,
                                    double spacing);

}  // namespace pathdist::testing
