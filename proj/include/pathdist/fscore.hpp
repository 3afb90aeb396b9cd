#pragma once

#include <span>
#include <vector>

#include "pathdist/graph.hpp"
#include "pathdist/signature.hpp"

namespace pathdist {

struct FScoreParams {
    /// Spacing of samples along the walks, in meters.
    double interval = 5.0;
    /// Largest distance between a matched sample pair, in meters.
    double matched_distance = 20.0;
    /// Exploration radius from the seed, measured along the edges.
    double max_path_length = 300.0;

    void validate() const;
};

/// Point on an edge at arc length `offset` from its endpoint a.
struct GraphLocation {
    std::size_t edge = 0;
    double offset = 0.0;
};

struct SampleSet {
    Point2D seed;
    std::vector<Point2D> samples;
};

/// Samples every point at a network distance from the seed that is a
/// multiple of the interval and at most max_path_length, walking all edges
/// in both directions; samples closer than interval/2 to an earlier one are
/// dropped. Throws LookupError for an unknown seed id.
SampleSet sample_neighborhood(const EmbeddedGraph& g, VertexId seed, const FScoreParams& params);
SampleSet sample_neighborhood(const EmbeddedGraph& g, std::size_t seed_vertex, const FScoreParams& params);
SampleSet sample_neighborhood(const EmbeddedGraph& g, GraphLocation seed, const FScoreParams& params);

/// Closest point of g's edges to p; nullopt when g has no edges.
std::optional<GraphLocation> closest_location(const EmbeddedGraph& g, Point2D p);

struct MatchCounts {
    std::size_t matched = 0;
    std::size_t unmatched_marbles = 0;
    std::size_t unmatched_holes = 0;
};

/// Maximum-cardinality one-to-one matching between marbles and holes using
/// only pairs at distance <= max_dist.
MatchCounts bottleneck_match(std::span<const Point2D> marbles, std::span<const Point2D> holes, double max_dist);

/// Harmonic mean of precision (matched marbles / marbles) and recall
/// (matched holes / holes); 0 when both are 0. Throws InputError when a
/// matched count exceeds its total.
double f_score(std::size_t matched_marbles, std::size_t total_marbles, std::size_t matched_holes,
               std::size_t total_holes);

struct FScoreResult {
    /// Per-vertex score of g, seeded at each vertex (marbles from g, holes
    /// from h around the closest point of h).
    std::vector<double> vertex_scores;
    /// Mean of the two endpoint scores per edge of g.
    SignatureMap edge_scores;
    std::size_t matched = 0;
    std::size_t total_marbles = 0;
    std::size_t total_holes = 0;
    /// Score of the summed tallies over all seeds.
    double global = 0.0;
};

FScoreResult fscore_signature(const EmbeddedGraph& g, const EmbeddedGraph& h, const FScoreParams& params,
                              std::size_t workers = 1);

}  // namespace pathdist
