#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathdist/map_matching.hpp"
#include "pathdist/paths.hpp"
#include "pathdist/signature.hpp"

namespace pathdist {

enum class PercentileMode { weighted, unweighted };

struct DistanceOptions {
    double tol = kDefaultTolerance;
    std::size_t workers = 1;
    /// Paths per work unit and per checkpoint file.
    std::size_t chunk_size = 256;
    MatchOptions match;
    /// When set, per-chunk results are written here as they complete and
    /// reused by later runs over the same inputs.
    std::optional<std::filesystem::path> checkpoint_dir;
    /// Keep only paths whose interior vertices are separated at d = Δ3 and
    /// do not have degree three.
    bool strict = false;
    /// Scan resolution for intersection radii of polyline edges.
    std::size_t radius_steps = 256;
};

struct PathMatch {
    VertexPath path;
    double length = 0.0;
    double distance = 0.0;
};

struct DistanceSummary {
    std::size_t path_count = 0;
    double max = 0.0;
    double p90_weighted = 0.0;
    double p90_unweighted = 0.0;
    double mean_weighted = 0.0;

    double p90(PercentileMode mode) const {
        return mode == PercentileMode::weighted ? p90_weighted : p90_unweighted;
    }
};

struct PathDistanceReport {
    std::size_t k = 0;
    std::string direction = "G->H";
    std::vector<PathMatch> per_path;
    DistanceSummary summary;
    /// Strict mode only: the separation scale d (Δ3) and the diagnostic
    /// upper bound 2 r_d + d over the vertices that satisfy the hypotheses.
    std::optional<double> strict_scale;
    std::optional<double> approximation_bound;
};

/// Smallest value whose cumulative weight reaches fraction q of the total.
/// Throws InputError on empty input or non-positive total weight.
double weighted_quantile(std::span<const double> values, std::span<const double> weights, double q);

DistanceSummary summarize(std::span<const PathMatch> matches);

/// Map-matching distance of every path into h, in path order.
std::vector<double> match_paths(const EmbeddedGraph& g, std::span<const VertexPath> paths, const MatchIndex& h,
                                const DistanceOptions& options);

/// Directed distance from Π^k of g into all paths of h.
PathDistanceReport directed_path_distance(const EmbeddedGraph& g, const EmbeddedGraph& h, std::size_t k,
                                          const DistanceOptions& options = {});
PathDistanceReport directed_path_distance(const EmbeddedGraph& g, const MatchIndex& h, std::size_t k,
                                          const DistanceOptions& options = {});

/// Max of both directed distances.
double undirected_path_distance(const EmbeddedGraph& g, const EmbeddedGraph& h, std::size_t k,
                                const DistanceOptions& options = {});

/// Local signatures from a finished report: each entry is the max distance
/// over the report's paths through that edge (vertex).
SignatureMap edge_signature(const EmbeddedGraph& g, const PathDistanceReport& report);
SignatureMap vertex_signature(const EmbeddedGraph& g, const PathDistanceReport& report);
SignatureMap edge_signature(const EmbeddedGraph& g, const EmbeddedGraph& h, std::size_t k,
                            const DistanceOptions& options = {});
SignatureMap vertex_signature(const EmbeddedGraph& g, const EmbeddedGraph& h, std::size_t k,
                              const DistanceOptions& options = {});

struct RadiusOptions {
    std::size_t scan_steps = 256;
    /// Use the scan even when every incident edge is straight.
    bool force_numeric = false;
};

/// Smallest ball radius at v for which every incident edge leaves the ball
/// and the first exit points are pairwise more than 2d apart; infinity if
/// no such radius exists. A degree-one vertex has radius d when its edge
/// reaches farther than d from it, else infinity.
double intersection_radius(const EmbeddedGraph& g, std::size_t v, double d, const RadiusOptions& options = {});
double intersection_radius(const EmbeddedGraph& g, VertexId v, double d, const RadiusOptions& options = {});

/// First point along edge e (walked from endpoint `from`) at distance r from
/// that endpoint; nullopt if the edge never gets that far.
std::optional<Point2D> first_exit_point(const EmbeddedGraph& g, std::size_t e, std::size_t from, double r);

struct SeparationReport {
    double d = 0.0;
    /// Intersection radius per vertex index (infinity when not separated).
    std::vector<double> radius;
    std::size_t separated_count = 0;
    std::size_t vertex_count = 0;
};

SeparationReport separation_report(const EmbeddedGraph& g, double d, const RadiusOptions& options = {});

struct SeparationCensus {
    /// Δ1, Δ2, Δ3 of g into h.
    std::array<double, 3> distances{};
    std::array<SeparationReport, 3> reports;
};

SeparationCensus separation_census(const EmbeddedGraph& g, const EmbeddedGraph& h,
                                   const DistanceOptions& options = {},
                                   const RadiusOptions& radius_options = {});

}  // namespace pathdist
