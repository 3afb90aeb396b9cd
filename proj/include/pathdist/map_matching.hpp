#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "pathdist/frechet.hpp"
#include "pathdist/graph.hpp"
#include "pathdist/spatial_grid.hpp"

namespace pathdist {

/// Raised when a matching query has no admissible answer (empty target graph).
class MatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MatchOptions {
    /// Bucket size of the spatial index over the target's segments (meters).
    double cell_size = 50.0;
    /// Scan every segment instead of consulting the spatial index.
    bool exhaustive = false;
};

/// Target graph prepared for Fréchet map-matching: every edge polyline is
/// split into straight links between nodes (graph vertices plus interior bend
/// points), with a spatial index over the links. Immutable; share freely
/// between threads.
class MatchIndex {
public:
    explicit MatchIndex(const EmbeddedGraph& h, MatchOptions options = {});

    struct Link {
        std::size_t a;
        std::size_t b;
        Segment segment;
        std::size_t edge;  // owning edge of the source graph
    };

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t link_count() const { return links_.size(); }
    Point2D node(std::size_t n) const { return nodes_[n]; }
    const Link& link(std::size_t l) const { return links_[l]; }
    std::span<const std::size_t> node_links(std::size_t n) const { return node_links_[n]; }
    /// True for interior bend points, where a path may not turn back.
    bool is_bend(std::size_t n) const { return bend_[n]; }
    bool empty() const { return links_.empty(); }

    /// Links that may lie within r of p (superset; callers test exactly).
    void candidates(Point2D p, double r, std::vector<std::size_t>& out) const;
    /// Links that may lie within r of segment s.
    void candidates(const Segment& s, double r, std::vector<std::size_t>& out) const;

    /// Distance from p to the nearest point of the graph; infinity if empty.
    double nearest_distance(Point2D p) const;

private:
    std::vector<Point2D> nodes_;
    std::vector<Link> links_;
    std::vector<std::vector<std::size_t>> node_links_;
    std::vector<bool> bend_;
    std::vector<Segment> segments_;
    SpatialGrid grid_;
    MatchOptions options_;
    Point2D bbox_lo_{};
    Point2D bbox_hi_{};
};

/// True iff some path in the target (starting and ending anywhere on its
/// edges, revisits allowed, turning back only at graph vertices) is within
/// Fréchet distance eps of curve.
/// Returns false on an empty target.
bool match_decision(const PolyLine& curve, const MatchIndex& h, double eps);

/// Same decision, also producing one witness path of the target whose
/// Fréchet distance to curve is at most eps. nullopt when the decision fails.
std::optional<PolyLine> match_witness(const PolyLine& curve, const MatchIndex& h, double eps);

struct MatchResult {
    double distance = 0.0;
    /// Present when requested: a target path realising `distance`.
    std::optional<PolyLine> witness;
};

/// Map-matching distance to within tol: the infimum over all target paths
/// of their Fréchet distance to curve. Throws MatchError on an empty target.
MatchResult map_match(const PolyLine& curve, const MatchIndex& h, double tol = kDefaultTolerance,
                      bool want_witness = false);

inline double map_match_distance(const PolyLine& curve, const MatchIndex& h,
                                 double tol = kDefaultTolerance) {
    return map_match(curve, h, tol).distance;
}

}  // namespace pathdist
