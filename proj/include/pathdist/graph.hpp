#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pathdist/geometry.hpp"

namespace pathdist {

/// External identifier as it appears in the input files.
template <class Tag>
struct Id {
    std::int64_t value = 0;

    friend auto operator<=>(const Id&, const Id&) = default;
};

using VertexId = Id<struct VertexTag>;
using EdgeId = Id<struct EdgeTag>;

/// Edge referencing an unknown vertex, self-loop, duplicate id.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown vertex or edge id.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct Vertex {
    VertexId id;
    Point2D position;
};

/// Undirected edge; the geometry runs from endpoint a to endpoint b.
/// Endpoints are dense vertex indices.
struct Edge {
    EdgeId id;
    std::size_t a = 0;
    std::size_t b = 0;
    PolyLine geometry;
    double length = 0.0;

    std::size_t other(std::size_t v) const { return v == a ? b : a; }
    bool is_straight() const { return geometry.size() == 2; }
};

struct GraphStats {
    std::size_t vertex_count = 0;
    std::size_t vertex_count_degree_not3 = 0;
    std::size_t edge_count = 0;
    double total_length = 0.0;
};

/// Planar embedded street-map graph with polyline edges. Vertices and edges
/// are addressed by dense indices internally; external ids are kept for I/O.
/// Immutable once built, so concurrent readers need no synchronization.
class EmbeddedGraph {
public:
    class Builder;

    EmbeddedGraph() = default;

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return vertices_.empty(); }

    const Vertex& vertex(std::size_t v) const { return vertices_[v]; }
    const Edge& edge(std::size_t e) const { return edges_[e]; }
    std::span<const Vertex> vertices() const { return vertices_; }
    std::span<const Edge> edges() const { return edges_; }

    /// Incident edge indices of vertex v, in insertion order.
    std::span<const std::size_t> incident(std::size_t v) const { return incident_[v]; }
    std::size_t degree(std::size_t v) const { return incident_[v].size(); }

    std::optional<std::size_t> find_vertex(VertexId id) const;
    std::optional<std::size_t> find_edge(EdgeId id) const;
    /// Throws LookupError for unknown ids.
    std::size_t vertex_index(VertexId id) const;
    std::size_t edge_index(EdgeId id) const;

    /// Edge geometry oriented to start at vertex `from` (one of its endpoints).
    PolyLine oriented_geometry(std::size_t e, std::size_t from) const;

    double total_length() const;

private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> incident_;
    std::unordered_map<std::int64_t, std::size_t> vertex_lookup_;
    std::unordered_map<std::int64_t, std::size_t> edge_lookup_;
};

class EmbeddedGraph::Builder {
public:
    /// Throws StructuralError on a duplicate id, InputError on a non-finite position.
    std::size_t add_vertex(VertexId id, Point2D position);
    /// interior: optional bend points strictly between the endpoints.
    /// Throws StructuralError on a dangling endpoint, self-loop or duplicate id.
    std::size_t add_edge(EdgeId id, VertexId a, VertexId b, std::vector<Point2D> interior = {});

    bool has_vertex(VertexId id) const { return graph_.find_vertex(id).has_value(); }
    EmbeddedGraph build() &&;

private:
    EmbeddedGraph graph_;
};

GraphStats graph_stats(const EmbeddedGraph& g);

/// Merges every maximal chain through degree-2 vertices into one polyline
/// edge. A cycle made only of degree-2 vertices keeps two anchor vertices so
/// that no self-loop is created. Idempotent.
EmbeddedGraph contract_degree_two(const EmbeddedGraph& g);

}  // namespace pathdist

template <class Tag>
struct std::hash<pathdist::Id<Tag>> {
    std::size_t operator()(const pathdist::Id<Tag>& id) const noexcept {
        return std::hash<std::int64_t>{}(id.value);
    }
};
