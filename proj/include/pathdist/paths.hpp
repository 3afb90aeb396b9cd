#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pathdist/graph.hpp"

namespace pathdist {

/// Walk of link-length k through a graph: k+1 vertex indices joined by k
/// edge indices. Vertices and edges may repeat.
struct VertexPath {
    std::vector<std::size_t> vertices;
    std::vector<std::size_t> edges;

    std::size_t link_length() const { return edges.size(); }
    VertexPath reversed() const;
    /// True if this orientation is the representative of {p, reverse(p)}:
    /// the interleaved (v0, e0, v1, ..., vk) sequence is not lexicographically
    /// greater than that of the reverse.
    bool is_canonical() const;
    bool contains_vertex(std::size_t v) const;
    bool contains_edge(std::size_t e) const;

    friend bool operator==(const VertexPath&, const VertexPath&) = default;
    friend auto operator<=>(const VertexPath&, const VertexPath&) = default;
};

using PathVisitor = std::function<void(const VertexPath&)>;

/// Streams every link-length-k path of g once per reversal class, in a
/// deterministic order (start vertex index, then incident-edge order).
/// Backtracking walks such as <u v u> are included.
void enumerate_paths(const EmbeddedGraph& g, std::size_t k, const PathVisitor& visit);
std::vector<VertexPath> collect_paths(const EmbeddedGraph& g, std::size_t k);
std::size_t count_paths(const EmbeddedGraph& g, std::size_t k);

/// Canonical link-length-k paths containing vertex v (resp. traversing edge
/// e) at any position, sorted. Throws LookupError on an unknown id.
std::vector<VertexPath> paths_through_vertex(const EmbeddedGraph& g, VertexId v, std::size_t k);
std::vector<VertexPath> paths_through_edge(const EmbeddedGraph& g, EdgeId e, std::size_t k);

/// Throws InputError unless consecutive vertices are joined by the listed edges.
void validate_path(const EmbeddedGraph& g, const VertexPath& p);

/// Oriented concatenation of the edge polylines; junction points appear once.
PolyLine path_geometry(const EmbeddedGraph& g, const VertexPath& p);

/// External vertex ids joined by spaces, e.g. "4 9 12".
std::string vertex_sequence(const EmbeddedGraph& g, const VertexPath& p);

}  // namespace pathdist
