#include "pathdist/graph.hpp"

#include <algorithm>

namespace pathdist {

std::optional<std::size_t> EmbeddedGraph::find_vertex(VertexId id) const {
    const auto it = vertex_lookup_.find(id.value);
    if (it == vertex_lookup_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<std::size_t> EmbeddedGraph::find_edge(EdgeId id) const {
    const auto it = edge_lookup_.find(id.value);
    if (it == edge_lookup_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t EmbeddedGraph::vertex_index(VertexId id) const {
    if (auto v = find_vertex(id)) {
        return *v;
    }
    throw LookupError("unknown vertex id " + std::to_string(id.value));
}

std::size_t EmbeddedGraph::edge_index(EdgeId id) const {
    if (auto e = find_edge(id)) {
        return *e;
    }
    throw LookupError("unknown edge id " + std::to_string(id.value));
}

PolyLine EmbeddedGraph::oriented_geometry(std::size_t e, std::size_t from) const {
    const Edge& edge = edges_[e];
    return from == edge.a ? edge.geometry : edge.geometry.reversed();
}

double EmbeddedGraph::total_length() const {
    double total = 0.0;
    for (const Edge& e : edges_) {
        total += e.length;
    }
    return total;
}

std::size_t EmbeddedGraph::Builder::add_vertex(VertexId id, Point2D position) {
    if (!is_finite(position)) {
        throw InputError("vertex " + std::to_string(id.value) + ": non-finite coordinate");
    }
    if (graph_.vertex_lookup_.contains(id.value)) {
        throw StructuralError("duplicate vertex id " + std::to_string(id.value));
    }
    const std::size_t index = graph_.vertices_.size();
    graph_.vertices_.push_back({id, position});
    graph_.incident_.emplace_back();
    graph_.vertex_lookup_.emplace(id.value, index);
    return index;
}

std::size_t EmbeddedGraph::Builder::add_edge(EdgeId id, VertexId a, VertexId b,
                                             std::vector<Point2D> interior) {
    if (graph_.edge_lookup_.contains(id.value)) {
        throw StructuralError("duplicate edge id " + std::to_string(id.value));
    }
    const auto ia = graph_.find_vertex(a);
    const auto ib = graph_.find_vertex(b);
    if (!ia || !ib) {
        throw StructuralError("edge " + std::to_string(id.value) + " references unknown vertex " +
                              std::to_string((ia ? b : a).value));
    }
    if (*ia == *ib) {
        throw StructuralError("edge " + std::to_string(id.value) + " is a self-loop");
    }
    PolyLine geometry;
    geometry.append(graph_.vertices_[*ia].position);
    for (const Point2D& p : interior) {
        if (!is_finite(p)) {
            throw InputError("edge " + std::to_string(id.value) + ": non-finite coordinate");
        }
        geometry.append(p);
    }
    geometry.append(graph_.vertices_[*ib].position);

    const std::size_t index = graph_.edges_.size();
    const double length = geometry.length();
    graph_.edges_.push_back({id, *ia, *ib, std::move(geometry), length});
    graph_.incident_[*ia].push_back(index);
    graph_.incident_[*ib].push_back(index);
    graph_.edge_lookup_.emplace(id.value, index);
    return index;
}

EmbeddedGraph EmbeddedGraph::Builder::build() && { return std::move(graph_); }

GraphStats graph_stats(const EmbeddedGraph& g) {
    GraphStats stats;
    stats.vertex_count = g.vertex_count();
    stats.edge_count = g.edge_count();
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (g.degree(v) != 3) {
            ++stats.vertex_count_degree_not3;
        }
    }
    stats.total_length = g.total_length();
    return stats;
}

namespace {

struct Chain {
    std::vector<std::size_t> vertices;  // first and last are anchors
    std::vector<std::size_t> edges;
};

std::size_t next_chain_edge(const EmbeddedGraph& g, std::size_t v, std::size_t came_by) {
    const auto inc = g.incident(v);
    return inc[0] == came_by ? inc[1] : inc[0];
}

Chain walk_chain(const EmbeddedGraph& g, const std::vector<bool>& anchor, std::size_t start,
                 std::size_t first_edge, std::vector<bool>& visited) {
    Chain chain;
    chain.vertices.push_back(start);
    std::size_t cur = start;
    std::size_t e = first_edge;
    while (true) {
        visited[e] = true;
        chain.edges.push_back(e);
        cur = g.edge(e).other(cur);
        chain.vertices.push_back(cur);
        if (anchor[cur]) {
            return chain;
        }
        e = next_chain_edge(g, cur, e);
    }
}

// Splits a chain whose ends coincide at its middle vertex.
std::pair<Chain, Chain> split_closed(const Chain& chain) {
    const std::size_t mid = chain.edges.size() / 2;
    Chain first;
    Chain second;
    first.vertices.assign(chain.vertices.begin(), chain.vertices.begin() + mid + 1);
    first.edges.assign(chain.edges.begin(), chain.edges.begin() + mid);
    second.vertices.assign(chain.vertices.begin() + mid, chain.vertices.end());
    second.edges.assign(chain.edges.begin() + mid, chain.edges.end());
    return {std::move(first), std::move(second)};
}

}  // namespace

EmbeddedGraph contract_degree_two(const EmbeddedGraph& g) {
    std::vector<bool> anchor(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        anchor[v] = g.degree(v) != 2;
    }
    std::vector<bool> visited(g.edge_count(), false);
    std::vector<Chain> chains;

    auto accept = [&](Chain chain) {
        if (chain.vertices.front() == chain.vertices.back()) {
            auto [first, second] = split_closed(chain);
            anchor[first.vertices.back()] = true;
            chains.push_back(std::move(first));
            chains.push_back(std::move(second));
        } else {
            chains.push_back(std::move(chain));
        }
    };

    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (!anchor[v]) {
            continue;
        }
        for (std::size_t e : g.incident(v)) {
            if (!visited[e]) {
                accept(walk_chain(g, anchor, v, e, visited));
            }
        }
    }
    // Whatever is left forms cycles of degree-2 vertices only.
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (visited[e]) {
            continue;
        }
        std::size_t start = std::min(g.edge(e).a, g.edge(e).b);
        {
            // Find the lowest vertex index on the cycle.
            std::size_t cur = g.edge(e).a;
            std::size_t edge = e;
            do {
                start = std::min(start, cur);
                cur = g.edge(edge).other(cur);
                edge = next_chain_edge(g, cur, edge);
            } while (edge != e);
        }
        anchor[start] = true;
        accept(walk_chain(g, anchor, start, g.incident(start)[0], visited));
    }

    EmbeddedGraph::Builder builder;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (anchor[v]) {
            builder.add_vertex(g.vertex(v).id, g.vertex(v).position);
        }
    }
    for (const Chain& chain : chains) {
        std::vector<Point2D> interior;
        for (std::size_t i = 0; i < chain.edges.size(); ++i) {
            const PolyLine piece = g.oriented_geometry(chain.edges[i], chain.vertices[i]);
            const auto pts = piece.points();
            for (std::size_t j = 1; j < pts.size(); ++j) {
                interior.push_back(pts[j]);
            }
        }
        interior.pop_back();  // far endpoint is added by the builder
        builder.add_edge(g.edge(chain.edges.front()).id, g.vertex(chain.vertices.front()).id,
                         g.vertex(chain.vertices.back()).id, std::move(interior));
    }
    return std::move(builder).build();
}

}  // namespace pathdist
