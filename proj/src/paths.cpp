#include "pathdist/paths.hpp"

#include <algorithm>
#include <set>

namespace pathdist {

VertexPath VertexPath::reversed() const {
    return {{vertices.rbegin(), vertices.rend()}, {edges.rbegin(), edges.rend()}};
}

bool VertexPath::is_canonical() const {
    const std::size_t k = edges.size();
    for (std::size_t i = 0; i <= k; ++i) {
        const std::size_t fv = vertices[i];
        const std::size_t rv = vertices[k - i];
        if (fv != rv) {
            return fv < rv;
        }
        if (i < k) {
            const std::size_t fe = edges[i];
            const std::size_t re = edges[k - 1 - i];
            if (fe != re) {
                return fe < re;
            }
        }
    }
    return true;  // palindrome
}

bool VertexPath::contains_vertex(std::size_t v) const {
    return std::ranges::find(vertices, v) != vertices.end();
}

bool VertexPath::contains_edge(std::size_t e) const {
    return std::ranges::find(edges, e) != edges.end();
}

namespace {

void extend(const EmbeddedGraph& g, VertexPath& walk, std::size_t remaining, const PathVisitor& visit) {
    if (remaining == 0) {
        if (walk.is_canonical()) {
            visit(walk);
        }
        return;
    }
    const std::size_t tail = walk.vertices.back();
    for (std::size_t e : g.incident(tail)) {
        walk.edges.push_back(e);
        walk.vertices.push_back(g.edge(e).other(tail));
        extend(g, walk, remaining - 1, visit);
        walk.edges.pop_back();
        walk.vertices.pop_back();
    }
}

// All walks of exactly `steps` edges starting at v, as vertex/edge sequences.
std::vector<VertexPath> walks_from(const EmbeddedGraph& g, std::size_t v, std::size_t steps) {
    std::vector<VertexPath> out;
    VertexPath walk{{v}, {}};
    std::function<void(std::size_t)> rec = [&](std::size_t remaining) {
        if (remaining == 0) {
            out.push_back(walk);
            return;
        }
        const std::size_t tail = walk.vertices.back();
        for (std::size_t e : g.incident(tail)) {
            walk.edges.push_back(e);
            walk.vertices.push_back(g.edge(e).other(tail));
            rec(remaining - 1);
            walk.edges.pop_back();
            walk.vertices.pop_back();
        }
    };
    rec(steps);
    return out;
}

VertexPath canonical(VertexPath p) {
    return p.is_canonical() ? p : p.reversed();
}

// Canonical paths that have vertex v at some position.
std::set<VertexPath> through_vertex(const EmbeddedGraph& g, std::size_t v, std::size_t k) {
    std::set<VertexPath> found;
    for (std::size_t pos = 0; pos <= k; ++pos) {
        const auto before = walks_from(g, v, pos);
        const auto after = walks_from(g, v, k - pos);
        for (const VertexPath& b : before) {
            const VertexPath prefix = b.reversed();
            for (const VertexPath& a : after) {
                VertexPath p = prefix;
                p.vertices.insert(p.vertices.end(), a.vertices.begin() + 1, a.vertices.end());
                p.edges.insert(p.edges.end(), a.edges.begin(), a.edges.end());
                found.insert(canonical(std::move(p)));
            }
        }
    }
    return found;
}

}  // namespace

void enumerate_paths(const EmbeddedGraph& g, std::size_t k, const PathVisitor& visit) {
    if (k == 0) {
        throw InputError("enumerate_paths: link-length must be at least 1");
    }
    VertexPath walk;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        walk.vertices.assign(1, v);
        walk.edges.clear();
        extend(g, walk, k, visit);
    }
}

std::vector<VertexPath> collect_paths(const EmbeddedGraph& g, std::size_t k) {
    std::vector<VertexPath> out;
    enumerate_paths(g, k, [&](const VertexPath& p) { out.push_back(p); });
    return out;
}

std::size_t count_paths(const EmbeddedGraph& g, std::size_t k) {
    std::size_t n = 0;
    enumerate_paths(g, k, [&](const VertexPath&) { ++n; });
    return n;
}

std::vector<VertexPath> paths_through_vertex(const EmbeddedGraph& g, VertexId v, std::size_t k) {
    const std::size_t index = g.vertex_index(v);
    const auto found = through_vertex(g, index, k);
    return {found.begin(), found.end()};
}

std::vector<VertexPath> paths_through_edge(const EmbeddedGraph& g, EdgeId e, std::size_t k) {
    const std::size_t index = g.edge_index(e);
    std::vector<VertexPath> out;
    for (const VertexPath& p : through_vertex(g, g.edge(index).a, k)) {
        if (p.contains_edge(index)) {
            out.push_back(p);
        }
    }
    return out;
}

void validate_path(const EmbeddedGraph& g, const VertexPath& p) {
    if (p.vertices.size() != p.edges.size() + 1) {
        throw InputError("path: vertex/edge count mismatch");
    }
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        if (p.edges[i] >= g.edge_count() || p.vertices[i] >= g.vertex_count()) {
            throw InputError("path: index out of range");
        }
        const Edge& e = g.edge(p.edges[i]);
        const bool forward = e.a == p.vertices[i] && e.b == p.vertices[i + 1];
        const bool backward = e.b == p.vertices[i] && e.a == p.vertices[i + 1];
        if (!forward && !backward) {
            throw InputError("path: edge does not join consecutive vertices");
        }
    }
}

PolyLine path_geometry(const EmbeddedGraph& g, const VertexPath& p) {
    PolyLine out;
    if (p.edges.empty()) {
        out.append(g.vertex(p.vertices.front()).position);
        return out;
    }
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const PolyLine piece = g.oriented_geometry(p.edges[i], p.vertices[i]);
        for (const Point2D& q : piece.points()) {
            out.append(q);
        }
    }
    return out;
}

std::string vertex_sequence(const EmbeddedGraph& g, const VertexPath& p) {
    std::string out;
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += std::to_string(g.vertex(p.vertices[i]).id.value);
    }
    return out;
}

}  // namespace pathdist
