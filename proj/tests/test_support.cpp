#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <set>

#include "pathdist/frechet.hpp"

namespace pathdist::testing {

EmbeddedGraph make_graph(const std::vector<Point2D>& positions,
                         const std::vector<std::pair<int, int>>& edges,
                         const std::vector<std::vector<Point2D>>& bends) {
    EmbeddedGraph::Builder b;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        b.add_vertex(VertexId{static_cast<std::int64_t>(i)}, positions[i]);
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        b.add_edge(EdgeId{static_cast<std::int64_t>(i)}, VertexId{edges[i].first}, VertexId{edges[i].second},
                   i < bends.size() ? bends[i] : std::vector<Point2D>{});
    }
    return std::move(b).build();
}

EmbeddedGraph grid_graph(int n, double spacing) {
    std::vector<Point2D> pos;
    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            pos.push_back({c * spacing, r * spacing});
        }
    }
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c + 1 < n; ++c) {
            edges.emplace_back(r * n + c, r * n + c + 1);
        }
    }
    for (int r = 0; r + 1 < n; ++r) {
        for (int c = 0; c < n; ++c) {
            edges.emplace_back(r * n + c, (r + 1) * n + c);
        }
    }
    return make_graph(pos, edges);
}

EmbeddedGraph star_graph(const std::vector<double>& angles_deg, const std::vector<double>& lengths) {
    std::vector<Point2D> pos{{0.0, 0.0}};
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        const double a = angles_deg[i] * std::numbers::pi / 180.0;
        pos.push_back({lengths[i] * std::cos(a), lengths[i] * std::sin(a)});
        edges.emplace_back(0, static_cast<int>(i + 1));
    }
    return make_graph(pos, edges);
}

EmbeddedGraph random_graph(std::mt19937_64& rng, int n, int extra, double extent, bool bends,
                           bool allow_parallel) {
    std::uniform_real_distribution<double> coord(0.0, extent);
    std::vector<Point2D> pos;
    for (int i = 0; i < n; ++i) {
        pos.push_back({coord(rng), coord(rng)});
    }
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;
    auto add = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        if (a == b || (!allow_parallel && seen.contains(key))) {
            return;
        }
        seen.insert(key);
        edges.emplace_back(a, b);
    };
    for (int i = 1; i < n; ++i) {
        add(std::uniform_int_distribution<int>(0, i - 1)(rng), i);
    }
    for (int i = 0; i < extra; ++i) {
        add(std::uniform_int_distribution<int>(0, n - 1)(rng), std::uniform_int_distribution<int>(0, n - 1)(rng));
    }
    std::vector<std::vector<Point2D>> bend_points(edges.size());
    if (bends) {
        std::bernoulli_distribution coin(0.4);
        std::normal_distribution<double> offset(0.0, 0.08 * extent);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (coin(rng)) {
                const Point2D mid = lerp(pos[edges[i].first], pos[edges[i].second], 0.5);
                bend_points[i].push_back({mid.x + offset(rng), mid.y + offset(rng)});
            }
        }
    }
    return make_graph(pos, edges, bend_points);
}

EmbeddedGraph jitter_graph(std::mt19937_64& rng, const EmbeddedGraph& g, double amount,
                           const std::vector<std::int64_t>& drop_edges) {
    std::uniform_real_distribution<double> d(-amount, amount);
    EmbeddedGraph::Builder b;
    std::vector<Point2D> moved;
    for (const Vertex& v : g.vertices()) {
        const Point2D p{v.position.x + d(rng), v.position.y + d(rng)};
        moved.push_back(p);
        b.add_vertex(v.id, p);
    }
    for (const Edge& e : g.edges()) {
        if (std::ranges::find(drop_edges, e.id.value) != drop_edges.end()) {
            continue;
        }
        std::vector<Point2D> interior;
        const auto pts = e.geometry.points();
        for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
            interior.push_back({pts[i].x + d(rng), pts[i].y + d(rng)});
        }
        b.add_edge(e.id, g.vertex(e.a).id, g.vertex(e.b).id, interior);
    }
    return std::move(b).build();
}

std::size_t brute_force_path_count(const EmbeddedGraph& g, std::size_t k) {
    std::size_t walks = 0;
    std::size_t palindromes = 0;
    std::vector<std::size_t> vs;
    std::vector<std::size_t> es;
    std::function<void(std::size_t)> dfs = [&](std::size_t depth) {
        if (depth == k) {
            ++walks;
            bool pal = true;
            for (std::size_t i = 0; i < vs.size() && pal; ++i) {
                pal = vs[i] == vs[vs.size() - 1 - i];
            }
            for (std::size_t i = 0; i < es.size() && pal; ++i) {
                pal = es[i] == es[es.size() - 1 - i];
            }
            palindromes += pal ? 1 : 0;
            return;
        }
        const std::size_t v = vs.back();
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            const Edge& edge = g.edge(e);
            if (edge.a != v && edge.b != v) {
                continue;
            }
            es.push_back(e);
            vs.push_back(edge.a == v ? edge.b : edge.a);
            dfs(depth + 1);
            es.pop_back();
            vs.pop_back();
        }
    };
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        vs.assign(1, v);
        es.clear();
        dfs(0);
    }
    return (walks + palindromes) / 2;
}

double dense_match_oracle(const PolyLine& curve_in, const EmbeddedGraph& g, double spacing) {
    // Sample graph; arcs are directed sample edges.
    std::vector<Point2D> nodes;
    std::vector<bool> is_vertex;
    std::vector<std::vector<std::size_t>> out_arcs;
    std::vector<std::size_t> arc_head;
    std::vector<std::size_t> arc_tail;
    std::vector<std::size_t> vertex_node(g.vertex_count());
    auto add_node = [&](Point2D p, bool vertex) {
        nodes.push_back(p);
        is_vertex.push_back(vertex);
        out_arcs.emplace_back();
        return nodes.size() - 1;
    };
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        vertex_node[v] = add_node(g.vertex(v).position, true);
    }
    auto connect = [&](std::size_t a, std::size_t b) {
        for (auto [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
            out_arcs[from].push_back(arc_head.size());
            arc_tail.push_back(from);
            arc_head.push_back(to);
        }
    };
    for (const Edge& e : g.edges()) {
        const PolyLine dense = e.geometry.resampled(spacing);
        std::size_t prev = vertex_node[e.a];
        for (std::size_t i = 1; i + 1 < dense.size(); ++i) {
            const std::size_t next = add_node(dense[i], false);
            connect(prev, next);
            prev = next;
        }
        connect(prev, vertex_node[e.b]);
    }
    // State: curve sample i and either an arrival arc (position = its head)
    // or a start node with no arrival direction. Turning back along the
    // arrival arc is only allowed at graph vertices.
    const PolyLine curve = curve_in.resampled(spacing);
    const std::size_t m = curve.size();
    const std::size_t arcs = arc_head.size();
    const std::size_t per_row = arcs + nodes.size();
    std::vector<double> cost(m * per_row, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        cost[arcs + j] = distance(curve[0], nodes[j]);
        heap.emplace(cost[arcs + j], arcs + j);
    }
    constexpr std::size_t kNoArc = std::numeric_limits<std::size_t>::max();
    while (!heap.empty()) {
        const auto [c, state] = heap.top();
        heap.pop();
        if (c > cost[state]) {
            continue;
        }
        const std::size_t i = state / per_row;
        const std::size_t local = state % per_row;
        if (i == m - 1) {
            return c;  // first settled final state is optimal
        }
        const std::size_t arc = local < arcs ? local : kNoArc;
        const std::size_t pos = local < arcs ? arc_head[local] : local - arcs;
        auto push = [&](std::size_t ni, std::size_t nlocal, std::size_t at) {
            const std::size_t s = ni * per_row + nlocal;
            const double nc = std::max(c, distance(curve[ni], nodes[at]));
            if (nc < cost[s]) {
                cost[s] = nc;
                heap.emplace(nc, s);
            }
        };
        push(i + 1, local, pos);
        for (std::size_t a : out_arcs[pos]) {
            if (arc != kNoArc && !is_vertex[pos] && arc_head[a] == arc_tail[arc]) {
                continue;
            }
            push(i, a, arc_head[a]);
            push(i + 1, a, arc_head[a]);
        }
    }
    return std::numeric_limits<double>::infinity();
}

PolyLine arc_slice(const PolyLine& line, double s0, double s1) {
    PolyLine out;
    out.append(line.point_at_arc(s0));
    double walked = 0.0;
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        walked += distance(line[i], line[i + 1]);
        if (walked > s0 && walked < s1) {
            out.append(line[i + 1]);
        }
    }
    out.append(line.point_at_arc(s1));
    return out;
}

double enumerated_match_upper_bound(const PolyLine& curve, const EmbeddedGraph& g, std::size_t max_k,
                                    double spacing) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> vs;
    std::vector<std::size_t> es;
    std::function<void()> dfs = [&]() {
        if (!es.empty()) {
            PolyLine full;
            for (std::size_t i = 0; i < es.size(); ++i) {
                const PolyLine piece = g.oriented_geometry(es[i], vs[i]);
                for (const Point2D& p : piece.points()) {
                    full.append(p);
                }
            }
            const double total = full.length();
            const double first = g.edge(es.front()).length;
            const double last = g.edge(es.back()).length;
            for (double s0 = 0.0; s0 <= first + 1e-12; s0 += spacing) {
                for (double s1 = 0.0; s1 <= last + 1e-12; s1 += spacing) {
                    const double end = total - s1;
                    if (end < s0) {
                        continue;
                    }
                    best = std::min(best, frechet_distance(curve, arc_slice(full, s0, end), 1e-4));
                }
            }
        }
        if (es.size() == max_k) {
            return;
        }
        const std::size_t v = vs.back();
        for (std::size_t e : g.incident(v)) {
            es.push_back(e);
            vs.push_back(g.edge(e).other(v));
            dfs();
            es.pop_back();
            vs.pop_back();
        }
    };
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        vs.assign(1, v);
        es.clear();
        dfs();
    }
    return best;
}

}  // namespace pathdist::testing
