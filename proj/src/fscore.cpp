#include "pathdist/fscore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

#include "pathdist/parallel.hpp"

namespace pathdist {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Hash of points by square cell, for radius queries.
class PointBuckets {
public:
    PointBuckets(std::span<const Point2D> points, double cell) : points_(points), cell_(cell) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            buckets_[key(cell_of(points[i].x), cell_of(points[i].y))].push_back(i);
        }
    }

    template <class Fn>
    void for_each_near(Point2D p, double r, Fn&& fn) const {
        const auto x0 = cell_of(p.x - r);
        const auto x1 = cell_of(p.x + r);
        const auto y0 = cell_of(p.y - r);
        const auto y1 = cell_of(p.y + r);
        for (auto cx = x0; cx <= x1; ++cx) {
            for (auto cy = y0; cy <= y1; ++cy) {
                const auto it = buckets_.find(key(cx, cy));
                if (it == buckets_.end()) {
                    continue;
                }
                for (std::size_t i : it->second) {
                    if (distance(points_[i], p) <= r) {
                        fn(i);
                    }
                }
            }
        }
    }

private:
    std::int64_t cell_of(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
    static std::uint64_t key(std::int64_t x, std::int64_t y) {
        return (static_cast<std::uint64_t>(x) << 32) ^ (static_cast<std::uint64_t>(y) & 0xffffffffu);
    }

    std::span<const Point2D> points_;
    double cell_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

class Sampler {
public:
    Sampler(const FScoreParams& params, Point2D seed)
        : params_(params), kept_(), grid_cell_(std::max(params.interval / 2.0, 1e-9)) {
        add(seed);
    }

    // Samples along `line` (walked from its start) whose network distance
    // start_distance + s is a multiple of the interval.
    void walk(const PolyLine& line, double start_distance) {
        const double length = line.length();
        const double eps = 1e-9 * (1.0 + params_.max_path_length);
        if (start_distance > params_.max_path_length + eps) {
            return;
        }
        auto j = static_cast<std::int64_t>(std::ceil((start_distance - eps) / params_.interval));
        for (;; ++j) {
            const double total = static_cast<double>(j) * params_.interval;
            const double s = total - start_distance;
            if (s > length + eps || total > params_.max_path_length + eps) {
                break;
            }
            add(line.point_at_arc(std::clamp(s, 0.0, length)));
        }
    }

    std::vector<Point2D> take() && { return std::move(kept_); }

private:
    void add(Point2D p) {
        const double r = params_.interval / 2.0;
        const auto cx = static_cast<std::int64_t>(std::floor(p.x / grid_cell_));
        const auto cy = static_cast<std::int64_t>(std::floor(p.y / grid_cell_));
        for (std::int64_t dx = -2; dx <= 2; ++dx) {
            for (std::int64_t dy = -2; dy <= 2; ++dy) {
                const auto it = cells_.find(key(cx + dx, cy + dy));
                if (it == cells_.end()) {
                    continue;
                }
                for (std::size_t i : it->second) {
                    if (distance(kept_[i], p) < r) {
                        return;
                    }
                }
            }
        }
        cells_[key(cx, cy)].push_back(kept_.size());
        kept_.push_back(p);
    }

    static std::uint64_t key(std::int64_t x, std::int64_t y) {
        return (static_cast<std::uint64_t>(x) << 32) ^ (static_cast<std::uint64_t>(y) & 0xffffffffu);
    }

    const FScoreParams& params_;
    std::vector<Point2D> kept_;
    double grid_cell_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

// Network distances from the initial vertex distances.
std::vector<double> network_distances(const EmbeddedGraph& g, std::vector<double> dist) {
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::size_t v = 0; v < dist.size(); ++v) {
        if (std::isfinite(dist[v])) {
            heap.emplace(dist[v], v);
        }
    }
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) {
            continue;
        }
        for (std::size_t e : g.incident(v)) {
            const std::size_t w = g.edge(e).other(v);
            const double nd = d + g.edge(e).length;
            if (nd < dist[w]) {
                dist[w] = nd;
                heap.emplace(nd, w);
            }
        }
    }
    return dist;
}

SampleSet sample_from(const EmbeddedGraph& g, Point2D seed, std::vector<double> initial,
                      std::optional<GraphLocation> seed_edge, const FScoreParams& params) {
    params.validate();
    const std::vector<double> dist = network_distances(g, std::move(initial));
    Sampler sampler(params, seed);
    if (seed_edge) {
        // Walk the seed's own edge outward in both directions.
        const Edge& e = g.edge(seed_edge->edge);
        const PolyLine& line = e.geometry;
        const double a = seed_edge->offset;
        for (double s = params.interval; s <= params.max_path_length + 1e-9; s += params.interval) {
            bool any = false;
            if (a + s <= e.length + 1e-9) {
                sampler.walk(PolyLine{line.point_at_arc(a + s)}, s);
                any = true;
            }
            if (a - s >= -1e-9) {
                sampler.walk(PolyLine{line.point_at_arc(a - s)}, s);
                any = true;
            }
            if (!any) {
                break;
            }
        }
    }
    for (std::size_t ei = 0; ei < g.edge_count(); ++ei) {
        const Edge& e = g.edge(ei);
        if (std::isfinite(dist[e.a])) {
            sampler.walk(e.geometry, dist[e.a]);
        }
        if (std::isfinite(dist[e.b])) {
            sampler.walk(g.oriented_geometry(ei, e.b), dist[e.b]);
        }
    }
    return {seed, std::move(sampler).take()};
}

// Hopcroft-Karp on the thresholded bipartite graph.
std::size_t maximum_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t right_count) {
    const std::size_t n = adj.size();
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> match_left(n, kNone);
    std::vector<std::size_t> match_right(right_count, kNone);
    std::vector<std::size_t> layer(n);
    std::size_t matched = 0;
    auto bfs = [&] {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t u = 0; u < n; ++u) {
            layer[u] = match_left[u] == kNone ? 0 : kNone;
            if (match_left[u] == kNone) {
                q.push(u);
            }
        }
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t v : adj[u]) {
                const std::size_t w = match_right[v];
                if (w == kNone) {
                    found = true;
                } else if (layer[w] == kNone) {
                    layer[w] = layer[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    };
    std::vector<std::size_t> cursor(n);
    // Iterative DFS along the BFS layers.
    auto augment = [&](std::size_t root) {
        std::vector<std::size_t> stack{root};
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            if (cursor[u] == adj[u].size()) {
                layer[u] = kNone;
                stack.pop_back();
                continue;
            }
            const std::size_t v = adj[u][cursor[u]++];
            const std::size_t w = match_right[v];
            if (w == kNone) {
                // Flip the path recorded on the stack.
                std::size_t right = v;
                for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                    const std::size_t left = *it;
                    const std::size_t previous = match_left[left];
                    match_left[left] = right;
                    match_right[right] = left;
                    right = previous;
                }
                return true;
            }
            if (layer[w] == layer[u] + 1) {
                stack.push_back(w);
            }
        }
        return false;
    };
    while (bfs()) {
        std::ranges::fill(cursor, 0);
        for (std::size_t u = 0; u < n; ++u) {
            if (match_left[u] == kNone && augment(u)) {
                ++matched;
            }
        }
    }
    return matched;
}

}  // namespace

void FScoreParams::validate() const {
    if (!(interval > 0.0) || !(matched_distance >= 0.0) || !(max_path_length >= 0.0) || !std::isfinite(interval) ||
        !std::isfinite(matched_distance) || !std::isfinite(max_path_length)) {
        throw InputError("F-score parameters must be finite, interval positive");
    }
}

SampleSet sample_neighborhood(const EmbeddedGraph& g, std::size_t seed_vertex, const FScoreParams& params) {
    std::vector<double> initial(g.vertex_count(), kInfinity);
    initial[seed_vertex] = 0.0;
    return sample_from(g, g.vertex(seed_vertex).position, std::move(initial), std::nullopt, params);
}

SampleSet sample_neighborhood(const EmbeddedGraph& g, VertexId seed, const FScoreParams& params) {
    return sample_neighborhood(g, g.vertex_index(seed), params);
}

SampleSet sample_neighborhood(const EmbeddedGraph& g, GraphLocation seed, const FScoreParams& params) {
    if (seed.edge >= g.edge_count()) {
        throw LookupError("sample_neighborhood: unknown edge");
    }
    const Edge& e = g.edge(seed.edge);
    seed.offset = std::clamp(seed.offset, 0.0, e.length);
    std::vector<double> initial(g.vertex_count(), kInfinity);
    initial[e.a] = seed.offset;
    initial[e.b] = std::min(initial[e.b], e.length - seed.offset);
    return sample_from(g, e.geometry.point_at_arc(seed.offset), std::move(initial), seed, params);
}

std::optional<GraphLocation> closest_location(const EmbeddedGraph& g, Point2D p) {
    std::optional<GraphLocation> best;
    double best_distance = kInfinity;
    for (std::size_t ei = 0; ei < g.edge_count(); ++ei) {
        const PolyLine& line = g.edge(ei).geometry;
        double walked = 0.0;
        for (std::size_t i = 0; i < line.segment_count(); ++i) {
            const Segment s = line.segment(i);
            const double t = closest_parameter(p, s);
            const double d = distance(p, s.at(t));
            if (d < best_distance) {
                best_distance = d;
                best = GraphLocation{ei, walked + t * s.length()};
            }
            walked += s.length();
        }
    }
    return best;
}

MatchCounts bottleneck_match(std::span<const Point2D> marbles, std::span<const Point2D> holes, double max_dist) {
    if (!(max_dist >= 0.0)) {
        throw InputError("bottleneck_match: max_dist must be non-negative");
    }
    std::vector<std::vector<std::size_t>> adj(marbles.size());
    const PointBuckets buckets(holes, std::max(max_dist, 1e-6));
    for (std::size_t i = 0; i < marbles.size(); ++i) {
        buckets.for_each_near(marbles[i], max_dist, [&](std::size_t j) { adj[i].push_back(j); });
        std::ranges::sort(adj[i]);
    }
    const std::size_t matched = maximum_matching(adj, holes.size());
    return {matched, marbles.size() - matched, holes.size() - matched};
}

double f_score(std::size_t matched_marbles, std::size_t total_marbles, std::size_t matched_holes,
               std::size_t total_holes) {
    if (matched_marbles > total_marbles || matched_holes > total_holes) {
        throw InputError("f_score: matched count exceeds total");
    }
    const double precision =
        total_marbles == 0 ? 0.0 : static_cast<double>(matched_marbles) / static_cast<double>(total_marbles);
    const double recall =
        total_holes == 0 ? 0.0 : static_cast<double>(matched_holes) / static_cast<double>(total_holes);
    if (precision + recall == 0.0) {
        return 0.0;
    }
    return 2.0 * precision * recall / (precision + recall);
}

FScoreResult fscore_signature(const EmbeddedGraph& g, const EmbeddedGraph& h, const FScoreParams& params,
                              std::size_t workers) {
    params.validate();
    std::vector<MatchCounts> counts(g.vertex_count());
    std::vector<std::size_t> marble_totals(g.vertex_count());
    std::vector<std::size_t> hole_totals(g.vertex_count());
    parallel_for(g.vertex_count(), workers, [&](std::size_t v) {
        const SampleSet marbles = sample_neighborhood(g, v, params);
        std::vector<Point2D> holes;
        if (const auto seed = closest_location(h, g.vertex(v).position)) {
            holes = sample_neighborhood(h, *seed, params).samples;
        }
        counts[v] = bottleneck_match(marbles.samples, holes, params.matched_distance);
        marble_totals[v] = marbles.samples.size();
        hole_totals[v] = holes.size();
    });
    FScoreResult result;
    result.vertex_scores.resize(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        result.vertex_scores[v] = f_score(counts[v].matched, marble_totals[v], counts[v].matched, hole_totals[v]);
        result.matched += counts[v].matched;
        result.total_marbles += marble_totals[v];
        result.total_holes += hole_totals[v];
    }
    result.global = f_score(result.matched, result.total_marbles, result.matched, result.total_holes);
    result.edge_scores.target = SignatureTarget::edge;
    for (const Edge& e : g.edges()) {
        result.edge_scores.entries.push_back(
            {e.id.value, e.length, 0.5 * (result.vertex_scores[e.a] + result.vertex_scores[e.b])});
    }
    return result;
}

}  // namespace pathdist
