#include "pathdist/map_matching.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <unordered_map>

namespace pathdist {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MatchIndex::MatchIndex(const EmbeddedGraph& h, MatchOptions options) : options_(options) {
    std::vector<std::size_t> vertex_node(h.vertex_count(), kNone);
    auto node_for_vertex = [&](std::size_t v) {
        if (vertex_node[v] == kNone) {
            vertex_node[v] = nodes_.size();
            nodes_.push_back(h.vertex(v).position);
            node_links_.emplace_back();
            bend_.push_back(false);
        }
        return vertex_node[v];
    };
    auto add_link = [&](std::size_t a, std::size_t b, std::size_t edge) {
        const Segment s{nodes_[a], nodes_[b]};
        node_links_[a].push_back(links_.size());
        node_links_[b].push_back(links_.size());
        links_.push_back({a, b, s, edge});
        segments_.push_back(s);
    };

    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        const Edge& edge = h.edge(e);
        const auto pts = edge.geometry.points();
        std::size_t prev = node_for_vertex(edge.a);
        for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
            const std::size_t bend = nodes_.size();
            nodes_.push_back(pts[i]);
            node_links_.emplace_back();
            bend_.push_back(true);
            add_link(prev, bend, e);
            prev = bend;
        }
        add_link(prev, node_for_vertex(edge.b), e);
    }

    if (!segments_.empty()) {
        bbox_lo_ = bbox_hi_ = nodes_.front();
        for (const Point2D& p : nodes_) {
            bbox_lo_ = {std::min(bbox_lo_.x, p.x), std::min(bbox_lo_.y, p.y)};
            bbox_hi_ = {std::max(bbox_hi_.x, p.x), std::max(bbox_hi_.y, p.y)};
        }
        if (!options_.exhaustive) {
            grid_ = SpatialGrid(segments_, options_.cell_size);
        }
    }
}

void MatchIndex::candidates(Point2D p, double r, std::vector<std::size_t>& out) const {
    if (options_.exhaustive) {
        for (std::size_t l = 0; l < links_.size(); ++l) {
            out.push_back(l);
        }
        return;
    }
    grid_.query_radius(p, r, out);
}

void MatchIndex::candidates(const Segment& s, double r, std::vector<std::size_t>& out) const {
    if (options_.exhaustive) {
        for (std::size_t l = 0; l < links_.size(); ++l) {
            out.push_back(l);
        }
        return;
    }
    grid_.query({std::min(s.a.x, s.b.x) - r, std::min(s.a.y, s.b.y) - r},
                {std::max(s.a.x, s.b.x) + r, std::max(s.a.y, s.b.y) + r}, out);
}

double MatchIndex::nearest_distance(Point2D p) const {
    if (links_.empty()) {
        return kInf;
    }
    auto scan = [&](const std::vector<std::size_t>& ids) {
        double best = kInf;
        for (std::size_t l : ids) {
            best = std::min(best, point_segment_distance(p, links_[l].segment));
        }
        return best;
    };
    std::vector<std::size_t> ids;
    if (!options_.exhaustive) {
        // Distance to the bounding box corner bounds the search radius.
        const double reach = std::max({distance(p, bbox_lo_), distance(p, bbox_hi_),
                                       distance(p, {bbox_lo_.x, bbox_hi_.y}),
                                       distance(p, {bbox_hi_.x, bbox_lo_.y})});
        for (double r = grid_.cell_size(); r < 2.0 * reach + grid_.cell_size(); r *= 2.0) {
            ids.clear();
            grid_.query_radius(p, r, ids);
            const double best = scan(ids);
            if (best <= r) {
                return best;
            }
        }
    }
    ids.resize(links_.size());
    for (std::size_t l = 0; l < links_.size(); ++l) {
        ids[l] = l;
    }
    return scan(ids);
}

namespace {

using Link = MatchIndex::Link;

// A target path may only reverse at a node, so reachability is tracked on
// directed links: 2 l walks link l from a to b, 2 l + 1 from b to a. The
// state on a row boundary is the smallest reachable position along the
// direction of travel; every free position after it is reachable too.
std::size_t tail(const MatchIndex& h, std::size_t d) {
    const Link& link = h.link(d / 2);
    return d % 2 == 0 ? link.a : link.b;
}

std::size_t head(const MatchIndex& h, std::size_t d) {
    const Link& link = h.link(d / 2);
    return d % 2 == 0 ? link.b : link.a;
}

// Free interval of p on link l, in the parameter of direction d.
FreeInterval directed_interval(Point2D p, const MatchIndex& h, std::size_t d, double eps) {
    const FreeInterval iv = free_interval(p, h.link(d / 2).segment, eps);
    if (iv.is_empty() || d % 2 == 0) {
        return iv;
    }
    return {1.0 - iv.hi(), 1.0 - iv.lo()};
}

Point2D point_on(const MatchIndex& h, std::size_t d, double t) {
    return lerp(h.node(tail(h, d)), h.node(head(h, d)), t);
}

// Directed link leaving node u along link l.
std::size_t leaving(const MatchIndex& h, std::size_t l, std::size_t u) {
    return h.link(l).a == u ? 2 * l : 2 * l + 1;
}

// Whether a path that arrived at its head along `in` may continue on `out`.
bool may_follow(const MatchIndex& h, std::size_t in, std::size_t out) {
    return !h.is_bend(head(h, in)) || in / 2 != out / 2;
}

struct ArcOrigin {
    double tau;
    std::size_t parent;  // arrival this one continued from; kNone if carried
};

struct LinkState {
    double t;            // smallest reachable position on the upper boundary
    std::size_t entry;   // arrival at the tail it was entered from; kNone if carried
};

struct RowTrace {
    std::unordered_map<std::size_t, ArcOrigin> arcs;
    std::unordered_map<std::size_t, LinkState> links;
};

struct Trace {
    std::unordered_map<std::size_t, double> start;
    std::vector<RowTrace> rows;
    std::vector<std::pair<std::size_t, double>> final_active;
};

// Per-thread reusable buffers. Entries are validated by stamps so nothing is
// cleared between rows or calls.
struct Scratch {
    std::uint64_t stamp = 0;
    std::vector<std::uint64_t> interval_stamp;
    std::vector<FreeInterval> interval;
    std::vector<std::uint64_t> arrive_stamp;
    std::vector<double> arrive;
    std::vector<std::uint64_t> carry_stamp;
    std::vector<double> carry;
    std::vector<std::size_t> arrived;
    std::vector<std::pair<std::size_t, double>> active;
    std::vector<std::pair<std::size_t, double>> next;
    std::vector<std::size_t> cand;
    std::vector<std::pair<double, std::size_t>> heap;

    void ensure(std::size_t nodes, std::size_t links) {
        if (interval_stamp.size() < nodes) {
            interval_stamp.resize(nodes, 0);
            interval.resize(nodes);
        }
        if (carry_stamp.size() < 2 * links) {
            arrive_stamp.resize(2 * links, 0);
            arrive.resize(2 * links, kInf);
            carry_stamp.resize(2 * links, 0);
            carry.resize(2 * links, kInf);
        }
    }
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

bool decide(const PolyLine& curve_in, const MatchIndex& h, double eps, Trace* trace) {
    validate(curve_in, "match_decision");
    if (!(eps >= 0.0)) {
        throw InputError("match_decision: eps must be non-negative");
    }
    if (h.empty()) {
        return false;
    }
    const PolyLine curve = curve_in.collapsed();
    Scratch& s = scratch();
    s.ensure(h.node_count(), h.link_count());

    // The path may start anywhere near the first point, in either direction.
    s.active.clear();
    s.cand.clear();
    h.candidates(curve.front(), eps, s.cand);
    for (std::size_t l : s.cand) {
        for (std::size_t d : {2 * l, 2 * l + 1}) {
            const FreeInterval iv = directed_interval(curve.front(), h, d, eps);
            if (!iv.is_empty()) {
                s.active.emplace_back(d, iv.lo());
                if (trace) {
                    trace->start[d] = iv.lo();
                }
            }
        }
    }
    const std::size_t rows = curve.segment_count();
    if (trace) {
        trace->rows.assign(rows, {});
    }
    if (s.active.empty()) {
        return false;
    }

    auto heap_cmp = [](const auto& x, const auto& y) { return x.first > y.first; };
    for (std::size_t i = 0; i < rows; ++i) {
        const Segment row = curve.segment(i);
        const std::uint64_t stamp = ++s.stamp;
        RowTrace* rt = trace ? &trace->rows[i] : nullptr;

        auto node_interval = [&](std::size_t n) -> const FreeInterval& {
            if (s.interval_stamp[n] != stamp) {
                s.interval_stamp[n] = stamp;
                s.interval[n] = free_interval(h.node(n), row, eps);
            }
            return s.interval[n];
        };
        auto arrived = [&](std::size_t d) { return s.arrive_stamp[d] == stamp; };
        // Arrival at head(d) along d at curve time t.
        auto relax = [&](std::size_t d, double t, std::size_t parent) {
            if (!arrived(d)) {
                s.arrived.push_back(d);
            } else if (t >= s.arrive[d]) {
                return;
            }
            s.arrive_stamp[d] = stamp;
            s.arrive[d] = t;
            s.heap.emplace_back(t, d);
            std::push_heap(s.heap.begin(), s.heap.end(), heap_cmp);
            if (rt) {
                rt->arcs[d] = {t, parent};
            }
        };

        // From a reachable point on the lower boundary the path can move
        // forward to the head node at its earliest free moment: free space
        // within a cell is convex.
        s.heap.clear();
        s.arrived.clear();
        for (const auto& [d, t] : s.active) {
            s.carry_stamp[d] = stamp;
            s.carry[d] = t;
            const FreeInterval& iv = node_interval(head(h, d));
            if (!iv.is_empty()) {
                relax(d, iv.lo(), kNone);
            }
        }
        // Earliest-arrival propagation over directed links.
        while (!s.heap.empty()) {
            std::pop_heap(s.heap.begin(), s.heap.end(), heap_cmp);
            const auto [t, in] = s.heap.back();
            s.heap.pop_back();
            if (t > s.arrive[in]) {
                continue;
            }
            const std::size_t u = head(h, in);
            for (std::size_t l : h.node_links(u)) {
                const std::size_t out = leaving(h, l, u);
                if (!may_follow(h, in, out)) {
                    continue;
                }
                const FreeInterval& iv = node_interval(head(h, out));
                if (iv.is_empty()) {
                    continue;
                }
                const double at = std::max(t, iv.lo());
                if (at <= iv.hi()) {
                    relax(out, at, in);
                }
            }
        }
        // Upper boundary: entering a directed link from an arrival at its
        // tail makes its whole free interval reachable; carrying it from
        // below keeps only the free positions at or after the lower one.
        auto entry_for = [&](std::size_t d) {
            const std::size_t u = tail(h, d);
            for (std::size_t l : h.node_links(u)) {
                const std::size_t in = l == d / 2 ? (d ^ 1) : (leaving(h, l, u) ^ 1);
                if (arrived(in) && may_follow(h, in, d)) {
                    return in;
                }
            }
            return kNone;
        };
        s.next.clear();
        s.cand.clear();
        h.candidates(row.b, eps, s.cand);
        for (std::size_t l : s.cand) {
            for (std::size_t d : {2 * l, 2 * l + 1}) {
                const FreeInterval iv = directed_interval(row.b, h, d, eps);
                if (iv.is_empty()) {
                    continue;
                }
                double best = kInf;
                std::size_t entry = kNone;
                if (s.arrived.empty() ? false : (entry = entry_for(d)) != kNone) {
                    best = iv.lo();
                } else if (s.carry_stamp[d] == stamp && s.carry[d] <= iv.hi()) {
                    best = std::max(iv.lo(), s.carry[d]);
                }
                if (best < kInf) {
                    s.next.emplace_back(d, best);
                    if (rt) {
                        rt->links[d] = {best, entry};
                    }
                }
            }
        }
        std::swap(s.active, s.next);
        if (s.active.empty()) {
            return false;
        }
    }
    if (trace) {
        trace->final_active = s.active;
    }
    return true;
}

PolyLine extract_witness(const PolyLine& curve_in, const MatchIndex& h, const Trace& trace) {
    const PolyLine curve = curve_in.collapsed();
    std::vector<Point2D> rev;
    auto [d, t] = trace.final_active.front();
    rev.push_back(point_on(h, d, t));
    for (std::size_t i = trace.rows.size(); i-- > 0;) {
        const RowTrace& rt = trace.rows[i];
        std::size_t arc = rt.links.at(d).entry;
        while (arc != kNone) {
            rev.push_back(h.node(head(h, arc)));
            const std::size_t parent = rt.arcs.at(arc).parent;
            if (parent == kNone) {
                d = arc;
            }
            arc = parent;
        }
        t = i > 0 ? trace.rows[i - 1].links.at(d).t : trace.start.at(d);
        rev.push_back(point_on(h, d, t));
    }
    PolyLine out;
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
        out.append(*it);
    }
    return out;
}

}  // namespace

bool match_decision(const PolyLine& curve, const MatchIndex& h, double eps) {
    return decide(curve, h, eps, nullptr);
}

std::optional<PolyLine> match_witness(const PolyLine& curve, const MatchIndex& h, double eps) {
    Trace trace;
    if (!decide(curve, h, eps, &trace)) {
        return std::nullopt;
    }
    return extract_witness(curve, h, trace);
}

MatchResult map_match(const PolyLine& curve_in, const MatchIndex& h, double tol, bool want_witness) {
    validate(curve_in, "map_match");
    if (!(tol > 0.0)) {
        throw InputError("map_match: tolerance must be positive");
    }
    if (h.empty()) {
        throw MatchError("no path exists: target graph has no edges");
    }
    const PolyLine curve = curve_in.collapsed();
    // Both endpoints must be matched to points of the target.
    double lo = std::max(h.nearest_distance(curve.front()), h.nearest_distance(curve.back()));
    double hi = lo;
    if (!match_decision(curve, h, lo)) {
        // A constant path at the nearest point has finite distance, so the
        // doubling search terminates.
        double step = tol;
        hi = lo + step;
        while (!match_decision(curve, h, hi)) {
            lo = hi;
            step *= 2.0;
            hi = lo + step;
        }
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (match_decision(curve, h, mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    MatchResult result{hi, std::nullopt};
    if (want_witness) {
        result.witness = match_witness(curve, h, hi);
    }
    return result;
}

}  // namespace pathdist
