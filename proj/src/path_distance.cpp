#include "pathdist/path_distance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "pathdist/format.hpp"
#include "pathdist/graph_io.hpp"
#include "pathdist/parallel.hpp"

namespace pathdist {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// FNV-1a over the bit patterns of the inputs that determine a chunk's results.
class Fingerprint {
public:
    void add(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            hash_ ^= (v >> (8 * i)) & 0xffu;
            hash_ *= 0x100000001b3ull;
        }
    }
    void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
    void add(Point2D p) {
        add(p.x);
        add(p.y);
    }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

std::uint64_t index_fingerprint(const MatchIndex& h) {
    Fingerprint f;
    f.add(static_cast<std::uint64_t>(h.node_count()));
    for (std::size_t n = 0; n < h.node_count(); ++n) {
        f.add(h.node(n));
    }
    for (std::size_t l = 0; l < h.link_count(); ++l) {
        f.add(static_cast<std::uint64_t>(h.link(l).a));
        f.add(static_cast<std::uint64_t>(h.link(l).b));
    }
    return f.value();
}

std::optional<std::vector<double>> read_checkpoint(const std::filesystem::path& file, std::uint64_t fingerprint,
                                                   std::size_t begin, std::size_t end) {
    std::ifstream in(file);
    if (!in) {
        return std::nullopt;
    }
    std::string line;
    if (!std::getline(in, line) || line != fmt::format("# {:016x}", fingerprint)) {
        return std::nullopt;
    }
    std::getline(in, line);  // header
    std::vector<double> values;
    try {
        while (std::getline(in, line)) {
            const auto fields = split_csv_line(line);
            if (fields.size() != 2 || parse_int(fields[0], file.string()) != static_cast<std::int64_t>(begin + values.size())) {
                return std::nullopt;
            }
            values.push_back(parse_double(fields[1], file.string()));
        }
    } catch (const InputError&) {
        return std::nullopt;
    }
    if (values.size() != end - begin) {
        return std::nullopt;
    }
    return values;
}

void write_checkpoint(const std::filesystem::path& file, std::uint64_t fingerprint, std::size_t begin,
                      std::span<const double> values) {
    const std::filesystem::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << fmt::format("# {:016x}\n", fingerprint) << "path_index,match_distance_m\n";
        for (std::size_t i = 0; i < values.size(); ++i) {
            out << begin + i << ',' << format_number(values[i]) << '\n';
        }
        if (!out) {
            throw InputError(fmt::format("cannot write checkpoint {}", tmp.string()));
        }
    }
    std::filesystem::rename(tmp, file);
}

std::vector<double> match_paths_tagged(const EmbeddedGraph& g, std::span<const VertexPath> paths,
                                       const MatchIndex& h, const DistanceOptions& options,
                                       const std::string& tag) {
    if (!(options.tol > 0.0)) {
        throw InputError("tolerance must be positive");
    }
    const std::size_t chunk = std::max<std::size_t>(options.chunk_size, 1);
    const std::size_t chunks = (paths.size() + chunk - 1) / chunk;
    std::vector<double> result(paths.size());
    std::uint64_t base = 0;
    if (options.checkpoint_dir) {
        std::filesystem::create_directories(*options.checkpoint_dir);
        base = index_fingerprint(h);
    }
    parallel_for(chunks, options.workers, [&](std::size_t c) {
        const std::size_t begin = c * chunk;
        const std::size_t end = std::min(paths.size(), begin + chunk);
        std::vector<PolyLine> curves;
        curves.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) {
            curves.push_back(path_geometry(g, paths[i]));
        }
        std::filesystem::path file;
        std::uint64_t fingerprint = 0;
        if (options.checkpoint_dir) {
            Fingerprint f;
            f.add(base);
            f.add(options.tol);
            for (const PolyLine& curve : curves) {
                f.add(static_cast<std::uint64_t>(curve.size()));
                for (const Point2D& p : curve.points()) {
                    f.add(p);
                }
            }
            fingerprint = f.value();
            file = *options.checkpoint_dir / fmt::format("{}-{:06}.csv", tag, c);
            if (auto cached = read_checkpoint(file, fingerprint, begin, end)) {
                std::ranges::copy(*cached, result.begin() + static_cast<std::ptrdiff_t>(begin));
                return;
            }
        }
        for (std::size_t i = begin; i < end; ++i) {
            result[i] = map_match_distance(curves[i - begin], h, options.tol);
        }
        if (options.checkpoint_dir) {
            write_checkpoint(file, fingerprint, begin,
                             std::span(result).subspan(begin, end - begin));
        }
    });
    return result;
}

PathDistanceReport make_report(const EmbeddedGraph& g, std::size_t k, std::vector<VertexPath> paths,
                               std::span<const double> distances) {
    PathDistanceReport report;
    report.k = k;
    report.per_path.reserve(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const double length = path_geometry(g, paths[i]).length();
        report.per_path.push_back({std::move(paths[i]), length, distances[i]});
    }
    report.summary = summarize(report.per_path);
    return report;
}

bool interior_eligible(const EmbeddedGraph& g, const VertexPath& p, const std::vector<double>& radius) {
    for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) {
        const std::size_t v = p.vertices[i];
        if (!std::isfinite(radius[v]) || g.degree(v) == 3) {
            return false;
        }
    }
    return true;
}

SignatureMap aggregate(const EmbeddedGraph& g, const PathDistanceReport& report, SignatureTarget target) {
    const std::size_t n = target == SignatureTarget::edge ? g.edge_count() : g.vertex_count();
    std::vector<double> best(n, -1.0);
    for (const PathMatch& m : report.per_path) {
        const auto& ids = target == SignatureTarget::edge ? m.path.edges : m.path.vertices;
        for (std::size_t id : ids) {
            best[id] = std::max(best[id], m.distance);
        }
    }
    SignatureMap sig;
    sig.target = target;
    sig.k = report.k;
    for (std::size_t i = 0; i < n; ++i) {
        if (best[i] < 0.0) {
            continue;
        }
        if (target == SignatureTarget::edge) {
            sig.entries.push_back({g.edge(i).id.value, g.edge(i).length, best[i]});
        } else {
            sig.entries.push_back({g.vertex(i).id.value, 0.0, best[i]});
        }
    }
    return sig;
}

bool exits_separated(const EmbeddedGraph& g, std::size_t v, double d, double r) {
    std::vector<Point2D> exits;
    for (std::size_t e : g.incident(v)) {
        const auto w = first_exit_point(g, e, v, r);
        if (!w) {
            return false;
        }
        exits.push_back(*w);
    }
    for (std::size_t i = 0; i < exits.size(); ++i) {
        for (std::size_t j = i + 1; j < exits.size(); ++j) {
            if (!(distance(exits[i], exits[j]) > 2.0 * d)) {
                return false;
            }
        }
    }
    return true;
}

double straight_radius(const EmbeddedGraph& g, std::size_t v, double d) {
    const Point2D c = g.vertex(v).position;
    std::vector<Point2D> dirs;
    double min_length = kInfinity;
    for (std::size_t e : g.incident(v)) {
        const Point2D far = g.vertex(g.edge(e).other(v)).position;
        dirs.push_back(far - c);
        min_length = std::min(min_length, norm(far - c));
    }
    double theta = kInfinity;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
            theta = std::min(theta, std::atan2(std::abs(cross(dirs[i], dirs[j])), dot(dirs[i], dirs[j])));
        }
    }
    if (!(theta > 0.0)) {
        return kInfinity;
    }
    const double r = d / std::sin(theta / 2.0);
    return r < min_length ? r : kInfinity;
}

double numeric_radius(const EmbeddedGraph& g, std::size_t v, double d, std::size_t steps) {
    const Point2D c = g.vertex(v).position;
    double r_max = kInfinity;
    for (std::size_t e : g.incident(v)) {
        double reach = 0.0;
        for (const Point2D& p : g.edge(e).geometry.points()) {
            reach = std::max(reach, distance(p, c));
        }
        r_max = std::min(r_max, reach);
    }
    if (!(r_max > d)) {
        return kInfinity;
    }
    steps = std::max<std::size_t>(steps, 1);
    double lo = d;
    for (std::size_t s = 1; s <= steps; ++s) {
        const double r = s == steps ? r_max : d + (r_max - d) * static_cast<double>(s) / static_cast<double>(steps);
        if (!exits_separated(g, v, d, r)) {
            lo = r;
            continue;
        }
        double hi = r;
        for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            (exits_separated(g, v, d, mid) ? hi : lo) = mid;
        }
        return hi;
    }
    return kInfinity;
}

}  // namespace

double weighted_quantile(std::span<const double> values, std::span<const double> weights, double q) {
    if (values.empty() || values.size() != weights.size()) {
        throw InputError("weighted_quantile: empty or mismatched input");
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, {}, [&](std::size_t i) { return values[i]; });
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) {
        throw InputError("weighted_quantile: total weight must be positive");
    }
    double acc = 0.0;
    for (std::size_t i : order) {
        acc += weights[i];
        if (acc >= q * total) {
            return values[i];
        }
    }
    return values[order.back()];
}

DistanceSummary summarize(std::span<const PathMatch> matches) {
    DistanceSummary s;
    s.path_count = matches.size();
    if (matches.empty()) {
        return s;
    }
    std::vector<double> values;
    std::vector<double> lengths;
    double weighted = 0.0;
    double total = 0.0;
    for (const PathMatch& m : matches) {
        values.push_back(m.distance);
        lengths.push_back(m.length);
        s.max = std::max(s.max, m.distance);
        weighted += m.length * m.distance;
        total += m.length;
    }
    const std::vector<double> ones(values.size(), 1.0);
    s.p90_unweighted = weighted_quantile(values, ones, 0.9);
    s.p90_weighted = total > 0.0 ? weighted_quantile(values, lengths, 0.9) : s.p90_unweighted;
    s.mean_weighted = total > 0.0 ? weighted / total : 0.0;
    return s;
}

std::vector<double> match_paths(const EmbeddedGraph& g, std::span<const VertexPath> paths, const MatchIndex& h,
                                const DistanceOptions& options) {
    return match_paths_tagged(g, paths, h, options, "paths");
}

PathDistanceReport directed_path_distance(const EmbeddedGraph& g, const MatchIndex& h, std::size_t k,
                                          const DistanceOptions& options) {
    if (h.empty()) {
        throw MatchError("no path exists: target graph has no edges");
    }
    std::vector<VertexPath> paths = collect_paths(g, k);
    if (!options.strict) {
        const auto distances = match_paths_tagged(g, paths, h, options, fmt::format("k{}", k));
        return make_report(g, k, std::move(paths), distances);
    }

    // Separation scale from the unrestricted link-3 distance.
    std::vector<VertexPath> three = k == 3 ? paths : collect_paths(g, 3);
    const auto three_distances = match_paths_tagged(g, three, h, options, "k3");
    const double scale = three_distances.empty() ? 0.0 : *std::ranges::max_element(three_distances);
    const SeparationReport sep = separation_report(g, scale, RadiusOptions{.scan_steps = options.radius_steps});

    std::vector<VertexPath> kept;
    std::vector<double> kept_distances;
    std::vector<VertexPath> pending;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (!interior_eligible(g, paths[i], sep.radius)) {
            continue;
        }
        if (k == 3) {
            kept.push_back(paths[i]);
            kept_distances.push_back(three_distances[i]);
        } else {
            pending.push_back(paths[i]);
        }
    }
    if (k != 3) {
        kept_distances = match_paths_tagged(g, pending, h, options, fmt::format("k{}-strict", k));
        kept = std::move(pending);
    }
    PathDistanceReport report = make_report(g, k, std::move(kept), kept_distances);
    report.strict_scale = scale;
    double worst = -1.0;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (std::isfinite(sep.radius[v]) && g.degree(v) != 3) {
            worst = std::max(worst, sep.radius[v]);
        }
    }
    if (worst >= 0.0) {
        report.approximation_bound = 2.0 * worst + scale;
    }
    return report;
}

PathDistanceReport directed_path_distance(const EmbeddedGraph& g, const EmbeddedGraph& h, std::size_t k,
                                          const DistanceOptions& options) {
    return directed_path_distance(g, MatchIndex(h, options.match), k, options);
}

double undirected_path_distance(const EmbeddedGraph& g, const EmbeddedGraph& h, std::size_t k,
                                const DistanceOptions& options) {
    return std::max(directed_path_distance(g, h, k, options).summary.max,
                    directed_path_distance(h, g, k, options).summary.max);
}

SignatureMap edge_signature(const EmbeddedGraph& g, const PathDistanceReport& report) {
    return aggregate(g, report, SignatureTarget::edge);
}

SignatureMap vertex_signature(const EmbeddedGraph& g, const PathDistanceReport& report) {
    return aggregate(g, report, SignatureTarget::vertex);
}

SignatureMap edge_signature(const EmbeddedGraph& g, const EmbeddedGraph& h, std::size_t k,
                            const DistanceOptions& options) {
    return edge_signature(g, directed_path_distance(g, h, k, options));
}

SignatureMap vertex_signature(const EmbeddedGraph& g, const EmbeddedGraph& h, std::size_t k,
                              const DistanceOptions& options) {
    return vertex_signature(g, directed_path_distance(g, h, k, options));
}

std::optional<Point2D> first_exit_point(const EmbeddedGraph& g, std::size_t e, std::size_t from, double r) {
    const PolyLine line = g.oriented_geometry(e, from);
    const Point2D c = line.front();
    if (r <= 0.0) {
        return c;
    }
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        const Point2D a = line[i];
        const Point2D b = line[i + 1];
        if (distance(b, c) < r) {
            continue;
        }
        // a is strictly inside the ball, b is on or outside it: one crossing.
        const Point2D u = a - c;
        const Point2D w = b - a;
        const double aa = dot(w, w);
        const double bb = dot(u, w);
        const double cc = dot(u, u) - r * r;
        const double t = std::clamp((-bb + std::sqrt(std::max(0.0, bb * bb - aa * cc))) / aa, 0.0, 1.0);
        return lerp(a, b, t);
    }
    return std::nullopt;
}

double intersection_radius(const EmbeddedGraph& g, std::size_t v, double d, const RadiusOptions& options) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
        throw InputError("intersection_radius: d must be finite and non-negative");
    }
    const std::size_t degree = g.degree(v);
    if (degree == 0) {
        return kInfinity;
    }
    if (degree == 1) {
        // No pair to separate; the ball still has to reach past d.
        double reach = 0.0;
        for (const Point2D& p : g.edge(g.incident(v)[0]).geometry.points()) {
            reach = std::max(reach, distance(p, g.vertex(v).position));
        }
        return reach > d ? d : kInfinity;
    }
    const auto incident = g.incident(v);
    const bool straight = std::ranges::all_of(incident, [&](std::size_t e) { return g.edge(e).is_straight(); });
    if (straight && !options.force_numeric) {
        return straight_radius(g, v, d);
    }
    return numeric_radius(g, v, d, options.scan_steps);
}

double intersection_radius(const EmbeddedGraph& g, VertexId v, double d, const RadiusOptions& options) {
    return intersection_radius(g, g.vertex_index(v), d, options);
}

SeparationReport separation_report(const EmbeddedGraph& g, double d, const RadiusOptions& options) {
    SeparationReport report;
    report.d = d;
    report.vertex_count = g.vertex_count();
    report.radius.resize(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        report.radius[v] = intersection_radius(g, v, d, options);
        report.separated_count += std::isfinite(report.radius[v]) ? 1 : 0;
    }
    return report;
}

SeparationCensus separation_census(const EmbeddedGraph& g, const EmbeddedGraph& h, const DistanceOptions& options,
                                   const RadiusOptions& radius_options) {
    const MatchIndex index(h, options.match);
    DistanceOptions plain = options;
    plain.strict = false;
    SeparationCensus census;
    for (std::size_t k = 1; k <= 3; ++k) {
        census.distances[k - 1] = directed_path_distance(g, index, k, plain).summary.max;
        census.reports[k - 1] = separation_report(g, census.distances[k - 1], radius_options);
    }
    return census;
}

}  // namespace pathdist
