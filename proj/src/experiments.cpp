#include "pathdist/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "pathdist/format.hpp"
#include "pathdist/graph_io.hpp"
#include "pathdist/parallel.hpp"
#include "pathdist/path_distance.hpp"
#include "pathdist/report_io.hpp"
#include "pathdist/signature.hpp"

namespace pathdist {

namespace {

constexpr int kGridSide = 6;
constexpr double kGridSpacing = 2.0;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

EmbeddedGraph grid_with_positions(const std::vector<Point2D>& positions) {
    EmbeddedGraph::Builder b;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        b.add_vertex(VertexId{static_cast<std::int64_t>(i)}, positions[i]);
    }
    std::int64_t next = 0;
    auto link = [&](int u, int v) { b.add_edge(EdgeId{next++}, VertexId{u}, VertexId{v}); };
    for (int r = 0; r < kGridSide; ++r) {
        for (int c = 0; c + 1 < kGridSide; ++c) {
            link(r * kGridSide + c, r * kGridSide + c + 1);
        }
    }
    for (int r = 0; r + 1 < kGridSide; ++r) {
        for (int c = 0; c < kGridSide; ++c) {
            link(r * kGridSide + c, (r + 1) * kGridSide + c);
        }
    }
    return std::move(b).build();
}

std::vector<Point2D> grid_positions() {
    std::vector<Point2D> pos;
    for (int r = 0; r < kGridSide; ++r) {
        for (int c = 0; c < kGridSide; ++c) {
            pos.push_back({c * kGridSpacing, r * kGridSpacing});
        }
    }
    return pos;
}

std::string fixed2(double v) { return format_fixed(v, 2); }

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    throw UsageError("config key '" + key + "' expects true or false, got '" + value + "'");
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string direction_tag(const std::string& direction) {
    return direction == "G->H" ? "G-H" : "H-G";
}

}  // namespace

void PerturbationSpec::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InputError("perturbation index must lie in [0, 1]");
    }
}

EmbeddedGraph base_grid() { return grid_with_positions(grid_positions()); }

std::uint64_t instance_seed(std::uint64_t rng_seed, double p, std::size_t seed_index) {
    std::uint64_t state = rng_seed;
    splitmix64(state);
    state ^= std::bit_cast<std::uint64_t>(p);
    splitmix64(state);
    state ^= static_cast<std::uint64_t>(seed_index);
    return splitmix64(state);
}

EmbeddedGraph perturb_grid(double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto offset = [&] {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return -p + 2.0 * p * u;
    };
    std::vector<Point2D> pos = grid_positions();
    for (Point2D& q : pos) {
        const double alpha = offset();
        const double beta = offset();
        q = {q.x + alpha, q.y + beta};
    }
    return grid_with_positions(pos);
}

std::vector<EmbeddedGraph> generate_perturbed(const PerturbationSpec& spec) {
    spec.validate();
    std::vector<EmbeddedGraph> out;
    out.reserve(spec.seed_count);
    for (std::size_t i = 0; i < spec.seed_count; ++i) {
        out.push_back(perturb_grid(spec.p, instance_seed(spec.rng_seed, spec.p, i)));
    }
    return out;
}

double interpolated_quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) {
        throw InputError("quantile of an empty sample");
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

StudyResult run_perturbation_study(const StudyOptions& options) {
    for (double p : options.p_values) {
        PerturbationSpec{p, options.seed_count, options.rng_seed}.validate();
    }
    if (options.k == 0) {
        throw InputError("link length must be at least 1");
    }
    const EmbeddedGraph base = base_grid();
    const MatchIndex index(base);
    StudyResult result;
    for (double p : options.p_values) {
        for (std::size_t s = 0; s < options.seed_count; ++s) {
            result.rows.push_back({p, s, 0.0});
        }
    }
    DistanceOptions distance_options;
    distance_options.tol = options.tol;
    parallel_for(result.rows.size(), options.workers, [&](std::size_t i) {
        StudyRow& row = result.rows[i];
        const EmbeddedGraph g = perturb_grid(row.p, instance_seed(options.rng_seed, row.p, row.seed));
        row.distance = directed_path_distance(g, index, options.k, distance_options).summary.max;
    });
    for (std::size_t i = 0; i < options.p_values.size(); ++i) {
        std::vector<double> values;
        for (std::size_t s = 0; s < options.seed_count; ++s) {
            values.push_back(result.rows[i * options.seed_count + s].distance);
        }
        std::ranges::sort(values);
        if (values.empty()) {
            continue;
        }
        result.boxes.push_back({options.p_values[i], values.front(), interpolated_quantile(values, 0.25),
                                interpolated_quantile(values, 0.5), interpolated_quantile(values, 0.75),
                                values.back()});
    }
    return result;
}

void write_study_csv(const StudyResult& result, std::ostream& out) {
    out << "p,seed,distance_m\n";
    for (const StudyRow& r : result.rows) {
        out << format_number(r.p) << ',' << r.seed << ',' << format_number(r.distance) << '\n';
    }
}

void write_study_summary_csv(const StudyResult& result, std::ostream& out) {
    out << "p,min,q1,median,q3,max\n";
    for (const BoxSummary& b : result.boxes) {
        out << format_number(b.p) << ',' << format_number(b.min) << ',' << format_number(b.q1) << ','
            << format_number(b.median) << ',' << format_number(b.q3) << ',' << format_number(b.max) << '\n';
    }
}

void write_study_boxplot(const StudyResult& result, std::ostream& out) {
    constexpr double width = 640.0;
    constexpr double height = 400.0;
    constexpr double left = 60.0;
    constexpr double right = 20.0;
    constexpr double top = 20.0;
    constexpr double bottom = 50.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    double y_max = 0.0;
    for (const BoxSummary& b : result.boxes) {
        y_max = std::max({y_max, b.max, std::sqrt(2.0) * b.p});
    }
    y_max = y_max > 0.0 ? 1.05 * y_max : 1.0;
    auto sy = [&](double v) { return top + plot_h * (1.0 - v / y_max); };
    const double slot = result.boxes.empty() ? plot_w : plot_w / static_cast<double>(result.boxes.size());

    out << R"(<svg xmlns="http://www.w3.org/2000/svg" width="640" height="400" viewBox="0 0 640 400">)" << '\n';
    out << R"(<rect width="640" height="400" fill="#ffffff"/>)" << '\n';
    out << R"(<line x1=")" << fixed2(left) << R"(" y1=")" << fixed2(top + plot_h) << R"(" x2=")"
        << fixed2(left + plot_w) << R"(" y2=")" << fixed2(top + plot_h) << R"(" stroke="#000000"/>)" << '\n';
    out << R"(<line x1=")" << fixed2(left) << R"(" y1=")" << fixed2(top) << R"(" x2=")" << fixed2(left)
        << R"(" y2=")" << fixed2(top + plot_h) << R"(" stroke="#000000"/>)" << '\n';
    for (int t = 0; t <= 4; ++t) {
        const double v = y_max * t / 4.0;
        out << R"(<text x=")" << fixed2(left - 6) << R"(" y=")" << fixed2(sy(v) + 4)
            << R"(" font-size="11" text-anchor="end">)" << format_fixed(v, 2) << "</text>\n";
    }
    out << R"svg(<text x="16" y="200" font-size="12" transform="rotate(-90 16 200)" text-anchor="middle">distance (m)</text>)svg"
        << '\n';
    out << R"(<text x=")" << fixed2(left + plot_w / 2) << R"(" y="392" font-size="12" text-anchor="middle">p</text>)"
        << '\n';
    for (std::size_t i = 0; i < result.boxes.size(); ++i) {
        const BoxSummary& b = result.boxes[i];
        const double cx = left + slot * (static_cast<double>(i) + 0.5);
        const double half = slot * 0.25;
        out << R"(<line x1=")" << fixed2(cx) << R"(" y1=")" << fixed2(sy(b.min)) << R"(" x2=")" << fixed2(cx)
            << R"(" y2=")" << fixed2(sy(b.max)) << R"(" stroke="#1f77b4"/>)" << '\n';
        out << R"(<rect x=")" << fixed2(cx - half) << R"(" y=")" << fixed2(sy(b.q3)) << R"(" width=")"
            << fixed2(2 * half) << R"(" height=")" << fixed2(sy(b.q1) - sy(b.q3))
            << R"(" fill="#c6dbef" stroke="#1f77b4"/>)" << '\n';
        out << R"(<line x1=")" << fixed2(cx - half) << R"(" y1=")" << fixed2(sy(b.median)) << R"(" x2=")"
            << fixed2(cx + half) << R"(" y2=")" << fixed2(sy(b.median)) << R"(" stroke="#08306b" stroke-width="2"/>)"
            << '\n';
        const double bound = std::sqrt(2.0) * b.p;
        out << R"(<line x1=")" << fixed2(cx - half) << R"(" y1=")" << fixed2(sy(bound)) << R"(" x2=")"
            << fixed2(cx + half) << R"(" y2=")" << fixed2(sy(bound))
            << R"(" stroke="#d62728" stroke-dasharray="4,3"/>)" << '\n';
        out << R"(<text x=")" << fixed2(cx) << R"(" y=")" << fixed2(top + plot_h + 16)
            << R"(" font-size="11" text-anchor="middle">)" << format_number(b.p) << "</text>\n";
    }
    out << "</svg>\n";
}

void RunConfig::validate() const {
    if (from.empty() || to.empty()) {
        throw UsageError("both graphs are required");
    }
    if (!(tol > 0.0)) {
        throw UsageError("tolerance must be positive");
    }
    if (workers == 0) {
        throw UsageError("workers must be at least 1");
    }
    if (ks.empty() || std::ranges::find(ks, std::size_t{0}) != ks.end()) {
        throw UsageError("link lengths must be at least 1");
    }
}

std::map<std::string, std::string> read_config_pairs(std::istream& in, const std::string& name) {
    std::map<std::string, std::string> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(name + ":" + std::to_string(line_no) + ": expected key = value");
        }
        pairs[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return pairs;
}

void apply_config(RunConfig& config, const std::map<std::string, std::string>& pairs) {
    for (const auto& [key, value] : pairs) {
        try {
            if (key == "from") {
                config.from = value;
            } else if (key == "to") {
                config.to = value;
            } else if (key == "k") {
                config.ks.clear();
                std::stringstream list(value);
                std::string item;
                while (std::getline(list, item, ',')) {
                    config.ks.push_back(static_cast<std::size_t>(std::stoul(trim(item))));
                }
            } else if (key == "tol") {
                config.tol = std::stod(value);
            } else if (key == "workers") {
                config.workers = static_cast<std::size_t>(std::stoul(value));
            } else if (key == "out-dir") {
                config.out_dir = value;
            } else if (key == "contract") {
                config.contract = parse_bool(key, value);
            } else if (key == "strict") {
                config.strict = parse_bool(key, value);
            } else if (key == "both") {
                config.both = parse_bool(key, value);
            } else if (key == "checkpoint") {
                config.checkpoint_dir = value;
            } else {
                throw UsageError("unknown config key '" + key + "'");
            }
        } catch (const std::logic_error&) {
            throw UsageError("bad value for config key '" + key + "': '" + value + "'");
        }
    }
}

RunConfig load_run_config(const std::filesystem::path& file) {
    if (!std::filesystem::is_regular_file(file)) {
        throw UsageError("missing config file: " + file.string());
    }
    std::ifstream in = open_input(file);
    RunConfig config;
    apply_config(config, read_config_pairs(in, file.string()));
    return config;
}

std::vector<std::string> run_all(const RunConfig& config) {
    config.validate();
    const EmbeddedGraph g = load_graph_spec(config.from, config.contract);
    const EmbeddedGraph h = load_graph_spec(config.to, config.contract);
    std::filesystem::create_directories(config.out_dir);
    std::vector<std::string> files;
    auto emit = [&](const std::string& name, const std::string& text) {
        write_text_file(config.out_dir / name, text);
        files.push_back(name);
    };

    emit("stats.json", nlohmann::json{{"G", stats_json(graph_stats(g))}, {"H", stats_json(graph_stats(h))}}
                           .dump(2) + "\n");

    DistanceOptions options;
    options.tol = config.tol;
    options.workers = config.workers;
    options.strict = config.strict;
    options.checkpoint_dir = config.checkpoint_dir;

    struct Direction {
        const EmbeddedGraph* from;
        const EmbeddedGraph* to;
        std::string label;
    };
    std::vector<Direction> directions{{&g, &h, "G->H"}};
    if (config.both) {
        directions.push_back({&h, &g, "H->G"});
    }
    std::vector<CdfCurve> curves;
    std::vector<std::string> labels;
    for (const Direction& dir : directions) {
        const MatchIndex index(*dir.to);
        const std::string tag = direction_tag(dir.label);
        for (std::size_t k : config.ks) {
            PathDistanceReport report = directed_path_distance(*dir.from, index, k, options);
            report.direction = dir.label;
            const std::string stem = "k" + std::to_string(k) + "_" + tag;
            std::ostringstream csv;
            write_distance_report_csv(*dir.from, report, csv);
            emit("distance_" + stem + ".csv", csv.str());
            emit("summary_" + stem + ".json", summary_json(report).dump(2) + "\n");
            if (report.per_path.empty()) {
                continue;
            }
            const SignatureMap sig = edge_signature(*dir.from, report);
            std::ostringstream sig_csv;
            write_signature_csv(sig, sig_csv);
            emit("signature_" + stem + ".csv", sig_csv.str());
            std::ostringstream svg;
            write_heatmap(*dir.from, sig, HeatmapFormat::svg, RampKind::quantile, svg);
            emit("heatmap_" + stem + ".svg", svg.str());
            std::ostringstream geojson;
            write_heatmap(*dir.from, sig, HeatmapFormat::geojson, RampKind::quantile, geojson);
            emit("heatmap_" + stem + ".geojson", geojson.str());
            if (sig.total_length() > 0.0) {
                curves.push_back(cdf(sig));
                labels.push_back(dir.label + " k=" + std::to_string(k));
                std::ostringstream cdf_csv;
                write_cdf_csv(curves.back(), cdf_csv);
                emit("cdf_" + stem + ".csv", cdf_csv.str());
            }
        }
    }
    if (!curves.empty()) {
        std::ostringstream plot;
        write_cdf_plot(curves, labels, plot);
        emit("cdf_plot.svg", plot.str());
    }

    DistanceOptions census_options = options;
    census_options.strict = false;
    nlohmann::json separation;
    separation["G"] = separation_json(separation_census(g, h, census_options));
    if (config.both) {
        separation["H"] = separation_json(separation_census(h, g, census_options));
    }
    emit("separation.json", separation.dump(2) + "\n");

    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["config"] = {{"from", config.from},
                          {"to", config.to},
                          {"k", config.ks},
                          {"tol", config.tol},
                          {"workers", config.workers},
                          {"contract", config.contract},
                          {"strict", config.strict},
                          {"both", config.both}};
    if (config.checkpoint_dir) {
        manifest["config"]["checkpoint"] = config.checkpoint_dir->string();
    }
    manifest["files"] = files;
    write_text_file(config.out_dir / "manifest.json", manifest.dump(2) + "\n");
    files.push_back("manifest.json");
    return files;
}

}  // namespace pathdist
