#include "pathdist/report_io.hpp"

#include <fstream>
#include <sstream>

#include "pathdist/format.hpp"
#include "pathdist/graph_io.hpp"
#include "pathdist/paths.hpp"
#include "pathdist/signature.hpp"

namespace pathdist {

namespace {

// JSON has no infinity; unbounded values are written as null.
nlohmann::json number_or_null(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return v;
}

}  // namespace

void write_distance_report_csv(const EmbeddedGraph& g, const PathDistanceReport& report, std::ostream& out) {
    out << "path_id,vertex_sequence,path_length_m,match_distance_m\n";
    for (std::size_t i = 0; i < report.per_path.size(); ++i) {
        const PathMatch& m = report.per_path[i];
        out << i << ',' << vertex_sequence(g, m.path) << ',' << format_number(m.length) << ','
            << format_number(m.distance) << '\n';
    }
}

nlohmann::json summary_json(const PathDistanceReport& report) {
    nlohmann::json j;
    j["k"] = report.k;
    j["direction"] = report.direction;
    j["max"] = report.summary.max;
    j["p90_weighted"] = report.summary.p90_weighted;
    j["p90_unweighted"] = report.summary.p90_unweighted;
    j["mean_weighted"] = report.summary.mean_weighted;
    j["path_count"] = report.summary.path_count;
    if (report.strict_scale) {
        j["strict_scale"] = *report.strict_scale;
    }
    if (report.approximation_bound) {
        j["approximation_bound"] = number_or_null(*report.approximation_bound);
    }
    return j;
}

nlohmann::json stats_json(const GraphStats& stats) {
    return {{"vertices", stats.vertex_count},
            {"vertices_degree_not3", stats.vertex_count_degree_not3},
            {"edges", stats.edge_count},
            {"total_length_m", stats.total_length}};
}

nlohmann::json separation_json(const SeparationCensus& census) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < census.reports.size(); ++i) {
        const SeparationReport& r = census.reports[i];
        rows.push_back({{"k", i + 1},
                        {"d", census.distances[i]},
                        {"separated", r.separated_count},
                        {"vertices", r.vertex_count}});
    }
    return rows;
}

void write_fscore_csv(const FScoreResult& result, std::ostream& out) {
    write_signature_csv(result.edge_scores, out);
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
    if (file.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(file.parent_path(), ec);
    }
    std::ofstream out = open_output(file);
    out << text;
    out.close();
    if (!out) {
        throw InputError("cannot write " + file.string());
    }
}

EmbeddedGraph load_graph_spec(const std::string& spec, bool contract) {
    std::filesystem::path vertices;
    std::filesystem::path edges;
    if (const auto comma = spec.find(','); comma != std::string::npos) {
        vertices = spec.substr(0, comma);
        edges = spec.substr(comma + 1);
    } else {
        vertices = std::filesystem::path(spec) / "vertices.csv";
        edges = std::filesystem::path(spec) / "edges.csv";
    }
    for (const auto& file : {vertices, edges}) {
        if (!std::filesystem::is_regular_file(file)) {
            throw UsageError("missing graph file: " + file.string());
        }
    }
    EmbeddedGraph g = load_graph(vertices, edges);
    return contract ? contract_degree_two(g) : g;
}

}  // namespace pathdist
