#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "json.hpp"
#include "pathdist/fscore.hpp"
#include "pathdist/graph.hpp"
#include "pathdist/path_distance.hpp"

namespace pathdist {

/// Columns: path_id, vertex_sequence, path_length_m, match_distance_m.
void write_distance_report_csv(const EmbeddedGraph& g, const PathDistanceReport& report, std::ostream& out);

/// {k, direction, max, p90_weighted, p90_unweighted, mean_weighted,
/// path_count} plus the strict-mode diagnostics when present.
nlohmann::json summary_json(const PathDistanceReport& report);

nlohmann::json stats_json(const GraphStats& stats);

nlohmann::json separation_json(const SeparationCensus& census);

/// Per-edge F-score in the signature CSV layout.
void write_fscore_csv(const FScoreResult& result, std::ostream& out);

/// Writes text, creating parent directories; throws InputError on failure.
void write_text_file(const std::filesystem::path& file, const std::string& text);

/// Loads a graph from "DIR" (holding vertices.csv and edges.csv) or from
/// "VERTICES.csv,EDGES.csv". Missing files raise UsageError naming the path.
EmbeddedGraph load_graph_spec(const std::string& spec, bool contract = false);

}  // namespace pathdist
