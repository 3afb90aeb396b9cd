#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pathdist/graph.hpp"

namespace pathdist {

/// Malformed CSV row; the message carries file name and line number.
class ParseError : public InputError {
public:
    using InputError::InputError;
};

/// Reads a graph from a vertex CSV (`id,x,y`) and an edge CSV
/// (`id,u,v[,x1,y1,...]`, optional interior bend points). A header row is
/// optional in both files; blank lines and lines starting with '#' are ignored.
EmbeddedGraph load_graph(const std::filesystem::path& vertex_file,
                         const std::filesystem::path& edge_file);
EmbeddedGraph read_graph(std::istream& vertices, std::istream& edges,
                         const std::string& vertex_name = "vertices",
                         const std::string& edge_name = "edges");

/// Writes the same CSV layout that load_graph reads (with header rows).
void write_graph(const EmbeddedGraph& g, std::ostream& vertices, std::ostream& edges);
void save_graph(const EmbeddedGraph& g, const std::filesystem::path& vertex_file,
                const std::filesystem::path& edge_file);

/// FeatureCollection of LineString features with an `edge_id` property,
/// coordinates in the input planar frame.
void write_graph_geojson(const EmbeddedGraph& g, std::ostream& out);

/// Curve CSV: one `x,y` row per point, optional header.
PolyLine load_curve(const std::filesystem::path& file);
PolyLine read_curve(std::istream& in, const std::string& name = "curve");

/// Splits a CSV line on commas and trims surrounding whitespace of each field.
std::vector<std::string> split_csv_line(const std::string& line);
/// Parses a floating-point field; throws ParseError naming the location.
double parse_double(const std::string& field, const std::string& where);
std::int64_t parse_int(const std::string& field, const std::string& where);

using CsvRowVisitor = std::function<void(const std::vector<std::string>& fields, const std::string& where)>;
/// Visits each data row with its "name:line" location; skips blank lines,
/// '#' comments and a leading non-numeric header row.
void for_each_csv_row(std::istream& in, const std::string& name, const CsvRowVisitor& visit);

/// Open a file or throw InputError naming the path.
std::ifstream open_input(const std::filesystem::path& file);
std::ofstream open_output(const std::filesystem::path& file);

}  // namespace pathdist
