#include "pathdist/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include "json.hpp"

#include "pathdist/format.hpp"

namespace pathdist {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool is_numeric(const std::string& field) {
    double value = 0.0;
    const char* end = field.data() + field.size();
    const auto res = std::from_chars(field.data(), end, value);
    return res.ec == std::errc() && res.ptr == end;
}

// Calls fn(fields, where) for each data row; skips a leading header row.
template <class Fn>
void for_each_row(std::istream& in, const std::string& name, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') {
            continue;
        }
        auto fields = split_csv_line(trimmed);
        if (first_row) {
            first_row = false;
            if (!fields.empty() && !is_numeric(fields.front())) {
                continue;
            }
        }
        fn(fields, fmt::format("{}:{}", name, line_no));
    }
}

}  // namespace

void for_each_csv_row(std::istream& in, const std::string& name, const CsvRowVisitor& visit) {
    for_each_row(in, name, visit);
}

std::ifstream open_input(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw InputError("cannot open " + file.string());
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) {
        throw InputError("cannot write " + file.string());
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

double parse_double(const std::string& field, const std::string& where) {
    double value = 0.0;
    const char* end = field.data() + field.size();
    const auto res = std::from_chars(field.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        throw ParseError(where + ": expected a number, got '" + field + "'");
    }
    return value;
}

std::int64_t parse_int(const std::string& field, const std::string& where) {
    std::int64_t value = 0;
    const char* end = field.data() + field.size();
    const auto res = std::from_chars(field.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        throw ParseError(where + ": expected an integer id, got '" + field + "'");
    }
    return value;
}

EmbeddedGraph read_graph(std::istream& vertices, std::istream& edges, const std::string& vertex_name,
                         const std::string& edge_name) {
    EmbeddedGraph::Builder builder;
    for_each_row(vertices, vertex_name, [&](const std::vector<std::string>& f, const std::string& where) {
        if (f.size() != 3) {
            throw ParseError(where + ": expected 'id,x,y'");
        }
        builder.add_vertex(VertexId{parse_int(f[0], where)},
                           {parse_double(f[1], where), parse_double(f[2], where)});
    });
    for_each_row(edges, edge_name, [&](const std::vector<std::string>& f, const std::string& where) {
        if (f.size() < 3 || (f.size() - 3) % 2 != 0) {
            throw ParseError(where + ": expected 'id,u,v[,x1,y1,...]'");
        }
        std::vector<Point2D> interior;
        for (std::size_t i = 3; i < f.size(); i += 2) {
            interior.push_back({parse_double(f[i], where), parse_double(f[i + 1], where)});
        }
        try {
            builder.add_edge(EdgeId{parse_int(f[0], where)}, VertexId{parse_int(f[1], where)},
                             VertexId{parse_int(f[2], where)}, std::move(interior));
        } catch (const StructuralError& e) {
            throw StructuralError(where + ": " + e.what());
        }
    });
    return std::move(builder).build();
}

EmbeddedGraph load_graph(const std::filesystem::path& vertex_file,
                         const std::filesystem::path& edge_file) {
    auto vin = open_input(vertex_file);
    auto ein = open_input(edge_file);
    return read_graph(vin, ein, vertex_file.string(), edge_file.string());
}

void write_graph(const EmbeddedGraph& g, std::ostream& vertices, std::ostream& edges) {
    vertices << "id,x,y\n";
    for (const Vertex& v : g.vertices()) {
        vertices << v.id.value << ',' << format_number(v.position.x) << ','
                 << format_number(v.position.y) << '\n';
    }
    edges << "id,u,v,interior\n";
    for (const Edge& e : g.edges()) {
        edges << e.id.value << ',' << g.vertex(e.a).id.value << ',' << g.vertex(e.b).id.value;
        const auto pts = e.geometry.points();
        for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
            edges << ',' << format_number(pts[i].x) << ',' << format_number(pts[i].y);
        }
        edges << '\n';
    }
}

void save_graph(const EmbeddedGraph& g, const std::filesystem::path& vertex_file,
                const std::filesystem::path& edge_file) {
    auto vout = open_output(vertex_file);
    auto eout = open_output(edge_file);
    write_graph(g, vout, eout);
}

void write_graph_geojson(const EmbeddedGraph& g, std::ostream& out) {
    nlohmann::ordered_json features = nlohmann::ordered_json::array();
    for (const Edge& e : g.edges()) {
        nlohmann::ordered_json coords = nlohmann::ordered_json::array();
        for (const Point2D& p : e.geometry.points()) {
            coords.push_back({p.x, p.y});
        }
        features.push_back({{"type", "Feature"},
                            {"properties", {{"edge_id", e.id.value}}},
                            {"geometry", {{"type", "LineString"}, {"coordinates", coords}}}});
    }
    const nlohmann::ordered_json doc = {{"type", "FeatureCollection"}, {"features", features}};
    out << doc.dump(1) << '\n';
}

PolyLine read_curve(std::istream& in, const std::string& name) {
    std::vector<Point2D> points;
    for_each_row(in, name, [&](const std::vector<std::string>& f, const std::string& where) {
        if (f.size() != 2) {
            throw ParseError(where + ": expected 'x,y'");
        }
        points.push_back({parse_double(f[0], where), parse_double(f[1], where)});
    });
    PolyLine curve(std::move(points));
    validate(curve, name.c_str());
    return curve;
}

PolyLine load_curve(const std::filesystem::path& file) {
    auto in = open_input(file);
    return read_curve(in, file.string());
}

}  // namespace pathdist
