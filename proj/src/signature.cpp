#include "pathdist/signature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "pathdist/format.hpp"
#include "pathdist/graph_io.hpp"

namespace pathdist {

namespace {

constexpr double kMargin = 10.0;

struct Rgb {
    double r, g, b;
};

// Sequential yellow-orange-red scheme, light to dark.
constexpr std::array<Rgb, 5> kStops{{
    {0xff, 0xff, 0xb2},
    {0xfe, 0xcc, 0x5c},
    {0xfd, 0x8d, 0x3c},
    {0xf0, 0x3b, 0x20},
    {0xbd, 0x00, 0x26},
}};

constexpr std::array<const char*, 6> kCurveColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string xml_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string px(double v) {
    return format_fixed(v, 2);
}

// Uniform scale from the planar frame to SVG pixels, y pointing down.
class Viewport {
public:
    Viewport(Point2D lo, Point2D hi, double width) : lo_(lo), hi_(hi) {
        const double span = std::max(hi.x - lo.x, hi.y - lo.y);
        scale_ = span > 0.0 ? (width - 2.0 * kMargin) / span : 1.0;
        width_ = 2.0 * kMargin + (hi.x - lo.x) * scale_;
        height_ = 2.0 * kMargin + (hi.y - lo.y) * scale_;
    }
    Point2D map(Point2D p) const { return {kMargin + (p.x - lo_.x) * scale_, kMargin + (hi_.y - p.y) * scale_}; }
    double width() const { return width_; }
    double height() const { return height_; }

private:
    Point2D lo_;
    Point2D hi_;
    double scale_ = 1.0;
    double width_ = 0.0;
    double height_ = 0.0;
};

std::string hex_color(const Rgb& c) {
    auto channel = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 255.0))); };
    return fmt::format("#{:02x}{:02x}{:02x}", channel(c.r), channel(c.g), channel(c.b));
}

std::vector<std::size_t> drawn_edges(const EmbeddedGraph& g, const SignatureMap& sig) {
    if (sig.target != SignatureTarget::edge) {
        throw InputError("heat-map needs an edge signature");
    }
    std::vector<std::size_t> out;
    for (const SignatureEntry& entry : sig.entries) {
        out.push_back(g.edge_index(EdgeId{entry.id}));
    }
    return out;
}

}  // namespace

double SignatureMap::total_length() const {
    double total = 0.0;
    for (const SignatureEntry& e : entries) {
        total += e.length;
    }
    return total;
}

std::optional<double> SignatureMap::value_of(std::int64_t id) const {
    for (const SignatureEntry& e : entries) {
        if (e.id == id) {
            return e.value;
        }
    }
    return std::nullopt;
}

double CdfCurve::at(double value) const {
    const auto it = std::upper_bound(x.begin(), x.end(), value);
    if (it == x.begin()) {
        return 0.0;
    }
    return y[static_cast<std::size_t>(it - x.begin()) - 1];
}

CdfCurve cdf(const SignatureMap& sig) {
    if (sig.target != SignatureTarget::edge) {
        throw InputError("cdf: needs an edge signature");
    }
    if (sig.entries.empty()) {
        throw InputError("cdf: empty signature");
    }
    const double total = sig.total_length();
    if (!(total > 0.0)) {
        throw InputError("cdf: signature has zero total length");
    }
    std::vector<SignatureEntry> sorted = sig.entries;
    std::ranges::stable_sort(sorted, {}, &SignatureEntry::value);
    CdfCurve curve;
    double acc = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        acc += sorted[i].length;
        if (i + 1 < sorted.size() && sorted[i + 1].value == sorted[i].value) {
            continue;
        }
        curve.x.push_back(sorted[i].value);
        curve.y.push_back(std::min(acc / total, 1.0));
    }
    curve.y.back() = 1.0;
    return curve;
}

double cdf_at(const SignatureMap& sig, double x) {
    return cdf(sig).at(x);
}

std::vector<double> ramp_values(const SignatureMap& sig, RampKind ramp) {
    std::vector<double> out;
    if (sig.entries.empty()) {
        return out;
    }
    const auto [lo, hi] = std::ranges::minmax(sig.entries, {}, &SignatureEntry::value);
    if (lo.value == hi.value) {
        return std::vector<double>(sig.entries.size(), 1.0);
    }
    if (ramp == RampKind::linear) {
        for (const SignatureEntry& e : sig.entries) {
            out.push_back((e.value - lo.value) / (hi.value - lo.value));
        }
        return out;
    }
    const CdfCurve curve = cdf(sig);
    for (const SignatureEntry& e : sig.entries) {
        out.push_back(curve.at(e.value));
    }
    return out;
}

std::string ramp_color(double t) {
    t = std::clamp(std::isfinite(t) ? t : 1.0, 0.0, 1.0);
    const double pos = t * static_cast<double>(kStops.size() - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(pos), kStops.size() - 2);
    const double f = pos - static_cast<double>(i);
    const Rgb& a = kStops[i];
    const Rgb& b = kStops[i + 1];
    return hex_color({a.r + (b.r - a.r) * f, a.g + (b.g - a.g) * f, a.b + (b.b - a.b) * f});
}

void write_signature_csv(const SignatureMap& sig, std::ostream& out) {
    out << (sig.target == SignatureTarget::edge ? "edge_id" : "vertex_id") << ",length_m,signature_m\n";
    for (const SignatureEntry& e : sig.entries) {
        out << e.id << ',' << format_number(e.length) << ',' << format_number(e.value) << '\n';
    }
}

SignatureMap read_signature_csv(std::istream& in, const std::string& name) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    SignatureMap sig;
    if (text.starts_with("vertex_id")) {
        sig.target = SignatureTarget::vertex;
    }
    std::istringstream rows(text);
    for_each_csv_row(rows, name, [&](const std::vector<std::string>& f, const std::string& where) {
        if (f.size() != 3) {
            throw ParseError(where + ": expected 'id,length_m,signature_m'");
        }
        SignatureEntry entry{parse_int(f[0], where), parse_double(f[1], where), parse_double(f[2], where)};
        if (entry.length < 0.0 || entry.value < 0.0) {
            throw ParseError(where + ": negative length or signature");
        }
        sig.entries.push_back(entry);
    });
    return sig;
}

void save_signature_csv(const SignatureMap& sig, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_signature_csv(sig, out);
}

SignatureMap load_signature_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_signature_csv(in, path.string());
}

void write_cdf_csv(const CdfCurve& curve, std::ostream& out) {
    out << "x_m,fraction\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        out << format_number(curve.x[i]) << ',' << format_number(curve.y[i]) << '\n';
    }
}

HeatmapFormat parse_heatmap_format(std::string_view name) {
    if (name == "svg") {
        return HeatmapFormat::svg;
    }
    if (name == "geojson") {
        return HeatmapFormat::geojson;
    }
    throw UsageError(fmt::format("unsupported heat-map format '{}' (use svg or geojson)", name));
}

RampKind parse_ramp(std::string_view name) {
    if (name == "linear") {
        return RampKind::linear;
    }
    if (name == "quantile") {
        return RampKind::quantile;
    }
    throw UsageError(fmt::format("unsupported ramp '{}' (use linear or quantile)", name));
}

void write_heatmap(const EmbeddedGraph& g, const SignatureMap& sig, HeatmapFormat format, RampKind ramp,
                   std::ostream& out) {
    const std::vector<std::size_t> edges = drawn_edges(g, sig);
    const std::vector<double> ramps = ramp_values(sig, ramp);
    if (format == HeatmapFormat::geojson) {
        nlohmann::ordered_json features = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            nlohmann::ordered_json coords = nlohmann::ordered_json::array();
            for (const Point2D& p : g.edge(edges[i]).geometry.points()) {
                coords.push_back({p.x, p.y});
            }
            features.push_back({{"type", "Feature"},
                                {"properties",
                                 {{"edge_id", sig.entries[i].id},
                                  {"signature_m", sig.entries[i].value},
                                  {"ramp_value", ramps[i]}}},
                                {"geometry", {{"type", "LineString"}, {"coordinates", coords}}}});
        }
        const nlohmann::ordered_json doc = {{"type", "FeatureCollection"}, {"features", features}};
        out << doc.dump(1) << '\n';
        return;
    }
    Point2D lo{0.0, 0.0};
    Point2D hi{0.0, 0.0};
    bool first = true;
    for (std::size_t e : edges) {
        for (const Point2D& p : g.edge(e).geometry.points()) {
            lo = first ? p : Point2D{std::min(lo.x, p.x), std::min(lo.y, p.y)};
            hi = first ? p : Point2D{std::max(hi.x, p.x), std::max(hi.y, p.y)};
            first = false;
        }
    }
    const Viewport view(lo, hi, 800.0);
    out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)",
                       px(view.width()), px(view.height()), px(view.width()), px(view.height()))
        << '\n';
    out << R"(<rect width="100%" height="100%" fill="#ffffff"/>)" << '\n';
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::string points;
        for (const Point2D& p : g.edge(edges[i]).geometry.points()) {
            const Point2D q = view.map(p);
            points += fmt::format("{}{},{}", points.empty() ? "" : " ", px(q.x), px(q.y));
        }
        out << fmt::format(
                   R"(<polyline points="{}" fill="none" stroke="{}" stroke-width="2" stroke-linecap="round">)"
                   R"(<title>edge {}: {} m</title></polyline>)",
                   points, ramp_color(ramps[i]), sig.entries[i].id, format_fixed(sig.entries[i].value, 3))
            << '\n';
    }
    out << "</svg>\n";
}

void export_heatmap(const EmbeddedGraph& g, const SignatureMap& sig, HeatmapFormat format, RampKind ramp,
                    const std::filesystem::path& path) {
    auto out = open_output(path);
    write_heatmap(g, sig, format, ramp, out);
}

SignatureMap read_heatmap_geojson(std::istream& in) {
    SignatureMap sig;
    try {
        const auto doc = nlohmann::json::parse(in);
        for (const auto& feature : doc.at("features")) {
            const auto& props = feature.at("properties");
            PolyLine line;
            for (const auto& c : feature.at("geometry").at("coordinates")) {
                line.append({c.at(0).get<double>(), c.at(1).get<double>()});
            }
            sig.entries.push_back(
                {props.at("edge_id").get<std::int64_t>(), line.length(), props.at("signature_m").get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(fmt::format("heat-map GeoJSON: {}", e.what()));
    }
    return sig;
}

void write_cdf_plot(std::span<const CdfCurve> curves, std::span<const std::string> labels, std::ostream& out,
                    double reference_x) {
    if (curves.empty()) {
        throw UsageError("cdf plot: no curves given");
    }
    if (labels.size() != curves.size()) {
        throw UsageError("cdf plot: one label per curve required");
    }
    constexpr double kWidth = 640.0;
    constexpr double kHeight = 400.0;
    constexpr double kLeft = 60.0;
    constexpr double kRight = 20.0;
    constexpr double kTop = 20.0;
    constexpr double kBottom = 50.0;
    double x_max = reference_x;
    for (const CdfCurve& c : curves) {
        if (!c.x.empty()) {
            x_max = std::max(x_max, c.x.back());
        }
    }
    x_max = x_max > 0.0 ? x_max * 1.05 : 1.0;
    auto sx = [&](double x) { return kLeft + (kWidth - kLeft - kRight) * x / x_max; };
    auto sy = [&](double y) { return kHeight - kBottom - (kHeight - kTop - kBottom) * y; };

    out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)",
                       kWidth, kHeight, kWidth, kHeight)
        << '\n';
    out << R"(<rect width="100%" height="100%" fill="#ffffff"/>)" << '\n';
    out << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#000000"/>)", px(sx(0)), px(sy(0)),
                       px(sx(x_max)), px(sy(0)))
        << '\n';
    out << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#000000"/>)", px(sx(0)), px(sy(0)),
                       px(sx(0)), px(sy(1)))
        << '\n';
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_max * i / 5.0;
        const double yv = i / 5.0;
        out << fmt::format(R"(<text x="{}" y="{}" font-size="11" text-anchor="middle">{}</text>)", px(sx(xv)),
                           px(sy(0) + 16), format_fixed(xv, 1))
            << '\n';
        out << fmt::format(R"(<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>)", px(sx(0) - 6),
                           px(sy(yv) + 4), format_fixed(yv, 1))
            << '\n';
    }
    out << fmt::format(R"(<text x="{}" y="{}" font-size="12" text-anchor="middle">signature (m)</text>)",
                       px(sx(x_max / 2)), px(kHeight - 12))
        << '\n';
    out << fmt::format(
               R"svg(<text x="14" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">fraction of length</text>)svg",
               px(sy(0.5)), px(sy(0.5)))
        << '\n';
    out << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999999" stroke-dasharray="4 3"/>)",
                       px(sx(reference_x)), px(sy(0)), px(sx(reference_x)), px(sy(1)))
        << '\n';
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const CdfCurve& curve = curves[c];
        std::string d = fmt::format("M {} {}", px(sx(0)), px(sy(0)));
        for (std::size_t i = 0; i < curve.x.size(); ++i) {
            d += fmt::format(" H {} V {}", px(sx(curve.x[i])), px(sy(curve.y[i])));
        }
        d += fmt::format(" H {}", px(sx(x_max)));
        const char* color = kCurveColors[c % kCurveColors.size()];
        const char* dash = c < kCurveColors.size() ? "" : R"( stroke-dasharray="6 3")";
        out << fmt::format(R"(<path d="{}" fill="none" stroke="{}" stroke-width="1.5"{}/>)", d, color, dash)
            << '\n';
        const double ly = sy(0.0) - 10.0 - 14.0 * static_cast<double>(curves.size() - 1 - c);
        out << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1.5"{}/>)",
                           px(kWidth - 170), px(ly - 4), px(kWidth - 150), px(ly - 4), color, dash)
            << '\n';
        out << fmt::format(R"(<text x="{}" y="{}" font-size="11">{}</text>)", px(kWidth - 145), px(ly),
                           xml_escape(labels[c]))
            << '\n';
    }
    out << "</svg>\n";
}

void export_cdf_plot(std::span<const CdfCurve> curves, std::span<const std::string> labels,
                     const std::filesystem::path& path, double reference_x) {
    if (curves.empty()) {
        throw UsageError("cdf plot: no curves given");
    }
    auto out = open_output(path);
    write_cdf_plot(curves, labels, out, reference_x);
}

}  // namespace pathdist
