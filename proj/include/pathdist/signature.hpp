#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathdist/graph.hpp"

namespace pathdist {

enum class SignatureTarget { edge, vertex };

struct SignatureEntry {
    std::int64_t id = 0;
    /// Edge length in meters; 0 for vertex entries.
    double length = 0.0;
    /// Signature value in meters.
    double value = 0.0;
};

/// Per-edge or per-vertex local signature values, in graph order.
struct SignatureMap {
    SignatureTarget target = SignatureTarget::edge;
    std::size_t k = 0;
    std::vector<SignatureEntry> entries;

    double total_length() const;
    std::optional<double> value_of(std::int64_t id) const;
};

/// Step function of the length-weighted distribution: y is the fraction of
/// total length whose signature is <= x. Breakpoints are the distinct
/// signature values in increasing order; the last y is exactly 1.
struct CdfCurve {
    std::vector<double> x;
    std::vector<double> y;

    /// Closed at breakpoints: includes signatures equal to `at`.
    double at(double at) const;
};

/// Throws InputError for an empty or vertex signature, or zero total length.
CdfCurve cdf(const SignatureMap& sig);
double cdf_at(const SignatureMap& sig, double x);

enum class RampKind { linear, quantile };

/// Normalized color position in [0, 1] per entry. Linear: (v - min) / (max - min).
/// Quantile: length-weighted CDF value of v. A constant signature maps to 1.
std::vector<double> ramp_values(const SignatureMap& sig, RampKind ramp);
/// Yellow to red color for a ramp position, as "#rrggbb".
std::string ramp_color(double t);

/// Signature CSV: header "edge_id,length_m,signature_m" (vertex maps use
/// "vertex_id,length_m,signature_m").
void write_signature_csv(const SignatureMap& sig, std::ostream& out);
SignatureMap read_signature_csv(std::istream& in, const std::string& name = "signature");
void save_signature_csv(const SignatureMap& sig, const std::filesystem::path& path);
SignatureMap load_signature_csv(const std::filesystem::path& path);

void write_cdf_csv(const CdfCurve& curve, std::ostream& out);

/// Raised for unsupported export formats or empty plot input.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class HeatmapFormat { svg, geojson };
HeatmapFormat parse_heatmap_format(std::string_view name);
RampKind parse_ramp(std::string_view name);

/// Draws every edge of g carrying an entry in the edge signature.
void write_heatmap(const EmbeddedGraph& g, const SignatureMap& sig, HeatmapFormat format, RampKind ramp,
                   std::ostream& out);
void export_heatmap(const EmbeddedGraph& g, const SignatureMap& sig, HeatmapFormat format, RampKind ramp,
                    const std::filesystem::path& path);
/// Reads the edge_id / signature_m properties back from an exported GeoJSON heat-map.
SignatureMap read_heatmap_geojson(std::istream& in);

/// Step plot of one or more CDF curves with a reference line at
/// `reference_x` meters. Throws UsageError on an empty list.
void write_cdf_plot(std::span<const CdfCurve> curves, std::span<const std::string> labels, std::ostream& out,
                    double reference_x = 20.0);
void export_cdf_plot(std::span<const CdfCurve> curves, std::span<const std::string> labels,
                     const std::filesystem::path& path, double reference_x = 20.0);

}  // namespace pathdist
