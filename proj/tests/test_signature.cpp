#include <gtest/gtest.h>

#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pathdist/graph_io.hpp"
#include "pathdist/path_distance.hpp"
#include "pathdist/signature.hpp"
#include "test_support.hpp"

namespace pathdist {
namespace {

using testing::grid_graph;
using testing::make_graph;

SignatureMap two_edges() {
    SignatureMap sig;
    sig.entries = {{0, 1.0, 5.0}, {1, 3.0, 10.0}};
    return sig;
}

TEST(CdfTest, TwoEdgeArithmetic) {
    const auto sig = two_edges();
    EXPECT_DOUBLE_EQ(cdf_at(sig, 5.0), 0.25);
    EXPECT_EQ(cdf_at(sig, 10.0), 1.0);
    EXPECT_EQ(cdf_at(sig, 4.999), 0.0);
    EXPECT_DOUBLE_EQ(cdf_at(sig, 7.0), 0.25);
    EXPECT_EQ(cdf_at(sig, 1e9), 1.0);
}

TEST(CdfTest, ConstantSignatureJumpsOnce) {
    SignatureMap sig;
    sig.entries = {{0, 2.0, 3.0}, {1, 5.0, 3.0}, {2, 1.0, 3.0}};
    const CdfCurve c = cdf(sig);
    ASSERT_EQ(c.x.size(), 1u);
    EXPECT_EQ(c.x[0], 3.0);
    EXPECT_EQ(c.y[0], 1.0);
}

TEST(CdfTest, ErrorsOnEmptyOrVertexSignature) {
    EXPECT_THROW(cdf(SignatureMap{}), InputError);
    SignatureMap v = two_edges();
    v.target = SignatureTarget::vertex;
    EXPECT_THROW(cdf(v), InputError);
}

TEST(CdfTest, MonotoneAndEndsAtOneOnRandomData) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int trial = 0; trial < 20; ++trial) {
        SignatureMap sig;
        for (int i = 0; i < 50; ++i) {
            sig.entries.push_back({i, u(rng) / 10.0 + 0.1, std::floor(u(rng))});
        }
        const CdfCurve c = cdf(sig);
        for (std::size_t i = 1; i < c.y.size(); ++i) {
            EXPECT_LT(c.x[i - 1], c.x[i]);
            EXPECT_LE(c.y[i - 1], c.y[i]);
        }
        double max = 0.0;
        for (const auto& e : sig.entries) {
            max = std::max(max, e.value);
        }
        EXPECT_EQ(cdf_at(sig, max), 1.0);
    }
}

TEST(CdfTest, IdentityPairIsOneAtTolerance) {
    const auto g = grid_graph(4, 2.0);
    const auto sig = edge_signature(g, g, 2);
    EXPECT_EQ(cdf_at(sig, kDefaultTolerance), 1.0);
    EXPECT_NEAR(sig.total_length(), g.total_length(), 1e-9 * g.total_length());
}

TEST(RampTest, LinearQuantileAndConstant) {
    SignatureMap sig;
    sig.entries = {{0, 1.0, 0.0}, {1, 1.0, 1.0}, {2, 2.0, 10.0}};
    const auto lin = ramp_values(sig, RampKind::linear);
    EXPECT_DOUBLE_EQ(lin[0], 0.0);
    EXPECT_DOUBLE_EQ(lin[1], 0.1);
    EXPECT_DOUBLE_EQ(lin[2], 1.0);
    const auto q = ramp_values(sig, RampKind::quantile);
    EXPECT_DOUBLE_EQ(q[0], 0.25);
    EXPECT_DOUBLE_EQ(q[1], 0.5);
    EXPECT_EQ(q[2], 1.0);
    SignatureMap flat;
    flat.entries = {{0, 1.0, 4.0}, {1, 1.0, 4.0}};
    EXPECT_EQ(ramp_values(flat, RampKind::linear), (std::vector<double>{1.0, 1.0}));
}

TEST(RampTest, ColorEnds) {
    EXPECT_EQ(ramp_color(0.0), "#ffffb2");
    EXPECT_EQ(ramp_color(1.0), "#bd0026");
    EXPECT_EQ(ramp_color(0.5), "#fd8d3c");
}

TEST(SignatureCsvTest, RoundTripIsExact) {
    SignatureMap sig;
    sig.entries = {{7, 1.0 / 3.0, 0.1 + 0.2}, {9, 12.5, 0.0}};
    std::stringstream buf;
    write_signature_csv(sig, buf);
    EXPECT_EQ(buf.str().substr(0, 28), "edge_id,length_m,signature_m");
    const auto back = read_signature_csv(buf);
    ASSERT_EQ(back.entries.size(), 2u);
    EXPECT_EQ(back.entries[0].length, sig.entries[0].length);
    EXPECT_EQ(back.entries[0].value, sig.entries[0].value);
    EXPECT_EQ(back.entries[1].id, 9);
}

TEST(SignatureCsvTest, RejectsMalformedRows) {
    std::istringstream bad("edge_id,length_m,signature_m\n1,2\n");
    EXPECT_THROW(read_signature_csv(bad), ParseError);
    std::istringstream negative("1,2,-3\n");
    EXPECT_THROW(read_signature_csv(negative), ParseError);
}

SignatureMap grid_signature(const EmbeddedGraph& g) {
    SignatureMap sig;
    for (const Edge& e : g.edges()) {
        sig.entries.push_back({e.id.value, e.length, static_cast<double>(e.id.value % 2) * 7.5});
    }
    return sig;
}

std::set<std::string> stroke_colors(const std::string& svg) {
    std::set<std::string> colors;
    const std::regex stroke(R"re(<polyline[^>]*stroke="(#[0-9a-f]{6})")re");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), stroke); it != std::sregex_iterator(); ++it) {
        colors.insert((*it)[1]);
    }
    return colors;
}

TEST(HeatmapTest, SvgColorsFollowSignature) {
    const auto g = grid_graph(3, 1.0);
    std::ostringstream two;
    write_heatmap(g, grid_signature(g), HeatmapFormat::svg, RampKind::quantile, two);
    EXPECT_EQ(stroke_colors(two.str()).size(), 2u);
    SignatureMap flat = grid_signature(g);
    for (auto& e : flat.entries) {
        e.value = 2.0;
    }
    std::ostringstream one;
    write_heatmap(g, flat, HeatmapFormat::svg, RampKind::linear, one);
    EXPECT_EQ(stroke_colors(one.str()), (std::set<std::string>{"#bd0026"}));
}

TEST(HeatmapTest, SvgIsDeterministicAndFlipsY) {
    const auto g = make_graph({{0, 0}, {10, 0}, {10, 5}}, {{0, 1}, {1, 2}});
    SignatureMap sig;
    sig.entries = {{0, 10.0, 1.0}, {1, 5.0, 2.0}};
    std::ostringstream a;
    std::ostringstream b;
    write_heatmap(g, sig, HeatmapFormat::svg, RampKind::linear, a);
    write_heatmap(g, sig, HeatmapFormat::svg, RampKind::linear, b);
    EXPECT_EQ(a.str(), b.str());
    // Width 800: scale 78 px/m, so y = 0 maps to 10 + 5 * 78 = 400.
    EXPECT_NE(a.str().find(R"(points="10.00,400.00 790.00,400.00")"), std::string::npos) << a.str();
    EXPECT_NE(a.str().find(R"(points="790.00,400.00 790.00,10.00")"), std::string::npos);
}

TEST(HeatmapTest, GeoJsonRoundTrip) {
    const auto g = grid_graph(3, 1.5);
    const SignatureMap sig = grid_signature(g);
    std::stringstream buf;
    write_heatmap(g, sig, HeatmapFormat::geojson, RampKind::quantile, buf);
    const auto doc = nlohmann::json::parse(buf.str());
    double max_ramp = 0.0;
    for (const auto& f : doc["features"]) {
        max_ramp = std::max(max_ramp, f["properties"]["ramp_value"].get<double>());
    }
    EXPECT_EQ(max_ramp, 1.0);
    buf.clear();
    buf.seekg(0);
    const auto back = read_heatmap_geojson(buf);
    ASSERT_EQ(back.entries.size(), sig.entries.size());
    for (std::size_t i = 0; i < sig.entries.size(); ++i) {
        EXPECT_EQ(back.entries[i].id, sig.entries[i].id);
        EXPECT_EQ(back.entries[i].value, sig.entries[i].value);
        EXPECT_NEAR(back.entries[i].length, sig.entries[i].length, 1e-12);
    }
}

TEST(HeatmapTest, UnsupportedFormatIsUsageError) {
    EXPECT_THROW(parse_heatmap_format("png"), UsageError);
    EXPECT_THROW(parse_ramp("log"), UsageError);
}

TEST(CdfPlotTest, RendersCurvesAndReferenceLine) {
    const CdfCurve a = cdf(two_edges());
    SignatureMap other = two_edges();
    other.entries[0].value = 30.0;
    const std::vector<CdfCurve> curves{a, cdf(other)};
    const std::vector<std::string> labels{"G->H", "H->G"};
    std::ostringstream out;
    write_cdf_plot(curves, labels, out);
    const std::string svg = out.str();
    EXPECT_NE(svg.find("#1f77b4"), std::string::npos);
    EXPECT_NE(svg.find("#d62728"), std::string::npos);
    EXPECT_NE(svg.find("#999999"), std::string::npos);
    EXPECT_NE(svg.find("G-&gt;H"), std::string::npos);
    std::ostringstream single;
    write_cdf_plot(std::span(curves).first(1), std::span(labels).first(1), single);
    EXPECT_NE(single.str().find("<path"), std::string::npos);
}

TEST(CdfPlotTest, EmptyListIsUsageError) {
    std::ostringstream out;
    EXPECT_THROW(write_cdf_plot({}, {}, out), UsageError);
}

}  // namespace
}  // namespace pathdist
