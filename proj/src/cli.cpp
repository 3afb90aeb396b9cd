#include "pathdist/cli.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pathdist/experiments.hpp"
#include "pathdist/format.hpp"
#include "pathdist/frechet.hpp"
#include "pathdist/fscore.hpp"
#include "pathdist/graph_io.hpp"
#include "pathdist/path_distance.hpp"
#include "pathdist/report_io.hpp"
#include "pathdist/signature.hpp"

namespace pathdist {

namespace {

PolyLine load_curve_checked(const std::string& file) {
    if (!std::filesystem::is_regular_file(file)) {
        throw UsageError("missing curve file: " + file);
    }
    return load_curve(file);
}

SignatureMap load_signature_checked(const std::string& file) {
    if (!std::filesystem::is_regular_file(file)) {
        throw UsageError("missing signature file: " + file);
    }
    return load_signature_csv(file);
}

std::string to_text(const auto& writer) {
    std::ostringstream s;
    writer(s);
    return s.str();
}

PercentileMode parse_percentile(const std::string& name) {
    if (name == "weighted") {
        return PercentileMode::weighted;
    }
    if (name == "unweighted") {
        return PercentileMode::unweighted;
    }
    throw UsageError("unknown percentile mode '" + name + "'");
}

std::string with_suffix(const std::string& file, const std::string& suffix) {
    const std::filesystem::path p(file);
    return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

struct Common {
    double tol = kDefaultTolerance;
    std::size_t workers = 1;
    bool contract = false;
    std::string out_dir;
};

void add_common(CLI::App* cmd, Common& c, bool graphs) {
    cmd->add_option("--tol", c.tol, "Absolute tolerance in meters")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
    if (graphs) {
        cmd->add_flag("--contract", c.contract, "Contract degree-2 vertices after loading");
    }
    cmd->add_option("--out-dir", c.out_dir, "Directory for outputs");
}

std::filesystem::path out_path(const Common& c, const std::string& name) {
    return c.out_dir.empty() ? std::filesystem::path(name) : std::filesystem::path(c.out_dir) / name;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Path-based distance between embedded street-map graphs", "pathdist"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Common common;
    std::function<void()> action;

    // stats
    std::vector<std::string> stats_graphs;
    bool stats_json_out = false;
    auto* stats = app.add_subcommand("stats", "Vertex, edge and length counts");
    stats->add_option("--graph", stats_graphs, "Graph: DIR or VERTICES.csv,EDGES.csv")->required();
    stats->add_flag("--json", stats_json_out, "Print JSON");
    add_common(stats, common, true);
    stats->callback([&] {
        action = [&] {
            nlohmann::json all = nlohmann::json::array();
            if (!stats_json_out) {
                out << "graph,vertices,vertices_degree_not3,edges,total_length_km\n";
            }
            for (const std::string& spec : stats_graphs) {
                const GraphStats s = graph_stats(load_graph_spec(spec, common.contract));
                if (stats_json_out) {
                    nlohmann::json j = stats_json(s);
                    j["graph"] = spec;
                    all.push_back(j);
                } else {
                    out << spec << ',' << s.vertex_count << ',' << s.vertex_count_degree_not3 << ',' << s.edge_count
                        << ',' << format_fixed(s.total_length / 1000.0, 3) << '\n';
                }
            }
            if (stats_json_out) {
                out << all.dump(2) << '\n';
            }
        };
    });

    // distance
    std::string from;
    std::string to;
    std::size_t k = 3;
    bool both = false;
    bool strict = false;
    std::string report_out;
    std::string summary_out;
    std::string checkpoint;
    std::string percentile = "weighted";
    auto* distance = app.add_subcommand("distance", "Directed path-based distance from G into H");
    distance->add_option("--from", from, "Graph G")->required();
    distance->add_option("--to", to, "Graph H")->required();
    distance->add_option("--k", k, "Link length")->check(CLI::PositiveNumber);
    distance->add_flag("--both", both, "Also compute H into G");
    distance->add_flag("--strict", strict, "Restrict to paths through separated, degree != 3 vertices");
    distance->add_option("--out", report_out, "Per-path report CSV");
    distance->add_option("--summary", summary_out, "Summary JSON");
    distance->add_option("--checkpoint", checkpoint, "Directory for resumable chunk results");
    distance->add_option("--percentile", percentile, "weighted or unweighted p90 in the printed line");
    add_common(distance, common, true);
    distance->callback([&] {
        action = [&] {
            const PercentileMode mode = parse_percentile(percentile);
            const EmbeddedGraph g = load_graph_spec(from, common.contract);
            const EmbeddedGraph h = load_graph_spec(to, common.contract);
            DistanceOptions options;
            options.tol = common.tol;
            options.workers = common.workers;
            options.strict = strict;
            if (!checkpoint.empty()) {
                options.checkpoint_dir = checkpoint;
            }
            std::vector<PathDistanceReport> reports{directed_path_distance(g, h, k, options)};
            if (both) {
                reports.push_back(directed_path_distance(h, g, k, options));
                reports.back().direction = "H->G";
            }
            for (const PathDistanceReport& r : reports) {
                const bool reverse = r.direction != "G->H";
                const EmbeddedGraph& source = reverse ? h : g;
                const std::string tag = reverse ? "H-G" : "G-H";
                const std::string stem = "k" + std::to_string(k) + "_" + tag;
                std::string csv_file = report_out.empty() ? std::string() : report_out;
                std::string json_file = summary_out;
                if (reverse) {
                    csv_file = csv_file.empty() ? csv_file : with_suffix(csv_file, "_H-G");
                    json_file = json_file.empty() ? json_file : with_suffix(json_file, "_H-G");
                }
                if (csv_file.empty() && !common.out_dir.empty()) {
                    csv_file = out_path(common, "distance_" + stem + ".csv").string();
                }
                if (json_file.empty() && !common.out_dir.empty()) {
                    json_file = out_path(common, "summary_" + stem + ".json").string();
                }
                if (!csv_file.empty()) {
                    write_text_file(csv_file, to_text([&](std::ostream& s) { write_distance_report_csv(source, r, s); }));
                }
                if (!json_file.empty()) {
                    write_text_file(json_file, summary_json(r).dump(2) + "\n");
                }
                out << r.direction << " k=" << r.k << " paths=" << r.summary.path_count
                    << " max=" << format_fixed(r.summary.max, 3) << " p90=" << format_fixed(r.summary.p90(mode), 3)
                    << " mean=" << format_fixed(r.summary.mean_weighted, 3);
                if (r.approximation_bound) {
                    out << " bound=" << format_fixed(*r.approximation_bound, 3);
                }
                out << '\n';
            }
            if (both) {
                out << "undirected k=" << k << " max="
                    << format_fixed(std::max(reports[0].summary.max, reports[1].summary.max), 3) << '\n';
            }
        };
    });

    // signature
    std::string sig_out;
    std::string heatmap_out;
    std::string geojson_out;
    std::string ramp = "quantile";
    bool vertex_target = false;
    auto* signature = app.add_subcommand("signature", "Per-edge (or per-vertex) local distance");
    signature->add_option("--from", from, "Graph G")->required();
    signature->add_option("--to", to, "Graph H")->required();
    signature->add_option("--k", k, "Link length")->check(CLI::PositiveNumber);
    signature->add_option("--out", sig_out, "Signature CSV");
    signature->add_option("--heatmap", heatmap_out, "Heat-map SVG");
    signature->add_option("--geojson", geojson_out, "Heat-map GeoJSON");
    signature->add_option("--ramp", ramp, "linear or quantile");
    signature->add_flag("--vertex", vertex_target, "Per-vertex signature");
    add_common(signature, common, true);
    signature->callback([&] {
        action = [&] {
            const RampKind ramp_kind = parse_ramp(ramp);
            if (vertex_target && (!heatmap_out.empty() || !geojson_out.empty())) {
                throw UsageError("heat-maps need an edge signature");
            }
            const EmbeddedGraph g = load_graph_spec(from, common.contract);
            const EmbeddedGraph h = load_graph_spec(to, common.contract);
            DistanceOptions options;
            options.tol = common.tol;
            options.workers = common.workers;
            const PathDistanceReport report = directed_path_distance(g, h, k, options);
            const SignatureMap sig = vertex_target ? vertex_signature(g, report) : edge_signature(g, report);
            const std::string csv = to_text([&](std::ostream& s) { write_signature_csv(sig, s); });
            const std::string stem = (vertex_target ? "vertex_signature_k" : "signature_k") + std::to_string(k);
            if (!sig_out.empty()) {
                write_text_file(sig_out, csv);
            } else if (!common.out_dir.empty()) {
                write_text_file(out_path(common, stem + ".csv"), csv);
            } else {
                out << csv;
            }
            if (!heatmap_out.empty()) {
                write_text_file(heatmap_out, to_text([&](std::ostream& s) {
                                    write_heatmap(g, sig, HeatmapFormat::svg, ramp_kind, s);
                                }));
            }
            if (!geojson_out.empty()) {
                write_text_file(geojson_out, to_text([&](std::ostream& s) {
                                    write_heatmap(g, sig, HeatmapFormat::geojson, ramp_kind, s);
                                }));
            }
        };
    });

    // cdf
    std::vector<std::string> sig_files;
    std::vector<std::string> cdf_outs;
    std::vector<std::string> cdf_labels;
    std::string plot_out;
    double reference_x = 20.0;
    auto* cdf_cmd = app.add_subcommand("cdf", "Length-weighted CDF of edge signatures");
    cdf_cmd->add_option("--sig", sig_files, "Signature CSV (repeatable)")->required();
    cdf_cmd->add_option("--out", cdf_outs, "CDF CSV per signature (repeatable)");
    cdf_cmd->add_option("--plot", plot_out, "CDF plot SVG");
    cdf_cmd->add_option("--label", cdf_labels, "Legend label per signature (repeatable)");
    cdf_cmd->add_option("--reference", reference_x, "Reference line position in meters");
    add_common(cdf_cmd, common, false);
    cdf_cmd->callback([&] {
        action = [&] {
            if (!cdf_outs.empty() && cdf_outs.size() != sig_files.size()) {
                throw UsageError("--out must be given once per --sig");
            }
            if (!cdf_labels.empty() && cdf_labels.size() != sig_files.size()) {
                throw UsageError("--label must be given once per --sig");
            }
            std::vector<CdfCurve> curves;
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < sig_files.size(); ++i) {
                const SignatureMap sig = load_signature_checked(sig_files[i]);
                curves.push_back(cdf(sig));
                labels.push_back(cdf_labels.empty() ? std::filesystem::path(sig_files[i]).stem().string()
                                                    : cdf_labels[i]);
                const std::string csv = to_text([&](std::ostream& s) { write_cdf_csv(curves.back(), s); });
                if (!cdf_outs.empty()) {
                    write_text_file(out_path(common, cdf_outs[i]), csv);
                }
                out << labels.back() << " cdf(" << format_number(common.tol) << ")="
                    << format_fixed(cdf_at(sig, common.tol), 6) << " cdf(" << format_number(reference_x)
                    << ")=" << format_fixed(cdf_at(sig, reference_x), 6) << '\n';
            }
            if (!plot_out.empty()) {
                write_text_file(out_path(common, plot_out),
                                to_text([&](std::ostream& s) { write_cdf_plot(curves, labels, s, reference_x); }));
            }
        };
    });

    // separation
    std::size_t radius_steps = 256;
    auto* separation = app.add_subcommand("separation", "Count of d-separated vertices at d = Δ1, Δ2, Δ3");
    separation->add_option("--from", from, "Graph G")->required();
    separation->add_option("--to", to, "Graph H")->required();
    separation->add_option("--radius-steps", radius_steps, "Scan steps for polyline radii")
        ->check(CLI::PositiveNumber);
    add_common(separation, common, true);
    separation->callback([&] {
        action = [&] {
            const EmbeddedGraph g = load_graph_spec(from, common.contract);
            const EmbeddedGraph h = load_graph_spec(to, common.contract);
            DistanceOptions options;
            options.tol = common.tol;
            options.workers = common.workers;
            RadiusOptions radius;
            radius.scan_steps = radius_steps;
            const SeparationCensus census = separation_census(g, h, options, radius);
            out << "k,d_m,separated,vertices\n";
            for (std::size_t i = 0; i < census.reports.size(); ++i) {
                out << i + 1 << ',' << format_fixed(census.distances[i], 3) << ','
                    << census.reports[i].separated_count << ',' << census.reports[i].vertex_count << '\n';
            }
            if (!common.out_dir.empty()) {
                write_text_file(out_path(common, "separation.json"), separation_json(census).dump(2) + "\n");
            }
        };
    });

    // mapmatch
    std::string graph_spec;
    std::string curve_file;
    std::string witness_out;
    bool exhaustive = false;
    auto* mapmatch = app.add_subcommand("mapmatch", "Fréchet map-matching distance of a curve into a graph");
    mapmatch->add_option("--graph", graph_spec, "Graph H")->required();
    mapmatch->add_option("--curve", curve_file, "Curve CSV (x,y rows)")->required();
    mapmatch->add_option("--witness", witness_out, "Write a matching path as CSV");
    mapmatch->add_flag("--exhaustive", exhaustive, "Scan every link instead of the spatial grid");
    add_common(mapmatch, common, true);
    mapmatch->callback([&] {
        action = [&] {
            const PolyLine curve = load_curve_checked(curve_file);
            const EmbeddedGraph h = load_graph_spec(graph_spec, common.contract);
            MatchOptions match_options;
            match_options.exhaustive = exhaustive;
            const MatchIndex index(h, match_options);
            const MatchResult r = map_match(curve, index, common.tol, !witness_out.empty());
            out << format_fixed(r.distance, 6) << '\n';
            if (r.witness) {
                write_text_file(out_path(common, witness_out), to_text([&](std::ostream& s) {
                                    s << "x,y\n";
                                    for (const Point2D& p : r.witness->points()) {
                                        s << format_number(p.x) << ',' << format_number(p.y) << '\n';
                                    }
                                }));
            }
        };
    });

    // frechet
    std::vector<std::string> curves;
    bool discrete = false;
    auto* frechet = app.add_subcommand("frechet", "Fréchet distance between two curves");
    frechet->add_option("--curve", curves, "Curve CSV, given twice")->required()->expected(1, 2);
    frechet->add_flag("--discrete", discrete, "Discrete Fréchet distance over the vertices");
    add_common(frechet, common, false);
    frechet->callback([&] {
        action = [&] {
            if (curves.size() != 2) {
                throw UsageError("frechet needs exactly two --curve files");
            }
            const PolyLine a = load_curve_checked(curves[0]);
            const PolyLine b = load_curve_checked(curves[1]);
            const double d = discrete ? discrete_frechet(a, b) : frechet_distance(a, b, common.tol);
            out << format_fixed(d, 6) << '\n';
        };
    });

    // fscore
    FScoreParams fparams;
    std::string fscore_out;
    std::string fscore_heatmap;
    auto* fscore = app.add_subcommand("fscore", "Marbles-and-holes F-score baseline");
    fscore->add_option("--from", from, "Graph whose vertices seed the samples")->required();
    fscore->add_option("--to", to, "Reference graph")->required();
    fscore->add_option("--interval", fparams.interval, "Sample spacing in meters")->check(CLI::PositiveNumber);
    fscore->add_option("--match-dist", fparams.matched_distance, "Matched distance in meters")
        ->check(CLI::NonNegativeNumber);
    fscore->add_option("--max-path", fparams.max_path_length, "Walk radius in meters")->check(CLI::NonNegativeNumber);
    fscore->add_option("--out", fscore_out, "Per-edge F-score CSV");
    fscore->add_option("--heatmap", fscore_heatmap, "Heat-map SVG");
    fscore->add_option("--ramp", ramp, "linear or quantile");
    add_common(fscore, common, true);
    fscore->callback([&] {
        action = [&] {
            const RampKind ramp_kind = parse_ramp(ramp);
            const EmbeddedGraph g = load_graph_spec(from, common.contract);
            const EmbeddedGraph h = load_graph_spec(to, common.contract);
            const FScoreResult r = fscore_signature(g, h, fparams, common.workers);
            out << "fscore=" << format_fixed(r.global, 6) << " matched=" << r.matched
                << " marbles=" << r.total_marbles << " holes=" << r.total_holes << '\n';
            if (!fscore_out.empty()) {
                write_text_file(out_path(common, fscore_out),
                                to_text([&](std::ostream& s) { write_fscore_csv(r, s); }));
            }
            if (!fscore_heatmap.empty()) {
                write_text_file(out_path(common, fscore_heatmap), to_text([&](std::ostream& s) {
                                    write_heatmap(g, r.edge_scores, HeatmapFormat::svg, ramp_kind, s);
                                }));
            }
        };
    });

    // perturb
    PerturbationSpec pspec;
    auto* perturb = app.add_subcommand("perturb", "Write perturbed 6x6 grids");
    perturb->add_option("--p", pspec.p, "Perturbation index in [0, 1]")->required()->check(CLI::Range(0.0, 1.0));
    perturb->add_option("--seeds", pspec.seed_count, "Number of instances");
    perturb->add_option("--rng-seed", pspec.rng_seed, "Generator seed");
    add_common(perturb, common, false);
    perturb->callback([&] {
        action = [&] {
            if (common.out_dir.empty()) {
                throw UsageError("perturb needs --out-dir");
            }
            const std::filesystem::path root(common.out_dir);
            auto save = [&](const EmbeddedGraph& g, const std::filesystem::path& dir) {
                std::filesystem::create_directories(dir);
                save_graph(g, dir / "vertices.csv", dir / "edges.csv");
            };
            save(base_grid(), root / "grid");
            const auto graphs = generate_perturbed(pspec);
            for (std::size_t i = 0; i < graphs.size(); ++i) {
                std::ostringstream name;
                name << "p" << format_number(pspec.p) << "_s" << std::setw(2) << std::setfill('0') << i;
                save(graphs[i], root / name.str());
                out << (root / name.str()).string() << '\n';
            }
        };
    });

    // study
    StudyOptions study_options;
    auto* study = app.add_subcommand("study", "Perturbed-grid study: distance of each G_p into the grid");
    study->add_option("--p", study_options.p_values, "Perturbation indices")->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));
    study->add_option("--seeds", study_options.seed_count, "Instances per p")->check(CLI::PositiveNumber);
    study->add_option("--k", study_options.k, "Link length")->check(CLI::PositiveNumber);
    study->add_option("--rng-seed", study_options.rng_seed, "Generator seed");
    add_common(study, common, false);
    study->callback([&] {
        action = [&] {
            study_options.tol = common.tol;
            study_options.workers = common.workers;
            const StudyResult r = run_perturbation_study(study_options);
            const std::string summary = to_text([&](std::ostream& s) { write_study_summary_csv(r, s); });
            out << summary;
            if (!common.out_dir.empty()) {
                write_text_file(out_path(common, "study.csv"),
                                to_text([&](std::ostream& s) { write_study_csv(r, s); }));
                write_text_file(out_path(common, "study_summary.csv"), summary);
                write_text_file(out_path(common, "study_boxplot.svg"),
                                to_text([&](std::ostream& s) { write_study_boxplot(r, s); }));
            }
        };
    });

    // run
    std::string config_file;
    std::string ks_text;
    auto* run = app.add_subcommand("run", "Full reproduction run into an output directory");
    run->add_option("--config", config_file, "key = value config file");
    auto* run_from = run->add_option("--from", from, "Graph G");
    auto* run_to = run->add_option("--to", to, "Graph H");
    auto* run_k = run->add_option("--k", ks_text, "Comma-separated link lengths");
    auto* run_both = run->add_flag("--both", both, "Both directions");
    auto* run_strict = run->add_flag("--strict", strict, "Strict path set");
    auto* run_checkpoint = run->add_option("--checkpoint", checkpoint, "Checkpoint directory");
    add_common(run, common, true);
    run->callback([&] {
        action = [&] {
            RunConfig config = config_file.empty() ? RunConfig{} : load_run_config(config_file);
            std::map<std::string, std::string> overrides;
            if (run_from->count() > 0) {
                overrides["from"] = from;
            }
            if (run_to->count() > 0) {
                overrides["to"] = to;
            }
            if (run_k->count() > 0) {
                overrides["k"] = ks_text;
            }
            if (run_checkpoint->count() > 0) {
                overrides["checkpoint"] = checkpoint;
            }
            apply_config(config, overrides);
            if (run_both->count() > 0) {
                config.both = true;
            }
            if (run_strict->count() > 0) {
                config.strict = true;
            }
            if (run->get_option("--contract")->count() > 0) {
                config.contract = true;
            }
            if (run->get_option("--tol")->count() > 0) {
                config.tol = common.tol;
            }
            if (run->get_option("--workers")->count() > 0) {
                config.workers = common.workers;
            }
            if (run->get_option("--out-dir")->count() > 0) {
                config.out_dir = common.out_dir;
            }
            const auto files = run_all(config);
            for (const std::string& f : files) {
                out << (config.out_dir / f).string() << '\n';
            }
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    try {
        if (action) {
            action();
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace pathdist
