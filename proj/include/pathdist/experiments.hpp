#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pathdist/graph.hpp"
#include "pathdist/map_matching.hpp"

namespace pathdist {

/// Perturbed copies of the 6x6 grid over [0,10]^2 with vertices at even
/// coordinates. Vertex (i, j) moves by (alpha, beta), both uniform on
/// [-p, p]; edges stay straight.
struct PerturbationSpec {
    double p = 0.0;
    std::size_t seed_count = 20;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// Unperturbed grid: vertex id = row * 6 + col at (2 col, 2 row);
/// horizontal edges first, then vertical.
EmbeddedGraph base_grid();

/// Seed of the generator for one (p, seed index) instance: splitmix64
/// steps over rng_seed, the bits of p and the index.
std::uint64_t instance_seed(std::uint64_t rng_seed, double p, std::size_t seed_index);

/// Grid perturbed by a mt19937_64 seeded with `seed`. Offsets are drawn
/// per vertex in id order, x then y, as -p + 2p u with u = (draw >> 11) 2^-53.
EmbeddedGraph perturb_grid(double p, std::uint64_t seed);

std::vector<EmbeddedGraph> generate_perturbed(const PerturbationSpec& spec);

struct StudyOptions {
    std::vector<double> p_values{0.1, 0.3, 0.5, 0.7, 0.9};
    std::size_t seed_count = 20;
    std::size_t k = 3;
    double tol = kDefaultTolerance;
    std::uint64_t rng_seed = 1;
    std::size_t workers = 1;
};

struct StudyRow {
    double p = 0.0;
    std::size_t seed = 0;
    double distance = 0.0;
};

struct BoxSummary {
    double p = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

struct StudyResult {
    std::vector<StudyRow> rows;
    std::vector<BoxSummary> boxes;
};

/// Quantile of sorted values by linear interpolation between order
/// statistics at position q (n - 1).
double interpolated_quantile(const std::vector<double>& sorted, double q);

/// Directed distance from Π^k of every perturbed grid into the base grid.
/// Instances run in parallel; rows are ordered by (p, seed).
StudyResult run_perturbation_study(const StudyOptions& options);

/// Columns: p, seed, distance_m.
void write_study_csv(const StudyResult& result, std::ostream& out);
/// Columns: p, min, q1, median, q3, max.
void write_study_summary_csv(const StudyResult& result, std::ostream& out);
/// Boxplot per p with the sqrt(2) p displacement bound marked.
void write_study_boxplot(const StudyResult& result, std::ostream& out);

/// Inputs and switches of a full reproduction run.
struct RunConfig {
    std::string from;
    std::string to;
    std::vector<std::size_t> ks{1, 2, 3};
    double tol = kDefaultTolerance;
    std::size_t workers = 1;
    std::filesystem::path out_dir = "out";
    bool contract = false;
    bool strict = false;
    bool both = false;
    std::optional<std::filesystem::path> checkpoint_dir;

    void validate() const;
};

/// Flat `key = value` lines; '#' starts a comment. Keys mirror the CLI
/// flags: from, to, k (comma list), tol, workers, out-dir, contract, strict,
/// both, checkpoint. Unknown keys or bad values raise UsageError.
std::map<std::string, std::string> read_config_pairs(std::istream& in, const std::string& name = "config");
void apply_config(RunConfig& config, const std::map<std::string, std::string>& pairs);
RunConfig load_run_config(const std::filesystem::path& file);

/// Writes stats, distance reports and summaries, edge signatures, CDFs,
/// heat-maps and the separation census into config.out_dir, followed by
/// manifest.json listing the config and every emitted file. Returns the
/// emitted files relative to out_dir.
std::vector<std::string> run_all(const RunConfig& config);

inline constexpr const char* kVersion = "1.0.0";

}  // namespace pathdist
