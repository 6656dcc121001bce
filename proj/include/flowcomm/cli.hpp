#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace flowcomm {

inline constexpr char kToolVersion[] = "0.1.0";

/** Everything needed to reproduce a run byte-for-byte: inputs (with content
 *  hashes), simulation parameters, and scale list. Deliberately contains no
 *  timestamps or host information. */
struct RunManifest {
    std::string tool_version = kToolVersion;
    std::string command;

    std::string graph_path;
    std::uint64_t graph_hash = 0;
    bool weighted = true;
    bool largest_component_only = true;
    std::size_t num_nodes = 0; // after component restriction
    std::size_t num_edges = 0;

    std::string attrs_path; // empty when absent
    std::uint64_t attrs_hash = 0;
    std::string items_path;
    std::uint64_t items_hash = 0;

    std::string model = "conservative";
    std::string alpha_mode = "per-component";
    std::size_t runs = 100;
    std::size_t steps = 100;
    double dt_requested = 0.0;
    double dt_effective = 0.0;
    std::uint64_t seed = 0;
    std::size_t eval_step = 100;
    std::vector<double> mu;
    std::vector<std::string> features;

    std::size_t undefined_similarity_edges = 0;

    nlohmann::ordered_json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
    static RunManifest load(const std::string& path);
};

struct SpectrumOptions {
    std::string graph_path;
    bool weighted = true;
    std::string model = "conservative"; // conservative | nonconservative
    std::size_t k = 6;
    double tol = 1e-9;
    std::string out_dir = ".";
    bool largest_component_only = true;
};

struct CommunitiesOptions {
    std::string graph_path;
    bool weighted = true;
    std::string model = "conservative";
    std::string alpha_mode = "per-component"; // per-component | global
    std::size_t runs = 100;
    std::size_t steps = 100;
    double dt = 0.0; // 0 = half the stability bound
    std::uint64_t seed = 0;
    std::size_t eval_step = static_cast<std::size_t>(-1); // default: = steps
    std::vector<double> mu;
    std::string attrs_path;
    std::string items_path;
    std::vector<std::string> features; // default: every attribute feature
    std::string out_dir = ".";
    bool largest_component_only = true;
    std::size_t workers = 0;
    bool write_trajectories = false;
};

struct CompareOptions {
    std::string manifest_a;
    std::string manifest_b;
    std::vector<std::string> scale_pairs; // "i:j" indices; empty = index-matched
    bool jaccard = false;
    std::string out_dir = ".";
};

/** Writes <out>/spectrum.csv. Returns 0, or 2 when the eigensolver left
 *  unconverged values (partial output is still written). */
int cmd_spectrum(const SpectrumOptions& opts);

/** Writes <out>/partitions.json, multiscale_report.json, cohesiveness.csv
 *  and manifest.json (plus trajectories.csv/steady.csv on request). */
int cmd_communities(const CommunitiesOptions& opts);

/** Writes <out>/overlap.csv comparing cores of two finished runs. */
int cmd_compare(const CompareOptions& opts);

} // namespace flowcomm
