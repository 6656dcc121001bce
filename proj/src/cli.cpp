#include "flowcomm/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "flowcomm/analysis.hpp"
#include "flowcomm/attributes.hpp"
#include "flowcomm/communities.hpp"
#include "flowcomm/dynamics.hpp"
#include "flowcomm/graph.hpp"
#include "flowcomm/io.hpp"
#include "flowcomm/operators.hpp"

namespace flowcomm {

namespace {

namespace fs = std::filesystem;

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t parse_hash_hex(const std::string& s) {
    return std::stoull(s, nullptr, 16);
}

ModelKind parse_model(const std::string& name) {
    if (name == "conservative")
        return ModelKind::conservative;
    if (name == "nonconservative")
        return ModelKind::nonconservative;
    throw Error("unknown model '" + name + "' (conservative|nonconservative)");
}

AlphaMode parse_alpha_mode(const std::string& name) {
    if (name == "per-component")
        return AlphaMode::per_component;
    if (name == "global")
        return AlphaMode::global;
    throw Error("unknown alpha mode '" + name + "' (per-component|global)");
}

/** max over components of lambda_max(W); equals lambda_max of the whole W. */
double global_lambda_max(const Graph& g) {
    double best = 0.0;
    for (const auto& comp : connected_components(g)) {
        auto sub = g.induced(comp);
        best = std::max(best, largest_adjacency_eigenpair(sub.graph).lambda_max);
    }
    return best;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open output file '" + path.string() + "'");
    return out;
}

void write_json_file(const fs::path& path, const nlohmann::ordered_json& j) {
    auto out = open_output(path);
    out << j.dump(2) << '\n';
    if (!out)
        throw Error("failed writing '" + path.string() + "'");
}

Graph load_graph_restricted(const std::string& path, bool weighted,
                            bool largest_only) {
    Graph g = load_edge_list_file(path, weighted);
    if (g.num_nodes() == 0)
        throw Error("graph '" + path + "' has no nodes");
    if (largest_only)
        return largest_component(g).graph;
    return g;
}

} // namespace

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool_version"] = tool_version;
    j["command"] = command;
    j["graph"] = {
        {"path", graph_path},
        {"hash", hash_hex(graph_hash)},
        {"weighted", weighted},
        {"largest_component_only", largest_component_only},
        {"num_nodes", num_nodes},
        {"num_edges", num_edges},
    };
    if (attrs_path.empty())
        j["attributes"] = nullptr;
    else
        j["attributes"] = {{"path", attrs_path}, {"hash", hash_hex(attrs_hash)}};
    if (items_path.empty())
        j["items"] = nullptr;
    else
        j["items"] = {{"path", items_path}, {"hash", hash_hex(items_hash)}};
    j["model"] = model;
    j["alpha_mode"] = alpha_mode;
    j["sim"] = {
        {"runs", runs},         {"steps", steps},
        {"dt", dt_requested},   {"dt_effective", dt_effective},
        {"seed", seed},         {"eval_step", eval_step},
    };
    j["mu"] = mu;
    j["features"] = features;
    j["undefined_similarity_edges"] = undefined_similarity_edges;
    return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    try {
        RunManifest m;
        m.tool_version = j.at("tool_version").get<std::string>();
        m.command = j.at("command").get<std::string>();
        const auto& graph = j.at("graph");
        m.graph_path = graph.at("path").get<std::string>();
        m.graph_hash = parse_hash_hex(graph.at("hash").get<std::string>());
        m.weighted = graph.at("weighted").get<bool>();
        m.largest_component_only = graph.at("largest_component_only").get<bool>();
        m.num_nodes = graph.at("num_nodes").get<std::size_t>();
        m.num_edges = graph.at("num_edges").get<std::size_t>();
        if (!j.at("attributes").is_null()) {
            m.attrs_path = j.at("attributes").at("path").get<std::string>();
            m.attrs_hash =
                parse_hash_hex(j.at("attributes").at("hash").get<std::string>());
        }
        if (!j.at("items").is_null()) {
            m.items_path = j.at("items").at("path").get<std::string>();
            m.items_hash = parse_hash_hex(j.at("items").at("hash").get<std::string>());
        }
        m.model = j.at("model").get<std::string>();
        m.alpha_mode = j.at("alpha_mode").get<std::string>();
        const auto& sim = j.at("sim");
        m.runs = sim.at("runs").get<std::size_t>();
        m.steps = sim.at("steps").get<std::size_t>();
        m.dt_requested = sim.at("dt").get<double>();
        m.dt_effective = sim.at("dt_effective").get<double>();
        m.seed = sim.at("seed").get<std::uint64_t>();
        m.eval_step = sim.at("eval_step").get<std::size_t>();
        m.mu = j.at("mu").get<std::vector<double>>();
        m.features = j.at("features").get<std::vector<std::string>>();
        m.undefined_similarity_edges =
            j.at("undefined_similarity_edges").get<std::size_t>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed manifest: ") + e.what());
    }
}

RunManifest RunManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open manifest '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("manifest '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

int cmd_spectrum(const SpectrumOptions& opts) {
    Graph g = load_graph_restricted(opts.graph_path, opts.weighted,
                                    opts.largest_component_only);
    const auto model = parse_model(opts.model);
    OperatorKind kind = model == ModelKind::conservative
                            ? OperatorKind::laplacian()
                            : OperatorKind::replicator(global_lambda_max(g));

    auto summary = smallest_eigenvalues(kind, g, opts.k, opts.tol);

    fs::create_directories(opts.out_dir);
    const auto csv_path = fs::path(opts.out_dir) / "spectrum.csv";
    {
        auto out = open_output(csv_path);
        write_spectrum_csv(summary, out);
    }
    const bool converged = summary.all_converged();
    std::cout << "wrote " << csv_path.string() << " (" << summary.eigenvalues.size()
              << " eigenvalues, " << (converged ? "converged" : "partial") << ")\n";
    return converged ? 0 : 2;
}

int cmd_communities(const CommunitiesOptions& opts) {
    Graph g = load_graph_restricted(opts.graph_path, opts.weighted,
                                    opts.largest_component_only);

    if (opts.mu.empty())
        throw Error("at least one --mu threshold is required");
    auto mu = opts.mu;
    std::sort(mu.begin(), mu.end());
    mu.erase(std::unique(mu.begin(), mu.end()), mu.end());

    const auto eval_step =
        opts.eval_step == static_cast<std::size_t>(-1) ? opts.steps : opts.eval_step;
    if (eval_step > opts.steps)
        throw Error("--eval-step " + std::to_string(eval_step) + " exceeds --steps " +
                    std::to_string(opts.steps));

    NodeAttributes attrs;
    const NodeAttributes* attrs_ptr = nullptr;
    std::vector<std::string> features = opts.features;
    if (!opts.attrs_path.empty()) {
        attrs = NodeAttributes::load_csv_file(opts.attrs_path, g);
        attrs_ptr = &attrs;
        if (features.empty())
            features = attrs.features();
        for (const auto& f : features)
            if (!attrs.has_feature(f))
                throw Error("unknown attribute feature '" + f + "' in --features");
    } else if (!features.empty()) {
        throw Error("--features requires --attrs");
    }

    NodeItemSets items;
    const NodeItemSets* items_ptr = nullptr;
    if (!opts.items_path.empty()) {
        items = NodeItemSets::load_file(opts.items_path, g);
        items_ptr = &items;
    }

    SimulationConfig cfg;
    cfg.model = parse_model(opts.model);
    cfg.alpha_mode = parse_alpha_mode(opts.alpha_mode);
    cfg.step_size = opts.dt;
    cfg.num_steps = opts.steps;
    cfg.num_runs = opts.runs;
    cfg.seed = opts.seed;
    cfg.snapshot_steps = {eval_step};
    cfg.num_workers = opts.workers;

    auto bundle = simulate(cfg, g);
    auto sims = edge_similarity(bundle, g, eval_step);
    auto report = multiscale_sweep(g, sims, mu);
    auto summary = scale_summary(report, g, attrs_ptr, features, items_ptr);

    fs::create_directories(opts.out_dir);
    const fs::path out_dir(opts.out_dir);

    nlohmann::ordered_json partitions;
    partitions["eval_step"] = eval_step;
    auto scales = nlohmann::ordered_json::array();
    for (const auto& scale : report.scales)
        scales.push_back(partition_to_json(scale.partition, g));
    partitions["scales"] = std::move(scales);
    write_json_file(out_dir / "partitions.json", partitions);

    write_json_file(out_dir / "multiscale_report.json",
                    multiscale_report_to_json(report, &summary));
    {
        auto out = open_output(out_dir / "cohesiveness.csv");
        write_cohesiveness_csv(report, g, attrs_ptr, features, items_ptr, out);
    }
    if (opts.write_trajectories) {
        auto traj = open_output(out_dir / "trajectories.csv");
        write_trajectory_csv(bundle, g, traj);
        auto steady = open_output(out_dir / "steady.csv");
        write_steady_csv(bundle, g, steady);
    }

    RunManifest manifest;
    manifest.command = "communities";
    manifest.graph_path = opts.graph_path;
    manifest.graph_hash = fnv1a64_file(opts.graph_path);
    manifest.weighted = opts.weighted;
    manifest.largest_component_only = opts.largest_component_only;
    manifest.num_nodes = g.num_nodes();
    manifest.num_edges = g.num_edges();
    manifest.attrs_path = opts.attrs_path;
    if (!opts.attrs_path.empty())
        manifest.attrs_hash = fnv1a64_file(opts.attrs_path);
    manifest.items_path = opts.items_path;
    if (!opts.items_path.empty())
        manifest.items_hash = fnv1a64_file(opts.items_path);
    manifest.model = opts.model;
    manifest.alpha_mode = opts.alpha_mode;
    manifest.runs = opts.runs;
    manifest.steps = opts.steps;
    manifest.dt_requested = opts.dt;
    manifest.dt_effective = bundle.config.step_size;
    manifest.seed = opts.seed;
    manifest.eval_step = eval_step;
    manifest.mu = mu;
    manifest.features = features;
    manifest.undefined_similarity_edges = sims.undefined_count();
    write_json_file(out_dir / "manifest.json", manifest.to_json());

    std::cout << "wrote " << (out_dir / "manifest.json").string() << " and "
              << report.scales.size() << " scale(s) of output ("
              << manifest.undefined_similarity_edges
              << " undefined-similarity edges)\n";
    return 0;
}

namespace {

struct LoadedPartitions {
    RunManifest manifest;
    std::vector<double> mu;
    // Per scale: core labels, sorted; and core size.
    std::vector<std::vector<std::string>> cores;
};

LoadedPartitions load_partitions(const std::string& manifest_path) {
    LoadedPartitions out;
    out.manifest = RunManifest::load(manifest_path);
    const auto dir = fs::path(manifest_path).parent_path();
    const auto part_path = dir / "partitions.json";
    std::ifstream in(part_path);
    if (!in)
        throw Error("cannot open '" + part_path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
        for (const auto& scale : j.at("scales")) {
            out.mu.push_back(scale.at("mu").get<double>());
            const auto& communities = scale.at("communities");
            std::vector<std::string> core;
            if (!communities.empty())
                core = communities.at(0).get<std::vector<std::string>>();
            std::sort(core.begin(), core.end());
            out.cores.push_back(std::move(core));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed partitions file '" + part_path.string() +
                    "': " + e.what());
    }
    return out;
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw Error("scale pair '" + s + "' must look like A:B");
    try {
        return {std::stoul(s.substr(0, colon)), std::stoul(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw Error("scale pair '" + s + "' must contain two scale indices");
    }
}

} // namespace

int cmd_compare(const CompareOptions& opts) {
    auto a = load_partitions(opts.manifest_a);
    auto b = load_partitions(opts.manifest_b);

    if (a.manifest.graph_hash != b.manifest.graph_hash ||
        a.manifest.num_nodes != b.manifest.num_nodes)
        throw Error("node-set mismatch: the two runs used different graphs");

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (opts.scale_pairs.empty()) {
        const auto n = std::min(a.cores.size(), b.cores.size());
        for (std::size_t i = 0; i < n; ++i)
            pairs.emplace_back(i, i);
    } else {
        for (const auto& s : opts.scale_pairs)
            pairs.push_back(parse_pair(s));
    }

    std::vector<CoreOverlap> rows;
    for (auto [ia, ib] : pairs) {
        if (ia >= a.cores.size())
            throw Error("scale index " + std::to_string(ia) + " out of range for '" +
                        opts.manifest_a + "' (" + std::to_string(a.cores.size()) +
                        " scales)");
        if (ib >= b.cores.size())
            throw Error("scale index " + std::to_string(ib) + " out of range for '" +
                        opts.manifest_b + "' (" + std::to_string(b.cores.size()) +
                        " scales)");
        const auto& core_a = a.cores[ia];
        const auto& core_b = b.cores[ib];
        std::size_t shared = 0;
        auto it_a = core_a.begin();
        auto it_b = core_b.begin();
        while (it_a != core_a.end() && it_b != core_b.end()) {
            if (*it_a < *it_b)
                ++it_a;
            else if (*it_b < *it_a)
                ++it_b;
            else {
                ++shared;
                ++it_a;
                ++it_b;
            }
        }
        CoreOverlap row;
        {
            std::ostringstream label;
            label << "mu=" << format_double(a.mu[ia]) << "|mu="
                  << format_double(b.mu[ib]);
            row.scale = label.str();
        }
        row.size_a = core_a.size();
        row.size_b = core_b.size();
        if (!core_a.empty() && !core_b.empty()) {
            const auto denom = opts.jaccard
                                   ? core_a.size() + core_b.size() - shared
                                   : std::min(core_a.size(), core_b.size());
            row.overlap = static_cast<double>(shared) / static_cast<double>(denom);
        }
        rows.push_back(std::move(row));
    }

    fs::create_directories(opts.out_dir);
    const auto csv_path = fs::path(opts.out_dir) / "overlap.csv";
    {
        auto out = open_output(csv_path);
        write_core_overlap_csv(rows, out);
    }
    for (const auto& row : rows)
        std::cout << row.scale << ": cores " << row.size_a << " vs " << row.size_b
                  << ", overlap " << format_double(row.overlap) << '\n';
    std::cout << "wrote " << csv_path.string() << '\n';
    return 0;
}

} // namespace flowcomm
