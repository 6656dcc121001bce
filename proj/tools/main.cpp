#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "flowcomm/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"flowcomm: opinion-flow community analysis on weighted graphs"};
    app.set_version_flag("--version", std::string("flowcomm ") + flowcomm::kToolVersion);
    app.require_subcommand(1);
    // Config files are processed by the root app; sections address
    // subcommands ([communities] steps=12). Subcommands use fallthrough so
    // --config may appear after the subcommand name.
    app.set_config("--config", "", "Read options from an INI file");

    flowcomm::SpectrumOptions spectrum;
    auto* spec_cmd = app.add_subcommand(
        "spectrum", "Smallest eigenvalues of the Laplacian or replicator");
    spec_cmd->add_option("graph", spectrum.graph_path, "Edge list file")->required();
    spec_cmd->add_option("--model", spectrum.model, "Flow model")
        ->check(CLI::IsMember({"conservative", "nonconservative"}))
        ->capture_default_str();
    spec_cmd->add_option("-k,--count", spectrum.k, "Number of eigenvalues")
        ->capture_default_str();
    spec_cmd->add_option("--tol", spectrum.tol, "Relative residual tolerance")
        ->capture_default_str();
    spec_cmd->add_option("--out", spectrum.out_dir, "Output directory")
        ->capture_default_str();
    spec_cmd->add_flag("--unweighted{false}", spectrum.weighted,
                       "Ignore weight columns, use weight 1");
    spec_cmd->add_flag("--keep-all-components{false}",
                       spectrum.largest_component_only,
                       "Operate on the whole graph, not just the largest component");
    spec_cmd->fallthrough();

    flowcomm::CommunitiesOptions communities;
    auto* comm_cmd = app.add_subcommand(
        "communities", "Simulate a flow and cluster by opinion similarity");
    comm_cmd->add_option("graph", communities.graph_path, "Edge list file")->required();
    comm_cmd->add_option("--model", communities.model, "Flow model")
        ->check(CLI::IsMember({"conservative", "nonconservative"}))
        ->capture_default_str();
    comm_cmd->add_option("--alpha-mode", communities.alpha_mode,
                         "Replicator alpha on disconnected graphs")
        ->check(CLI::IsMember({"per-component", "global"}))
        ->capture_default_str();
    comm_cmd->add_option("--runs", communities.runs, "Number of simulation runs Y")
        ->capture_default_str();
    comm_cmd->add_option("--steps", communities.steps, "Euler steps per run")
        ->capture_default_str();
    comm_cmd->add_option("--dt", communities.dt,
                         "Euler step size (0 = half the stability bound)")
        ->capture_default_str();
    comm_cmd->add_option("--seed", communities.seed, "Base seed; run y uses seed^y")
        ->capture_default_str();
    comm_cmd->add_option("--eval-step", communities.eval_step,
                         "Step at which similarity is evaluated (default: --steps)");
    comm_cmd->add_option("--mu", communities.mu,
                         "Similarity threshold scale(s), repeatable")
        ->required();
    comm_cmd->add_option("--attrs", communities.attrs_path, "Node attribute CSV");
    comm_cmd->add_option("--items", communities.items_path, "Node item-set file");
    comm_cmd->add_option("--features", communities.features,
                         "Attribute features to score (default: all)");
    comm_cmd->add_option("--out", communities.out_dir, "Output directory")
        ->capture_default_str();
    comm_cmd->add_option("--workers", communities.workers,
                         "Worker threads (0 = hardware)");
    comm_cmd->add_flag("--unweighted{false}", communities.weighted,
                       "Ignore weight columns, use weight 1");
    comm_cmd->add_flag("--keep-all-components{false}",
                       communities.largest_component_only,
                       "Operate on the whole graph, not just the largest component");
    comm_cmd->add_flag("--write-trajectories", communities.write_trajectories,
                       "Also write trajectories.csv and steady.csv");
    comm_cmd->fallthrough();

    flowcomm::CompareOptions compare;
    auto* cmp_cmd =
        app.add_subcommand("compare", "Core overlap between two finished runs");
    cmp_cmd->add_option("manifest_a", compare.manifest_a, "First run's manifest.json")
        ->required();
    cmp_cmd->add_option("manifest_b", compare.manifest_b, "Second run's manifest.json")
        ->required();
    cmp_cmd->add_option("--pair", compare.scale_pairs,
                        "Scale index pair A:B, repeatable (default: index-matched)");
    cmp_cmd->add_flag("--jaccard", compare.jaccard,
                      "Use the union size instead of min(|A|,|B|) as denominator");
    cmp_cmd->add_option("--out", compare.out_dir, "Output directory")
        ->capture_default_str();
    cmp_cmd->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (spec_cmd->parsed())
            return flowcomm::cmd_spectrum(spectrum);
        if (comm_cmd->parsed())
            return flowcomm::cmd_communities(communities);
        return flowcomm::cmd_compare(compare);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
