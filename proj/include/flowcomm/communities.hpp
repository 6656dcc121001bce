#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "flowcomm/dynamics.hpp"
#include "flowcomm/graph.hpp"

namespace flowcomm {

/** Per-edge opinion similarity averaged over runs, aligned with the graph's
 *  canonical edge list. Undefined edges (a steady-state value too close to
 *  zero in some run) are flagged, never silently zero. */
struct EdgeSimilarity {
    std::vector<double> values;
    std::vector<char> defined;
    std::size_t eval_step = 0;

    std::size_t undefined_count() const;
};

/** s_uv(t) = (1/Y) sum_y cos(theta_u(t) - (theta_u^s/theta_v^s) theta_v(t))
 *
 * Evaluated once per undirected edge in canonical orientation (u < v), which
 * makes the similarity symmetric by construction. An edge is undefined when
 * either endpoint's steady-state value is below kSteadyZeroTol in any run.
 */
EdgeSimilarity edge_similarity(const TrajectoryBundle& bundle, const Graph& g,
                               std::size_t step);

/** Disjoint cover of all nodes by communities at one (mu, t).
 *
 * Communities are canonically ordered by descending size, ties by smallest
 * member, with members ascending, so the result is independent of edge
 * iteration order. community_of maps each node to its community's index.
 */
struct Partition {
    double mu = 0.0;
    std::size_t eval_step = 0;
    std::vector<std::uint32_t> community_of;
    std::vector<std::vector<std::uint32_t>> communities;
};

/** Communities = connected components of the subgraph of edges with defined
 *  similarity >= 1 - mu (single union-find pass; singletons retained). */
Partition threshold_partition(const Graph& g, const EdgeSimilarity& sims, double mu);

/** Largest community (always communities[0] in canonical order), non-core
 *  communities of size >= 3 (whiskers) and of size 1-2 (fragments), as
 *  indices into Partition::communities. */
struct CoreWhiskers {
    std::optional<std::uint32_t> core;
    std::vector<std::uint32_t> whiskers;
    std::vector<std::uint32_t> fragments;
};
CoreWhiskers core_whiskers(const Partition& p);

struct ScaleResult {
    double mu = 0.0;
    Partition partition;
    CoreWhiskers split;
};

/** One partition per mu, finest to coarsest; smaller mu refines larger. */
struct MultiScaleReport {
    std::size_t eval_step = 0;
    std::vector<ScaleResult> scales;
};

MultiScaleReport multiscale_sweep(const Graph& g, const EdgeSimilarity& sims,
                                  std::span<const double> mu_list);

} // namespace flowcomm
