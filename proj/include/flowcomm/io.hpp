#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowcomm/analysis.hpp"
#include "flowcomm/attributes.hpp"
#include "flowcomm/communities.hpp"
#include "flowcomm/dynamics.hpp"
#include "flowcomm/graph.hpp"
#include "flowcomm/operators.hpp"

namespace flowcomm {

/** Shortest round-trip decimal form of a double (deterministic output). */
std::string format_double(double x);

/** FNV-1a 64-bit hash. */
std::uint64_t fnv1a64(std::span<const char> bytes);
std::uint64_t fnv1a64_file(const std::string& path);

/** CSV rows (rank, eigenvalue, residual), rank starting at 1. */
void write_spectrum_csv(const SpectralSummary& summary, std::ostream& out);

/** CSV rows (run, step, node_id, theta) for every snapshot. */
void write_trajectory_csv(const TrajectoryBundle& bundle, const Graph& g,
                          std::ostream& out);

/** CSV rows (run, node_id, theta_s). */
void write_steady_csv(const TrajectoryBundle& bundle, const Graph& g,
                      std::ostream& out);

/** {"mu":..., "t":..., "communities": [[labels...]...]} with communities in
 *  canonical order (largest first, so index 0 is the core). */
nlohmann::ordered_json partition_to_json(const Partition& p, const Graph& g);

/** CSV rows (node_id, community_id). */
void write_partition_csv(const Partition& p, const Graph& g, std::ostream& out);

/** Per-scale core/whisker/fragment summaries; cohesiveness aggregates are
 *  included when a ScaleSummary is supplied (undefined scores as nulls). */
nlohmann::ordered_json multiscale_report_to_json(const MultiScaleReport& report,
                                                 const ScaleSummary* summary);

/** One row per (scale, community) and feature, plus per-scale aggregate
 *  rows over whiskers; undefined scores stay empty, never 0. */
void write_cohesiveness_csv(const MultiScaleReport& report, const Graph& g,
                            const NodeAttributes* attrs,
                            std::span<const std::string> features,
                            const NodeItemSets* items, std::ostream& out);

/** CSV rows (scale, size_a, size_b, overlap). */
void write_core_overlap_csv(std::span<const CoreOverlap> rows, std::ostream& out);

} // namespace flowcomm
