#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowcomm/attributes.hpp"
#include "flowcomm/communities.hpp"
#include "flowcomm/graph.hpp"

namespace flowcomm {

/** Shared-node fraction between two cores. */
struct CoreOverlap {
    std::string scale;
    std::size_t size_a = 0;
    std::size_t size_b = 0;
    double overlap = 0.0; // in [0, 1]
};

enum class OverlapDenominator { min_size, jaccard };

/** Overlap |A and B| / min(|A|,|B|) (or Jaccard |A and B|/|A or B|) between the cores
 *  of two partitions over the same node set. */
CoreOverlap core_overlap(const Partition& a, const Partition& b,
                         OverlapDenominator denom = OverlapDenominator::min_size);

/** A cohesiveness value with the member/pair count it is based on; score is
 *  unset when no member (or no internal edge) supports it. */
struct CohesivenessScore {
    std::string feature; // attribute name, or "co-votes"
    std::optional<double> score;
    std::size_t support = 0;
};

/** Largest fraction of community members sharing one value of `feature`,
 *  counted over members that have any value for it. */
CohesivenessScore attribute_cohesiveness(std::span<const std::uint32_t> community,
                                         const NodeAttributes& attrs,
                                         const std::string& feature);

/** Mean shared-item count over the graph's edges internal to the community. */
CohesivenessScore covote_cohesiveness(std::span<const std::uint32_t> community,
                                      const Graph& g, const NodeItemSets& items);

struct ScaleSummaryRow {
    double mu = 0.0;
    std::size_t num_communities = 0;
    std::size_t core_size = 0;
    std::size_t whisker_count = 0;
    std::size_t whisker_nodes = 0; // distinct nodes in this scale's whiskers
    std::size_t fragment_count = 0;
    // Mean over whiskers with a defined score, aligned with features; unset
    // when no whisker has a defined score.
    std::vector<std::optional<double>> mean_whisker_cohesiveness;
    std::optional<double> mean_whisker_covotes;
};

/** Per-scale core/whisker statistics plus the cross-scale distinct count. */
struct ScaleSummary {
    std::vector<std::string> features;
    std::vector<ScaleSummaryRow> rows;
    std::size_t distinct_whisker_nodes = 0; // union over all scales
};

/** attrs/items may be null when the corresponding inputs were not loaded;
 *  features must name attributes of `attrs`. */
ScaleSummary scale_summary(const MultiScaleReport& report, const Graph& g,
                           const NodeAttributes* attrs,
                           std::span<const std::string> features,
                           const NodeItemSets* items);

} // namespace flowcomm
