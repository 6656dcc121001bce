#include "flowcomm/analysis.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace flowcomm {

namespace {

std::span<const std::uint32_t> core_members(const Partition& p) {
    auto split = core_whiskers(p);
    if (!split.core)
        return {};
    return p.communities[*split.core];
}

std::string format_mu(double mu) {
    std::ostringstream ss;
    ss << "mu=" << mu;
    return ss.str();
}

} // namespace

CoreOverlap core_overlap(const Partition& a, const Partition& b,
                         OverlapDenominator denom) {
    if (a.community_of.size() != b.community_of.size())
        throw Error("core_overlap: partitions cover different node sets (" +
                    std::to_string(a.community_of.size()) + " vs " +
                    std::to_string(b.community_of.size()) + " nodes)");

    const auto core_a = core_members(a);
    const auto core_b = core_members(b);

    CoreOverlap out;
    out.scale = format_mu(a.mu) + "|" + format_mu(b.mu);
    out.size_a = core_a.size();
    out.size_b = core_b.size();
    if (core_a.empty() || core_b.empty())
        return out;

    // Both member lists are ascending.
    std::size_t shared = 0;
    auto ia = core_a.begin();
    auto ib = core_b.begin();
    while (ia != core_a.end() && ib != core_b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++shared;
            ++ia;
            ++ib;
        }
    }
    const auto denom_count = denom == OverlapDenominator::min_size
                                 ? std::min(out.size_a, out.size_b)
                                 : out.size_a + out.size_b - shared;
    out.overlap = static_cast<double>(shared) / static_cast<double>(denom_count);
    return out;
}

CohesivenessScore attribute_cohesiveness(std::span<const std::uint32_t> community,
                                         const NodeAttributes& attrs,
                                         const std::string& feature) {
    if (community.empty())
        throw Error("attribute_cohesiveness: community must not be empty");
    if (!attrs.has_feature(feature))
        throw Error("unknown attribute feature '" + feature + "'");

    CohesivenessScore out;
    out.feature = feature;
    std::map<std::string, std::size_t> counts;
    for (auto node : community) {
        const auto& v = attrs.value(node, feature);
        if (v)
            ++counts[*v];
    }
    std::size_t valued = 0;
    std::size_t best = 0;
    for (const auto& [value, count] : counts) {
        valued += count;
        best = std::max(best, count);
    }
    out.support = valued;
    if (valued > 0)
        out.score = static_cast<double>(best) / static_cast<double>(valued);
    return out;
}

CohesivenessScore covote_cohesiveness(std::span<const std::uint32_t> community,
                                      const Graph& g, const NodeItemSets& items) {
    if (community.empty())
        throw Error("covote_cohesiveness: community must not be empty");

    CohesivenessScore out;
    out.feature = "co-votes";
    std::vector<char> member(g.num_nodes(), 0);
    for (auto node : community)
        member.at(node) = 1;

    std::size_t edges = 0;
    std::size_t shared_total = 0;
    for (auto u : community) {
        const auto neigh = g.neighbors(u);
        for (auto v : neigh) {
            if (v > u && member[v]) {
                ++edges;
                shared_total += items.shared_items(u, v);
            }
        }
    }
    out.support = edges;
    if (edges > 0)
        out.score = static_cast<double>(shared_total) / static_cast<double>(edges);
    return out;
}

ScaleSummary scale_summary(const MultiScaleReport& report, const Graph& g,
                           const NodeAttributes* attrs,
                           std::span<const std::string> features,
                           const NodeItemSets* items) {
    if (report.scales.empty())
        throw Error("scale_summary: report has no scales");
    if (!features.empty() && attrs == nullptr)
        throw Error("scale_summary: features requested without attributes");

    ScaleSummary out;
    out.features.assign(features.begin(), features.end());
    std::vector<char> seen(g.num_nodes(), 0);

    for (const auto& scale : report.scales) {
        ScaleSummaryRow row;
        row.mu = scale.mu;
        row.num_communities = scale.partition.communities.size();
        if (scale.split.core)
            row.core_size = scale.partition.communities[*scale.split.core].size();
        row.whisker_count = scale.split.whiskers.size();
        row.fragment_count = scale.split.fragments.size();
        row.mean_whisker_cohesiveness.assign(features.size(), std::nullopt);

        std::vector<double> feature_sums(features.size(), 0.0);
        std::vector<std::size_t> feature_counts(features.size(), 0);
        double covote_sum = 0.0;
        std::size_t covote_count = 0;
        for (auto w : scale.split.whiskers) {
            const auto& members = scale.partition.communities[w];
            row.whisker_nodes += members.size();
            for (auto node : members)
                seen[node] = 1;
            for (std::size_t f = 0; f < features.size(); ++f) {
                auto score = attribute_cohesiveness(members, *attrs, features[f]);
                if (score.score) {
                    feature_sums[f] += *score.score;
                    ++feature_counts[f];
                }
            }
            if (items) {
                auto score = covote_cohesiveness(members, g, *items);
                if (score.score) {
                    covote_sum += *score.score;
                    ++covote_count;
                }
            }
        }
        for (std::size_t f = 0; f < features.size(); ++f)
            if (feature_counts[f] > 0)
                row.mean_whisker_cohesiveness[f] =
                    feature_sums[f] / static_cast<double>(feature_counts[f]);
        if (covote_count > 0)
            row.mean_whisker_covotes = covote_sum / static_cast<double>(covote_count);
        out.rows.push_back(std::move(row));
    }
    for (char s : seen)
        if (s)
            ++out.distinct_whisker_nodes;
    return out;
}

} // namespace flowcomm
