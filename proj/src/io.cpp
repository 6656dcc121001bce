#include "flowcomm/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

namespace flowcomm {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::span<const char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open file for hashing: '" + path + "'");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto got = static_cast<std::size_t>(in.gcount());
        for (std::size_t i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in)
            break;
    }
    return h;
}

void write_spectrum_csv(const SpectralSummary& summary, std::ostream& out) {
    out << "rank,eigenvalue,residual\n";
    for (std::size_t i = 0; i < summary.eigenvalues.size(); ++i)
        out << (i + 1) << ',' << format_double(summary.eigenvalues[i]) << ','
            << format_double(summary.residuals[i]) << '\n';
}

void write_trajectory_csv(const TrajectoryBundle& bundle, const Graph& g,
                          std::ostream& out) {
    out << "run,step,node_id,theta\n";
    for (std::size_t y = 0; y < bundle.runs.size(); ++y) {
        const auto& run = bundle.runs[y];
        for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
            const auto step = bundle.snapshot_steps[s];
            const auto& theta = run.snapshots[s].opinions;
            for (std::uint32_t i = 0; i < theta.size(); ++i)
                out << y << ',' << step << ',' << g.label(i) << ','
                    << format_double(theta[i]) << '\n';
        }
    }
}

void write_steady_csv(const TrajectoryBundle& bundle, const Graph& g,
                      std::ostream& out) {
    out << "run,node_id,theta_s\n";
    for (std::size_t y = 0; y < bundle.runs.size(); ++y) {
        const auto& steady = bundle.runs[y].steady.opinions;
        for (std::uint32_t i = 0; i < steady.size(); ++i)
            out << y << ',' << g.label(i) << ',' << format_double(steady[i]) << '\n';
    }
}

nlohmann::ordered_json partition_to_json(const Partition& p, const Graph& g) {
    nlohmann::ordered_json j;
    j["mu"] = p.mu;
    j["t"] = p.eval_step;
    auto communities = nlohmann::ordered_json::array();
    for (const auto& members : p.communities) {
        auto community = nlohmann::ordered_json::array();
        for (auto node : members)
            community.push_back(g.label(node));
        communities.push_back(std::move(community));
    }
    j["communities"] = std::move(communities);
    return j;
}

void write_partition_csv(const Partition& p, const Graph& g, std::ostream& out) {
    out << "node_id,community_id\n";
    for (std::uint32_t i = 0; i < p.community_of.size(); ++i)
        out << g.label(i) << ',' << p.community_of[i] << '\n';
}

nlohmann::ordered_json multiscale_report_to_json(const MultiScaleReport& report,
                                                 const ScaleSummary* summary) {
    nlohmann::ordered_json j;
    j["eval_step"] = report.eval_step;
    auto scales = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < report.scales.size(); ++s) {
        const auto& scale = report.scales[s];
        nlohmann::ordered_json js;
        js["mu"] = scale.mu;
        js["num_communities"] = scale.partition.communities.size();
        if (scale.split.core) {
            js["core"] = {
                {"index", *scale.split.core},
                {"size", scale.partition.communities[*scale.split.core].size()},
            };
        } else {
            js["core"] = nullptr;
        }
        std::size_t whisker_nodes = 0;
        for (auto w : scale.split.whiskers)
            whisker_nodes += scale.partition.communities[w].size();
        js["whiskers"] = {
            {"count", scale.split.whiskers.size()},
            {"nodes", whisker_nodes},
            {"indices", scale.split.whiskers},
        };
        js["fragments"] = {{"count", scale.split.fragments.size()}};
        if (summary && s < summary->rows.size()) {
            const auto& row = summary->rows[s];
            nlohmann::ordered_json coh;
            for (std::size_t f = 0; f < summary->features.size(); ++f) {
                if (row.mean_whisker_cohesiveness[f])
                    coh[summary->features[f]] = *row.mean_whisker_cohesiveness[f];
                else
                    coh[summary->features[f]] = nullptr;
            }
            if (row.mean_whisker_covotes)
                coh["co-votes"] = *row.mean_whisker_covotes;
            else if (summary->features.empty())
                coh["co-votes"] = nullptr;
            js["mean_whisker_cohesiveness"] = std::move(coh);
        }
        scales.push_back(std::move(js));
    }
    j["scales"] = std::move(scales);
    if (summary)
        j["distinct_whisker_nodes"] = summary->distinct_whisker_nodes;
    return j;
}

namespace {

const char* community_kind(const CoreWhiskers& split, std::uint32_t c) {
    if (split.core && *split.core == c)
        return "core";
    for (auto w : split.whiskers)
        if (w == c)
            return "whisker";
    return "fragment";
}

void write_score_row(std::ostream& out, double mu, const std::string& community,
                     const std::string& size, const char* kind,
                     const std::string& feature, const CohesivenessScore& score) {
    out << format_double(mu) << ',' << community << ',' << size << ',' << kind << ','
        << feature << ',';
    if (score.score)
        out << format_double(*score.score);
    out << ',' << score.support << '\n';
}

} // namespace

void write_cohesiveness_csv(const MultiScaleReport& report, const Graph& g,
                            const NodeAttributes* attrs,
                            std::span<const std::string> features,
                            const NodeItemSets* items, std::ostream& out) {
    out << "mu,community,size,kind,feature,score,support\n";
    for (const auto& scale : report.scales) {
        for (std::uint32_t c = 0; c < scale.partition.communities.size(); ++c) {
            const auto& members = scale.partition.communities[c];
            const auto kind = community_kind(scale.split, c);
            const auto size = std::to_string(members.size());
            const auto community = std::to_string(c);
            if ((!attrs || features.empty()) && !items) {
                out << format_double(scale.mu) << ',' << community << ',' << size
                    << ',' << kind << ",,,\n";
                continue;
            }
            if (attrs)
                for (const auto& feature : features)
                    write_score_row(out, scale.mu, community, size, kind, feature,
                                    attribute_cohesiveness(members, *attrs, feature));
            if (items)
                write_score_row(out, scale.mu, community, size, kind, "co-votes",
                                covote_cohesiveness(members, g, *items));
        }
        // Per-scale aggregate over whiskers: mean of defined scores.
        auto aggregate = [&](const std::string& feature, auto score_of) {
            double sum = 0.0;
            std::size_t count = 0;
            for (auto w : scale.split.whiskers) {
                auto score = score_of(scale.partition.communities[w]);
                if (score.score) {
                    sum += *score.score;
                    ++count;
                }
            }
            CohesivenessScore mean;
            mean.feature = feature;
            mean.support = count;
            if (count > 0)
                mean.score = sum / static_cast<double>(count);
            write_score_row(out, scale.mu, "aggregate", "", "whisker-mean", feature,
                            mean);
        };
        if (attrs)
            for (const auto& feature : features)
                aggregate(feature, [&](const std::vector<std::uint32_t>& m) {
                    return attribute_cohesiveness(m, *attrs, feature);
                });
        if (items)
            aggregate("co-votes", [&](const std::vector<std::uint32_t>& m) {
                return covote_cohesiveness(m, g, *items);
            });
    }
}

void write_core_overlap_csv(std::span<const CoreOverlap> rows, std::ostream& out) {
    out << "scale,size_a,size_b,overlap\n";
    for (const auto& row : rows)
        out << row.scale << ',' << row.size_a << ',' << row.size_b << ','
            << format_double(row.overlap) << '\n';
}

} // namespace flowcomm
