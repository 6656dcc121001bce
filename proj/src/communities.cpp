#include "flowcomm/communities.hpp"

#include <algorithm>
#include <cmath>

namespace flowcomm {

namespace {

/** Disjoint-set forest with union by size and path compression. */
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        for (std::size_t i = 0; i < n; ++i)
            parent_[i] = static_cast<std::uint32_t>(i);
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (size_[a] < size_[b])
            std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
};

void canonicalize(Partition& p, std::size_t n, UnionFind& uf) {
    std::vector<std::vector<std::uint32_t>> groups;
    std::vector<std::int64_t> group_of_root(n, -1);
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto root = uf.find(i);
        if (group_of_root[root] == -1) {
            group_of_root[root] = static_cast<std::int64_t>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(group_of_root[root])].push_back(i);
    }
    // Members are ascending already (nodes visited in index order).
    std::stable_sort(groups.begin(), groups.end(),
                     [](const auto& a, const auto& b) {
                         if (a.size() != b.size())
                             return a.size() > b.size();
                         return a.front() < b.front();
                     });
    p.communities = std::move(groups);
    p.community_of.assign(n, 0);
    for (std::uint32_t c = 0; c < p.communities.size(); ++c)
        for (auto i : p.communities[c])
            p.community_of[i] = c;
}

} // namespace

std::size_t EdgeSimilarity::undefined_count() const {
    std::size_t n = 0;
    for (char d : defined)
        if (!d)
            ++n;
    return n;
}

EdgeSimilarity edge_similarity(const TrajectoryBundle& bundle, const Graph& g,
                               std::size_t step) {
    if (bundle.runs.empty())
        throw Error("edge_similarity: bundle has no runs");
    const auto snap = bundle.snapshot_index(step); // Error when missing
    const auto& edges = g.edges();

    for (const auto& run : bundle.runs) {
        if (run.snapshots.at(snap).opinions.size() != g.num_nodes() ||
            run.steady.opinions.size() != g.num_nodes())
            throw Error("edge_similarity: bundle does not match graph size");
    }

    EdgeSimilarity out;
    out.eval_step = step;
    out.values.assign(edges.size(), 0.0);
    out.defined.assign(edges.size(), 1);

    // A node whose steady value vanishes in any run makes the ratio in the
    // similarity ill-defined for every incident edge.
    std::vector<char> node_ok(g.num_nodes(), 1);
    for (const auto& run : bundle.runs)
        for (std::size_t i = 0; i < g.num_nodes(); ++i)
            if (std::abs(run.steady.opinions[i]) < kSteadyZeroTol)
                node_ok[i] = 0;

    const double inv_y = 1.0 / static_cast<double>(bundle.runs.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto u = edges[e].u;
        const auto v = edges[e].v;
        if (!node_ok[u] || !node_ok[v]) {
            out.defined[e] = 0;
            continue;
        }
        double acc = 0.0;
        for (const auto& run : bundle.runs) {
            const auto& theta = run.snapshots[snap].opinions;
            const auto& steady = run.steady.opinions;
            const double ratio = steady[u] / steady[v];
            acc += std::cos(theta[u] - ratio * theta[v]);
        }
        out.values[e] = acc * inv_y;
    }
    return out;
}

Partition threshold_partition(const Graph& g, const EdgeSimilarity& sims, double mu) {
    if (sims.values.size() != g.num_edges() || sims.defined.size() != g.num_edges())
        throw Error("threshold_partition: similarity does not match graph edges");

    const auto n = g.num_nodes();
    UnionFind uf(n);
    const double threshold = 1.0 - mu;
    const auto& edges = g.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (sims.defined[e] && sims.values[e] >= threshold)
            uf.unite(edges[e].u, edges[e].v);
    }

    Partition p;
    p.mu = mu;
    p.eval_step = sims.eval_step;
    canonicalize(p, n, uf);
    return p;
}

CoreWhiskers core_whiskers(const Partition& p) {
    CoreWhiskers out;
    if (p.communities.empty())
        return out;
    out.core = 0; // canonical order puts the tie-broken largest first
    for (std::uint32_t c = 1; c < p.communities.size(); ++c) {
        if (p.communities[c].size() >= 3)
            out.whiskers.push_back(c);
        else
            out.fragments.push_back(c);
    }
    return out;
}

MultiScaleReport multiscale_sweep(const Graph& g, const EdgeSimilarity& sims,
                                  std::span<const double> mu_list) {
    if (mu_list.empty())
        throw Error("multiscale_sweep: mu list must not be empty");
    for (std::size_t i = 1; i < mu_list.size(); ++i)
        if (!(mu_list[i - 1] < mu_list[i]))
            throw Error("multiscale_sweep: mu list must be strictly increasing");

    MultiScaleReport report;
    report.eval_step = sims.eval_step;
    report.scales.reserve(mu_list.size());
    for (double mu : mu_list) {
        ScaleResult scale;
        scale.mu = mu;
        scale.partition = threshold_partition(g, sims, mu);
        scale.split = core_whiskers(scale.partition);
        report.scales.push_back(std::move(scale));
    }
    return report;
}

} // namespace flowcomm
