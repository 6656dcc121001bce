#include "flowcomm/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace flowcomm {

namespace {

std::string edge_name(const Graph& g, const Edge& e) {
    return "(" + g.label(e.u) + ", " + g.label(e.v) + ")";
}

} // namespace

Graph Graph::build(std::vector<std::string> labels, std::vector<Edge> edges) {
    Graph g;
    g.labels_ = std::move(labels);
    const auto n = g.labels_.size();

    for (auto& e : edges) {
        if (e.u >= n || e.v >= n)
            throw Error("edge endpoint index out of range");
        if (e.u == e.v)
            throw Error("self-loop on node '" + g.labels_[e.u] + "' is not allowed");
        if (!(e.weight > 0.0))
            throw Error("edge weight must be positive on edge ('" + g.labels_[e.u] +
                        "', '" + g.labels_[e.v] + "')");
        if (e.u > e.v)
            std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    // Collapse duplicates; disagreeing weights are an input error.
    std::vector<Edge> dedup;
    dedup.reserve(edges.size());
    for (const auto& e : edges) {
        if (!dedup.empty() && dedup.back().u == e.u && dedup.back().v == e.v) {
            if (dedup.back().weight != e.weight)
                throw Error("conflicting duplicate edge " + edge_name(g, e) +
                            " with differing weights");
            continue;
        }
        dedup.push_back(e);
    }
    g.edges_ = std::move(dedup);

    g.degrees_.assign(n, 0.0);
    std::vector<std::size_t> counts(n, 0);
    for (const auto& e : g.edges_) {
        g.degrees_[e.u] += e.weight;
        g.degrees_[e.v] += e.weight;
        ++counts[e.u];
        ++counts[e.v];
    }
    g.row_start_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
        g.row_start_[i + 1] = g.row_start_[i] + counts[i];
    g.adj_.resize(g.row_start_[n]);
    g.adj_weight_.resize(g.row_start_[n]);
    std::vector<std::size_t> cursor(g.row_start_.begin(), g.row_start_.end() - 1);
    // Edges are sorted by (u, v), so each row fills in ascending neighbor order.
    for (const auto& e : g.edges_) {
        g.adj_[cursor[e.u]] = e.v;
        g.adj_weight_[cursor[e.u]++] = e.weight;
    }
    for (const auto& e : g.edges_) {
        g.adj_[cursor[e.v]] = e.u;
        g.adj_weight_[cursor[e.v]++] = e.weight;
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        auto first = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.row_start_[i]);
        auto last = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.row_start_[i + 1]);
        if (!std::is_sorted(first, last)) {
            std::vector<std::pair<std::uint32_t, double>> row;
            for (std::size_t k = g.row_start_[i]; k < g.row_start_[i + 1]; ++k)
                row.emplace_back(g.adj_[k], g.adj_weight_[k]);
            std::sort(row.begin(), row.end());
            for (std::size_t k = 0; k < row.size(); ++k) {
                g.adj_[g.row_start_[i] + k] = row[k].first;
                g.adj_weight_[g.row_start_[i] + k] = row[k].second;
            }
        }
    }
    return g;
}

double Graph::max_degree() const {
    double m = 0.0;
    for (double d : degrees_)
        m = std::max(m, d);
    return m;
}

std::span<const std::uint32_t> Graph::neighbors(std::uint32_t node) const {
    return {adj_.data() + row_start_.at(node), row_start_.at(node + 1) - row_start_.at(node)};
}

std::span<const double> Graph::neighbor_weights(std::uint32_t node) const {
    return {adj_weight_.data() + row_start_.at(node),
            row_start_.at(node + 1) - row_start_.at(node)};
}

void Graph::adjacency_multiply(std::span<const double> x, std::span<double> y) const {
    const auto n = num_nodes();
    if (x.size() != n || y.size() != n)
        throw Error("adjacency_multiply: vector length does not match node count");
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k)
            acc += adj_weight_[k] * x[adj_[k]];
        y[i] = acc;
    }
}

InducedSubgraph Graph::induced(std::span<const std::uint32_t> nodes) const {
    InducedSubgraph out;
    out.new_of_old.assign(num_nodes(), -1);
    out.old_of_new.assign(nodes.begin(), nodes.end());
    std::sort(out.old_of_new.begin(), out.old_of_new.end());
    std::vector<std::string> labels;
    labels.reserve(out.old_of_new.size());
    for (std::size_t i = 0; i < out.old_of_new.size(); ++i) {
        const auto old = out.old_of_new[i];
        if (old >= num_nodes())
            throw Error("induced: node index out of range");
        if (out.new_of_old[old] != -1)
            throw Error("induced: duplicate node index");
        out.new_of_old[old] = static_cast<std::int64_t>(i);
        labels.push_back(labels_[old]);
    }
    std::vector<Edge> kept;
    for (const auto& e : edges_) {
        const auto nu = out.new_of_old[e.u];
        const auto nv = out.new_of_old[e.v];
        if (nu != -1 && nv != -1)
            kept.push_back({static_cast<std::uint32_t>(nu),
                            static_cast<std::uint32_t>(nv), e.weight});
    }
    out.graph = Graph::build(std::move(labels), std::move(kept));
    return out;
}

Graph load_edge_list(std::istream& in, bool weighted) {
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::uint32_t> index_of;
    std::vector<Edge> edges;

    auto intern = [&](const std::string& name) {
        auto it = index_of.find(name);
        if (it != index_of.end())
            return it->second;
        const auto idx = static_cast<std::uint32_t>(labels.size());
        labels.push_back(name);
        index_of.emplace(name, idx);
        return idx;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ss(line);
        std::string u, v;
        if (!(ss >> u))
            continue; // blank or comment-only line
        if (!(ss >> v))
            throw Error("edge list line " + std::to_string(lineno) +
                        ": expected 'u v' or 'u v w'");
        double w = 1.0;
        std::string wtok;
        if (ss >> wtok) {
            if (weighted) {
                std::size_t pos = 0;
                try {
                    w = std::stod(wtok, &pos);
                } catch (const std::exception&) {
                    pos = 0;
                }
                if (pos != wtok.size())
                    throw Error("edge list line " + std::to_string(lineno) +
                                ": bad weight '" + wtok + "'");
                if (!(w > 0.0))
                    throw Error("edge list line " + std::to_string(lineno) +
                                ": weight must be positive");
            }
            std::string extra;
            if (ss >> extra)
                throw Error("edge list line " + std::to_string(lineno) +
                            ": trailing token '" + extra + "'");
        }
        if (u == v)
            throw Error("edge list line " + std::to_string(lineno) +
                        ": self-loop on '" + u + "'");
        edges.push_back({intern(u), intern(v), w});
    }
    return Graph::build(std::move(labels), std::move(edges));
}

Graph load_edge_list_file(const std::string& path, bool weighted) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open edge list file '" + path + "'");
    try {
        return load_edge_list(in, weighted);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

void write_edge_list(const Graph& g, std::ostream& out) {
    char buf[64];
    for (const auto& e : g.edges()) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.weight);
        out << g.label(e.u) << ' ' << g.label(e.v) << ' ' << buf << '\n';
    }
}

std::vector<std::vector<std::uint32_t>> connected_components(const Graph& g) {
    const auto n = g.num_nodes();
    std::vector<std::int64_t> comp(n, -1);
    std::vector<std::vector<std::uint32_t>> comps;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (comp[s] != -1)
            continue;
        const auto id = static_cast<std::int64_t>(comps.size());
        comps.emplace_back();
        stack.push_back(s);
        comp[s] = id;
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            comps.back().push_back(u);
            for (auto v : g.neighbors(u)) {
                if (comp[v] == -1) {
                    comp[v] = id;
                    stack.push_back(v);
                }
            }
        }
        std::sort(comps.back().begin(), comps.back().end());
    }
    std::stable_sort(comps.begin(), comps.end(),
                     [](const std::vector<std::uint32_t>& a,
                        const std::vector<std::uint32_t>& b) {
                         if (a.size() != b.size())
                             return a.size() > b.size();
                         return a.front() < b.front();
                     });
    return comps;
}

InducedSubgraph largest_component(const Graph& g) {
    auto comps = connected_components(g);
    if (comps.empty())
        throw Error("largest_component: graph has no nodes");
    return g.induced(comps.front());
}

} // namespace flowcomm
