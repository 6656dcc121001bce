#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowcomm {

/** Error raised for invalid inputs, file problems, and contract violations. */
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Undirected weighted edge in canonical orientation (u < v). */
struct Edge {
    std::uint32_t u = 0;
    std::uint32_t v = 0;
    double weight = 1.0;
};

struct InducedSubgraph;

/** Immutable undirected weighted graph.
 *
 * External string labels map to dense indices 0..N-1 in first-appearance
 * order. Adjacency is stored CSR-style with each row's neighbors sorted
 * ascending, so accumulation order in matrix-vector products is fixed.
 */
class Graph {
public:
    Graph() = default;

    /** Builds a graph, validating edges.
     *
     * Rejects self-loops, non-positive weights and duplicate edges whose
     * weights disagree; duplicates with equal weight collapse to one edge.
     */
    static Graph build(std::vector<std::string> labels, std::vector<Edge> edges);

    std::size_t num_nodes() const { return labels_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::uint32_t node) const { return labels_.at(node); }

    /** Canonical edge list: u < v, sorted by (u, v). */
    const std::vector<Edge>& edges() const { return edges_; }

    /** Weighted degree (sum of incident edge weights). */
    double degree(std::uint32_t node) const { return degrees_.at(node); }
    const std::vector<double>& degrees() const { return degrees_; }
    double max_degree() const;

    std::span<const std::uint32_t> neighbors(std::uint32_t node) const;
    std::span<const double> neighbor_weights(std::uint32_t node) const;

    /** y = W x with fixed per-row ascending-neighbor accumulation order. */
    void adjacency_multiply(std::span<const double> x, std::span<double> y) const;

    /** Induced subgraph on `nodes` (dense indices); keeps labels. */
    InducedSubgraph induced(std::span<const std::uint32_t> nodes) const;

private:
    std::vector<std::string> labels_;
    std::vector<Edge> edges_;
    std::vector<double> degrees_;
    // CSR adjacency
    std::vector<std::size_t> row_start_;
    std::vector<std::uint32_t> adj_;
    std::vector<double> adj_weight_;
};

/** A subgraph together with the invertible index mapping that produced it. */
struct InducedSubgraph {
    Graph graph;
    std::vector<std::int64_t> new_of_old; // -1 for dropped nodes
    std::vector<std::uint32_t> old_of_new;
};

/** Parses a whitespace-separated edge list.
 *
 * Lines are "u v" or "u v w" (w > 0); '#' starts a comment; blank lines are
 * skipped. With weighted=false any weight column is ignored and all edges
 * get weight 1. Malformed lines raise Error naming the line number.
 */
Graph load_edge_list(std::istream& in, bool weighted = true);
Graph load_edge_list_file(const std::string& path, bool weighted = true);

/** Writes the canonical edge list ("u v w" per line, round-trips via
 *  load_edge_list). */
void write_edge_list(const Graph& g, std::ostream& out);

/** Connected components, ordered by descending size with ties broken by
 *  smallest contained node index; members ascending within a component. */
std::vector<std::vector<std::uint32_t>> connected_components(const Graph& g);

/** Subgraph induced by the largest connected component (ties: component
 *  containing the smallest node index). */
InducedSubgraph largest_component(const Graph& g);

} // namespace flowcomm
