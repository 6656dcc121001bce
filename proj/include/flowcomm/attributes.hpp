#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flowcomm/graph.hpp"

namespace flowcomm {

/** Per-node categorical features loaded from CSV.
 *
 * Missing cells stay unset, which is distinct from every real value.
 * Rows whose node id is not in the graph are skipped and counted.
 */
class NodeAttributes {
public:
    static NodeAttributes load_csv(std::istream& in, const Graph& g);
    static NodeAttributes load_csv_file(const std::string& path, const Graph& g);

    const std::vector<std::string>& features() const { return features_; }
    bool has_feature(const std::string& feature) const;

    /** Value of `feature` for `node`; nullopt when missing. Unknown feature
     *  names raise Error. */
    const std::optional<std::string>& value(std::uint32_t node,
                                            const std::string& feature) const;

    std::size_t skipped_rows() const { return skipped_rows_; }
    std::size_t num_nodes() const { return num_nodes_; }

private:
    std::size_t feature_index(const std::string& feature) const;

    std::vector<std::string> features_;
    // values_[feature][node]
    std::vector<std::vector<std::optional<std::string>>> values_;
    std::size_t num_nodes_ = 0;
    std::size_t skipped_rows_ = 0;
};

/** Per-node item sets loaded from a two-column "node item" text file.
 *
 * Sets are deduplicated; nodes absent from the file have empty sets.
 * Rows whose node id is not in the graph are skipped and counted.
 */
class NodeItemSets {
public:
    static NodeItemSets load(std::istream& in, const Graph& g);
    static NodeItemSets load_file(const std::string& path, const Graph& g);

    std::size_t set_size(std::uint32_t node) const { return items_.at(node).size(); }
    /** Size of the intersection items(i) and items(j). */
    std::size_t shared_items(std::uint32_t i, std::uint32_t j) const;
    std::size_t skipped_rows() const { return skipped_rows_; }

private:
    // Sorted interned item indices per node.
    std::vector<std::vector<std::uint32_t>> items_;
    std::size_t skipped_rows_ = 0;
};

} // namespace flowcomm
