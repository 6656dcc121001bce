#include "flowcomm/attributes.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

namespace flowcomm {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

std::unordered_map<std::string, std::uint32_t> label_index(const Graph& g) {
    std::unordered_map<std::string, std::uint32_t> map;
    map.reserve(g.num_nodes());
    for (std::uint32_t i = 0; i < g.num_nodes(); ++i)
        map.emplace(g.label(i), i);
    return map;
}

} // namespace

NodeAttributes NodeAttributes::load_csv(std::istream& in, const Graph& g) {
    NodeAttributes out;
    out.num_nodes_ = g.num_nodes();

    std::string line;
    if (!std::getline(in, line))
        throw Error("attribute CSV: missing header row");
    auto header = split_csv_row(line);
    if (header.size() < 2)
        throw Error("attribute CSV: header needs a node-id column and at least one feature");
    out.features_.assign(header.begin() + 1, header.end());
    out.values_.assign(out.features_.size(),
                       std::vector<std::optional<std::string>>(g.num_nodes()));

    const auto index_of = label_index(g);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        auto cells = split_csv_row(line);
        if (cells.size() != header.size())
            throw Error("attribute CSV line " + std::to_string(lineno) + ": expected " +
                        std::to_string(header.size()) + " cells, got " +
                        std::to_string(cells.size()));
        auto it = index_of.find(cells[0]);
        if (it == index_of.end()) {
            ++out.skipped_rows_;
            continue;
        }
        for (std::size_t f = 0; f < out.features_.size(); ++f) {
            if (!cells[f + 1].empty())
                out.values_[f][it->second] = cells[f + 1];
        }
    }
    return out;
}

NodeAttributes NodeAttributes::load_csv_file(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open attribute file '" + path + "'");
    try {
        return load_csv(in, g);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

bool NodeAttributes::has_feature(const std::string& feature) const {
    return std::find(features_.begin(), features_.end(), feature) != features_.end();
}

std::size_t NodeAttributes::feature_index(const std::string& feature) const {
    auto it = std::find(features_.begin(), features_.end(), feature);
    if (it == features_.end())
        throw Error("unknown attribute feature '" + feature + "'");
    return static_cast<std::size_t>(it - features_.begin());
}

const std::optional<std::string>& NodeAttributes::value(std::uint32_t node,
                                                        const std::string& feature) const {
    const auto f = feature_index(feature);
    if (node >= num_nodes_)
        throw Error("attribute lookup: node index out of range");
    return values_[f][node];
}

NodeItemSets NodeItemSets::load(std::istream& in, const Graph& g) {
    NodeItemSets out;
    out.items_.assign(g.num_nodes(), {});

    std::unordered_map<std::string, std::uint32_t> item_index;
    const auto index_of = label_index(g);

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ss(line);
        std::string node, item;
        if (!(ss >> node))
            continue;
        if (!(ss >> item))
            throw Error("item file line " + std::to_string(lineno) +
                        ": expected 'node item'");
        std::string extra;
        if (ss >> extra)
            throw Error("item file line " + std::to_string(lineno) +
                        ": trailing token '" + extra + "'");
        auto it = index_of.find(node);
        if (it == index_of.end()) {
            ++out.skipped_rows_;
            continue;
        }
        auto [iit, inserted] =
            item_index.emplace(item, static_cast<std::uint32_t>(item_index.size()));
        (void)inserted;
        out.items_[it->second].push_back(iit->second);
    }
    for (auto& set : out.items_) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    return out;
}

NodeItemSets NodeItemSets::load_file(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open item file '" + path + "'");
    try {
        return load(in, g);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

std::size_t NodeItemSets::shared_items(std::uint32_t i, std::uint32_t j) const {
    const auto& a = items_.at(i);
    const auto& b = items_.at(j);
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

} // namespace flowcomm
