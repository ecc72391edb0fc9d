#include "insight/causal_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "insight/error.hpp"

namespace insight {
namespace {
constexpr std::string_view kModule = "causal_graph";
}

void CausalGraph::add_node(const std::string& id) { nodes_.insert(id); }

void CausalGraph::add_edge(const std::string& source, const std::string& dest, EdgeStats stats) {
    if (source == dest) throw Error(kModule, ErrorCode::InvalidGraph, "self-edge on '" + source + "'");
    if (!has_node(source) || !has_node(dest)) {
        throw Error(kModule, ErrorCode::InvalidGraph, "edge " + source + "->" + dest + " has an unknown endpoint");
    }
    edges_[{source, dest}] = stats;
}

void CausalGraph::remove_edge(const std::string& source, const std::string& dest) { edges_.erase({source, dest}); }

bool CausalGraph::has_edge(const std::string& source, const std::string& dest) const {
    return edges_.count({source, dest}) != 0;
}

const EdgeStats* CausalGraph::edge(const std::string& source, const std::string& dest) const {
    const auto it = edges_.find({source, dest});
    return it == edges_.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::string, EdgeStats>> CausalGraph::parents(const std::string& id) const {
    std::vector<std::pair<std::string, EdgeStats>> out;
    for (const auto& [key, stats] : edges_) {
        if (key.second == id) out.emplace_back(key.first, stats);
    }
    return out;
}

void PruneConfig::validate() const {
    if (!(factor > 0.0)) throw Error(kModule, ErrorCode::InvalidConfig, "prune.factor: must be > 0");
}

CausalGraph prune(const CausalGraph& graph, const PruneConfig& cfg) {
    cfg.validate();

    // Outgoing adjacency of the unpruned graph.
    std::map<std::string, std::vector<std::pair<std::string, double>>> out_edges;
    for (const auto& [key, stats] : graph.edges()) out_edges[key.first].emplace_back(key.second, stats.f_stat);

    CausalGraph pruned = graph;
    for (const auto& [key, stats] : graph.edges()) {
        const auto& [src, dst] = key;
        if (std::isinf(stats.f_stat)) continue;

        double indirect = -std::numeric_limits<double>::infinity();
        bool has_intermediary = false;
        for (const auto& [mid, f_first] : out_edges[src]) {
            if (mid == dst) continue;
            const EdgeStats* second = graph.edge(mid, dst);
            if (!second) continue;
            has_intermediary = true;
            indirect = std::max(indirect, std::min(f_first, second->f_stat));
        }
        if (has_intermediary && !(stats.f_stat > cfg.factor * indirect)) pruned.remove_edge(src, dst);
    }
    return pruned;
}

CauseSet rank_causes(const CausalGraph& graph, const std::string& target, std::size_t k) {
    if (!graph.has_node(target)) {
        throw Error(kModule, ErrorCode::UnknownTarget, "target '" + target + "' is not a graph node");
    }
    auto parents = graph.parents(target);
    std::sort(parents.begin(), parents.end(), [](const auto& a, const auto& b) {
        if (a.second.f_stat != b.second.f_stat) return a.second.f_stat > b.second.f_stat;
        return a.first < b.first;
    });
    CauseSet set{target, {}};
    for (std::size_t i = 0; i < parents.size() && i < k; ++i) {
        set.causes.push_back({parents[i].first, parents[i].second.f_stat});
    }
    return set;
}

}  // namespace insight
