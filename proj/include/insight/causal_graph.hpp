#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace insight {

struct EdgeStats {
    double f_stat = 0.0;  // may be +infinity
    double p_value = 1.0;
    int lag = 0;

    bool operator==(const EdgeStats&) const = default;
};

/// Directed graph over channel ids. Edges are kept in lexicographic
/// (source, dest) order so iteration is deterministic.
class CausalGraph {
public:
    using EdgeKey = std::pair<std::string, std::string>;
    using EdgeMap = std::map<EdgeKey, EdgeStats>;

    void add_node(const std::string& id);
    /// Throws InvalidGraph on self-edges or unknown endpoints.
    void add_edge(const std::string& source, const std::string& dest, EdgeStats stats);
    void remove_edge(const std::string& source, const std::string& dest);

    bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }
    bool has_edge(const std::string& source, const std::string& dest) const;
    const EdgeStats* edge(const std::string& source, const std::string& dest) const;

    const std::set<std::string>& nodes() const noexcept { return nodes_; }
    const EdgeMap& edges() const noexcept { return edges_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Pa(id): sources of every edge ending at `id`.
    std::vector<std::pair<std::string, EdgeStats>> parents(const std::string& id) const;

    bool operator==(const CausalGraph&) const = default;

private:
    std::set<std::string> nodes_;
    EdgeMap edges_;
};

struct PruneConfig {
    double factor = 1.5;

    void validate() const;
};

/// Removes i->j when some i->k->j exists in `graph` and F(i->j) does not exceed
/// factor * max_k min(F(i->k), F(k->j)). Every decision reads the input graph,
/// so removals never cascade. An infinite direct F is always kept.
CausalGraph prune(const CausalGraph& graph, const PruneConfig& cfg);

struct RankedCause {
    std::string channel;
    double f_stat = 0.0;

    bool operator==(const RankedCause&) const = default;
};

struct CauseSet {
    std::string target;
    std::vector<RankedCause> causes;
};

/// Parents of `target` by descending F, ties by channel id, truncated to k.
CauseSet rank_causes(const CausalGraph& graph, const std::string& target, std::size_t k);

}  // namespace insight
