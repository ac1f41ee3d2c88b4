#pragma once

#include <cstdint>
#include <vector>

#include "ccoreset/errors.hpp"

namespace ccoreset {

/// Min-cost b-flow via successive shortest augmenting paths with node potentials.
/// Arc costs are nonnegative doubles (clustering distances), so Dijkstra works from
/// the start; potentials keep reduced costs nonnegative within fp tolerance.
/// Supplies/demands are integers and augmentations are integral, so every optimal
/// flow is integral. Single-shot: build, solve once, then read flows.
class MinCostFlow {
public:
    explicit MinCostFlow(int node_count);

    int add_node();
    /// Positive amount is a supply, negative a demand. Sum over nodes must be zero.
    void add_supply(int node, std::int64_t amount);
    /// Returns an edge id for flow_on(). cost must be >= 0 and finite.
    int add_edge(int from, int to, std::int64_t capacity, double cost);

    struct Result {
        bool feasible = false;
        double cost = 0.0;
    };
    Result solve();

    std::int64_t flow_on(int edge_id) const;

private:
    struct Arc {
        int to;
        std::int64_t cap;
        double cost;
        int rev;  // index of the reverse arc in graph_[to]
    };

    bool dijkstra(int source, int target, std::vector<double>& dist,
                  std::vector<std::pair<int, int>>& parent) const;

    std::vector<std::vector<Arc>> graph_;
    std::vector<std::int64_t> supply_;
    std::vector<double> potential_;
    std::vector<std::pair<int, int>> edge_handles_;  // (node, arc index)
    std::vector<std::int64_t> edge_caps_;
    bool solved_ = false;
};

}  // namespace ccoreset
