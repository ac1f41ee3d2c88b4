#include "ccoreset/min_cost_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace ccoreset {

namespace {
constexpr double kReducedCostTol = 1e-9;
}

MinCostFlow::MinCostFlow(int node_count)
    : graph_(node_count), supply_(node_count, 0), potential_(node_count, 0.0) {}

int MinCostFlow::add_node() {
    graph_.emplace_back();
    supply_.push_back(0);
    potential_.push_back(0.0);
    return static_cast<int>(graph_.size()) - 1;
}

void MinCostFlow::add_supply(int node, std::int64_t amount) { supply_[node] += amount; }

int MinCostFlow::add_edge(int from, int to, std::int64_t capacity, double cost) {
    if (capacity < 0) throw Error("flow edge capacity must be nonnegative");
    if (!(cost >= 0.0) || !std::isfinite(cost)) throw Error("flow edge cost must be nonnegative");
    Arc fwd{to, capacity, cost, static_cast<int>(graph_[to].size())};
    Arc bwd{from, 0, -cost, static_cast<int>(graph_[from].size())};
    graph_[from].push_back(fwd);
    graph_[to].push_back(bwd);
    edge_handles_.emplace_back(from, static_cast<int>(graph_[from].size()) - 1);
    edge_caps_.push_back(capacity);
    return static_cast<int>(edge_handles_.size()) - 1;
}

bool MinCostFlow::dijkstra(int source, int target, std::vector<double>& dist,
                           std::vector<std::pair<int, int>>& parent) const {
    const int n = static_cast<int>(graph_.size());
    dist.assign(n, std::numeric_limits<double>::infinity());
    parent.assign(n, {-1, -1});
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (int i = 0; i < static_cast<int>(graph_[u].size()); ++i) {
            const Arc& a = graph_[u][i];
            if (a.cap <= 0) continue;
            double reduced = a.cost + potential_[u] - potential_[a.to];
            if (reduced < 0.0) {
                if (reduced < -kReducedCostTol) throw Error("mcf: negative reduced cost");
                reduced = 0.0;
            }
            double nd = d + reduced;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                parent[a.to] = {u, i};
                heap.emplace(nd, a.to);
            }
        }
    }
    return std::isfinite(dist[target]);
}

MinCostFlow::Result MinCostFlow::solve() {
    if (solved_) throw Error("mcf: solve() may only be called once");
    solved_ = true;

    const int source = add_node();
    const int target = add_node();
    std::int64_t total_supply = 0;
    std::int64_t total_demand = 0;
    for (int v = 0; v < static_cast<int>(supply_.size()) - 2; ++v) {
        if (supply_[v] > 0) {
            add_edge(source, v, supply_[v], 0.0);
            total_supply += supply_[v];
        } else if (supply_[v] < 0) {
            add_edge(v, target, -supply_[v], 0.0);
            total_demand -= supply_[v];
        }
    }
    if (total_supply != total_demand) throw Error("mcf: supplies and demands do not balance");

    std::int64_t pushed = 0;
    std::vector<double> dist;
    std::vector<std::pair<int, int>> parent;
    while (pushed < total_supply) {
        if (!dijkstra(source, target, dist, parent)) break;
        for (std::size_t v = 0; v < potential_.size(); ++v)
            if (std::isfinite(dist[v])) potential_[v] += dist[v];

        std::int64_t push = std::numeric_limits<std::int64_t>::max();
        for (int v = target; v != source;) {
            auto [u, i] = parent[v];
            push = std::min(push, graph_[u][i].cap);
            v = u;
        }
        for (int v = target; v != source;) {
            auto [u, i] = parent[v];
            Arc& a = graph_[u][i];
            a.cap -= push;
            graph_[a.to][a.rev].cap += push;
            v = u;
        }
        pushed += push;
    }

    Result r;
    r.feasible = pushed == total_supply;
    if (r.feasible) {
        double cost = 0.0;
        for (int e = 0; e < static_cast<int>(edge_handles_.size()); ++e) {
            auto [u, i] = edge_handles_[e];
            const Arc& a = graph_[u][i];
            std::int64_t f = edge_caps_[e] - a.cap;
            if (f > 0) cost += static_cast<double>(f) * a.cost;
        }
        r.cost = cost;
    }
    return r;
}

std::int64_t MinCostFlow::flow_on(int edge_id) const {
    auto [u, i] = edge_handles_[edge_id];
    return edge_caps_[edge_id] - graph_[u][i].cap;
}

}  // namespace ccoreset
