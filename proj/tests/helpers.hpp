#pragma once

#include <string>
#include <vector>

#include "mdlgraph/graph.hpp"
#include "mdlgraph/problem.hpp"
#include "mdlgraph/rng.hpp"

namespace mdlgraph::test {

inline Graph make_graph(int n_nodes, const std::vector<std::pair<NodeId, NodeId>>& edges,
                        const std::string& edge_type = "rel") {
    Graph g;
    for (int i = 0; i < n_nodes; ++i) {
        // token-disjoint contents: nodes must not merge in a pool
        std::string idx = std::to_string(i);
        g.nodes.push_back(
            Node{static_cast<NodeId>(i), "task" + idx + " item" + idx + " piece" + idx, "t",
                 std::nullopt});
    }
    for (const auto& [h, t] : edges) g.edges.push_back(Edge{h, t, edge_type});
    return g;
}

/// Random well-formed graph; contents are distinct.
inline Graph random_graph(Rng& rng, int max_nodes = 8, double edge_prob = 0.3) {
    int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_nodes)));
    Graph g;
    for (int i = 0; i < n; ++i) {
        std::string content = "word" + std::to_string(i) + " token" + std::to_string(rng.below(50));
        g.nodes.push_back(
            Node{static_cast<NodeId>(i), content, rng.bernoulli(0.5) ? "a" : "b", std::nullopt});
    }
    for (NodeId h = 0; h < n; ++h) {
        for (NodeId t = 0; t < n; ++t) {
            if (h != t && rng.bernoulli(edge_prob)) {
                g.edges.push_back(Edge{h, t, rng.bernoulli(0.7) ? "rel" : "alt"});
            }
        }
    }
    return g;
}

/// Random selection instance in the acceptance-criterion regime:
/// <= max_nodes nodes, <= max_edges candidate edges, weights uniform in
/// [-1, 1], couplings on, DAG on.
inline WeightedSelectionProblem random_problem(Rng& rng, int max_nodes = 7, int max_edges = 12,
                                               bool couplings = true, bool dag = true) {
    WeightedSelectionProblem p;
    p.require_dag = dag;
    int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_nodes - 1)));
    if (couplings) {
        for (NodeId i = 0; i < n; ++i) {
            p.node_weights[i] = rng.uniform() * 2.0 - 1.0;
        }
    }
    int e_target = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_edges)));
    int guard = 0;
    while (static_cast<int>(p.edge_weights.size()) < e_target && ++guard < 200) {
        NodeId h = static_cast<NodeId>(rng.below(n));
        NodeId t = static_cast<NodeId>(rng.below(n));
        if (h == t) continue;
        p.edge_weights[{h, t}] = rng.uniform() * 2.0 - 1.0;
    }
    if (couplings) {
        for (const auto& [pair, w] : p.edge_weights) {
            p.couplings.push_back({pair, pair.first, pair.second});
        }
    }
    return p;
}

} // namespace mdlgraph::test
