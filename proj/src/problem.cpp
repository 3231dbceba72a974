#include "mdlgraph/problem.hpp"

#include <algorithm>

#include "mdlgraph/errors.hpp"

namespace mdlgraph {

Variant variant_from_string(const std::string& s) {
    if (s == "full") return Variant::Full;
    if (s == "no-node-transforms" || s == "no_node_transforms") return Variant::NoNodeTransforms;
    if (s == "equal-lambda" || s == "equal_lambda") return Variant::EqualLambda;
    if (s == "no-dag" || s == "no_dag") return Variant::NoDag;
    throw ConfigError("unknown variant '" + s + "'");
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Full: return "full";
        case Variant::NoNodeTransforms: return "no_node_transforms";
        case Variant::EqualLambda: return "equal_lambda";
        case Variant::NoDag: return "no_dag";
    }
    return "full";
}

SolverEngine engine_from_string(const std::string& s) {
    if (s == "auto") return SolverEngine::Auto;
    if (s == "lazy") return SolverEngine::LazyCycles;
    if (s == "closure") return SolverEngine::TransitiveClosure;
    if (s == "brute") return SolverEngine::BruteForce;
    throw ConfigError("unknown solver engine '" + s + "'");
}

WeightedSelectionProblem build_problem(const Pool& pool, const AggregationConfig& cfg) {
    double l1 = cfg.effective_lambda1();
    double l2 = cfg.effective_lambda2();
    if (l1 < 0.0 || l1 > 1.0) throw ConfigError("lambda1 must lie in [0, 1]");
    if (l2 < 0.0 || l2 > 1.0) throw ConfigError("lambda2 must lie in [0, 1]");

    WeightedSelectionProblem p;
    p.require_dag = cfg.effective_dag();
    for (size_t i = 0; i < pool.edges.size(); ++i) {
        const PooledEdge& e = pool.edges[i];
        p.edge_weights[{e.head, e.tail}] = (1.0 - l1) - pool.edge_probability(i);
    }
    if (cfg.has_node_term()) {
        for (size_t i = 0; i < pool.nodes.size(); ++i) {
            p.node_weights[pool.nodes[i].id] = (1.0 - l2) - pool.node_probability(i);
        }
        for (const auto& [pair, w] : p.edge_weights) {
            p.couplings.push_back(Coupling{pair, pair.first, pair.second});
        }
    }
    return p;
}

double objective_value(const WeightedSelectionProblem& problem, const Selection& selection) {
    double total = 0.0;
    for (NodeId n : selection.chosen_nodes) {
        auto it = problem.node_weights.find(n);
        if (it == problem.node_weights.end()) {
            throw InfeasibleSelectionError("chosen node " + std::to_string(n) +
                                           " is not part of the problem");
        }
        total += it->second;
    }
    for (const auto& e : selection.chosen_edges) {
        auto it = problem.edge_weights.find(e);
        if (it == problem.edge_weights.end()) {
            throw InfeasibleSelectionError("chosen edge (" + std::to_string(e.first) + ", " +
                                           std::to_string(e.second) + ") is not part of the problem");
        }
        total += it->second;
    }
    for (const Coupling& c : problem.couplings) {
        if (selection.chosen_edges.count(c.edge) &&
            (!selection.chosen_nodes.count(c.head) || !selection.chosen_nodes.count(c.tail))) {
            throw InfeasibleSelectionError("coupling violated for edge (" +
                                           std::to_string(c.edge.first) + ", " +
                                           std::to_string(c.edge.second) + ")");
        }
    }
    if (problem.require_dag) {
        // Cycle check over the chosen edge set.
        std::map<NodeId, std::vector<NodeId>> succ;
        std::map<NodeId, int> indeg;
        for (const auto& [h, t] : selection.chosen_edges) {
            succ[h].push_back(t);
            indeg.try_emplace(h, 0);
            ++indeg[t];
        }
        std::vector<NodeId> ready;
        for (const auto& [n, d] : indeg) {
            if (d == 0) ready.push_back(n);
        }
        size_t seen = 0;
        while (!ready.empty()) {
            NodeId n = ready.back();
            ready.pop_back();
            ++seen;
            for (NodeId t : succ[n]) {
                if (--indeg[t] == 0) ready.push_back(t);
            }
        }
        if (seen != indeg.size()) {
            throw InfeasibleSelectionError("chosen edges contain a directed cycle");
        }
    }
    return total;
}

} // namespace mdlgraph
