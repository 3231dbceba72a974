#include "mdlgraph/aggregate.hpp"

#include <algorithm>

#include "mdlgraph/errors.hpp"

namespace mdlgraph {

namespace {

Selection dispatch(const WeightedSelectionProblem& problem, const AggregationConfig& cfg) {
    SolveOptions opts;
    opts.max_nodes = cfg.solver_node_budget;
    switch (cfg.engine) {
        case SolverEngine::TransitiveClosure: return solve_transitive_closure(problem, opts);
        case SolverEngine::BruteForce: return brute_force(problem);
        case SolverEngine::Auto:
        case SolverEngine::LazyCycles: break;
    }
    return solve_lazy_cycles(problem, opts);
}

} // namespace

AggregateResult aggregate_pool(const Pool& pool, const AggregationConfig& cfg) {
    AggregateResult out;
    out.problem = build_problem(pool, cfg);
    out.selection = dispatch(out.problem, cfg);

    std::set<NodeId> keep_nodes;
    if (cfg.has_node_term()) {
        keep_nodes = out.selection.chosen_nodes;
    } else {
        for (const auto& [h, t] : out.selection.chosen_edges) {
            keep_nodes.insert(h);
            keep_nodes.insert(t);
        }
    }

    // Pool ids are dense, so the keep set maps to fresh ids in pool order.
    std::map<NodeId, NodeId> remap;
    for (const PooledNode& pn : pool.nodes) {
        if (!keep_nodes.count(pn.id)) continue;
        NodeId fresh = static_cast<NodeId>(out.graph.nodes.size());
        remap[pn.id] = fresh;
        out.graph.nodes.push_back(Node{fresh, pn.representative_content, pn.representative_type,
                                       std::nullopt});
    }
    for (const PooledEdge& pe : pool.edges) {
        auto key = std::make_pair(pe.head, pe.tail);
        if (!out.selection.chosen_edges.count(key)) continue;
        out.graph.edges.push_back(Edge{remap.at(pe.head), remap.at(pe.tail), pe.representative_type});
    }
    return out;
}

AggregateResult aggregate_detailed(const SampleSet& samples, const AggregationConfig& cfg) {
    if (samples.size() < 1) throw ConfigError("aggregate requires a non-empty sample set");
    Pool pool = build_pool(samples, cfg.jaccard_threshold);
    return aggregate_pool(pool, cfg);
}

Graph aggregate(const SampleSet& samples, const AggregationConfig& cfg) {
    return aggregate_detailed(samples, cfg).graph;
}

} // namespace mdlgraph
