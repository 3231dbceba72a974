#pragma once

#include "mdlgraph/pool.hpp"
#include "mdlgraph/problem.hpp"
#include "mdlgraph/sample_io.hpp"
#include "mdlgraph/solver.hpp"

namespace mdlgraph {

struct AggregateResult {
    Graph graph;
    Selection selection;
    WeightedSelectionProblem problem;
};

/// Canonicalizes the samples into a pool, solves the weighted selection
/// problem for the configured variant, and materializes the chosen elements
/// as a graph carrying representative content/type. Variants without a node
/// term keep exactly the endpoints of the chosen edges.
AggregateResult aggregate_detailed(const SampleSet& samples, const AggregationConfig& cfg);

/// As above when the pool is already built (its threshold wins over cfg's).
AggregateResult aggregate_pool(const Pool& pool, const AggregationConfig& cfg);

Graph aggregate(const SampleSet& samples, const AggregationConfig& cfg);

} // namespace mdlgraph
