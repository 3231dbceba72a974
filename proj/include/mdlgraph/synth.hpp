#pragma once

#include <cstdint>

#include "mdlgraph/graph.hpp"
#include "mdlgraph/sample_io.hpp"

namespace mdlgraph {

/// Per-sample corruption rates. Deleting a node removes its incident edges;
/// added edges respect the truth's topological order unless allow_cycles.
struct NoiseModel {
    double edge_delete_prob = 0.0;
    double edge_add_prob = 0.0;        // per absent ordered forward pair
    double node_delete_prob = 0.0;
    double content_paraphrase_prob = 0.0;  // per-token drop/duplicate rate
    bool allow_cycles = false;
    std::uint64_t seed = 0;
};

/// Random DAG: nodes 0..n-1 in a random topological order, each forward pair
/// kept with probability `edge_density`. Contents are distinct multi-token
/// strings; deterministic per seed.
Graph generate_truth(int n_nodes, double edge_density, std::uint64_t seed);

/// T independently corrupted copies of `truth`, seeded per sample index.
SampleSet corrupt(const Graph& truth, const NoiseModel& noise, int t_samples);

NoiseModel noise_from_json_string(const std::string& text);
std::string noise_to_json_string(const NoiseModel& noise);

} // namespace mdlgraph
