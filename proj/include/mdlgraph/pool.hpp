#pragma once

#include <set>
#include <string>
#include <vector>

#include "mdlgraph/graph.hpp"
#include "mdlgraph/sample_io.hpp"

namespace mdlgraph {

/// One canonical node: the merged history of every sample node that fell
/// within the Jaccard threshold of it.
struct PooledNode {
    NodeId id = 0;
    std::vector<std::string> content_list;
    std::vector<std::string> type_list;
    std::set<int> sample_ids;
    std::string representative_content;
    std::string representative_type;
};

struct PooledEdge {
    NodeId head = 0;
    NodeId tail = 0;
    std::vector<std::string> type_list;
    std::set<int> sample_ids;
    bool degenerate = false;  // head == tail after node merging
    std::string representative_type;
};

/// Canonical universes built from a SampleSet. Only observed elements are
/// stored; node/edge pairs never seen carry probability zero implicitly.
struct Pool {
    std::vector<PooledNode> nodes;
    std::vector<PooledEdge> edges;
    int sample_count = 0;
    double jaccard_threshold = 0.5;

    double node_probability(size_t index) const {
        return static_cast<double>(nodes[index].sample_ids.size()) / sample_count;
    }
    double edge_probability(size_t index) const {
        return static_cast<double>(edges[index].sample_ids.size()) / sample_count;
    }
};

/// Greedy first-match merging: samples in index order, nodes in declaration
/// order; an incoming node joins the first pooled node whose content_list
/// holds an element with Jaccard >= threshold, else starts a new one.
/// A sample contributes at most once to any element's sample_ids.
Pool build_pool(const SampleSet& samples, double jaccard_threshold);

/// Representative content is the element of content_list with the highest
/// mean Jaccard similarity to the rest (ties: shorter string, then
/// lexicographic); representative type is the mode of type_list (ties:
/// earliest first occurrence).
std::pair<std::string, std::string> elect_representative(const PooledNode& n);

/// Mode of a label list with ties broken by earliest first occurrence.
std::string mode_label(const std::vector<std::string>& labels);

} // namespace mdlgraph
