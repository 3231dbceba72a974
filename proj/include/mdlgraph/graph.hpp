#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mdlgraph {

using NodeId = std::int32_t;

/// Half-open token range [begin, end) over a reference document.
/// Optional; only span-based evaluation needs it.
struct TokenSpan {
    int begin = 0;
    int end = 0;

    bool operator==(const TokenSpan&) const = default;
    auto operator<=>(const TokenSpan&) const = default;
};

struct Node {
    NodeId id = 0;
    std::string content;
    std::string type;
    std::optional<TokenSpan> span;

    bool operator==(const Node&) const = default;
};

struct Edge {
    NodeId head = 0;
    NodeId tail = 0;
    std::string type;

    bool operator==(const Edge&) const = default;
};

/// Directed graph with typed nodes and typed edges. At most one edge per
/// ordered (head, tail) pair; every endpoint must be a declared node.
struct Graph {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::map<std::string, std::string> meta;

    const Node* find_node(NodeId id) const;
    bool has_edge(NodeId head, NodeId tail) const;

    bool operator==(const Graph&) const = default;
};

/// Throws SchemaError on dangling endpoints, duplicate node ids,
/// duplicate (head, tail) pairs, or empty node content.
void validate(const Graph& g);

/// True iff the edge set admits a topological order.
bool is_dag(const Graph& g);

/// Deterministic topological order (ties broken by smallest NodeId).
/// Throws CycleError when the graph has a directed cycle.
std::vector<NodeId> topological_order(const Graph& g);

/// F1 between the two edge multisets, where an edge is identified by
/// (head content, tail content, edge type) under exact string match.
/// Both sets empty -> 1.0.
double edge_multiset_f1(const Graph& pred, const Graph& gold);

/// Merges nodes with identical content (exact match after trimming) into
/// the first occurrence, remapping edges and dropping duplicate pairs.
/// Node ids are re-densified to 0..n-1.
Graph merge_duplicate_content_nodes(const Graph& g);

} // namespace mdlgraph
