#include "mdlgraph/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>

#include "mdlgraph/errors.hpp"
#include "mdlgraph/text.hpp"

namespace mdlgraph {

const Node* Graph::find_node(NodeId id) const {
    for (const Node& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

bool Graph::has_edge(NodeId head, NodeId tail) const {
    for (const Edge& e : edges) {
        if (e.head == head && e.tail == tail) return true;
    }
    return false;
}

void validate(const Graph& g) {
    std::set<NodeId> ids;
    for (const Node& n : g.nodes) {
        if (!ids.insert(n.id).second) {
            throw SchemaError("duplicate node id " + std::to_string(n.id));
        }
        if (trim(n.content).empty()) {
            throw SchemaError("node " + std::to_string(n.id) + " has empty content");
        }
    }
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (const Edge& e : g.edges) {
        if (ids.count(e.head) == 0 || ids.count(e.tail) == 0) {
            throw SchemaError("edge (" + std::to_string(e.head) + ", " + std::to_string(e.tail) +
                              ") references a missing node");
        }
        if (!pairs.insert({e.head, e.tail}).second) {
            throw SchemaError("duplicate edge (" + std::to_string(e.head) + ", " +
                              std::to_string(e.tail) + ")");
        }
    }
}

namespace {

// Kahn's algorithm; pops the smallest ready id so the order is canonical.
// Returns nullopt when a cycle blocks completion.
std::optional<std::vector<NodeId>> try_topological_order(const Graph& g) {
    std::map<NodeId, int> in_degree;
    std::map<NodeId, std::vector<NodeId>> succ;
    for (const Node& n : g.nodes) in_degree[n.id] = 0;
    for (const Edge& e : g.edges) {
        succ[e.head].push_back(e.tail);
        ++in_degree[e.tail];
    }
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (const auto& [id, deg] : in_degree) {
        if (deg == 0) ready.push(id);
    }
    std::vector<NodeId> order;
    order.reserve(g.nodes.size());
    while (!ready.empty()) {
        NodeId id = ready.top();
        ready.pop();
        order.push_back(id);
        for (NodeId next : succ[id]) {
            if (--in_degree[next] == 0) ready.push(next);
        }
    }
    if (order.size() != g.nodes.size()) return std::nullopt;
    return order;
}

} // namespace

bool is_dag(const Graph& g) {
    return try_topological_order(g).has_value();
}

std::vector<NodeId> topological_order(const Graph& g) {
    auto order = try_topological_order(g);
    if (!order) throw CycleError("graph has a directed cycle");
    return *order;
}

double edge_multiset_f1(const Graph& pred, const Graph& gold) {
    using Triple = std::tuple<std::string, std::string, std::string>;
    auto triples = [](const Graph& g) {
        std::map<Triple, int> out;
        std::map<NodeId, const Node*> idx;
        for (const Node& n : g.nodes) idx[n.id] = &n;
        for (const Edge& e : g.edges) {
            ++out[{idx.at(e.head)->content, idx.at(e.tail)->content, e.type}];
        }
        return out;
    };
    std::map<Triple, int> p = triples(pred);
    std::map<Triple, int> q = triples(gold);
    int pred_total = 0, gold_total = 0, tp = 0;
    for (const auto& [t, c] : p) pred_total += c;
    for (const auto& [t, c] : q) gold_total += c;
    for (const auto& [t, c] : p) {
        auto it = q.find(t);
        if (it != q.end()) tp += std::min(c, it->second);
    }
    if (pred_total == 0 && gold_total == 0) return 1.0;
    if (tp == 0) return 0.0;
    double precision = static_cast<double>(tp) / pred_total;
    double recall = static_cast<double>(tp) / gold_total;
    return 2.0 * precision * recall / (precision + recall);
}

Graph merge_duplicate_content_nodes(const Graph& g) {
    Graph out;
    out.meta = g.meta;
    std::map<std::string, NodeId> by_content;
    std::map<NodeId, NodeId> remap;
    for (const Node& n : g.nodes) {
        std::string key = trim(n.content);
        auto it = by_content.find(key);
        if (it == by_content.end()) {
            NodeId fresh = static_cast<NodeId>(out.nodes.size());
            by_content.emplace(key, fresh);
            remap[n.id] = fresh;
            Node copy = n;
            copy.id = fresh;
            copy.content = key;
            out.nodes.push_back(std::move(copy));
        } else {
            remap[n.id] = it->second;
        }
    }
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const Edge& e : g.edges) {
        Edge mapped{remap.at(e.head), remap.at(e.tail), e.type};
        if (seen.insert({mapped.head, mapped.tail}).second) {
            out.edges.push_back(mapped);
        }
    }
    return out;
}

} // namespace mdlgraph
