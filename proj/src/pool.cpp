#include "mdlgraph/pool.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mdlgraph/errors.hpp"
#include "mdlgraph/text.hpp"

namespace mdlgraph {

std::string mode_label(const std::vector<std::string>& labels) {
    if (labels.empty()) return "";
    std::map<std::string, int> counts;
    for (const std::string& l : labels) ++counts[l];
    int best_count = 0;
    std::string best;
    for (const std::string& l : labels) {  // earliest first occurrence wins ties
        int c = counts[l];
        if (c > best_count) {
            best_count = c;
            best = l;
        }
    }
    return best;
}

std::pair<std::string, std::string> elect_representative(const PooledNode& n) {
    const auto& contents = n.content_list;
    if (contents.empty()) return {"", mode_label(n.type_list)};
    std::vector<std::vector<std::string>> toks;
    toks.reserve(contents.size());
    for (const std::string& c : contents) toks.push_back(token_set(c));

    std::string best = contents[0];
    double best_score = -1.0;
    for (size_t i = 0; i < contents.size(); ++i) {
        double sum = 0.0;
        for (size_t j = 0; j < contents.size(); ++j) {
            if (i == j) continue;
            sum += jaccard_sets(toks[i], toks[j]);
        }
        double score = contents.size() > 1 ? sum / (contents.size() - 1) : 1.0;
        bool better = score > best_score + 1e-12;
        if (!better && std::abs(score - best_score) <= 1e-12) {
            better = contents[i].size() < best.size() ||
                     (contents[i].size() == best.size() && contents[i] < best);
        }
        if (better) {
            best_score = score;
            best = contents[i];
        }
    }
    return {best, mode_label(n.type_list)};
}

Pool build_pool(const SampleSet& samples, double jaccard_threshold) {
    if (samples.size() < 1) throw ConfigError("build_pool requires at least one sample");
    if (jaccard_threshold < 0.0 || jaccard_threshold > 1.0) {
        throw ConfigError("jaccard threshold must lie in [0, 1]");
    }

    Pool pool;
    pool.sample_count = samples.size();
    pool.jaccard_threshold = jaccard_threshold;

    // token sets for every content ever merged, parallel to content_list
    std::vector<std::vector<std::vector<std::string>>> pooled_tokens;
    std::map<std::pair<NodeId, NodeId>, size_t> edge_index;

    for (int si = 0; si < samples.size(); ++si) {
        const Graph& sample = samples.samples[si];
        std::map<NodeId, NodeId> merge_map;  // sample node id -> pool node id

        for (const Node& node : sample.nodes) {
            std::vector<std::string> toks = token_set(node.content);
            NodeId target = -1;
            for (size_t pi = 0; pi < pool.nodes.size() && target < 0; ++pi) {
                for (const auto& existing : pooled_tokens[pi]) {
                    if (jaccard_sets(toks, existing) >= jaccard_threshold) {
                        target = static_cast<NodeId>(pi);
                        break;
                    }
                }
            }
            if (target < 0) {
                target = static_cast<NodeId>(pool.nodes.size());
                pool.nodes.push_back(PooledNode{target, {}, {}, {}, "", ""});
                pooled_tokens.emplace_back();
            }
            PooledNode& pn = pool.nodes[target];
            pn.content_list.push_back(node.content);
            pn.type_list.push_back(node.type);
            pn.sample_ids.insert(si);
            pooled_tokens[target].push_back(std::move(toks));
            merge_map[node.id] = target;
        }

        for (const Edge& edge : sample.edges) {
            NodeId head = merge_map.at(edge.head);
            NodeId tail = merge_map.at(edge.tail);
            auto [it, fresh] = edge_index.try_emplace({head, tail}, pool.edges.size());
            if (fresh) {
                pool.edges.push_back(PooledEdge{head, tail, {}, {}, head == tail, ""});
            }
            PooledEdge& pe = pool.edges[it->second];
            pe.type_list.push_back(edge.type);
            pe.sample_ids.insert(si);
        }
    }

    for (PooledNode& pn : pool.nodes) {
        auto [content, type] = elect_representative(pn);
        pn.representative_content = content;
        pn.representative_type = type;
    }
    for (PooledEdge& pe : pool.edges) {
        pe.representative_type = mode_label(pe.type_list);
    }
    return pool;
}

} // namespace mdlgraph
