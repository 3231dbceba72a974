#include "mdlgraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "mdlgraph/errors.hpp"
#include "mdlgraph/text.hpp"

namespace mdlgraph {

namespace {

struct SpannedNode {
    TokenSpan span;
    std::string type;
};

std::map<NodeId, SpannedNode> spans_of(const Graph& g, const char* which) {
    std::map<NodeId, SpannedNode> out;
    std::vector<std::pair<int, int>> ranges;
    for (const Node& n : g.nodes) {
        if (!n.span) {
            throw SpanError(std::string(which) + " node " + std::to_string(n.id) +
                            " carries no token span");
        }
        if (n.span->begin < 0 || n.span->end <= n.span->begin) {
            throw SpanError(std::string(which) + " node " + std::to_string(n.id) +
                            " has an empty or negative span");
        }
        out[n.id] = {*n.span, n.type};
        ranges.push_back({n.span->begin, n.span->end});
    }
    std::sort(ranges.begin(), ranges.end());
    for (size_t i = 1; i < ranges.size(); ++i) {
        if (ranges[i].first < ranges[i - 1].second) {
            throw SpanError(std::string(which) + " graph has overlapping node spans");
        }
    }
    return out;
}

double f1_of(int tp, int pred_total, int gold_total, double* precision = nullptr,
             double* recall = nullptr) {
    double p = pred_total > 0 ? static_cast<double>(tp) / pred_total : 0.0;
    double r = gold_total > 0 ? static_cast<double>(tp) / gold_total : 0.0;
    if (precision) *precision = p;
    if (recall) *recall = r;
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

int span_overlap(const TokenSpan& a, const TokenSpan& b) {
    return std::max(0, std::min(a.end, b.end) - std::max(a.begin, b.begin));
}

} // namespace

PrecisionRecall component_f1(const Graph& pred, const Graph& gold) {
    auto ps = spans_of(pred, "pred");
    auto gs = spans_of(gold, "gold");
    std::set<std::tuple<int, int, std::string>> pset, gset;
    for (const auto& [id, s] : ps) pset.insert({s.span.begin, s.span.end, s.type});
    for (const auto& [id, s] : gs) gset.insert({s.span.begin, s.span.end, s.type});
    int tp = 0;
    for (const auto& s : pset) tp += gset.count(s);
    PrecisionRecall out;
    out.f1 = f1_of(tp, static_cast<int>(pset.size()), static_cast<int>(gset.size()),
                   &out.precision, &out.recall);
    return out;
}

std::vector<std::string> bio_labels(int n_tokens, const Graph& g) {
    auto spans = spans_of(g, "graph");
    std::vector<std::string> labels(static_cast<size_t>(n_tokens), "O");
    for (const auto& [id, s] : spans) {
        for (int t = s.span.begin; t < s.span.end && t < n_tokens; ++t) {
            labels[t] = (t == s.span.begin ? "B-" : "I-") + s.type;
        }
    }
    return labels;
}

RelationScore relation_f1(const Graph& pred, const Graph& gold, OverlapMode mode,
                          const RelationOptions& opts) {
    auto ps = spans_of(pred, "pred");
    auto gs = spans_of(gold, "gold");

    auto endpoint_overlap = [&](const TokenSpan& p, const TokenSpan& g) -> double {
        int inter = span_overlap(p, g);
        if (mode == OverlapMode::Exact) return p == g ? 1.0 : -1.0;
        int denom = opts.pred_denominator ? p.end - p.begin : g.end - g.begin;
        double ratio = denom > 0 ? static_cast<double>(inter) / denom : 0.0;
        return ratio >= 0.5 ? ratio : -1.0;
    };
    bool need_type = mode == OverlapMode::Exact || opts.require_type_match;

    // candidate (pred, gold) matches with their overlap score
    struct Cand {
        double score;
        int pi, gi;
    };
    auto collect = [&](const std::vector<Edge>& pe, bool flipped) {
        std::vector<Cand> cands;
        for (size_t pi = 0; pi < pe.size(); ++pi) {
            const Edge& ep = pe[pi];
            TokenSpan ph = ps.at(flipped ? ep.tail : ep.head).span;
            TokenSpan pt = ps.at(flipped ? ep.head : ep.tail).span;
            for (size_t gi = 0; gi < gold.edges.size(); ++gi) {
                const Edge& eg = gold.edges[gi];
                if (need_type && ep.type != eg.type) continue;
                double oh = endpoint_overlap(ph, gs.at(eg.head).span);
                double ot = endpoint_overlap(pt, gs.at(eg.tail).span);
                if (oh < 0.0 || ot < 0.0) continue;
                // Exact span matches rank strictly first so the Half-mode
                // matching always contains the Exact-mode matching.
                double score = oh + ot;
                if (ph == gs.at(eg.head).span && pt == gs.at(eg.tail).span) score += 1000.0;
                cands.push_back({score, static_cast<int>(pi), static_cast<int>(gi)});
            }
        }
        std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.score != b.score) return a.score > b.score;
            if (a.pi != b.pi) return a.pi < b.pi;
            return a.gi < b.gi;
        });
        return cands;
    };

    std::vector<bool> pred_used(pred.edges.size(), false);
    std::vector<bool> gold_used(gold.edges.size(), false);
    int tp = 0;
    for (const Cand& c : collect(pred.edges, false)) {
        if (pred_used[c.pi] || gold_used[c.gi]) continue;
        pred_used[c.pi] = gold_used[c.gi] = true;
        ++tp;
    }

    RelationScore out;
    out.true_positives = tp;
    out.f1 = f1_of(tp, static_cast<int>(pred.edges.size()), static_cast<int>(gold.edges.size()),
                   &out.precision, &out.recall);
    out.spurious = static_cast<int>(pred.edges.size()) - tp;
    out.omitted = static_cast<int>(gold.edges.size()) - tp;

    // A reversed edge stays in both FP and FN; count it once here. Match the
    // flipped leftovers against leftover gold under the same criteria.
    std::vector<bool> gold_used_rev = gold_used;
    for (const Cand& c : collect(pred.edges, true)) {
        if (pred_used[c.pi] || gold_used_rev[c.gi]) continue;
        pred_used[c.pi] = gold_used_rev[c.gi] = true;
        ++out.reversed;
    }
    return out;
}

int structural_accuracy(const Graph& pred, const std::string& belief_text,
                        const std::string& argument_text) {
    if (pred.nodes.empty() || !is_dag(pred)) return 0;

    // weak connectivity
    std::map<NodeId, std::vector<NodeId>> adj;
    for (const Edge& e : pred.edges) {
        adj[e.head].push_back(e.tail);
        adj[e.tail].push_back(e.head);
    }
    std::set<NodeId> seen;
    std::vector<NodeId> queue{pred.nodes.front().id};
    seen.insert(pred.nodes.front().id);
    while (!queue.empty()) {
        NodeId n = queue.back();
        queue.pop_back();
        for (NodeId next : adj[n]) {
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    if (seen.size() != pred.nodes.size()) return 0;

    int belief_hits = 0, argument_hits = 0;
    for (const Node& n : pred.nodes) {
        if (shares_content_token(n.content, belief_text)) ++belief_hits;
        if (shares_content_token(n.content, argument_text)) ++argument_hits;
    }
    return (belief_hits >= 2 && argument_hits >= 2) ? 1 : 0;
}

namespace {

// Edit cost of a fixed content-preserving node mapping (pred id -> gold id).
int mapping_cost(const Graph& pred, const Graph& gold, const std::map<NodeId, NodeId>& mapping) {
    std::map<NodeId, const Node*> pn, gn;
    for (const Node& n : pred.nodes) pn[n.id] = &n;
    for (const Node& n : gold.nodes) gn[n.id] = &n;

    int cost = 0;
    std::set<NodeId> gold_mapped;
    for (const auto& [p, g] : mapping) {
        gold_mapped.insert(g);
        if (pn.at(p)->type != gn.at(g)->type) ++cost;  // node relabel
    }
    cost += static_cast<int>(pred.nodes.size() - mapping.size());       // node deletions
    cost += static_cast<int>(gold.nodes.size() - gold_mapped.size());   // node insertions

    std::map<std::pair<NodeId, NodeId>, std::string> gold_edges;
    for (const Edge& e : gold.edges) gold_edges[{e.head, e.tail}] = e.type;
    std::set<std::pair<NodeId, NodeId>> covered;
    for (const Edge& e : pred.edges) {
        auto hi = mapping.find(e.head);
        auto ti = mapping.find(e.tail);
        if (hi == mapping.end() || ti == mapping.end()) {
            ++cost;  // edge deletion
            continue;
        }
        auto git = gold_edges.find({hi->second, ti->second});
        if (git == gold_edges.end()) {
            ++cost;  // edge deletion
        } else {
            covered.insert(git->first);
            if (git->second != e.type) ++cost;  // edge relabel
        }
    }
    cost += static_cast<int>(gold_edges.size() - covered.size());  // edge insertions
    return cost;
}

} // namespace

double graph_edit_distance(const Graph& pred, const Graph& gold, GedMode mode) {
    int denom = static_cast<int>(pred.nodes.size() + pred.edges.size() + gold.nodes.size() +
                                 gold.edges.size());
    if (denom == 0) return 0.0;

    // Group nodes by exact content; only equal-content nodes may map.
    std::map<std::string, std::vector<NodeId>> pred_groups, gold_groups;
    for (const Node& n : pred.nodes) pred_groups[trim(n.content)].push_back(n.id);
    for (const Node& n : gold.nodes) gold_groups[trim(n.content)].push_back(n.id);

    struct Group {
        std::vector<NodeId> preds, golds;
    };
    std::vector<Group> groups;
    for (const auto& [content, pids] : pred_groups) {
        auto git = gold_groups.find(content);
        if (git != gold_groups.end()) groups.push_back({pids, git->second});
    }

    int best = std::numeric_limits<int>::max();
    if (mode == GedMode::Exact) {
        if (pred.nodes.size() > 8 || gold.nodes.size() > 8) {
            throw SizeError("exact graph edit distance supports at most 8 nodes per side");
        }
        // DFS over per-group injective assignments.
        std::map<NodeId, NodeId> mapping;
        std::function<void(size_t)> walk = [&](size_t gi) {
            if (gi == groups.size()) {
                best = std::min(best, mapping_cost(pred, gold, mapping));
                return;
            }
            const Group& grp = groups[gi];
            std::vector<bool> used(grp.golds.size(), false);
            std::function<void(size_t)> assign = [&](size_t pi) {
                if (pi == grp.preds.size()) {
                    walk(gi + 1);
                    return;
                }
                for (size_t k = 0; k < grp.golds.size(); ++k) {
                    if (used[k]) continue;
                    used[k] = true;
                    mapping[grp.preds[pi]] = grp.golds[k];
                    assign(pi + 1);
                    mapping.erase(grp.preds[pi]);
                    used[k] = false;
                }
                assign(pi + 1);  // leave this node unmapped
            };
            assign(0);
        };
        walk(0);
    } else {
        // First-fit by node id; a feasible mapping, hence an upper bound.
        std::map<NodeId, NodeId> mapping;
        for (const Group& grp : groups) {
            size_t take = std::min(grp.preds.size(), grp.golds.size());
            for (size_t k = 0; k < take; ++k) mapping[grp.preds[k]] = grp.golds[k];
        }
        best = mapping_cost(pred, gold, mapping);
    }
    return static_cast<double>(best) / denom;
}

TripleScore triple_f1(const Graph& pred, const Graph& gold) {
    auto lower = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return s;
    };
    auto triples = [&](const Graph& g) {
        std::set<std::tuple<std::string, std::string, std::string>> out;
        std::map<NodeId, const Node*> idx;
        for (const Node& n : g.nodes) idx[n.id] = &n;
        for (const Edge& e : g.edges) {
            out.insert({lower(trim(idx.at(e.head)->content)), lower(trim(e.type)),
                        lower(trim(idx.at(e.tail)->content))});
        }
        return out;
    };
    auto pt = triples(pred);
    auto gt = triples(gold);
    int tp = 0;
    for (const auto& t : pt) tp += gt.count(t);
    TripleScore out;
    if (pt.empty() && gt.empty()) {
        out.t_f1 = 1.0;
    } else {
        out.t_f1 = f1_of(tp, static_cast<int>(pt.size()), static_cast<int>(gt.size()));
    }
    out.graph_match = out.t_f1 == 1.0 ? 1 : 0;
    return out;
}

ErrorCounts edge_error_counts(const Graph& pred, const Graph& gold) {
    using Triple = std::tuple<std::string, std::string, std::string>;
    auto keyed = [](const Graph& g) {
        std::set<Triple> out;
        std::map<NodeId, const Node*> idx;
        for (const Node& n : g.nodes) idx[n.id] = &n;
        for (const Edge& e : g.edges) {
            out.insert({idx.at(e.head)->content, idx.at(e.tail)->content, e.type});
        }
        return out;
    };
    std::set<Triple> ps = keyed(pred);
    std::set<Triple> gs = keyed(gold);
    ErrorCounts out;
    for (const Triple& t : ps) {
        if (gs.count(t)) continue;
        ++out.spurious;
        Triple flipped{std::get<1>(t), std::get<0>(t), std::get<2>(t)};
        if (gs.count(flipped) && !ps.count(flipped)) ++out.reversed;
    }
    for (const Triple& t : gs) {
        if (!ps.count(t)) ++out.omitted;
    }
    return out;
}

double node_recall(const Graph& pred, const Graph& gold) {
    if (gold.nodes.empty()) return 1.0;
    std::set<std::string> pc;
    for (const Node& n : pred.nodes) pc.insert(trim(n.content));
    int hit = 0;
    for (const Node& n : gold.nodes) hit += pc.count(trim(n.content));
    return static_cast<double>(hit) / static_cast<double>(gold.nodes.size());
}

EvalTask eval_task_from_string(const std::string& s) {
    if (s == "argmine") return EvalTask::ArgMine;
    if (s == "explagraph") return EvalTask::ExplaGraph;
    if (s == "proscript") return EvalTask::ProScript;
    if (s == "semgraph") return EvalTask::SemGraph;
    throw ConfigError("unknown eval task '" + s + "'");
}

EvalReport evaluate(const Graph& pred, const Graph& gold, EvalTask task) {
    EvalReport r;
    r.edge_f1 = edge_multiset_f1(pred, gold);
    r.error_counts = edge_error_counts(pred, gold);
    switch (task) {
        case EvalTask::ArgMine: {
            PrecisionRecall c = component_f1(pred, gold);
            r.c_f1 = c.f1;
            r.c_precision = c.precision;
            r.c_recall = c.recall;
            RelationScore r100 = relation_f1(pred, gold, OverlapMode::Exact);
            RelationScore r50 = relation_f1(pred, gold, OverlapMode::Half);
            r.r100_f1 = r100.f1;
            r.r50_f1 = r50.f1;
            r.error_counts = ErrorCounts{r50.spurious, r50.omitted, r50.reversed};
            break;
        }
        case EvalTask::ExplaGraph: {
            std::string belief, argument;
            if (auto it = gold.meta.find("belief"); it != gold.meta.end()) belief = it->second;
            if (auto it = gold.meta.find("argument"); it != gold.meta.end()) argument = it->second;
            r.stca = structural_accuracy(pred, belief, argument);
            bool small = pred.nodes.size() <= 8 && gold.nodes.size() <= 8;
            r.ged = graph_edit_distance(pred, gold, small ? GedMode::Exact : GedMode::Greedy);
            break;
        }
        case EvalTask::ProScript:
            break;  // edge F1 is the task metric
        case EvalTask::SemGraph: {
            TripleScore t = triple_f1(pred, gold);
            r.t_f1 = t.t_f1;
            r.g_f1 = t.graph_match;
            bool small = pred.nodes.size() <= 8 && gold.nodes.size() <= 8;
            r.ged = graph_edit_distance(pred, gold, small ? GedMode::Exact : GedMode::Greedy);
            break;
        }
    }
    return r;
}

std::string eval_report_to_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    auto put = [&](const char* key, const std::optional<double>& v) {
        j[key] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    put("c_f1", r.c_f1);
    put("c_precision", r.c_precision);
    put("c_recall", r.c_recall);
    put("r100_f1", r.r100_f1);
    put("r50_f1", r.r50_f1);
    put("edge_f1", r.edge_f1);
    put("t_f1", r.t_f1);
    put("g_f1", r.g_f1);
    put("stca", r.stca);
    put("ged", r.ged);
    j["seca"] = nullptr;  // needs a trained stance model
    j["g_bs"] = nullptr;  // needs contextual-embedding scoring
    if (r.error_counts) {
        j["error_counts"] = {{"spurious_edges", r.error_counts->spurious},
                             {"omitted_edges", r.error_counts->omitted},
                             {"reversed_edges", r.error_counts->reversed}};
    } else {
        j["error_counts"] = nullptr;
    }
    return j.dump(2);
}

} // namespace mdlgraph
