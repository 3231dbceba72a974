#include "mdlgraph/synth.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "mdlgraph/errors.hpp"
#include "mdlgraph/rng.hpp"
#include "mdlgraph/text.hpp"

namespace mdlgraph {

namespace {

// Word bank for synthetic node contents; 4 words per node keeps Jaccard
// merging meaningful under token-level paraphrase noise.
constexpr std::array<const char*, 128> kVocab = {
    "gather",  "rinse",   "measure", "whisk",   "preheat", "slice",   "arrange", "drain",
    "fold",    "simmer",  "label",   "stack",   "inspect", "fasten",  "grind",   "pour",
    "bundle",  "trace",   "record",  "align",   "sort",    "press",   "carve",   "wrap",
    "attach",  "sketch",  "collect", "deliver", "soak",    "polish",  "assemble", "verify",
    "kettle",  "drawer",  "lantern", "basket",  "garden",  "ladder",  "cabinet", "window",
    "harbor",  "meadow",  "bridge",  "tunnel",  "engine",  "saddle",  "bannister", "compass",
    "anchor",  "barrel",  "canvas",  "chimney", "dolphin", "emerald", "fountain", "granite",
    "hammock", "island",  "jacket",  "kernel",  "lagoon",  "magnet",  "needle",  "orchard",
    "paddle",  "quarry",  "ribbon",  "shovel",  "timber",  "urchin",  "vessel",  "walnut",
    "yonder",  "zephyr",  "amber",   "bronze",  "copper",  "dusty",   "eager",   "frosty",
    "gentle",  "hollow",  "ivory",   "jolly",   "keen",    "lively",  "mellow",  "narrow",
    "olive",   "pale",    "quiet",   "rustic",  "silver",  "tender",  "upper",   "vivid",
    "warm",    "crisp",   "bold",    "calm",    "deep",    "fresh",   "grand",   "humble",
    "inner",   "joint",   "kind",    "loose",   "mild",    "neat",    "open",    "plain",
    "round",   "sharp",   "tall",    "usual",   "vast",    "wide",    "young",   "zesty",
    "brisk",   "clear",   "dense",   "even",    "firm",    "glad",    "heavy",   "light",
};

std::string synth_content(int index) {
    std::string out;
    for (int k = 0; k < 3; ++k) {
        out += kVocab[(3 * index + k) % kVocab.size()];
        out += ' ';
    }
    out += "item" + std::to_string(index);
    return out;
}

std::string paraphrase(const std::string& content, double rate, Rng& rng) {
    std::vector<std::string> tokens = tokenize(content);
    std::vector<std::string> out;
    for (const std::string& tok : tokens) {
        if (rng.bernoulli(rate)) {
            if (rng.bernoulli(0.5)) continue;  // drop
            out.push_back(tok);                // duplicate
            out.push_back(tok);
        } else {
            out.push_back(tok);
        }
    }
    if (out.empty()) out.push_back(tokens.empty() ? std::string("blank") : tokens.front());
    std::string joined;
    for (size_t i = 0; i < out.size(); ++i) {
        if (i) joined += ' ';
        joined += out[i];
    }
    return joined;
}

} // namespace

Graph generate_truth(int n_nodes, double edge_density, std::uint64_t seed) {
    if (n_nodes < 1) throw ConfigError("generate_truth requires n_nodes >= 1");
    if (edge_density < 0.0 || edge_density > 1.0) {
        throw ConfigError("edge density must lie in [0, 1]");
    }
    Rng rng(Rng::derive_seed(seed, 0));
    Graph g;
    g.meta["goal"] = "synthetic benchmark " + std::to_string(seed);
    for (int i = 0; i < n_nodes; ++i) {
        g.nodes.push_back(Node{static_cast<NodeId>(i), synth_content(i), "step", std::nullopt});
    }
    std::vector<NodeId> order(n_nodes);
    for (int i = 0; i < n_nodes; ++i) order[i] = static_cast<NodeId>(i);
    rng.shuffle(order);
    for (int i = 0; i < n_nodes; ++i) {
        for (int j = i + 1; j < n_nodes; ++j) {
            if (rng.bernoulli(edge_density)) {
                g.edges.push_back(Edge{order[i], order[j], "dep"});
            }
        }
    }
    return g;
}

SampleSet corrupt(const Graph& truth, const NoiseModel& noise, int t_samples) {
    if (t_samples < 1) throw ConfigError("corrupt requires t_samples >= 1");
    for (double p : {noise.edge_delete_prob, noise.edge_add_prob, noise.node_delete_prob,
                     noise.content_paraphrase_prob}) {
        if (p < 0.0 || p > 1.0) throw ConfigError("noise probabilities must lie in [0, 1]");
    }

    // Truth topological positions constrain which pairs may be added.
    std::vector<NodeId> topo = topological_order(truth);
    std::map<NodeId, int> pos;
    for (size_t i = 0; i < topo.size(); ++i) pos[topo[i]] = static_cast<int>(i);
    std::set<std::pair<NodeId, NodeId>> truth_pairs;
    for (const Edge& e : truth.edges) truth_pairs.insert({e.head, e.tail});

    SampleSet out;
    out.seed = noise.seed;
    out.prompt_hash = "synthetic";
    for (int t = 0; t < t_samples; ++t) {
        Rng rng(Rng::derive_seed(noise.seed, static_cast<std::uint64_t>(t) + 1));
        std::set<NodeId> alive;
        for (const Node& n : truth.nodes) {
            if (!rng.bernoulli(noise.node_delete_prob)) alive.insert(n.id);
        }
        std::vector<Edge> kept;
        for (const Edge& e : truth.edges) {
            if (!alive.count(e.head) || !alive.count(e.tail)) continue;
            if (!rng.bernoulli(noise.edge_delete_prob)) kept.push_back(e);
        }
        if (noise.edge_add_prob > 0.0) {
            for (NodeId u : topo) {
                for (NodeId v : topo) {
                    if (u == v || !alive.count(u) || !alive.count(v)) continue;
                    if (!noise.allow_cycles && pos[u] >= pos[v]) continue;
                    if (truth_pairs.count({u, v})) continue;
                    if (rng.bernoulli(noise.edge_add_prob)) kept.push_back(Edge{u, v, "dep"});
                }
            }
        }

        Graph sample;
        std::map<NodeId, NodeId> remap;
        for (const Node& n : truth.nodes) {
            if (!alive.count(n.id)) continue;
            NodeId fresh = static_cast<NodeId>(sample.nodes.size());
            remap[n.id] = fresh;
            std::string content = noise.content_paraphrase_prob > 0.0
                                      ? paraphrase(n.content, noise.content_paraphrase_prob, rng)
                                      : n.content;
            sample.nodes.push_back(Node{fresh, content, n.type, std::nullopt});
        }
        for (const Edge& e : kept) {
            sample.edges.push_back(Edge{remap.at(e.head), remap.at(e.tail), e.type});
        }
        // Paraphrase collisions within a sample collapse, as parsed samples do.
        out.samples.push_back(merge_duplicate_content_nodes(sample));
    }
    return out;
}

NoiseModel noise_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("noise model: ") + e.what());
    }
    NoiseModel n;
    n.edge_delete_prob = j.value("edge_delete_prob", 0.0);
    n.edge_add_prob = j.value("edge_add_prob", 0.0);
    n.node_delete_prob = j.value("node_delete_prob", 0.0);
    n.content_paraphrase_prob = j.value("content_paraphrase_prob", 0.0);
    n.allow_cycles = j.value("allow_cycles", false);
    n.seed = j.value("seed", 0ull);
    return n;
}

std::string noise_to_json_string(const NoiseModel& noise) {
    nlohmann::ordered_json j{{"edge_delete_prob", noise.edge_delete_prob},
                             {"edge_add_prob", noise.edge_add_prob},
                             {"node_delete_prob", noise.node_delete_prob},
                             {"content_paraphrase_prob", noise.content_paraphrase_prob},
                             {"allow_cycles", noise.allow_cycles},
                             {"seed", noise.seed}};
    return j.dump(2);
}

} // namespace mdlgraph
