#include "mdlgraph/sample_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "mdlgraph/errors.hpp"
#include "mdlgraph/text.hpp"

namespace mdlgraph {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& require_field(const json& j, const char* field, const char* ctx) {
    auto it = j.find(field);
    if (it == j.end()) {
        throw SchemaError(std::string(ctx) + ": missing field '" + field + "'");
    }
    return *it;
}

std::string require_string(const json& j, const char* field, const char* ctx) {
    const json& v = require_field(j, field, ctx);
    if (!v.is_string()) {
        throw SchemaError(std::string(ctx) + ": field '" + field + "' must be a string");
    }
    return v.get<std::string>();
}

std::int64_t require_int(const json& j, const char* field, const char* ctx) {
    const json& v = require_field(j, field, ctx);
    if (!v.is_number_integer()) {
        throw SchemaError(std::string(ctx) + ": field '" + field + "' must be an integer");
    }
    return v.get<std::int64_t>();
}

} // namespace

ordered_json graph_to_json(const Graph& g) {
    ordered_json out;
    out["nodes"] = ordered_json::array();
    for (const Node& n : g.nodes) {
        ordered_json jn;
        jn["id"] = n.id;
        jn["content"] = n.content;
        jn["type"] = n.type;
        if (n.span) jn["span"] = {n.span->begin, n.span->end};
        out["nodes"].push_back(std::move(jn));
    }
    out["edges"] = ordered_json::array();
    for (const Edge& e : g.edges) {
        ordered_json je;
        je["head"] = e.head;
        je["tail"] = e.tail;
        je["type"] = e.type;
        out["edges"].push_back(std::move(je));
    }
    out["meta"] = ordered_json::object();
    for (const auto& [k, v] : g.meta) out["meta"][k] = v;
    return out;
}

Graph graph_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("graph: document must be an object");
    Graph g;
    const json& nodes = require_field(j, "nodes", "graph");
    if (!nodes.is_array()) throw SchemaError("graph: field 'nodes' must be an array");
    for (size_t i = 0; i < nodes.size(); ++i) {
        const json& jn = nodes[i];
        std::string ctx = "node[" + std::to_string(i) + "]";
        Node n;
        n.id = static_cast<NodeId>(require_int(jn, "id", ctx.c_str()));
        n.content = trim(require_string(jn, "content", ctx.c_str()));
        n.type = trim(require_string(jn, "type", ctx.c_str()));
        if (auto it = jn.find("span"); it != jn.end() && !it->is_null()) {
            if (!it->is_array() || it->size() != 2) {
                throw SchemaError(ctx + ": field 'span' must be [begin, end]");
            }
            n.span = TokenSpan{(*it)[0].get<int>(), (*it)[1].get<int>()};
        }
        g.nodes.push_back(std::move(n));
    }
    const json& edges = require_field(j, "edges", "graph");
    if (!edges.is_array()) throw SchemaError("graph: field 'edges' must be an array");
    for (size_t i = 0; i < edges.size(); ++i) {
        const json& je = edges[i];
        std::string ctx = "edge[" + std::to_string(i) + "]";
        Edge e;
        e.head = static_cast<NodeId>(require_int(je, "head", ctx.c_str()));
        e.tail = static_cast<NodeId>(require_int(je, "tail", ctx.c_str()));
        e.type = trim(require_string(je, "type", ctx.c_str()));
        g.edges.push_back(std::move(e));
    }
    if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) throw SchemaError("graph: field 'meta' must be an object");
        for (const auto& [k, v] : it->items()) {
            if (!v.is_string()) {
                throw SchemaError("graph meta['" + k + "'] must be a string");
            }
            g.meta[k] = v.get<std::string>();
        }
    }
    validate(g);
    return g;
}

ordered_json sample_set_to_json(const SampleSet& s) {
    ordered_json out;
    out["samples"] = ordered_json::array();
    for (const Graph& g : s.samples) out["samples"].push_back(graph_to_json(g));
    out["meta"] = {{"seed", s.seed}, {"temperature", s.temperature}, {"prompt_hash", s.prompt_hash}};
    out["rejects"] = ordered_json::array();
    for (const SampleSet::Reject& r : s.rejects) {
        out["rejects"].push_back({{"index", r.index}, {"reason", r.reason}});
    }
    return out;
}

SampleSet sample_set_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("samples: document must be an object");
    SampleSet s;
    const json& samples = require_field(j, "samples", "samples");
    if (!samples.is_array()) throw SchemaError("samples: field 'samples' must be an array");
    for (const json& jg : samples) s.samples.push_back(graph_from_json(jg));
    if (auto it = j.find("meta"); it != j.end() && it->is_object()) {
        const json& m = *it;
        if (auto f = m.find("seed"); f != m.end()) s.seed = f->get<std::uint64_t>();
        if (auto f = m.find("temperature"); f != m.end()) s.temperature = f->get<double>();
        if (auto f = m.find("prompt_hash"); f != m.end()) s.prompt_hash = f->get<std::string>();
    }
    if (auto it = j.find("rejects"); it != j.end() && it->is_array()) {
        for (const json& jr : *it) {
            s.rejects.push_back({static_cast<int>(require_int(jr, "index", "reject")),
                                 require_string(jr, "reason", "reject")});
        }
    }
    return s;
}

namespace {

json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    return j;
}

void write_file(const ordered_json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace

Graph read_graph(const std::filesystem::path& path) {
    return graph_from_json(parse_file(path));
}

void write_graph(const Graph& g, const std::filesystem::path& path) {
    write_file(graph_to_json(g), path);
}

SampleSet read_samples(const std::filesystem::path& path) {
    return sample_set_from_json(parse_file(path));
}

void write_samples(const SampleSet& s, const std::filesystem::path& path) {
    write_file(sample_set_to_json(s), path);
}

} // namespace mdlgraph
