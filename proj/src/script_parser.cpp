#include "mdlgraph/script_parser.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mdlgraph/errors.hpp"
#include "mdlgraph/text.hpp"

namespace mdlgraph {

namespace {

std::regex compile(const std::string& pattern, const char* what) {
    try {
        return std::regex(pattern);
    } catch (const std::regex_error& e) {
        throw ConfigError(std::string("bad ") + what + " pattern '" + pattern + "': " + e.what());
    }
}

std::string group_or(const std::smatch& m, int group, const std::string& fallback) {
    if (group <= 0 || group >= static_cast<int>(m.size()) || !m[group].matched) return fallback;
    return m[group].str();
}

} // namespace

ScriptDialect ScriptDialect::builtin_default() {
    ScriptDialect d;
    d.node_rules.push_back(
        {R"re(^\s*(\w+)\s*=\s*(\w+)\s*\(\s*"(.*)"\s*\)\s*;?\s*$)re", 1, 3, 2, ""});
    d.node_rules.push_back({R"re(^\s*(\w+)\s*=\s*"(.*)"\s*;?\s*$)re", 1, 2, 0, ""});
    d.edge_rules.push_back(
        {R"re(^\s*edge\s*\(\s*(\w+)\s*,\s*(\w+)\s*,\s*"([^"]*)"\s*\)\s*;?\s*$)re", 1, 2, 3, ""});
    d.edge_rules.push_back({R"re(^\s*edge\s*\(\s*(\w+)\s*,\s*(\w+)\s*\)\s*;?\s*$)re", 1, 2, 0, ""});
    d.ignore_patterns = {
        R"re(^\s*$)re",          R"re(^\s*#)re",       R"re(^\s*//)re",
        R"re(^\s*def\s)re",      R"re(^\s*class\s)re", R"re(^\s*(from|import)\s)re",
        R"re(^\s*""")re",        R"re(^\s*(pass|return)\b)re",
        R"re(^\s*```)re",
    };
    d.goal_pattern = R"re(^\s*goal\s*=\s*"(.*)"\s*;?\s*$)re";
    d.goal_group = 1;
    return d;
}

ScriptDialect ScriptDialect::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dialect file " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    ScriptDialect d;
    for (const auto& jn : j.value("node_rules", nlohmann::json::array())) {
        NodeRule r;
        r.pattern = jn.at("pattern").get<std::string>();
        r.var_group = jn.value("var_group", 1);
        r.content_group = jn.value("content_group", 2);
        r.type_group = jn.value("type_group", 0);
        r.default_type = jn.value("default_type", "");
        d.node_rules.push_back(std::move(r));
    }
    for (const auto& je : j.value("edge_rules", nlohmann::json::array())) {
        EdgeRule r;
        r.pattern = je.at("pattern").get<std::string>();
        r.head_group = je.value("head_group", 1);
        r.tail_group = je.value("tail_group", 2);
        r.type_group = je.value("type_group", 0);
        r.default_type = je.value("default_type", "");
        d.edge_rules.push_back(std::move(r));
    }
    for (const auto& ji : j.value("ignore_patterns", nlohmann::json::array())) {
        d.ignore_patterns.push_back(ji.get<std::string>());
    }
    d.goal_pattern = j.value("goal_pattern", "");
    d.goal_group = j.value("goal_group", 1);
    if (d.node_rules.empty() && d.edge_rules.empty()) {
        throw SchemaError(path.string() + ": dialect declares no node_rules or edge_rules");
    }
    return d;
}

std::string ScriptDialect::to_json_string() const {
    nlohmann::ordered_json j;
    j["node_rules"] = nlohmann::ordered_json::array();
    for (const NodeRule& r : node_rules) {
        j["node_rules"].push_back({{"pattern", r.pattern},
                                   {"var_group", r.var_group},
                                   {"content_group", r.content_group},
                                   {"type_group", r.type_group},
                                   {"default_type", r.default_type}});
    }
    j["edge_rules"] = nlohmann::ordered_json::array();
    for (const EdgeRule& r : edge_rules) {
        j["edge_rules"].push_back({{"pattern", r.pattern},
                                   {"head_group", r.head_group},
                                   {"tail_group", r.tail_group},
                                   {"type_group", r.type_group},
                                   {"default_type", r.default_type}});
    }
    j["ignore_patterns"] = ignore_patterns;
    j["goal_pattern"] = goal_pattern;
    j["goal_group"] = goal_group;
    return j.dump(2);
}

ParsedScript parse_script(std::string_view text, const ScriptDialect& dialect) {
    std::vector<std::regex> node_res, edge_res, ignore_res;
    for (const NodeRule& r : dialect.node_rules) node_res.push_back(compile(r.pattern, "node"));
    for (const EdgeRule& r : dialect.edge_rules) edge_res.push_back(compile(r.pattern, "edge"));
    for (const std::string& p : dialect.ignore_patterns) ignore_res.push_back(compile(p, "ignore"));
    std::optional<std::regex> goal_re;
    if (!dialect.goal_pattern.empty()) goal_re = compile(dialect.goal_pattern, "goal");

    ParsedScript out;
    Graph& g = out.graph;
    std::map<std::string, NodeId> by_var;       // declared variable -> node
    std::map<std::string, NodeId> by_content;   // exact content -> node
    std::set<std::pair<NodeId, NodeId>> edge_pairs;

    auto intern_node = [&](const std::string& content, const std::string& type) -> NodeId {
        std::string key = trim(content);
        auto it = by_content.find(key);
        if (it != by_content.end()) return it->second;
        NodeId id = static_cast<NodeId>(g.nodes.size());
        g.nodes.push_back(Node{id, key, trim(type), std::nullopt});
        by_content.emplace(key, id);
        return id;
    };
    auto resolve_endpoint = [&](const std::string& var) -> NodeId {
        auto it = by_var.find(var);
        if (it != by_var.end()) return it->second;
        // Undeclared endpoint: best available content is the variable name.
        NodeId id = intern_node(var, "");
        by_var.emplace(var, id);
        ++out.implicit_nodes;
        return id;
    };

    std::istringstream lines{std::string(text)};
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::smatch m;
        if (goal_re && std::regex_match(line, m, *goal_re)) {
            g.meta["goal"] = trim(group_or(m, dialect.goal_group, ""));
            continue;
        }
        bool handled = false;
        for (size_t i = 0; i < node_res.size() && !handled; ++i) {
            if (!std::regex_match(line, m, node_res[i])) continue;
            const NodeRule& r = dialect.node_rules[i];
            std::string content = trim(group_or(m, r.content_group, ""));
            if (content.empty()) break;  // empty content is not a declaration
            std::string var = group_or(m, r.var_group, "");
            std::string type = group_or(m, r.type_group, r.default_type);
            NodeId id = intern_node(content, type);
            if (!var.empty()) by_var[var] = id;
            handled = true;
        }
        for (size_t i = 0; i < edge_res.size() && !handled; ++i) {
            if (!std::regex_match(line, m, edge_res[i])) continue;
            const EdgeRule& r = dialect.edge_rules[i];
            NodeId head = resolve_endpoint(group_or(m, r.head_group, ""));
            NodeId tail = resolve_endpoint(group_or(m, r.tail_group, ""));
            if (edge_pairs.insert({head, tail}).second) {
                g.edges.push_back(Edge{head, tail, trim(group_or(m, r.type_group, r.default_type))});
            }
            handled = true;
        }
        if (handled) continue;
        bool ignorable = false;
        for (const std::regex& re : ignore_res) {
            if (std::regex_search(line, re)) {
                ignorable = true;
                break;
            }
        }
        if (!ignorable) ++out.skipped_lines;
    }

    if (g.nodes.empty() && g.edges.empty()) {
        throw ParseError("no node or edge declarations recognized");
    }
    return out;
}

} // namespace mdlgraph
