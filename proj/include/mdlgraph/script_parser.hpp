#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mdlgraph/graph.hpp"

namespace mdlgraph {

/// Line-pattern rules for turning a programming-script graph description
/// into a Graph. Capture-group indices are 1-based; 0 means "not captured"
/// and the rule's default applies.
struct NodeRule {
    std::string pattern;
    int var_group = 1;
    int content_group = 2;
    int type_group = 0;
    std::string default_type;
};

struct EdgeRule {
    std::string pattern;
    int head_group = 1;
    int tail_group = 2;
    int type_group = 0;
    std::string default_type;
};

struct ScriptDialect {
    std::vector<NodeRule> node_rules;
    std::vector<EdgeRule> edge_rules;
    // Lines matching any of these are boilerplate, not counted as skipped.
    std::vector<std::string> ignore_patterns;
    // Optional: captures free text into meta["goal"].
    std::string goal_pattern;
    int goal_group = 1;

    /// Python-ish scheme: `v = "content"`, `v = Type("content")`,
    /// `edge(a, b)` / `edge(a, b, "type")`, with def/class/comment
    /// boilerplate ignored.
    static ScriptDialect builtin_default();

    static ScriptDialect from_json_file(const std::filesystem::path& path);
    std::string to_json_string() const;
};

struct ParsedScript {
    Graph graph;
    int skipped_lines = 0;   // lines classified by no rule
    int implicit_nodes = 0;  // endpoints referenced before any declaration
};

/// Parses one raw completion. Duplicate declarations with identical content
/// collapse to one node; an edge endpoint never declared materializes an
/// implicit node whose content is the variable name (counted). Throws
/// ParseError only when no node and no edge was recognized at all.
ParsedScript parse_script(std::string_view text, const ScriptDialect& dialect);

} // namespace mdlgraph
