#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "mdlgraph/errors.hpp"
#include "mdlgraph/rng.hpp"
#include "mdlgraph/sample_io.hpp"
#include "mdlgraph/script_parser.hpp"

using namespace mdlgraph;
using test::make_graph;
using test::random_graph;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "mdlgraph-io-tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("graph json round-trip is lossless") {
    Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {0, 4}});
    g.meta["goal"] = "five node dag";
    g.nodes[1].span = TokenSpan{3, 7};
    auto path = temp_file("roundtrip.json");
    write_graph(g, path);
    CHECK(read_graph(path) == g);
}

TEST_CASE("graph json round-trip property over random graphs") {
    Rng rng(99);
    auto path = temp_file("roundtrip-random.json");
    for (int i = 0; i < 200; ++i) {
        Graph g = random_graph(rng);
        write_graph(g, path);
        CHECK(read_graph(path) == g);
    }
}

TEST_CASE("schema errors name the offending field") {
    auto path = temp_file("broken.json");
    {
        std::ofstream out(path);
        out << R"({"nodes": []})";
    }
    try {
        read_graph(path);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("edges") != std::string::npos);
    }
}

TEST_CASE("missing file raises IoError") {
    CHECK_THROWS_AS(read_graph("/nonexistent/graph.json"), IoError);
}

TEST_CASE("sample set round-trip keeps T and rejects") {
    SampleSet s;
    for (int i = 0; i < 10; ++i) s.samples.push_back(make_graph(3, {{0, 1}, {1, 2}}));
    s.seed = 42;
    s.temperature = 0.9;
    s.prompt_hash = "abc";
    s.rejects.push_back({3, "syntax"});
    auto path = temp_file("samples.json");
    write_samples(s, path);
    SampleSet back = read_samples(path);
    CHECK(back.size() == 10);
    CHECK(back == s);
}

TEST_CASE("parse_script recognizes the default dialect") {
    std::string script = R"(goal = "clean the kitchen"
step0 = "wash the dishes"
step1 = "dry the dishes"
edge(step0, step1)
)";
    ParsedScript out = parse_script(script, ScriptDialect::builtin_default());
    CHECK(out.graph.nodes.size() == 2);
    CHECK(out.graph.edges.size() == 1);
    CHECK(out.graph.meta.at("goal") == "clean the kitchen");
    CHECK(out.skipped_lines == 0);
    CHECK(out.graph.nodes[0].content == "wash the dishes");
    CHECK(out.graph.edges[0].head == 0);
    CHECK(out.graph.edges[0].tail == 1);
}

TEST_CASE("parse_script with typed declarations and typed edges") {
    std::string script = R"(c1 = Claim("cloning will help patients")
p1 = Premise("organs match the patient")
edge(p1, c1, "support")
)";
    ParsedScript out = parse_script(script, ScriptDialect::builtin_default());
    REQUIRE(out.graph.nodes.size() == 2);
    CHECK(out.graph.nodes[0].type == "Claim");
    CHECK(out.graph.nodes[1].type == "Premise");
    REQUIRE(out.graph.edges.size() == 1);
    CHECK(out.graph.edges[0].type == "support");
}

TEST_CASE("parse_script skips garbage lines but keeps count") {
    std::string script = "a = \"first step\"\n???grbl###\nb = \"second step\"\n";
    ParsedScript out = parse_script(script, ScriptDialect::builtin_default());
    CHECK(out.graph.nodes.size() == 2);
    CHECK(out.skipped_lines == 1);
}

TEST_CASE("parse_script deduplicates identical content in one sample") {
    std::string script = "a = \"same step\"\nb = \"same step\"\nc = \"other\"\nedge(a, c)\nedge(b, c)\n";
    ParsedScript out = parse_script(script, ScriptDialect::builtin_default());
    CHECK(out.graph.nodes.size() == 2);
    CHECK(out.graph.edges.size() == 1);  // both edges collapse to the same pair
}

TEST_CASE("parse_script materializes implicit endpoints") {
    std::string script = "a = \"declared\"\nedge(a, ghost)\n";
    ParsedScript out = parse_script(script, ScriptDialect::builtin_default());
    CHECK(out.graph.nodes.size() == 2);
    CHECK(out.implicit_nodes == 1);
    CHECK(out.graph.nodes[1].content == "ghost");
    CHECK(out.graph.nodes[1].type.empty());
}

TEST_CASE("parse_script fails only when nothing is recognized") {
    CHECK_THROWS_AS(parse_script("", ScriptDialect::builtin_default()), ParseError);
    CHECK_THROWS_AS(parse_script("nothing here\nat all\n", ScriptDialect::builtin_default()),
                    ParseError);
}

TEST_CASE("parse_script ignores trailing whitespace") {
    ParsedScript a = parse_script("x = \"step one\"   \n", ScriptDialect::builtin_default());
    ParsedScript b = parse_script("x = \"step one\"\n", ScriptDialect::builtin_default());
    CHECK(a.graph == b.graph);
}

TEST_CASE("dialect round-trips through json") {
    ScriptDialect d = ScriptDialect::builtin_default();
    auto path = temp_file("dialect.json");
    {
        std::ofstream out(path);
        out << d.to_json_string();
    }
    ScriptDialect back = ScriptDialect::from_json_file(path);
    ParsedScript out = parse_script("a = \"alpha beta\"\n", back);
    CHECK(out.graph.nodes.size() == 1);
}
