#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mdlgraph/errors.hpp"
#include "mdlgraph/llm_client.hpp"

using namespace mdlgraph;

namespace {

PromptSpec demo_spec() {
    PromptSpec spec;
    spec.few_shot = {{"Input: clean the kitchen", "a = \"wash\"\nb = \"dry\"\nedge(a, b)"},
                     {"Input: bake a cake", "a = \"mix\"\nb = \"bake\"\nedge(a, b)"}};
    spec.test_input = "Input: do the laundry";
    spec.intra_separator = "\n<SCRIPT>\n";
    spec.inter_separator = "\n<NEXT>\n";
    return spec;
}

int count_occurrences(const std::string& hay, const std::string& needle) {
    int n = 0;
    for (size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + needle.size())) {
        ++n;
    }
    return n;
}

std::string completion_body(const std::string& content) {
    nlohmann::json j{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}};
    return j.dump();
}

// Test server bound to a loopback port; handler owns the response policy.
class MockServer {
public:
    explicit MockServer(httplib::Server::Handler handler) {
        server_.Post("/v1/chat/completions", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~MockServer() {
        server_.stop();
        thread_.join();
    }
    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

SamplerConfig test_config(const std::string& endpoint, const std::string& tag, int t) {
    SamplerConfig cfg;
    cfg.endpoint = endpoint;
    cfg.model = "test-model";
    cfg.temperature = 0.9;
    cfg.t_samples = t;
    cfg.cache_dir = std::filesystem::temp_directory_path() / ("mdlgraph-cache-" + tag);
    std::filesystem::remove_all(cfg.cache_dir);
    cfg.max_retries = 3;
    cfg.backoff_initial_s = 0.01;
    cfg.concurrency = 2;
    return cfg;
}

} // namespace

TEST_CASE("build_prompt keeps order and separators") {
    PromptSpec spec = demo_spec();
    std::string prompt = build_prompt(spec);
    CHECK(count_occurrences(prompt, "<NEXT>") == 2);
    CHECK(count_occurrences(prompt, "<SCRIPT>") == 3);  // one per pair + the open test slot
    CHECK(prompt.find("clean the kitchen") < prompt.find("bake a cake"));
    // ends with the test input followed by the intra separator
    std::string tail = spec.test_input + spec.intra_separator;
    CHECK(prompt.substr(prompt.size() - tail.size()) == tail);
    CHECK(build_prompt(spec) == prompt);

    PromptSpec empty;
    empty.test_input = "x";
    CHECK_THROWS_AS(build_prompt(empty), ConfigError);
}

TEST_CASE("build_prompt distinguishes few-shot orderings") {
    PromptSpec spec = demo_spec();
    PromptSpec swapped = spec;
    std::swap(swapped.few_shot[0], swapped.few_shot[1]);
    CHECK(build_prompt(spec) != build_prompt(swapped));
}

TEST_CASE("sampling fills the cache and replays from it") {
    std::atomic<int> hits{0};
    MockServer server([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.set_content(completion_body("a = \"first step\"\nb = \"second step\"\nedge(a, b)\n"),
                        "application/json");
    });
    SamplerConfig cfg = test_config(server.endpoint(), "roundtrip", 4);

    SampleStats stats1;
    SampleSet run1 = sample_graphs(demo_spec(), cfg, ScriptDialect::builtin_default(), &stats1);
    CHECK(run1.size() == 4);
    CHECK(stats1.network_calls == 4);
    CHECK(stats1.cache_hits == 0);
    CHECK(run1.samples[0].nodes.size() == 2);

    SampleStats stats2;
    SampleSet run2 = sample_graphs(demo_spec(), cfg, ScriptDialect::builtin_default(), &stats2);
    CHECK(stats2.network_calls == 0);
    CHECK(stats2.cache_hits == 4);
    CHECK(run1 == run2);
    CHECK(hits.load() == 4);
}

TEST_CASE("429 twice then success retries with backoff") {
    std::atomic<int> calls{0};
    MockServer server([&](const httplib::Request&, httplib::Response& res) {
        int n = ++calls;
        if (n <= 2) {
            res.status = 429;
            return;
        }
        res.set_content(completion_body("a = \"only step\"\n"), "application/json");
    });
    SamplerConfig cfg = test_config(server.endpoint(), "retry", 1);
    SampleStats stats;
    SampleSet out = sample_graphs(demo_spec(), cfg, ScriptDialect::builtin_default(), &stats);
    CHECK(out.size() == 1);
    CHECK(stats.retries == 2);
    CHECK(stats.network_calls == 3);
}

TEST_CASE("persistent server errors end in NetworkError") {
    MockServer server([&](const httplib::Request&, httplib::Response& res) { res.status = 503; });
    SamplerConfig cfg = test_config(server.endpoint(), "neterr", 1);
    cfg.max_retries = 1;
    CHECK_THROWS_AS(sample_graphs(demo_spec(), cfg, ScriptDialect::builtin_default(), nullptr),
                    NetworkError);
}

TEST_CASE("auth failures are not retried") {
    std::atomic<int> calls{0};
    MockServer server([&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.status = 401;
    });
    SamplerConfig cfg = test_config(server.endpoint(), "auth", 1);
    CHECK_THROWS_AS(sample_graphs(demo_spec(), cfg, ScriptDialect::builtin_default(), nullptr),
                    AuthError);
    CHECK(calls.load() == 1);
}

TEST_CASE("partial parse failures land in rejects") {
    std::atomic<int> calls{0};
    MockServer server([&](const httplib::Request&, httplib::Response& res) {
        int n = ++calls;
        std::string content = n == 1 ? "no declarations at all" : "a = \"good step\"\n";
        res.set_content(completion_body(content), "application/json");
    });
    SamplerConfig cfg = test_config(server.endpoint(), "partial", 3);
    cfg.concurrency = 1;  // keep the request order aligned with sample indices
    SampleSet out = sample_graphs(demo_spec(), cfg, ScriptDialect::builtin_default(), nullptr);
    CHECK(out.size() == 2);
    REQUIRE(out.rejects.size() == 1);
    CHECK(out.rejects[0].index == 0);
}

TEST_CASE("all samples unparseable raises an aggregate ParseError") {
    MockServer server([&](const httplib::Request&, httplib::Response& res) {
        res.set_content(completion_body("total garbage"), "application/json");
    });
    SamplerConfig cfg = test_config(server.endpoint(), "allfail", 3);
    try {
        sample_graphs(demo_spec(), cfg, ScriptDialect::builtin_default(), nullptr);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        // per-sample diagnostics are listed
        CHECK(std::string(e.what()).find("sample 0") != std::string::npos);
        CHECK(std::string(e.what()).find("sample 2") != std::string::npos);
    }
}

TEST_CASE("api key is read from the named environment variable") {
    std::string seen_auth;
    MockServer server([&](const httplib::Request& req, httplib::Response& res) {
        if (req.has_header("Authorization")) seen_auth = req.get_header_value("Authorization");
        res.set_content(completion_body("a = \"step\"\n"), "application/json");
    });
    setenv("MDLGRAPH_TEST_KEY", "sk-fixture", 1);
    SamplerConfig cfg = test_config(server.endpoint(), "apikey", 1);
    cfg.api_key_env = "MDLGRAPH_TEST_KEY";
    sample_graphs(demo_spec(), cfg, ScriptDialect::builtin_default(), nullptr);
    CHECK(seen_auth == "Bearer sk-fixture");
    unsetenv("MDLGRAPH_TEST_KEY");
}
