#include "mdlgraph/llm_client.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mdlgraph/errors.hpp"
#include "mdlgraph/hash.hpp"

namespace mdlgraph {

namespace {

using nlohmann::json;

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;    // leading slash, no trailing slash
};

ParsedUrl split_url(const std::string& url) {
    size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint must start with http:// or https://");
    }
    size_t path_start = url.find('/', scheme_end + 3);
    ParsedUrl out;
    if (path_start == std::string::npos) {
        out.origin = url;
        out.path = "";
    } else {
        out.origin = url.substr(0, path_start);
        out.path = url.substr(path_start);
    }
    while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
    return out;
}

std::string format_temperature(double t) {
    std::ostringstream os;
    os.precision(6);
    os << t;
    return os.str();
}

void write_atomically(const std::filesystem::path& path, const std::string& data) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << data;
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::optional<std::string> read_if_exists(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// One chat-completion call with bounded retries; returns the raw body.
std::string fetch_completion(const ParsedUrl& url, const SamplerConfig& cfg,
                             const std::string& body, SampleStats& stats, std::mutex& stats_mu) {
    httplib::Client client(url.origin);
    client.set_read_timeout(120, 0);
    client.set_connection_timeout(15, 0);
    httplib::Headers headers{{"Content-Type", "application/json"}};
    if (!cfg.api_key_env.empty()) {
        if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }

    std::string route = url.path + "/chat/completions";
    std::string last_error;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        if (attempt > 0) {
            double delay = cfg.backoff_initial_s * static_cast<double>(1 << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
            {
                std::lock_guard<std::mutex> lock(stats_mu);
                ++stats.retries;
            }
            std::fprintf(stderr, "[sample] retry %d after: %s\n", attempt, last_error.c_str());
        }
        {
            std::lock_guard<std::mutex> lock(stats_mu);
            ++stats.network_calls;
        }
        httplib::Result res = client.Post(route, headers, body, "application/json");
        if (!res) {
            last_error = "connection error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403) {
            throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(res->status) +
                            "); set the API key in $" + cfg.api_key_env);
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw NetworkError("unexpected HTTP " + std::to_string(res->status) + ": " + res->body);
        }
        return res->body;
    }
    throw NetworkError("request failed after " + std::to_string(cfg.max_retries) +
                       " retries: " + last_error);
}

std::string extract_content(const std::string& body, int index) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw ParseError("sample " + std::to_string(index) + ": response is not JSON: " + e.what());
    }
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
        throw ParseError("sample " + std::to_string(index) + ": response carries no choices");
    }
    const json& choice = j["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content")) {
        return choice["message"]["content"].get<std::string>();
    }
    if (choice.contains("text")) {  // completions-style fallback
        return choice["text"].get<std::string>();
    }
    throw ParseError("sample " + std::to_string(index) + ": choice carries no content");
}

} // namespace

std::string build_prompt(const PromptSpec& spec) {
    if (spec.few_shot.empty()) {
        throw ConfigError("prompt requires at least one few-shot pair");
    }
    std::string out;
    for (size_t i = 0; i < spec.few_shot.size(); ++i) {
        if (i) out += spec.inter_separator;
        out += spec.few_shot[i].first;
        out += spec.intra_separator;
        out += spec.few_shot[i].second;
    }
    out += spec.inter_separator;
    out += spec.test_input;
    out += spec.intra_separator;
    return out;
}

PromptSpec prompt_spec_from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open prompt spec " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    PromptSpec spec;
    if (!j.contains("few_shot") || !j["few_shot"].is_array()) {
        throw SchemaError(path.string() + ": missing field 'few_shot'");
    }
    for (const json& pair : j["few_shot"]) {
        spec.few_shot.emplace_back(pair.at("input").get<std::string>(),
                                   pair.at("script").get<std::string>());
    }
    if (!j.contains("test_input")) throw SchemaError(path.string() + ": missing field 'test_input'");
    spec.test_input = j["test_input"].get<std::string>();
    spec.intra_separator = j.value("intra_separator", std::string("\n"));
    spec.inter_separator = j.value("inter_separator", std::string("\n\n"));
    return spec;
}

SamplerConfig sampler_config_from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sampler config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    SamplerConfig cfg;
    if (!j.contains("endpoint")) throw SchemaError(path.string() + ": missing field 'endpoint'");
    cfg.endpoint = j["endpoint"].get<std::string>();
    cfg.model = j.value("model", std::string("gpt-3.5-turbo"));
    cfg.temperature = j.value("temperature", 0.9);
    cfg.t_samples = j.value("t_samples", 10);
    cfg.max_tokens = j.value("max_tokens", 1024);
    cfg.cache_dir = j.value("cache_dir", std::string("sample-cache"));
    cfg.api_key_env = j.value("api_key_env", std::string("OPENAI_API_KEY"));
    cfg.max_retries = j.value("max_retries", 3);
    cfg.backoff_initial_s = j.value("backoff_initial_s", 0.5);
    cfg.concurrency = j.value("concurrency", 4);
    if (j.contains("extra_params")) cfg.extra_params_json = j["extra_params"].dump();
    if (cfg.temperature < 0.0) throw ConfigError("temperature must be >= 0");
    if (cfg.t_samples < 1) throw ConfigError("t_samples must be >= 1");
    return cfg;
}

SampleSet sample_graphs(const PromptSpec& spec, const SamplerConfig& cfg,
                        const ScriptDialect& dialect, SampleStats* stats_out) {
    if (cfg.t_samples < 1) throw ConfigError("t_samples must be >= 1");
    std::string prompt = build_prompt(spec);
    std::string cache_key =
        sha256_hex(prompt + "|" + cfg.model + "|" + format_temperature(cfg.temperature));
    std::filesystem::path cache_base = cfg.cache_dir / cache_key;
    std::filesystem::create_directories(cache_base);

    json base_request{{"model", cfg.model},
                      {"temperature", cfg.temperature},
                      {"max_tokens", cfg.max_tokens},
                      {"n", 1},
                      {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})}};
    if (!cfg.extra_params_json.empty()) {
        base_request.update(json::parse(cfg.extra_params_json));
    }

    ParsedUrl url = split_url(cfg.endpoint);
    SampleStats stats;
    std::mutex stats_mu;
    std::vector<std::string> bodies(static_cast<size_t>(cfg.t_samples));
    std::vector<std::exception_ptr> failures(static_cast<size_t>(cfg.t_samples));

    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= cfg.t_samples) break;
            std::filesystem::path slot = cache_base / (std::to_string(i) + ".json");
            try {
                if (auto cached = read_if_exists(slot)) {
                    bodies[i] = std::move(*cached);
                    std::lock_guard<std::mutex> lock(stats_mu);
                    ++stats.cache_hits;
                    continue;
                }
                std::string body = base_request.dump();
                std::string response = fetch_completion(url, cfg, body, stats, stats_mu);
                write_atomically(slot, response);
                bodies[i] = std::move(response);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    int threads = std::max(1, std::min(cfg.concurrency, cfg.t_samples));
    std::vector<std::thread> crew;
    for (int k = 0; k < threads; ++k) crew.emplace_back(worker);
    for (std::thread& t : crew) t.join();

    // Auth and network problems abort the whole batch.
    for (const std::exception_ptr& f : failures) {
        if (!f) continue;
        try {
            std::rethrow_exception(f);
        } catch (const ParseError&) {
            // handled per sample below
        }
    }

    SampleSet out;
    out.temperature = cfg.temperature;
    out.prompt_hash = cache_key;
    for (int i = 0; i < cfg.t_samples; ++i) {
        try {
            if (failures[i]) std::rethrow_exception(failures[i]);
            std::string content = extract_content(bodies[i], i);
            ParsedScript parsed = parse_script(content, dialect);
            out.samples.push_back(std::move(parsed.graph));
        } catch (const ParseError& e) {
            out.rejects.push_back({i, e.what()});
        }
    }
    if (out.samples.empty()) {
        std::string detail;
        for (const SampleSet::Reject& r : out.rejects) {
            detail += "\n  sample " + std::to_string(r.index) + ": " + r.reason;
        }
        throw ParseError("all " + std::to_string(cfg.t_samples) + " samples failed to parse:" +
                         detail);
    }
    if (stats_out) *stats_out = stats;
    return out;
}

} // namespace mdlgraph
