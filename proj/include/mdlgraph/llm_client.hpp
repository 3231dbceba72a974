#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdlgraph/sample_io.hpp"
#include "mdlgraph/script_parser.hpp"

namespace mdlgraph {

/// Few-shot prompt: pairs of (input text, graph script), a test input, and
/// the two separators. The assembled prompt keeps pair order and ends with
/// the test input plus the intra separator, leaving the script to complete.
struct PromptSpec {
    std::vector<std::pair<std::string, std::string>> few_shot;
    std::string test_input;
    std::string intra_separator = "\n";
    std::string inter_separator = "\n\n";
};

struct SamplerConfig {
    std::string endpoint;  // base URL of a chat-completion-compatible server
    std::string model;
    double temperature = 0.9;
    int t_samples = 10;
    int max_tokens = 1024;
    std::filesystem::path cache_dir;
    std::string api_key_env = "OPENAI_API_KEY";  // name of the env var, never the key
    int max_retries = 3;
    double backoff_initial_s = 0.5;
    int concurrency = 4;
    std::string extra_params_json;  // merged verbatim into each request body
};

struct SampleStats {
    int network_calls = 0;
    int retries = 0;
    int cache_hits = 0;
};

std::string build_prompt(const PromptSpec& spec);

PromptSpec prompt_spec_from_json_file(const std::filesystem::path& path);
SamplerConfig sampler_config_from_json_file(const std::filesystem::path& path);

/// Requests T completions (cache-first; raw responses persisted verbatim
/// under cache_dir/<sha256(prompt|model|temperature)>/<index>.json) and
/// parses each with the dialect. Individual parse failures land in the
/// SampleSet's rejects; an aggregate ParseError is raised only when every
/// sample fails.
SampleSet sample_graphs(const PromptSpec& spec, const SamplerConfig& cfg,
                        const ScriptDialect& dialect, SampleStats* stats = nullptr);

} // namespace mdlgraph
