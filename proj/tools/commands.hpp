#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mdlgraph::cli {

/// Outcome of one command run: the files written (in emit order) and
/// whether any solve ended with a heuristic certificate (exit code 4).
struct RunOutcome {
    std::vector<std::filesystem::path> outputs;
    std::vector<std::filesystem::path> inputs;
    bool heuristic = false;
};

// Each command takes its full config snapshot (exactly what the manifest
// stores) so a manifest replay is a plain re-dispatch.
RunOutcome run_synth(const nlohmann::json& config);
RunOutcome run_aggregate(const nlohmann::json& config);
RunOutcome run_eval(const nlohmann::json& config);
RunOutcome run_tune(const nlohmann::json& config);
RunOutcome run_sample(const nlohmann::json& config);
RunOutcome run_pipeline(const nlohmann::json& config);

RunOutcome dispatch(const std::string& command, const nlohmann::json& config);

/// Rewrites the config's output paths into `dir`, keeping basenames.
nlohmann::json redirect_outputs(const std::string& command, nlohmann::json config,
                                const std::filesystem::path& dir);

void write_manifest(const std::string& command, const nlohmann::json& config,
                    const RunOutcome& outcome, double wall_time_s);

/// Replays a manifest into a scratch directory and compares output hashes.
/// Returns true when every output matches byte-for-byte.
bool check_manifest(const std::filesystem::path& manifest_path);

} // namespace mdlgraph::cli
