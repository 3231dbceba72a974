#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "mdlgraph/errors.hpp"
#include "mdlgraph/version.hpp"

namespace {

using mdlgraph::cli::RunOutcome;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitHeuristic = 4;

int execute(const std::string& command, const json& config) {
    auto start = std::chrono::steady_clock::now();
    RunOutcome outcome = mdlgraph::cli::dispatch(command, config);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    mdlgraph::cli::write_manifest(command, config, outcome, wall);
    for (const auto& p : outcome.outputs) std::cerr << "wrote " << p.string() << "\n";
    return outcome.heuristic ? kExitHeuristic : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MDL-guided consensus over noisy graph samples"};
    app.set_version_flag("--version", std::string(mdlgraph::kVersion));
    app.require_subcommand(1);

    // ---- aggregate ----
    auto* agg = app.add_subcommand("aggregate", "Aggregate a sample set into a consensus graph");
    std::string agg_samples, agg_out, agg_variant = "full", agg_engine = "auto";
    std::string agg_dump_pool, agg_dump_ilp;
    double agg_l1 = 0.6, agg_l2 = 0.6, agg_jaccard = 0.5;
    bool agg_no_dag = false;
    long agg_budget = 2'000'000;
    agg->add_option("--samples", agg_samples, "Sample set JSON")->required();
    agg->add_option("--lambda1", agg_l1, "Edge addition bit-cost in [0,1]");
    agg->add_option("--lambda2", agg_l2, "Node addition bit-cost in [0,1]");
    agg->add_option("--variant", agg_variant,
                    "full | no-node-transforms | equal-lambda | no-dag");
    agg->add_flag("--no-dag", agg_no_dag, "Drop the acyclicity constraints");
    agg->add_option("--jaccard", agg_jaccard, "Node merge threshold in [0,1]");
    agg->add_option("--engine", agg_engine, "auto | lazy | closure | brute");
    agg->add_option("--solver-budget", agg_budget, "Branch-and-bound node budget");
    agg->add_option("--dump-pool", agg_dump_pool, "Write the canonicalized pool as JSON");
    agg->add_option("--dump-ilp", agg_dump_ilp, "Write the selection problem in LP-style text");
    agg->add_option("--out", agg_out, "Output graph JSON")->required();

    // ---- tune ----
    auto* tune = app.add_subcommand("tune", "Select lambda1/lambda2 by leave-one-out search");
    std::string tune_train, tune_out, tune_grid = "0:1:0.1", tune_metric = "edge_f1";
    std::string tune_surface, tune_engine = "auto";
    double tune_jaccard = 0.5;
    tune->add_option("--train", tune_train, "Directory of labelled instances (*.json)")->required();
    tune->add_option("--grid", tune_grid, "start:stop:step or comma list");
    tune->add_option("--metric", tune_metric, "edge_f1 | c_f1 | r50_f1");
    tune->add_option("--jaccard", tune_jaccard, "Node merge threshold in [0,1]");
    tune->add_option("--engine", tune_engine, "auto | lazy | closure | brute");
    tune->add_option("--surface", tune_surface, "Also write the score surface CSV here");
    tune->add_option("--out", tune_out, "Output JSON")->required();

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "Score a prediction against a gold graph");
    std::string eval_pred, eval_gold, eval_task = "proscript", eval_out;
    eval->add_option("--pred", eval_pred, "Predicted graph JSON")->required();
    eval->add_option("--gold", eval_gold, "Gold graph JSON")->required();
    eval->add_option("--task", eval_task, "argmine | explagraph | proscript | semgraph");
    eval->add_option("--out", eval_out, "Output report JSON")->required();

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "Generate a synthetic truth + noisy samples");
    int synth_nodes = 8, synth_t = 10;
    double synth_density = 0.35;
    std::uint64_t synth_seed = 0;
    std::string synth_noise_file, synth_out = "synth-out";
    double synth_edge_delete = 0.0, synth_edge_add = 0.0, synth_node_delete = 0.0,
           synth_paraphrase = 0.0;
    bool synth_allow_cycles = false;
    synth->add_option("--nodes", synth_nodes, "Truth node count")->required();
    synth->add_option("--density", synth_density, "Forward-pair edge probability")->required();
    synth->add_option("--noise", synth_noise_file, "Noise model JSON file");
    synth->add_option("--edge-delete", synth_edge_delete, "Per-edge deletion probability");
    synth->add_option("--edge-add", synth_edge_add, "Per-absent-pair addition probability");
    synth->add_option("--node-delete", synth_node_delete, "Per-node deletion probability");
    synth->add_option("--paraphrase", synth_paraphrase, "Per-token drop/duplicate rate");
    synth->add_flag("--allow-cycles", synth_allow_cycles, "Let added edges form cycles");
    synth->add_option("--t", synth_t, "Samples per set");
    synth->add_option("--seed", synth_seed, "Base seed");
    synth->add_option("--out", synth_out, "Output directory")->required();

    // ---- sample ----
    auto* sample = app.add_subcommand("sample", "Draw T completions from a chat endpoint");
    std::string sample_spec, sample_cfg, sample_dialect, sample_out;
    sample->add_option("--prompt-spec", sample_spec, "Prompt spec JSON")->required();
    sample->add_option("--config", sample_cfg, "Sampler config JSON")->required();
    sample->add_option("--dialect", sample_dialect, "Script dialect JSON");
    sample->add_option("--out", sample_out, "Output sample set JSON")->required();

    // ---- pipeline ----
    auto* pipe = app.add_subcommand("pipeline", "synth -> aggregate -> eval sweep to CSV");
    std::string pipe_config, pipe_out;
    pipe->add_option("--config", pipe_config, "Pipeline config JSON")->required();
    pipe->add_option("--out", pipe_out, "Output CSV")->required();

    // ---- check-manifest ----
    auto* check = app.add_subcommand("check-manifest", "Replay a run manifest and verify hashes");
    std::string check_path;
    check->add_option("manifest", check_path, "Manifest JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (agg->parsed()) {
            json config{{"samples", agg_samples}, {"out", agg_out},       {"lambda1", agg_l1},
                        {"lambda2", agg_l2},      {"variant", agg_variant}, {"no_dag", agg_no_dag},
                        {"jaccard_threshold", agg_jaccard}, {"engine", agg_engine},
                        {"solver_node_budget", agg_budget}};
            if (!agg_dump_pool.empty()) config["dump_pool"] = agg_dump_pool;
            if (!agg_dump_ilp.empty()) config["dump_ilp"] = agg_dump_ilp;
            return execute("aggregate", config);
        }
        if (tune->parsed()) {
            json config{{"train", tune_train},   {"out", tune_out},
                        {"grid", tune_grid},     {"metric", tune_metric},
                        {"jaccard_threshold", tune_jaccard}, {"engine", tune_engine}};
            if (!tune_surface.empty()) config["surface"] = tune_surface;
            return execute("tune", config);
        }
        if (eval->parsed()) {
            json config{{"pred", eval_pred}, {"gold", eval_gold}, {"task", eval_task},
                        {"out", eval_out}};
            return execute("eval", config);
        }
        if (synth->parsed()) {
            json noise;
            if (!synth_noise_file.empty()) {
                std::ifstream in(synth_noise_file);
                if (!in) throw mdlgraph::IoError("cannot open " + synth_noise_file);
                noise = json::parse(in);
            } else {
                noise = {{"edge_delete_prob", synth_edge_delete},
                         {"edge_add_prob", synth_edge_add},
                         {"node_delete_prob", synth_node_delete},
                         {"content_paraphrase_prob", synth_paraphrase},
                         {"allow_cycles", synth_allow_cycles}};
            }
            json config{{"nodes", synth_nodes}, {"density", synth_density}, {"t", synth_t},
                        {"seed", synth_seed},   {"noise", noise},           {"out", synth_out}};
            return execute("synth", config);
        }
        if (sample->parsed()) {
            json config{{"prompt_spec", sample_spec}, {"config", sample_cfg}, {"out", sample_out}};
            if (!sample_dialect.empty()) config["dialect"] = sample_dialect;
            return execute("sample", config);
        }
        if (pipe->parsed()) {
            std::ifstream in(pipe_config);
            if (!in) throw mdlgraph::IoError("cannot open " + pipe_config);
            json config = json::parse(in);
            config["out"] = pipe_out;
            config["config_file"] = pipe_config;
            return execute("pipeline", config);
        }
        if (check->parsed()) {
            bool ok = mdlgraph::cli::check_manifest(check_path);
            std::cout << (ok ? "manifest OK" : "manifest MISMATCH") << "\n";
            return ok ? kExitOk : kExitData;
        }
    } catch (const mdlgraph::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mdlgraph::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
