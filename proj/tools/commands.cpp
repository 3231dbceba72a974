#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

#include "mdlgraph/aggregate.hpp"
#include "mdlgraph/errors.hpp"
#include "mdlgraph/hash.hpp"
#include "mdlgraph/llm_client.hpp"
#include "mdlgraph/metrics.hpp"
#include "mdlgraph/rng.hpp"
#include "mdlgraph/synth.hpp"
#include "mdlgraph/tuner.hpp"
#include "mdlgraph/version.hpp"

namespace mdlgraph::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string fmt_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

void write_text(const std::filesystem::path& path, const std::string& data) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << data;
    if (!out) throw IoError("write failed for " + path.string());
}

AggregationConfig aggregation_config_from(const json& config) {
    AggregationConfig cfg;
    cfg.lambda1 = config.value("lambda1", 0.6);
    cfg.lambda2 = config.value("lambda2", 0.6);
    cfg.variant = variant_from_string(config.value("variant", std::string("full")));
    cfg.dag_constraints = !config.value("no_dag", false);
    cfg.jaccard_threshold = config.value("jaccard_threshold", 0.5);
    cfg.seed = config.value("seed", 0ull);
    cfg.engine = engine_from_string(config.value("engine", std::string("auto")));
    cfg.solver_node_budget = config.value("solver_node_budget", 2'000'000ll);
    return cfg;
}

NoiseModel noise_from(const json& j, std::uint64_t seed) {
    NoiseModel noise;
    noise.edge_delete_prob = j.value("edge_delete_prob", 0.0);
    noise.edge_add_prob = j.value("edge_add_prob", 0.0);
    noise.node_delete_prob = j.value("node_delete_prob", 0.0);
    noise.content_paraphrase_prob = j.value("content_paraphrase_prob", 0.0);
    noise.allow_cycles = j.value("allow_cycles", false);
    noise.seed = seed;
    return noise;
}

ordered_json pool_to_json(const Pool& pool) {
    ordered_json out;
    out["sample_count"] = pool.sample_count;
    out["jaccard_threshold"] = pool.jaccard_threshold;
    out["nodes"] = ordered_json::array();
    for (size_t i = 0; i < pool.nodes.size(); ++i) {
        const PooledNode& n = pool.nodes[i];
        out["nodes"].push_back({{"id", n.id},
                                {"representative_content", n.representative_content},
                                {"representative_type", n.representative_type},
                                {"content_list", n.content_list},
                                {"type_list", n.type_list},
                                {"sample_ids", n.sample_ids},
                                {"probability", pool.node_probability(i)}});
    }
    out["edges"] = ordered_json::array();
    for (size_t i = 0; i < pool.edges.size(); ++i) {
        const PooledEdge& e = pool.edges[i];
        out["edges"].push_back({{"head", e.head},
                                {"tail", e.tail},
                                {"representative_type", e.representative_type},
                                {"type_list", e.type_list},
                                {"sample_ids", e.sample_ids},
                                {"degenerate", e.degenerate},
                                {"probability", pool.edge_probability(i)}});
    }
    return out;
}

} // namespace

RunOutcome run_synth(const json& config) {
    RunOutcome outcome;
    int nodes = config.at("nodes").get<int>();
    double density = config.at("density").get<double>();
    int t = config.value("t", 10);
    std::uint64_t seed = config.value("seed", 0ull);
    std::filesystem::path out_dir = config.value("out", std::string("synth-out"));

    Graph truth = generate_truth(nodes, density, seed);
    NoiseModel noise = noise_from(config.value("noise", json::object()), seed);
    SampleSet samples = corrupt(truth, noise, t);
    samples.seed = seed;

    std::filesystem::create_directories(out_dir);
    std::filesystem::path truth_path = out_dir / "truth.json";
    std::filesystem::path samples_path = out_dir / "samples.json";
    write_graph(truth, truth_path);
    write_samples(samples, samples_path);
    outcome.outputs = {truth_path, samples_path};
    return outcome;
}

RunOutcome run_aggregate(const json& config) {
    RunOutcome outcome;
    std::filesystem::path samples_path = config.at("samples").get<std::string>();
    std::filesystem::path out_path = config.at("out").get<std::string>();
    outcome.inputs.push_back(samples_path);

    SampleSet samples = read_samples(samples_path);
    AggregationConfig cfg = aggregation_config_from(config);

    Pool pool = build_pool(samples, cfg.jaccard_threshold);
    AggregateResult result = aggregate_pool(pool, cfg);
    outcome.heuristic = result.selection.certificate == Certificate::Heuristic;

    write_graph(result.graph, out_path);
    outcome.outputs.push_back(out_path);
    if (config.contains("dump_pool")) {
        std::filesystem::path p = config.at("dump_pool").get<std::string>();
        write_text(p, pool_to_json(pool).dump(2) + "\n");
        outcome.outputs.push_back(p);
    }
    if (config.contains("dump_ilp")) {
        std::filesystem::path p = config.at("dump_ilp").get<std::string>();
        write_text(p, dump_lp_format(result.problem));
        outcome.outputs.push_back(p);
    }
    return outcome;
}

RunOutcome run_eval(const json& config) {
    RunOutcome outcome;
    std::filesystem::path pred_path = config.at("pred").get<std::string>();
    std::filesystem::path gold_path = config.at("gold").get<std::string>();
    std::filesystem::path out_path = config.at("out").get<std::string>();
    outcome.inputs = {pred_path, gold_path};

    Graph pred = read_graph(pred_path);
    Graph gold = read_graph(gold_path);
    EvalTask task = eval_task_from_string(config.value("task", std::string("proscript")));
    EvalReport report = evaluate(pred, gold, task);
    write_text(out_path, eval_report_to_json(report) + "\n");
    outcome.outputs.push_back(out_path);
    return outcome;
}

RunOutcome run_tune(const json& config) {
    RunOutcome outcome;
    std::filesystem::path train_dir = config.at("train").get<std::string>();
    std::filesystem::path out_path = config.at("out").get<std::string>();

    // Every *.json in the train directory is one labelled instance:
    // {"samples": <sample set>, "gold": <graph>}.
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(train_dir)) {
        throw IoError("train directory " + train_dir.string() + " does not exist");
    }
    for (const auto& entry : std::filesystem::directory_iterator(train_dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<LabeledInstance> instances;
    for (const std::filesystem::path& f : files) {
        outcome.inputs.push_back(f);
        std::ifstream in(f);
        if (!in) throw IoError("cannot open " + f.string());
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw SchemaError(f.string() + ": " + e.what());
        }
        if (!j.contains("samples") || !j.contains("gold")) {
            throw SchemaError(f.string() + ": instance needs 'samples' and 'gold'");
        }
        instances.push_back({sample_set_from_json(j["samples"]), graph_from_json(j["gold"])});
    }

    std::vector<double> grid = config.contains("grid")
                                   ? parse_grid(config.at("grid").get<std::string>())
                                   : default_lambda_grid();
    TuneMetric metric = tune_metric_from_string(config.value("metric", std::string("edge_f1")));
    AggregationConfig base = aggregation_config_from(config);
    TuneResult result = tune(instances, grid, metric, base);

    ordered_json out;
    out["best_lambda1"] = result.best_lambda1;
    out["best_lambda2"] = result.best_lambda2;
    out["folds"] = result.folds;
    out["metric"] = to_string(metric);
    out["surface"] = ordered_json::array();
    for (const auto& [pair, score] : result.score_surface) {
        out["surface"].push_back({{"lambda1", pair.first}, {"lambda2", pair.second}, {"score", score}});
    }
    write_text(out_path, out.dump(2) + "\n");
    outcome.outputs.push_back(out_path);

    if (config.contains("surface")) {
        std::filesystem::path csv_path = config.at("surface").get<std::string>();
        std::ostringstream csv;
        score_surface_csv(result, csv);
        write_text(csv_path, csv.str());
        outcome.outputs.push_back(csv_path);
    }
    return outcome;
}

RunOutcome run_sample(const json& config) {
    RunOutcome outcome;
    std::filesystem::path spec_path = config.at("prompt_spec").get<std::string>();
    std::filesystem::path cfg_path = config.at("config").get<std::string>();
    std::filesystem::path out_path = config.at("out").get<std::string>();
    outcome.inputs = {spec_path, cfg_path};

    PromptSpec spec = prompt_spec_from_json_file(spec_path);
    SamplerConfig sampler = sampler_config_from_json_file(cfg_path);
    ScriptDialect dialect = ScriptDialect::builtin_default();
    if (config.contains("dialect")) {
        std::filesystem::path dialect_path = config.at("dialect").get<std::string>();
        dialect = ScriptDialect::from_json_file(dialect_path);
        outcome.inputs.push_back(dialect_path);
    }

    SampleStats stats;
    SampleSet samples = sample_graphs(spec, sampler, dialect, &stats);
    std::cerr << "[sample] network_calls=" << stats.network_calls << " retries=" << stats.retries
              << " cache_hits=" << stats.cache_hits << " rejects=" << samples.rejects.size()
              << "\n";
    write_samples(samples, out_path);
    outcome.outputs.push_back(out_path);
    return outcome;
}

RunOutcome run_pipeline(const json& config) {
    RunOutcome outcome;
    std::filesystem::path out_path = config.at("out").get<std::string>();

    const json& truth_cfg = config.at("truth");
    int nodes = truth_cfg.at("nodes").get<int>();
    double density = truth_cfg.at("density").get<double>();
    std::vector<int> t_values = config.value("t_values", std::vector<int>{10});
    int seeds = config.value("seeds", 10);
    std::uint64_t base_seed = config.value("base_seed", 0ull);
    bool baseline = config.value("baseline", true);
    std::vector<std::string> metric_names = config.value(
        "metrics", std::vector<std::string>{"edge_f1", "node_recall", "spurious_edges",
                                            "omitted_edges", "reversed_edges"});
    std::vector<std::string> variant_names =
        config.value("variants", std::vector<std::string>{"full"});

    AggregationConfig base = aggregation_config_from(config);

    auto metric_value = [](const std::string& name, const Graph& pred,
                           const Graph& truth) -> double {
        if (name == "edge_f1") return edge_multiset_f1(pred, truth);
        if (name == "node_recall") return node_recall(pred, truth);
        ErrorCounts counts = edge_error_counts(pred, truth);
        if (name == "spurious_edges") return counts.spurious;
        if (name == "omitted_edges") return counts.omitted;
        if (name == "reversed_edges") return counts.reversed;
        throw ConfigError("unknown pipeline metric '" + name + "'");
    };

    std::ostringstream csv;
    csv << "variant,t,seed,metric,value\n";
    // (variant, t, metric) -> values across seeds, in row emission order
    std::map<std::tuple<std::string, int, std::string>, std::vector<double>> cells;
    std::vector<std::tuple<std::string, int, std::string>> cell_order;

    auto emit = [&](const std::string& variant, int t, int seed_idx, const Graph& pred,
                    const Graph& truth) {
        for (const std::string& metric : metric_names) {
            double v = metric_value(metric, pred, truth);
            csv << variant << ',' << t << ',' << seed_idx << ',' << metric << ','
                << fmt_double(v) << '\n';
            auto key = std::make_tuple(variant, t, metric);
            auto [it, fresh] = cells.try_emplace(key);
            if (fresh) cell_order.push_back(key);
            it->second.push_back(v);
        }
    };

    for (int s = 0; s < seeds; ++s) {
        std::uint64_t seed = base_seed + static_cast<std::uint64_t>(s);
        Graph truth = generate_truth(nodes, density, seed);
        NoiseModel noise = noise_from(config.value("noise", json::object()), seed);
        for (int t : t_values) {
            SampleSet samples = corrupt(truth, noise, t);
            Pool pool = build_pool(samples, base.jaccard_threshold);
            for (const std::string& vname : variant_names) {
                AggregationConfig cfg = base;
                cfg.variant = variant_from_string(vname);
                AggregateResult result = aggregate_pool(pool, cfg);
                if (result.selection.certificate == Certificate::Heuristic) {
                    outcome.heuristic = true;
                }
                emit(vname, t, s, result.graph, truth);
            }
            if (baseline) emit("single_sample", t, s, samples.samples.front(), truth);
        }
    }

    for (const auto& key : cell_order) {
        const auto& [variant, t, metric] = key;
        const std::vector<double>& vals = cells.at(key);
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        double stddev = vals.size() > 1 ? std::sqrt(var / static_cast<double>(vals.size() - 1)) : 0.0;
        csv << variant << ',' << t << ",mean," << metric << ',' << fmt_double(mean) << '\n';
        csv << variant << ',' << t << ",stddev," << metric << ',' << fmt_double(stddev) << '\n';
    }

    write_text(out_path, csv.str());
    outcome.outputs.push_back(out_path);
    return outcome;
}

RunOutcome dispatch(const std::string& command, const json& config) {
    if (command == "synth") return run_synth(config);
    if (command == "aggregate") return run_aggregate(config);
    if (command == "eval") return run_eval(config);
    if (command == "tune") return run_tune(config);
    if (command == "sample") return run_sample(config);
    if (command == "pipeline") return run_pipeline(config);
    throw ConfigError("unknown command '" + command + "'");
}

json redirect_outputs(const std::string& command, json config, const std::filesystem::path& dir) {
    auto redirect = [&](const char* key) {
        if (!config.contains(key)) return;
        std::filesystem::path original = config.at(key).get<std::string>();
        config[key] = (dir / original.filename()).string();
    };
    if (command == "synth") {
        // `out` is a directory here; replay into a sibling under dir.
        if (config.contains("out")) config["out"] = (dir / "synth-out").string();
    } else {
        redirect("out");
    }
    redirect("dump_pool");
    redirect("dump_ilp");
    redirect("surface");
    return config;
}

void write_manifest(const std::string& command, const json& config, const RunOutcome& outcome,
                    double wall_time_s) {
    if (outcome.outputs.empty()) return;
    ordered_json m;
    m["tool"] = "mdlgraph";
    m["version"] = std::string(kVersion);
    m["command"] = command;
    m["config"] = config;
    m["seed"] = config.contains("seed") ? config["seed"] : json(0);
    ordered_json inputs = ordered_json::object();
    for (const std::filesystem::path& p : outcome.inputs) inputs[p.string()] = sha256_file(p);
    m["inputs"] = inputs;
    ordered_json outputs = ordered_json::object();
    for (const std::filesystem::path& p : outcome.outputs) outputs[p.string()] = sha256_file(p);
    m["outputs"] = outputs;
    m["wall_time_s"] = wall_time_s;

    std::filesystem::path manifest_path = outcome.outputs.front();
    manifest_path += ".manifest.json";
    write_text(manifest_path, m.dump(2) + "\n");
}

bool check_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open manifest " + manifest_path.string());
    json m;
    try {
        m = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(manifest_path.string() + ": " + e.what());
    }
    std::string command = m.at("command").get<std::string>();
    json config = m.at("config");

    for (const auto& [path, hash] : m.value("inputs", json::object()).items()) {
        std::string now = sha256_file(path);
        if (now != hash.get<std::string>()) {
            std::cerr << "input changed since the recorded run: " << path << "\n";
            return false;
        }
    }

    std::filesystem::path scratch =
        std::filesystem::temp_directory_path() /
        ("mdlgraph-replay-" + sha256_hex(manifest_path.string()).substr(0, 12));
    std::filesystem::remove_all(scratch);
    std::filesystem::create_directories(scratch);
    json replay_config = redirect_outputs(command, config, scratch);
    RunOutcome outcome = dispatch(command, replay_config);

    // recorded basename -> recorded hash
    std::map<std::string, std::string> recorded;
    for (const auto& [path, hash] : m.at("outputs").items()) {
        recorded[std::filesystem::path(path).filename().string()] = hash.get<std::string>();
    }
    bool ok = true;
    for (const std::filesystem::path& p : outcome.outputs) {
        auto it = recorded.find(p.filename().string());
        if (it == recorded.end()) {
            std::cerr << "replay produced an unrecorded output: " << p << "\n";
            ok = false;
            continue;
        }
        std::string now = sha256_file(p);
        if (now != it->second) {
            std::cerr << "output mismatch for " << p.filename().string() << "\n";
            ok = false;
        }
    }
    std::filesystem::remove_all(scratch);
    return ok;
}

} // namespace mdlgraph::cli
