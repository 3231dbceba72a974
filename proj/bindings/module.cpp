#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "mdlgraph/aggregate.hpp"
#include "mdlgraph/errors.hpp"
#include "mdlgraph/llm_client.hpp"
#include "mdlgraph/metrics.hpp"
#include "mdlgraph/sample_io.hpp"
#include "mdlgraph/script_parser.hpp"
#include "mdlgraph/solver.hpp"
#include "mdlgraph/synth.hpp"
#include "mdlgraph/text.hpp"
#include "mdlgraph/tuner.hpp"
#include "mdlgraph/version.hpp"

namespace py = pybind11;
using namespace mdlgraph;

namespace {

Graph graph_from_json_str(const std::string& text) {
    return graph_from_json(nlohmann::json::parse(text));
}

std::string graph_to_json_str(const Graph& g) {
    return graph_to_json(g).dump(2);
}

SampleSet sample_set_from_json_str(const std::string& text) {
    return sample_set_from_json(nlohmann::json::parse(text));
}

std::string sample_set_to_json_str(const SampleSet& s) {
    return sample_set_to_json(s).dump(2);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "MDL-guided consensus over noisy graph samples";
    m.attr("__version__") = std::string(kVersion);

    py::register_exception<CycleError>(m, "CycleError");
    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<SchemaError>(m, "SchemaError");
    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<SizeError>(m, "SizeError");
    py::register_exception<InfeasibleSelectionError>(m, "InfeasibleSelectionError");

    // ---- graph core ----
    py::class_<TokenSpan>(m, "TokenSpan")
        .def(py::init<int, int>(), py::arg("begin"), py::arg("end"))
        .def_readwrite("begin", &TokenSpan::begin)
        .def_readwrite("end", &TokenSpan::end);

    py::class_<Node>(m, "Node")
        .def(py::init([](NodeId id, const std::string& content, const std::string& type,
                         std::optional<TokenSpan> span) {
                 return Node{id, content, type, span};
             }),
             py::arg("id"), py::arg("content"), py::arg("type") = "",
             py::arg("span") = std::nullopt)
        .def_readwrite("id", &Node::id)
        .def_readwrite("content", &Node::content)
        .def_readwrite("type", &Node::type)
        .def_readwrite("span", &Node::span);

    py::class_<Edge>(m, "Edge")
        .def(py::init([](NodeId head, NodeId tail, const std::string& type) {
                 return Edge{head, tail, type};
             }),
             py::arg("head"), py::arg("tail"), py::arg("type") = "")
        .def_readwrite("head", &Edge::head)
        .def_readwrite("tail", &Edge::tail)
        .def_readwrite("type", &Edge::type);

    py::class_<Graph>(m, "Graph")
        .def(py::init<>())
        .def_readwrite("nodes", &Graph::nodes)
        .def_readwrite("edges", &Graph::edges)
        .def_readwrite("meta", &Graph::meta)
        .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
        .def("to_json", &graph_to_json_str)
        .def_static("from_json", &graph_from_json_str, py::arg("text"));

    m.def("validate", &validate);
    m.def("is_dag", &is_dag);
    m.def("topological_order", &topological_order);
    m.def("edge_multiset_f1", &edge_multiset_f1, py::arg("pred"), py::arg("gold"));
    m.def("read_graph", &read_graph);
    m.def("write_graph", &write_graph);

    // ---- samples & parsing ----
    py::class_<SampleSet>(m, "SampleSet")
        .def(py::init<>())
        .def_readwrite("samples", &SampleSet::samples)
        .def_readwrite("seed", &SampleSet::seed)
        .def_readwrite("temperature", &SampleSet::temperature)
        .def_readwrite("prompt_hash", &SampleSet::prompt_hash)
        .def("__len__", &SampleSet::size)
        .def("to_json", &sample_set_to_json_str)
        .def_static("from_json", &sample_set_from_json_str, py::arg("text"));

    m.def("read_samples", &read_samples);
    m.def("write_samples", &write_samples);

    py::class_<ScriptDialect>(m, "ScriptDialect")
        .def_static("builtin_default", &ScriptDialect::builtin_default)
        .def_static("from_json_file", &ScriptDialect::from_json_file)
        .def("to_json", &ScriptDialect::to_json_string);

    py::class_<ParsedScript>(m, "ParsedScript")
        .def_readonly("graph", &ParsedScript::graph)
        .def_readonly("skipped_lines", &ParsedScript::skipped_lines)
        .def_readonly("implicit_nodes", &ParsedScript::implicit_nodes);

    m.def(
        "parse_script",
        [](const std::string& text, std::optional<ScriptDialect> dialect) {
            return parse_script(text, dialect ? *dialect : ScriptDialect::builtin_default());
        },
        py::arg("text"), py::arg("dialect") = std::nullopt);

    // ---- canonicalizer ----
    m.def("tokenize", [](const std::string& s) { return tokenize(s); });
    m.def("jaccard", [](const std::string& a, const std::string& b) { return jaccard(a, b); });

    py::class_<PooledNode>(m, "PooledNode")
        .def_readonly("id", &PooledNode::id)
        .def_readonly("content_list", &PooledNode::content_list)
        .def_readonly("type_list", &PooledNode::type_list)
        .def_readonly("sample_ids", &PooledNode::sample_ids)
        .def_readonly("representative_content", &PooledNode::representative_content)
        .def_readonly("representative_type", &PooledNode::representative_type);

    py::class_<PooledEdge>(m, "PooledEdge")
        .def_readonly("head", &PooledEdge::head)
        .def_readonly("tail", &PooledEdge::tail)
        .def_readonly("type_list", &PooledEdge::type_list)
        .def_readonly("sample_ids", &PooledEdge::sample_ids)
        .def_readonly("degenerate", &PooledEdge::degenerate)
        .def_readonly("representative_type", &PooledEdge::representative_type);

    py::class_<Pool>(m, "Pool")
        .def_readonly("nodes", &Pool::nodes)
        .def_readonly("edges", &Pool::edges)
        .def_readonly("sample_count", &Pool::sample_count)
        .def_readonly("jaccard_threshold", &Pool::jaccard_threshold)
        .def("node_probability", &Pool::node_probability)
        .def("edge_probability", &Pool::edge_probability);

    m.def("build_pool", &build_pool, py::arg("samples"), py::arg("jaccard_threshold") = 0.5);

    // ---- aggregation & solving ----
    py::enum_<Variant>(m, "Variant")
        .value("Full", Variant::Full)
        .value("NoNodeTransforms", Variant::NoNodeTransforms)
        .value("EqualLambda", Variant::EqualLambda)
        .value("NoDag", Variant::NoDag);

    py::enum_<SolverEngine>(m, "SolverEngine")
        .value("Auto", SolverEngine::Auto)
        .value("LazyCycles", SolverEngine::LazyCycles)
        .value("TransitiveClosure", SolverEngine::TransitiveClosure)
        .value("BruteForce", SolverEngine::BruteForce);

    py::class_<AggregationConfig>(m, "AggregationConfig")
        .def(py::init<>())
        .def_readwrite("lambda1", &AggregationConfig::lambda1)
        .def_readwrite("lambda2", &AggregationConfig::lambda2)
        .def_readwrite("variant", &AggregationConfig::variant)
        .def_readwrite("dag_constraints", &AggregationConfig::dag_constraints)
        .def_readwrite("jaccard_threshold", &AggregationConfig::jaccard_threshold)
        .def_readwrite("seed", &AggregationConfig::seed)
        .def_readwrite("engine", &AggregationConfig::engine)
        .def_readwrite("solver_node_budget", &AggregationConfig::solver_node_budget);

    py::class_<WeightedSelectionProblem>(m, "WeightedSelectionProblem")
        .def(py::init<>())
        .def_readwrite("node_weights", &WeightedSelectionProblem::node_weights)
        .def_readwrite("edge_weights", &WeightedSelectionProblem::edge_weights)
        .def_readwrite("require_dag", &WeightedSelectionProblem::require_dag)
        .def("add_coupling",
             [](WeightedSelectionProblem& p, std::pair<NodeId, NodeId> edge, NodeId head,
                NodeId tail) { p.couplings.push_back({edge, head, tail}); })
        .def("couple_all_edges", [](WeightedSelectionProblem& p) {
            p.couplings.clear();
            for (const auto& [pair, w] : p.edge_weights) {
                p.couplings.push_back({pair, pair.first, pair.second});
            }
        });

    py::enum_<Certificate>(m, "Certificate")
        .value("Optimal", Certificate::Optimal)
        .value("Heuristic", Certificate::Heuristic);

    py::class_<Selection>(m, "Selection")
        .def_readonly("chosen_nodes", &Selection::chosen_nodes)
        .def_readonly("chosen_edges", &Selection::chosen_edges)
        .def_readonly("objective", &Selection::objective)
        .def_readonly("certificate", &Selection::certificate);

    m.def("build_problem", &build_problem, py::arg("pool"), py::arg("config"));
    m.def("objective_value", &objective_value, py::arg("problem"), py::arg("selection"));
    m.def(
        "solve_transitive_closure",
        [](const WeightedSelectionProblem& p) { return solve_transitive_closure(p); },
        py::arg("problem"));
    m.def(
        "solve_lazy_cycles",
        [](const WeightedSelectionProblem& p) { return solve_lazy_cycles(p); },
        py::arg("problem"));
    m.def("brute_force", &brute_force, py::arg("problem"));
    m.def("dump_lp_format", &dump_lp_format, py::arg("problem"));

    m.def("aggregate", &aggregate, py::arg("samples"), py::arg("config") = AggregationConfig{});

    // ---- metrics ----
    py::class_<PrecisionRecall>(m, "PrecisionRecall")
        .def_readonly("precision", &PrecisionRecall::precision)
        .def_readonly("recall", &PrecisionRecall::recall)
        .def_readonly("f1", &PrecisionRecall::f1);

    py::enum_<OverlapMode>(m, "OverlapMode")
        .value("Exact", OverlapMode::Exact)
        .value("Half", OverlapMode::Half);

    py::class_<RelationScore>(m, "RelationScore")
        .def_readonly("precision", &RelationScore::precision)
        .def_readonly("recall", &RelationScore::recall)
        .def_readonly("f1", &RelationScore::f1)
        .def_readonly("true_positives", &RelationScore::true_positives)
        .def_readonly("spurious", &RelationScore::spurious)
        .def_readonly("omitted", &RelationScore::omitted)
        .def_readonly("reversed", &RelationScore::reversed);

    py::enum_<GedMode>(m, "GedMode")
        .value("Exact", GedMode::Exact)
        .value("Greedy", GedMode::Greedy);

    py::class_<TripleScore>(m, "TripleScore")
        .def_readonly("t_f1", &TripleScore::t_f1)
        .def_readonly("graph_match", &TripleScore::graph_match);

    py::class_<ErrorCounts>(m, "ErrorCounts")
        .def_readonly("spurious", &ErrorCounts::spurious)
        .def_readonly("omitted", &ErrorCounts::omitted)
        .def_readonly("reversed", &ErrorCounts::reversed);

    m.def("component_f1", &component_f1, py::arg("pred"), py::arg("gold"));
    m.def("bio_labels", &bio_labels, py::arg("n_tokens"), py::arg("graph"));
    m.def(
        "relation_f1",
        [](const Graph& pred, const Graph& gold, OverlapMode mode) {
            return relation_f1(pred, gold, mode);
        },
        py::arg("pred"), py::arg("gold"), py::arg("mode") = OverlapMode::Half);
    m.def("structural_accuracy", &structural_accuracy, py::arg("pred"), py::arg("belief_text"),
          py::arg("argument_text"));
    m.def("graph_edit_distance", &graph_edit_distance, py::arg("pred"), py::arg("gold"),
          py::arg("mode") = GedMode::Exact);
    m.def("triple_f1", &triple_f1, py::arg("pred"), py::arg("gold"));
    m.def("edge_error_counts", &edge_error_counts, py::arg("pred"), py::arg("gold"));
    m.def("node_recall", &node_recall, py::arg("pred"), py::arg("gold"));

    // ---- tuner ----
    py::class_<LabeledInstance>(m, "LabeledInstance")
        .def(py::init([](const SampleSet& samples, const Graph& gold) {
                 return LabeledInstance{samples, gold};
             }),
             py::arg("samples"), py::arg("gold"))
        .def_readwrite("samples", &LabeledInstance::samples)
        .def_readwrite("gold", &LabeledInstance::gold);

    py::enum_<TuneMetric>(m, "TuneMetric")
        .value("EdgeF1", TuneMetric::EdgeF1)
        .value("ComponentF1", TuneMetric::ComponentF1)
        .value("R50F1", TuneMetric::R50F1);

    py::class_<TuneResult>(m, "TuneResult")
        .def_readonly("best_lambda1", &TuneResult::best_lambda1)
        .def_readonly("best_lambda2", &TuneResult::best_lambda2)
        .def_readonly("score_surface", &TuneResult::score_surface)
        .def_readonly("folds", &TuneResult::folds);

    m.def(
        "tune",
        [](const std::vector<LabeledInstance>& instances, std::optional<std::vector<double>> grid,
           TuneMetric metric, const AggregationConfig& base) {
            return tune(instances, grid ? *grid : default_lambda_grid(), metric, base);
        },
        py::arg("instances"), py::arg("grid") = std::nullopt,
        py::arg("metric") = TuneMetric::EdgeF1, py::arg("config") = AggregationConfig{});

    // ---- synthetic benchmark ----
    py::class_<NoiseModel>(m, "NoiseModel")
        .def(py::init<>())
        .def_readwrite("edge_delete_prob", &NoiseModel::edge_delete_prob)
        .def_readwrite("edge_add_prob", &NoiseModel::edge_add_prob)
        .def_readwrite("node_delete_prob", &NoiseModel::node_delete_prob)
        .def_readwrite("content_paraphrase_prob", &NoiseModel::content_paraphrase_prob)
        .def_readwrite("allow_cycles", &NoiseModel::allow_cycles)
        .def_readwrite("seed", &NoiseModel::seed);

    m.def("generate_truth", &generate_truth, py::arg("n_nodes"), py::arg("edge_density"),
          py::arg("seed"));
    m.def("corrupt", &corrupt, py::arg("truth"), py::arg("noise"), py::arg("t_samples"));

    // ---- prompting ----
    py::class_<PromptSpec>(m, "PromptSpec")
        .def(py::init<>())
        .def_readwrite("few_shot", &PromptSpec::few_shot)
        .def_readwrite("test_input", &PromptSpec::test_input)
        .def_readwrite("intra_separator", &PromptSpec::intra_separator)
        .def_readwrite("inter_separator", &PromptSpec::inter_separator);

    m.def("build_prompt", &build_prompt, py::arg("spec"));
}
