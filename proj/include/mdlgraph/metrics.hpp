#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdlgraph/graph.hpp"

namespace mdlgraph {

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Span-level component identification score. A predicted span is a true
/// positive iff its (begin, end, type) exactly matches a gold span. Every
/// node must carry a token span; spans within one graph must not overlap
/// (SpanError otherwise).
PrecisionRecall component_f1(const Graph& pred, const Graph& gold);

/// BIO sequence over a document of `n_tokens` tokens induced by the graph's
/// node spans ("B-<type>", "I-<type>", "O").
std::vector<std::string> bio_labels(int n_tokens, const Graph& g);

enum class OverlapMode { Exact, Half };

struct RelationOptions {
    // Half mode: require the relation type to match (stricter reading).
    bool require_type_match = true;
    // Half mode: overlap ratio denominator is the gold span; switchable to
    // the predicted span.
    bool pred_denominator = false;
};

struct RelationScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int true_positives = 0;
    int spurious = 0;   // unmatched predictions (FP)
    int omitted = 0;    // unmatched gold edges (FN)
    int reversed = 0;   // unmatched predictions whose flip matches a gold edge
};

/// Relation F1 with exact span match (Exact) or >= 50% token overlap on both
/// endpoints (Half). Each gold edge matches at most one prediction, greedily
/// by descending overlap.
RelationScore relation_f1(const Graph& pred, const Graph& gold, OverlapMode mode,
                          const RelationOptions& opts = {});

/// 1 iff pred is a weakly connected DAG and at least two node contents share
/// a non-stopword token with the belief text and two with the argument text.
int structural_accuracy(const Graph& pred, const std::string& belief_text,
                        const std::string& argument_text);

enum class GedMode { Exact, Greedy };

/// Normalized graph edit distance in [0, 1]: insertions, deletions and type
/// relabelings mapping pred onto gold, divided by the cost of deleting pred
/// entirely plus building gold. Nodes are identified by content; only nodes
/// with equal content may map onto each other. Exact mode searches all
/// content-preserving mappings (max 8 nodes per side), Greedy commits to a
/// first-fit assignment and is an upper bound.
double graph_edit_distance(const Graph& pred, const Graph& gold, GedMode mode);

struct TripleScore {
    double t_f1 = 0.0;
    int graph_match = 0;  // 1 iff the triple sets match exactly
};

/// Triple-set F1 over (head content, edge type, tail content) after
/// lowercasing/trimming; macro-averaging across a corpus is the caller's job.
TripleScore triple_f1(const Graph& pred, const Graph& gold);

struct ErrorCounts {
    int spurious = 0;
    int omitted = 0;
    int reversed = 0;
};

/// Edge error categories under content-keyed identity (no spans needed).
ErrorCounts edge_error_counts(const Graph& pred, const Graph& gold);

/// Fraction of gold node contents present in pred (exact match).
double node_recall(const Graph& pred, const Graph& gold);

/// Per-instance evaluation report; absent metrics stay unset and serialize
/// as nulls. SeCA and G-BS require learned scoring models and are always
/// null.
struct EvalReport {
    std::optional<double> c_f1, c_precision, c_recall;
    std::optional<double> r100_f1, r50_f1;
    std::optional<double> edge_f1;
    std::optional<double> t_f1;
    std::optional<double> g_f1;
    std::optional<double> stca;
    std::optional<double> ged;
    std::optional<ErrorCounts> error_counts;
};

enum class EvalTask { ArgMine, ExplaGraph, ProScript, SemGraph };

EvalTask eval_task_from_string(const std::string& s);

/// Runs the metric set for the task. ArgMine needs node spans; ExplaGraph
/// reads belief/argument texts from the gold graph's meta.
EvalReport evaluate(const Graph& pred, const Graph& gold, EvalTask task);

std::string eval_report_to_json(const EvalReport& r);

} // namespace mdlgraph
