#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mdlgraph/aggregate.hpp"
#include "mdlgraph/metrics.hpp"
#include "mdlgraph/sample_io.hpp"

namespace mdlgraph {

/// One labelled data point: the sample batch drawn for an input plus its
/// ground-truth graph.
struct LabeledInstance {
    SampleSet samples;
    Graph gold;
};

enum class TuneMetric { EdgeF1, ComponentF1, R50F1 };

TuneMetric tune_metric_from_string(const std::string& s);
std::string to_string(TuneMetric m);

struct TuneResult {
    double best_lambda1 = 0.0;
    double best_lambda2 = 0.0;
    std::map<std::pair<double, double>, double> score_surface;
    int folds = 0;
};

/// Leave-one-out selection of (lambda1, lambda2): each grid pair aggregates
/// every held-out instance's samples and is scored against its gold; the
/// mean held-out score per pair forms the surface and the argmax wins, ties
/// broken toward the smaller lambda1 then lambda2.
TuneResult tune(const std::vector<LabeledInstance>& instances, const std::vector<double>& grid,
                TuneMetric metric, const AggregationConfig& base);

/// Grid {0.0, 0.1, ..., 1.0}.
std::vector<double> default_lambda_grid();

/// Parses "start:stop:step" (inclusive endpoints) or a comma list.
std::vector<double> parse_grid(const std::string& text);

double score_metric(const Graph& pred, const Graph& gold, TuneMetric metric);

/// Full (lambda1, lambda2, score) table, rows ordered by lambda1 then
/// lambda2; byte-stable across reruns.
void score_surface_csv(const TuneResult& result, std::ostream& out);

} // namespace mdlgraph
