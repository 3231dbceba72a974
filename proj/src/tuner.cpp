#include "mdlgraph/tuner.hpp"

#include <charconv>
#include <cmath>

#include "mdlgraph/errors.hpp"

namespace mdlgraph {

TuneMetric tune_metric_from_string(const std::string& s) {
    if (s == "edge_f1") return TuneMetric::EdgeF1;
    if (s == "c_f1") return TuneMetric::ComponentF1;
    if (s == "r50_f1") return TuneMetric::R50F1;
    throw ConfigError("unknown tune metric '" + s + "'");
}

std::string to_string(TuneMetric m) {
    switch (m) {
        case TuneMetric::EdgeF1: return "edge_f1";
        case TuneMetric::ComponentF1: return "c_f1";
        case TuneMetric::R50F1: return "r50_f1";
    }
    return "edge_f1";
}

double score_metric(const Graph& pred, const Graph& gold, TuneMetric metric) {
    switch (metric) {
        case TuneMetric::EdgeF1: return edge_multiset_f1(pred, gold);
        case TuneMetric::ComponentF1: return component_f1(pred, gold).f1;
        case TuneMetric::R50F1: return relation_f1(pred, gold, OverlapMode::Half).f1;
    }
    return 0.0;
}

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
    return grid;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    auto to_double = [](const std::string& s) {
        try {
            size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("bad grid number '" + s + "'");
        }
    };
    if (text.find(':') != std::string::npos) {
        size_t a = text.find(':');
        size_t b = text.find(':', a + 1);
        if (b == std::string::npos) throw ConfigError("grid range must be start:stop:step");
        double start = to_double(text.substr(0, a));
        double stop = to_double(text.substr(a + 1, b - a - 1));
        double step = to_double(text.substr(b + 1));
        if (step <= 0.0) throw ConfigError("grid step must be positive");
        for (double v = start; v <= stop + 1e-9; v += step) {
            out.push_back(std::round(v * 1e9) / 1e9);
        }
    } else {
        size_t pos = 0;
        while (pos <= text.size()) {
            size_t comma = text.find(',', pos);
            std::string piece =
                comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos);
            if (!piece.empty()) out.push_back(to_double(piece));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    if (out.empty()) throw ConfigError("empty lambda grid");
    return out;
}

TuneResult tune(const std::vector<LabeledInstance>& instances, const std::vector<double>& grid,
                TuneMetric metric, const AggregationConfig& base) {
    if (grid.empty()) throw ConfigError("tune requires a non-empty grid");
    if (instances.size() < 2) throw ConfigError("tune requires at least two labelled instances");
    for (double v : grid) {
        if (v < 0.0 || v > 1.0) throw ConfigError("grid values must lie in [0, 1]");
    }

    // The pool per instance does not depend on the lambdas; build once.
    std::vector<Pool> pools;
    pools.reserve(instances.size());
    for (const LabeledInstance& inst : instances) {
        if (inst.samples.size() < 1) throw ConfigError("labelled instance with no samples");
        pools.push_back(build_pool(inst.samples, base.jaccard_threshold));
    }

    std::vector<double> sorted_grid = grid;
    std::sort(sorted_grid.begin(), sorted_grid.end());

    TuneResult result;
    result.folds = static_cast<int>(instances.size());
    double best_score = -1.0;
    for (double l1 : sorted_grid) {
        for (double l2 : sorted_grid) {
            AggregationConfig cfg = base;
            cfg.lambda1 = l1;
            cfg.lambda2 = l2;
            double sum = 0.0;
            for (size_t i = 0; i < instances.size(); ++i) {
                Graph agg = aggregate_pool(pools[i], cfg).graph;
                sum += score_metric(agg, instances[i].gold, metric);
            }
            double mean = sum / static_cast<double>(instances.size());
            result.score_surface[{l1, l2}] = mean;
            if (mean > best_score + 1e-12) {  // strict: earlier (smaller) pair keeps ties
                best_score = mean;
                result.best_lambda1 = l1;
                result.best_lambda2 = l2;
            }
        }
    }
    return result;
}

void score_surface_csv(const TuneResult& result, std::ostream& out) {
    out << "lambda1,lambda2,score\n";
    char buf[64];
    auto fmt = [&](double v) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, end);
    };
    for (const auto& [pair, score] : result.score_surface) {
        out << fmt(pair.first) << ',' << fmt(pair.second) << ',' << fmt(score) << '\n';
    }
}

} // namespace mdlgraph
