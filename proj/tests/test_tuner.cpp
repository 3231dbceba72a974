#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "mdlgraph/errors.hpp"
#include "mdlgraph/synth.hpp"
#include "mdlgraph/tuner.hpp"

using namespace mdlgraph;
using test::make_graph;

namespace {

LabeledInstance identity_instance(int n_nodes, int t) {
    Graph gold = make_graph(n_nodes, {{0, 1}, {1, 2}}, "dep");
    SampleSet s;
    for (int i = 0; i < t; ++i) s.samples.push_back(gold);
    return {s, gold};
}

std::vector<LabeledInstance> noisy_instances(int count, std::uint64_t base_seed) {
    std::vector<LabeledInstance> out;
    for (int i = 0; i < count; ++i) {
        Graph truth = generate_truth(6, 0.4, base_seed + i);
        NoiseModel noise;
        noise.edge_delete_prob = 0.3;
        noise.edge_add_prob = 0.05;
        noise.seed = base_seed + 100 + i;
        out.push_back({corrupt(truth, noise, 8), truth});
    }
    return out;
}

} // namespace

TEST_CASE("identity instances score 1 for every positive lambda1") {
    std::vector<LabeledInstance> instances{identity_instance(3, 5), identity_instance(3, 3)};
    TuneResult r = tune(instances, default_lambda_grid(), TuneMetric::EdgeF1, {});
    // lambda1 = 0 can never admit an edge; everything else ties at 1.0 and
    // the tie-break takes the smallest pair.
    CHECK(r.best_lambda1 == doctest::Approx(0.1));
    CHECK(r.best_lambda2 == doctest::Approx(0.0));
    CHECK(r.score_surface.at({0.1, 0.0}) == doctest::Approx(1.0));
    CHECK(r.score_surface.at({0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(r.folds == 2);
}

TEST_CASE("flat surface returns the smallest grid pair") {
    // gold graphs with no edges: every pair scores edge-F1 = 1.0
    Graph gold;
    gold.nodes.push_back(Node{0, "solo node", "t", std::nullopt});
    SampleSet s;
    s.samples.push_back(gold);
    std::vector<LabeledInstance> instances{{s, gold}, {s, gold}};
    TuneResult r = tune(instances, default_lambda_grid(), TuneMetric::EdgeF1, {});
    CHECK(r.best_lambda1 == doctest::Approx(0.0));
    CHECK(r.best_lambda2 == doctest::Approx(0.0));
}

TEST_CASE("tune result is the argmax of its own surface") {
    std::vector<LabeledInstance> instances = noisy_instances(4, 9000);
    TuneResult r = tune(instances, default_lambda_grid(), TuneMetric::EdgeF1, {});
    double best = r.score_surface.at({r.best_lambda1, r.best_lambda2});
    for (const auto& [pair, score] : r.score_surface) {
        CHECK(score <= best + 1e-12);
    }
}

TEST_CASE("surface scores reproduce through standalone aggregate+eval calls") {
    std::vector<LabeledInstance> instances = noisy_instances(3, 17);
    std::vector<double> grid{0.3, 0.6, 0.9};
    AggregationConfig base;
    TuneResult r = tune(instances, grid, TuneMetric::EdgeF1, base);
    for (double l1 : grid) {
        for (double l2 : grid) {
            double sum = 0.0;
            for (const LabeledInstance& inst : instances) {
                AggregationConfig cfg = base;
                cfg.lambda1 = l1;
                cfg.lambda2 = l2;
                sum += edge_multiset_f1(aggregate(inst.samples, cfg), inst.gold);
            }
            CHECK(r.score_surface.at({l1, l2}) == doctest::Approx(sum / instances.size()));
        }
    }
}

TEST_CASE("tune is deterministic") {
    std::vector<LabeledInstance> instances = noisy_instances(3, 4321);
    TuneResult a = tune(instances, default_lambda_grid(), TuneMetric::EdgeF1, {});
    TuneResult b = tune(instances, default_lambda_grid(), TuneMetric::EdgeF1, {});
    CHECK(a.best_lambda1 == b.best_lambda1);
    CHECK(a.best_lambda2 == b.best_lambda2);
    CHECK(a.score_surface == b.score_surface);
}

TEST_CASE("tune validates its inputs") {
    std::vector<LabeledInstance> one{identity_instance(3, 2)};
    CHECK_THROWS_AS(tune(one, default_lambda_grid(), TuneMetric::EdgeF1, {}), ConfigError);

    std::vector<LabeledInstance> two{identity_instance(3, 2), identity_instance(3, 2)};
    CHECK_THROWS_AS(tune(two, {}, TuneMetric::EdgeF1, {}), ConfigError);
    CHECK_THROWS_AS(tune(two, {0.5, 1.5}, TuneMetric::EdgeF1, {}), ConfigError);
}

TEST_CASE("surface csv is byte-stable and sized by the grid") {
    std::vector<LabeledInstance> instances{identity_instance(3, 2), identity_instance(3, 2)};
    TuneResult r = tune(instances, default_lambda_grid(), TuneMetric::EdgeF1, {});
    std::ostringstream a, b;
    score_surface_csv(r, a);
    score_surface_csv(r, b);
    CHECK(a.str() == b.str());
    int lines = 0;
    for (char c : a.str()) lines += c == '\n';
    CHECK(lines == 122);  // header + 11x11 rows

    TuneResult empty;
    std::ostringstream e;
    score_surface_csv(empty, e);
    CHECK(e.str() == "lambda1,lambda2,score\n");
}

TEST_CASE("grid parsing accepts ranges and lists") {
    CHECK(parse_grid("0:1:0.5") == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(parse_grid("0.2,0.4") == std::vector<double>{0.2, 0.4});
    CHECK(parse_grid("0:1:0.1").size() == 11);
    CHECK_THROWS_AS(parse_grid(""), ConfigError);
    CHECK_THROWS_AS(parse_grid("0:1:0"), ConfigError);
    CHECK_THROWS_AS(parse_grid("a,b"), ConfigError);
}
