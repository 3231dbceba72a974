#include <doctest.h>

#include "helpers.hpp"
#include "mdlgraph/errors.hpp"
#include "mdlgraph/problem.hpp"

using namespace mdlgraph;
using test::make_graph;

namespace {

// T=4 with edge frequencies e1:3, e2:2, e3:1 over a 4-node chain.
SampleSet frequency_fixture() {
    SampleSet s;
    Graph full = make_graph(4, {{0, 1}, {1, 2}, {2, 3}}, "dep");
    Graph mid = make_graph(4, {{0, 1}, {1, 2}}, "dep");
    Graph low = make_graph(4, {{0, 1}}, "dep");
    Graph none = make_graph(4, {});
    s.samples = {full, mid, low, none};
    return s;
}

} // namespace

TEST_CASE("weights follow (1 - lambda) - p") {
    Pool pool = build_pool(frequency_fixture(), 0.5);
    AggregationConfig cfg;
    cfg.lambda1 = 0.6;
    cfg.lambda2 = 0.6;
    WeightedSelectionProblem p = build_problem(pool, cfg);
    REQUIRE(p.edge_weights.size() == 3);
    CHECK(p.edge_weights.at({0, 1}) == doctest::Approx(-0.35));  // 0.4 - 3/4
    CHECK(p.edge_weights.at({1, 2}) == doctest::Approx(-0.10));  // 0.4 - 2/4
    CHECK(p.edge_weights.at({2, 3}) == doctest::Approx(0.15));   // 0.4 - 1/4
}

TEST_CASE("lambda boundaries") {
    Pool pool = build_pool(frequency_fixture(), 0.5);
    AggregationConfig cfg;

    cfg.lambda1 = 1.0;  // threshold 1 - lambda = 0: every observed edge negative
    for (const auto& [e, w] : build_problem(pool, cfg).edge_weights) CHECK(w < 0.0);

    cfg.lambda1 = 0.0;  // every weight = 1 - p >= 0
    for (const auto& [e, w] : build_problem(pool, cfg).edge_weights) CHECK(w >= 0.0);
}

TEST_CASE("lambda outside [0,1] is a config error") {
    Pool pool = build_pool(frequency_fixture(), 0.5);
    AggregationConfig cfg;
    cfg.lambda1 = 1.5;
    CHECK_THROWS_AS(build_problem(pool, cfg), ConfigError);
    cfg.lambda1 = 0.5;
    cfg.lambda2 = -0.1;
    CHECK_THROWS_AS(build_problem(pool, cfg), ConfigError);
}

TEST_CASE("EqualLambda pins both lambdas to 0.5") {
    Pool pool = build_pool(frequency_fixture(), 0.5);
    AggregationConfig cfg;
    cfg.lambda1 = 0.9;
    cfg.lambda2 = 0.1;
    cfg.variant = Variant::EqualLambda;
    WeightedSelectionProblem p = build_problem(pool, cfg);
    CHECK(p.edge_weights.at({0, 1}) == doctest::Approx(0.5 - 0.75));
    CHECK(p.node_weights.at(0) == doctest::Approx(0.5 - 1.0));
}

TEST_CASE("NoNodeTransforms drops the node term and couplings") {
    Pool pool = build_pool(frequency_fixture(), 0.5);
    AggregationConfig cfg;
    cfg.variant = Variant::NoNodeTransforms;
    WeightedSelectionProblem p = build_problem(pool, cfg);
    CHECK(p.node_weights.empty());
    CHECK(p.couplings.empty());
    CHECK(p.require_dag);
}

TEST_CASE("NoDag forces the constraint off") {
    Pool pool = build_pool(frequency_fixture(), 0.5);
    AggregationConfig cfg;
    cfg.variant = Variant::NoDag;
    CHECK_FALSE(build_problem(pool, cfg).require_dag);
}

TEST_CASE("objective_value sums weights and validates") {
    WeightedSelectionProblem p;
    p.require_dag = true;
    p.node_weights[0] = -0.5;
    p.node_weights[1] = 0.2;
    p.edge_weights[{0, 1}] = -0.4;
    p.couplings.push_back({{0, 1}, 0, 1});

    Selection empty;
    CHECK(objective_value(p, empty) == doctest::Approx(0.0));

    Selection full;
    full.chosen_nodes = {0, 1};
    full.chosen_edges = {{0, 1}};
    CHECK(objective_value(p, full) == doctest::Approx(-0.7));

    Selection broken;
    broken.chosen_edges = {{0, 1}};  // endpoints missing
    CHECK_THROWS_AS(objective_value(p, broken), InfeasibleSelectionError);

    Selection unknown;
    unknown.chosen_nodes = {42};
    CHECK_THROWS_AS(objective_value(p, unknown), InfeasibleSelectionError);
}

TEST_CASE("objective_value rejects cyclic selections when DAG is required") {
    WeightedSelectionProblem p;
    p.require_dag = true;
    p.edge_weights[{0, 1}] = -0.4;
    p.edge_weights[{1, 0}] = -0.3;
    Selection cyclic;
    cyclic.chosen_edges = {{0, 1}, {1, 0}};
    CHECK_THROWS_AS(objective_value(p, cyclic), InfeasibleSelectionError);

    p.require_dag = false;
    CHECK(objective_value(p, cyclic) == doctest::Approx(-0.7));
}
