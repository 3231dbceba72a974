#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mdlgraph/aggregate.hpp"
#include "mdlgraph/metrics.hpp"
#include "mdlgraph/rng.hpp"
#include "mdlgraph/synth.hpp"

using namespace mdlgraph;
using test::make_graph;

namespace {

SampleSet copies_of(const Graph& g, int t) {
    SampleSet s;
    for (int i = 0; i < t; ++i) s.samples.push_back(g);
    return s;
}

// two-node pool where p(0->1) = 0.9 and p(1->0) = 0.8 at T = 10
SampleSet contested_direction() {
    Graph fwd = make_graph(2, {{0, 1}}, "dep");
    Graph bwd = make_graph(2, {{1, 0}}, "dep");
    Graph both = make_graph(2, {{0, 1}, {1, 0}}, "dep");
    SampleSet s;
    for (int i = 0; i < 7; ++i) s.samples.push_back(both);
    s.samples.push_back(fwd);
    s.samples.push_back(fwd);
    s.samples.push_back(bwd);
    return s;  // counts: 0->1 in 9/10, 1->0 in 8/10
}

} // namespace

TEST_CASE("single sample aggregates to itself") {
    Graph g = make_graph(4, {{0, 1}, {0, 2}, {2, 3}});
    AggregationConfig cfg;
    cfg.lambda1 = 0.7;
    cfg.lambda2 = 0.7;
    Graph out = aggregate(copies_of(g, 1), cfg);
    CHECK(edge_multiset_f1(out, g) == doctest::Approx(1.0));
    CHECK(node_recall(out, g) == doctest::Approx(1.0));
}

TEST_CASE("contested direction keeps only the stronger edge under DAG") {
    AggregationConfig cfg;
    cfg.lambda1 = 0.5;
    cfg.lambda2 = 0.5;
    AggregateResult res = aggregate_detailed(contested_direction(), cfg);
    CHECK(res.selection.chosen_edges.size() == 1);
    CHECK(res.selection.chosen_edges.count({0, 1}) == 1);
    CHECK(is_dag(res.graph));

    cfg.variant = Variant::NoDag;  // without the constraint both survive
    AggregateResult both = aggregate_detailed(contested_direction(), cfg);
    CHECK(both.selection.chosen_edges.size() == 2);
}

TEST_CASE("unconstrained edge-only selection equals the strict sign test") {
    Rng rng(1234);
    for (int round = 0; round < 60; ++round) {
        // random sample sets over a fixed node universe
        SampleSet s;
        int t = 4 + static_cast<int>(rng.below(5));
        for (int i = 0; i < t; ++i) {
            Graph g = make_graph(5, {});
            for (NodeId h = 0; h < 5; ++h) {
                for (NodeId tl = 0; tl < 5; ++tl) {
                    if (h != tl && rng.bernoulli(0.3)) g.edges.push_back(Edge{h, tl, "dep"});
                }
            }
            s.samples.push_back(std::move(g));
        }
        AggregationConfig cfg;
        cfg.variant = Variant::NoNodeTransforms;
        cfg.dag_constraints = false;
        cfg.lambda1 = 0.1 + 0.1 * static_cast<double>(rng.below(9));

        Pool pool = build_pool(s, 0.5);
        AggregateResult res = aggregate_pool(pool, cfg);
        for (size_t i = 0; i < pool.edges.size(); ++i) {
            bool chosen = res.selection.chosen_edges.count(
                              {pool.edges[i].head, pool.edges[i].tail}) > 0;
            bool should = pool.edge_probability(i) > 1.0 - cfg.lambda1 + 1e-12;
            CHECK(chosen == should);
        }
    }
}

TEST_CASE("lambda monotonicity for unconstrained edge-only aggregation") {
    SampleSet s = contested_direction();
    Pool pool = build_pool(s, 0.5);
    AggregationConfig cfg;
    cfg.variant = Variant::NoNodeTransforms;
    cfg.dag_constraints = false;
    std::set<std::pair<NodeId, NodeId>> previous;
    for (double l1 : {0.05, 0.15, 0.25, 0.5, 0.85, 0.95}) {
        cfg.lambda1 = l1;
        auto chosen = aggregate_pool(pool, cfg).selection.chosen_edges;
        for (const auto& e : previous) CHECK(chosen.count(e) == 1);
        previous = chosen;
    }
}

TEST_CASE("node term can rescue a weak node through a strong edge") {
    // p(n0) = 1.0, p(n1) = 0.3, p(edge) = 0.3 at lambda = 0.5:
    // the edge and n1 are both below threshold, nothing but n0 survives.
    Graph with_edge = make_graph(2, {{0, 1}}, "dep");
    Graph lone;
    lone.nodes.push_back(with_edge.nodes[0]);
    SampleSet s;
    for (int i = 0; i < 3; ++i) s.samples.push_back(with_edge);
    for (int i = 0; i < 7; ++i) s.samples.push_back(lone);

    AggregationConfig cfg;
    cfg.lambda1 = 0.5;
    cfg.lambda2 = 0.5;
    AggregateResult res = aggregate_detailed(s, cfg);
    CHECK(res.selection.chosen_nodes.size() == 1);
    CHECK(res.selection.chosen_edges.empty());

    // raising lambda1 makes the edge profitable enough to carry n1:
    // w_e = 0.1 - 0.3 = -0.2, w_n1 = 0.1 - 0.3 = -0.2 at lambda = 0.9
    cfg.lambda1 = 0.9;
    cfg.lambda2 = 0.9;
    AggregateResult rescued = aggregate_detailed(s, cfg);
    CHECK(rescued.selection.chosen_edges.size() == 1);
    CHECK(rescued.selection.chosen_nodes.size() == 2);
}

TEST_CASE("full variant keeps high-probability singleton nodes") {
    Graph two_nodes = make_graph(2, {});
    SampleSet s = copies_of(two_nodes, 5);
    AggregationConfig cfg;
    cfg.lambda1 = 0.6;
    cfg.lambda2 = 0.6;
    Graph out = aggregate(s, cfg);
    CHECK(out.nodes.size() == 2);
    CHECK(out.edges.empty());

    // the edge-only variant keeps nothing without edges
    cfg.variant = Variant::NoNodeTransforms;
    CHECK(aggregate(s, cfg).nodes.empty());
}

TEST_CASE("EqualLambda leaves no edges when every probability is below half") {
    Graph a = make_graph(3, {{0, 1}});
    Graph b = make_graph(3, {{1, 2}});
    Graph c = make_graph(3, {{0, 2}});
    SampleSet s;
    s.samples = {a, b, c};  // every edge appears in 1/3 < 0.5 of samples
    AggregationConfig cfg;
    cfg.variant = Variant::EqualLambda;
    Graph out = aggregate(s, cfg);
    CHECK(out.edges.empty());
}

TEST_CASE("aggregate output is a DAG whenever constraints are on") {
    Rng rng(2025);
    for (int round = 0; round < 50; ++round) {
        NoiseModel noise;
        noise.edge_delete_prob = 0.3;
        noise.edge_add_prob = 0.15;
        noise.allow_cycles = true;  // stress: samples may carry cycles
        noise.seed = rng.next_u64();
        Graph truth = generate_truth(6, 0.4, rng.next_u64());
        SampleSet s = corrupt(truth, noise, 7);
        AggregationConfig cfg;
        cfg.lambda1 = 0.55;
        cfg.lambda2 = 0.55;
        Graph out = aggregate(s, cfg);
        CHECK(is_dag(out));
    }
}

TEST_CASE("aggregation is deterministic") {
    NoiseModel noise;
    noise.edge_delete_prob = 0.25;
    noise.content_paraphrase_prob = 0.2;
    noise.seed = 99;
    Graph truth = generate_truth(7, 0.35, 7);
    SampleSet s = corrupt(truth, noise, 8);
    AggregationConfig cfg;
    Graph a = aggregate(s, cfg);
    Graph b = aggregate(s, cfg);
    CHECK(a == b);
}

TEST_CASE("representatives come from the pool") {
    Graph g;
    g.nodes = {Node{0, "measure the flour", "step", std::nullopt},
               Node{1, "whisk the eggs", "step", std::nullopt}};
    g.edges = {Edge{0, 1, "dep"}};
    SampleSet s = copies_of(g, 4);
    Graph out = aggregate(s, AggregationConfig{});
    REQUIRE(out.nodes.size() == 2);
    CHECK(out.nodes[0].content == "measure the flour");
    CHECK(out.nodes[0].type == "step");
    REQUIRE(out.edges.size() == 1);
    CHECK(out.edges[0].type == "dep");
}

TEST_CASE("solver engines agree through the aggregate path") {
    SampleSet s = contested_direction();
    AggregationConfig lazy_cfg;
    lazy_cfg.engine = SolverEngine::LazyCycles;
    AggregationConfig closure_cfg;
    closure_cfg.engine = SolverEngine::TransitiveClosure;
    AggregationConfig brute_cfg;
    brute_cfg.engine = SolverEngine::BruteForce;
    double a = aggregate_detailed(s, lazy_cfg).selection.objective;
    double b = aggregate_detailed(s, closure_cfg).selection.objective;
    double c = aggregate_detailed(s, brute_cfg).selection.objective;
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
    CHECK(b == doctest::Approx(c).epsilon(1e-9));
}
