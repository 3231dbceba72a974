#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mdlgraph/graph.hpp"
#include "mdlgraph/pool.hpp"

namespace mdlgraph {

enum class Variant { Full, NoNodeTransforms, EqualLambda, NoDag };

enum class SolverEngine { Auto, LazyCycles, TransitiveClosure, BruteForce };

struct AggregationConfig {
    double lambda1 = 0.6;            // edge addition bit-cost
    double lambda2 = 0.6;            // node addition bit-cost
    Variant variant = Variant::Full;
    bool dag_constraints = true;
    double jaccard_threshold = 0.5;
    std::uint64_t seed = 0;
    SolverEngine engine = SolverEngine::Auto;
    long solver_node_budget = 2'000'000;

    /// Lambdas after variant rules: EqualLambda pins both to 0.5.
    double effective_lambda1() const { return variant == Variant::EqualLambda ? 0.5 : lambda1; }
    double effective_lambda2() const { return variant == Variant::EqualLambda ? 0.5 : lambda2; }
    bool effective_dag() const { return variant == Variant::NoDag ? false : dag_constraints; }
    bool has_node_term() const { return variant != Variant::NoNodeTransforms; }
};

Variant variant_from_string(const std::string& s);
std::string to_string(Variant v);
SolverEngine engine_from_string(const std::string& s);

/// Edge may be chosen only if both endpoint nodes are chosen.
struct Coupling {
    std::pair<NodeId, NodeId> edge;
    NodeId head;
    NodeId tail;
};

/// 0-1 selection instance: choose nodes/edges minimizing the summed weights
/// subject to the couplings and (optionally) directed acyclicity of the
/// chosen edge set.
struct WeightedSelectionProblem {
    std::map<NodeId, double> node_weights;
    std::map<std::pair<NodeId, NodeId>, double> edge_weights;
    std::vector<Coupling> couplings;
    bool require_dag = true;
};

enum class Certificate { Optimal, Heuristic };

struct Selection {
    std::set<NodeId> chosen_nodes;
    std::set<std::pair<NodeId, NodeId>> chosen_edges;
    double objective = 0.0;
    Certificate certificate = Certificate::Optimal;
};

/// Weight of an observed element with occurrence probability p is
/// (1 - lambda) - p; unobserved elements are omitted (their weight is
/// nonnegative and they enable nothing, so they are never chosen).
/// NoNodeTransforms drops the node term and all couplings.
/// Throws ConfigError when a lambda lies outside [0, 1].
WeightedSelectionProblem build_problem(const Pool& pool, const AggregationConfig& cfg);

/// Sum of the chosen weights. Throws InfeasibleSelectionError when the
/// selection breaks a coupling, contains an unknown element, or (for
/// require_dag instances) contains a directed cycle.
double objective_value(const WeightedSelectionProblem& problem, const Selection& selection);

} // namespace mdlgraph
