#pragma once

#include <string>

#include "mdlgraph/problem.hpp"

namespace mdlgraph {

struct SolveOptions {
    // Branch-and-bound node budget. When exhausted the best incumbent is
    // returned with a Heuristic certificate instead of raising.
    long max_nodes = 2'000'000;
};

struct SolveStats {
    long nodes_explored = 0;
    int cuts_added = 0;
    int lp_solves = 0;
};

/// Exact solve with acyclicity enforced through materialized path-indicator
/// variables: x_e <= b_e, transitivity over ordered node triples, and zero
/// diagonal. Rows enter the relaxation only when violated, so the full
/// O(n^3) family is enforced without being carried as a dense system.
/// Throws SizeError when more than 60 nodes carry candidate edges.
Selection solve_transitive_closure(const WeightedSelectionProblem& p, const SolveOptions& opts = {},
                                   SolveStats* stats = nullptr);

/// Exact solve that starts without acyclicity constraints and adds a
/// violated-cycle cut (sum of the cycle's edges <= length - 1) whenever an
/// integral incumbent contains a directed cycle.
Selection solve_lazy_cycles(const WeightedSelectionProblem& p, const SolveOptions& opts = {},
                            SolveStats* stats = nullptr);

/// Exhaustive oracle over all feasible selections; canonical tie-break
/// (lexicographically smallest chosen set among optima). Throws SizeError
/// above 20 total elements.
Selection brute_force(const WeightedSelectionProblem& p);

/// Plain-text LP-style rendering of the instance for debugging.
std::string dump_lp_format(const WeightedSelectionProblem& p);

} // namespace mdlgraph
