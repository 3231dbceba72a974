#pragma once

#include <vector>

namespace mdlgraph::lp {

struct Term {
    int var = 0;
    double coeff = 0.0;
};

/// Linear constraint: sum(coeff * x[var]) <= rhs.
struct Row {
    std::vector<Term> terms;
    double rhs = 0.0;
};

enum class Status { Optimal, Infeasible };

struct Result {
    Status status = Status::Optimal;
    double objective = 0.0;
    std::vector<double> x;
};

/// Minimizes c.x subject to the rows and per-variable bounds
/// lower[j] <= x[j] <= upper[j]. Bounded-variable two-phase simplex with
/// Bland's rule; fully deterministic for a fixed input.
Result minimize(const std::vector<double>& objective, const std::vector<Row>& rows,
                const std::vector<double>& lower, const std::vector<double>& upper);

} // namespace mdlgraph::lp
