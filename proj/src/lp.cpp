#include "mdlgraph/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdlgraph/errors.hpp"

namespace mdlgraph::lp {

namespace {

constexpr double kEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense tableau simplex over the equality system [A | I_slack | I_art] x = b
// with individual variable bounds. Nonbasic variables rest at a bound;
// `tab` holds B^{-1}A, `beta` the basic variable values.
class Simplex {
public:
    Simplex(const std::vector<double>& objective, const std::vector<Row>& rows,
            const std::vector<double>& lower, const std::vector<double>& upper)
        : n_struct_(static_cast<int>(objective.size())), m_(static_cast<int>(rows.size())) {
        int cols = n_struct_ + m_;  // structural + one slack per row
        lo_ = lower;
        hi_ = upper;
        lo_.resize(cols, 0.0);
        hi_.resize(cols, kInf);
        tab_.assign(m_, std::vector<double>(cols, 0.0));
        b_.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            for (const Term& t : rows[i].terms) tab_[i][t.var] += t.coeff;
            tab_[i][n_struct_ + i] = 1.0;
            b_[i] = rows[i].rhs;
        }
        at_upper_.assign(cols, false);
        in_basis_.assign(cols, false);
        basis_.assign(m_, -1);
        obj_ = objective;
        obj_.resize(cols, 0.0);
    }

    Status solve() {
        // Nonbasic structurals rest at their lower bound; slacks start basic.
        std::vector<double> rest(cols(), 0.0);
        for (int j = 0; j < n_struct_; ++j) rest[j] = lo_[j];
        beta_.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            double v = b_[i];
            for (int j = 0; j < n_struct_; ++j) v -= tab_[i][j] * rest[j];
            beta_[i] = v;
            basis_[i] = n_struct_ + i;
            in_basis_[n_struct_ + i] = true;
        }

        bool need_phase1 = false;
        for (int i = 0; i < m_; ++i) {
            if (beta_[i] < -kEps) need_phase1 = true;
        }
        if (need_phase1 && !phase1()) return Status::Infeasible;

        run(obj_);
        return Status::Optimal;
    }

    std::vector<double> solution() const {
        std::vector<double> x(n_struct_, 0.0);
        for (int j = 0; j < n_struct_; ++j) {
            if (!in_basis_[j]) x[j] = at_upper_[j] ? hi_[j] : lo_[j];
        }
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_struct_) x[basis_[i]] = beta_[i];
        }
        for (int j = 0; j < n_struct_; ++j) {
            x[j] = std::clamp(x[j], lo_[j], std::isfinite(hi_[j]) ? hi_[j] : x[j]);
        }
        return x;
    }

private:
    int cols() const { return static_cast<int>(lo_.size()); }

    bool phase1() {
        // Swap an artificial in for every infeasible slack row.
        int first_art = cols();
        for (int i = 0; i < m_; ++i) {
            if (beta_[i] >= -kEps) continue;
            int art = cols();
            lo_.push_back(0.0);
            hi_.push_back(kInf);
            at_upper_.push_back(false);
            in_basis_.push_back(true);
            obj_.push_back(0.0);
            for (int r = 0; r < m_; ++r) tab_[r].push_back(r == i ? -1.0 : 0.0);
            in_basis_[basis_[i]] = false;
            at_upper_[basis_[i]] = false;  // slack leaves at its lower bound 0
            basis_[i] = art;
            beta_[i] = -beta_[i];
            // Basis column flips from +e_i to -e_i, so B^{-1} (and this
            // tableau row) flips sign with it.
            for (double& v : tab_[i]) v = -v;
        }
        std::vector<double> phase_obj(cols(), 0.0);
        for (int j = first_art; j < cols(); ++j) phase_obj[j] = 1.0;
        double infeas = run(phase_obj);
        if (infeas > 1e-7) return false;
        // Lock artificials at zero; degenerate basics stay pinned by bounds.
        for (int j = first_art; j < cols(); ++j) hi_[j] = 0.0;
        return true;
    }

    // Minimizes `c` from the current basis; returns the objective value.
    double run(const std::vector<double>& c) {
        std::vector<double> d = reduced_costs(c);
        while (true) {
            int q = -1;
            int dir = 0;
            for (int j = 0; j < cols(); ++j) {  // Bland: smallest eligible index
                if (in_basis_[j] || hi_[j] - lo_[j] < kEps) continue;
                if (!at_upper_[j] && d[j] < -kEps) {
                    q = j;
                    dir = 1;
                    break;
                }
                if (at_upper_[j] && d[j] > kEps) {
                    q = j;
                    dir = -1;
                    break;
                }
            }
            if (q < 0) break;

            double limit = std::isfinite(hi_[q]) ? hi_[q] - lo_[q] : kInf;
            int leave_row = -1;
            bool leave_at_upper = false;
            for (int i = 0; i < m_; ++i) {
                double alpha = dir * tab_[i][q];
                int bv = basis_[i];
                double t;
                bool to_upper;
                if (alpha > kEps) {
                    t = (beta_[i] - lo_[bv]) / alpha;
                    to_upper = false;
                } else if (alpha < -kEps && std::isfinite(hi_[bv])) {
                    t = (hi_[bv] - beta_[i]) / (-alpha);
                    to_upper = true;
                } else {
                    continue;
                }
                if (t < -1e-12) t = 0.0;
                if (t < limit - 1e-12 ||
                    (leave_row >= 0 && t < limit + 1e-12 && basis_[i] < basis_[leave_row])) {
                    limit = t;
                    leave_row = i;
                    leave_at_upper = to_upper;
                }
            }
            if (!std::isfinite(limit)) {
                throw Error("lp: unbounded relaxation");
            }

            if (leave_row < 0) {
                // Bound flip: q runs to its opposite bound.
                for (int i = 0; i < m_; ++i) beta_[i] -= dir * tab_[i][q] * limit;
                at_upper_[q] = !at_upper_[q];
                continue;
            }

            double entering_value = (at_upper_[q] ? hi_[q] : lo_[q]) + dir * limit;
            for (int i = 0; i < m_; ++i) beta_[i] -= dir * tab_[i][q] * limit;
            int leaving = basis_[leave_row];
            in_basis_[leaving] = false;
            at_upper_[leaving] = leave_at_upper;
            basis_[leave_row] = q;
            in_basis_[q] = true;
            beta_[leave_row] = entering_value;
            pivot(leave_row, q, d);
        }
        double value = 0.0;
        std::vector<double> x = solution_full();
        for (int j = 0; j < cols(); ++j) value += c[j] * x[j];
        return value;
    }

    std::vector<double> solution_full() const {
        std::vector<double> x(cols(), 0.0);
        for (int j = 0; j < cols(); ++j) {
            if (!in_basis_[j]) x[j] = at_upper_[j] ? hi_[j] : lo_[j];
        }
        for (int i = 0; i < m_; ++i) x[basis_[i]] = beta_[i];
        return x;
    }

    std::vector<double> reduced_costs(const std::vector<double>& c) const {
        std::vector<double> d = c;
        for (int i = 0; i < m_; ++i) {
            double cb = c[basis_[i]];
            if (cb == 0.0) continue;
            for (int j = 0; j < cols(); ++j) d[j] -= cb * tab_[i][j];
        }
        return d;
    }

    void pivot(int r, int q, std::vector<double>& d) {
        double piv = tab_[r][q];
        for (double& v : tab_[r]) v /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double f = tab_[i][q];
            if (std::abs(f) < 1e-13) continue;
            for (int j = 0; j < cols(); ++j) tab_[i][j] -= f * tab_[r][j];
        }
        double f = d[q];
        if (std::abs(f) > 1e-13) {
            for (int j = 0; j < cols(); ++j) d[j] -= f * tab_[r][j];
        }
    }

    int n_struct_;
    int m_;
    std::vector<std::vector<double>> tab_;
    std::vector<double> b_;
    std::vector<double> beta_;
    std::vector<double> lo_, hi_, obj_;
    std::vector<bool> at_upper_, in_basis_;
    std::vector<int> basis_;
};

} // namespace

Result minimize(const std::vector<double>& objective, const std::vector<Row>& rows,
                const std::vector<double>& lower, const std::vector<double>& upper) {
    for (size_t j = 0; j < objective.size(); ++j) {
        if (lower[j] > upper[j] + kEps) return {Status::Infeasible, 0.0, {}};
    }
    Simplex s(objective, rows, lower, upper);
    if (s.solve() == Status::Infeasible) return {Status::Infeasible, 0.0, {}};
    Result res;
    res.status = Status::Optimal;
    res.x = s.solution();
    res.objective = 0.0;
    for (size_t j = 0; j < objective.size(); ++j) res.objective += objective[j] * res.x[j];
    return res;
}

} // namespace mdlgraph::lp
