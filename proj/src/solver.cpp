#include "mdlgraph/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "mdlgraph/errors.hpp"
#include "mdlgraph/lp.hpp"

namespace mdlgraph {

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kObjTol = 1e-12;

// Variable layout shared by both engines: edges first, then nodes, then
// (closure engine only) path indicators for ordered pairs of incident nodes.
struct Model {
    const WeightedSelectionProblem* problem = nullptr;

    std::vector<std::pair<NodeId, NodeId>> edges;  // sorted
    std::vector<double> edge_weight;
    std::vector<NodeId> nodes;  // sorted; empty when the problem has no node term
    std::vector<double> node_weight;

    std::vector<NodeId> incident;                 // nodes touched by any edge, sorted
    std::map<NodeId, int> incident_index;
    std::map<NodeId, int> node_var;               // pool id -> node var index

    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_weighted() const { return num_edges() + num_nodes(); }

    // closure engine: var index of b_(u,v) for incident-node slots u != v
    int path_var(int u_slot, int v_slot) const {
        int k = static_cast<int>(incident.size());
        return num_weighted() + u_slot * k + v_slot;
    }
    int total_vars(bool with_paths) const {
        int k = static_cast<int>(incident.size());
        return num_weighted() + (with_paths ? k * k : 0);
    }
};

Model make_model(const WeightedSelectionProblem& p) {
    Model m;
    m.problem = &p;
    for (const auto& [pair, w] : p.edge_weights) {
        m.edges.push_back(pair);
        m.edge_weight.push_back(w);
    }
    for (const auto& [id, w] : p.node_weights) {
        m.nodes.push_back(id);
        m.node_weight.push_back(w);
    }
    for (size_t i = 0; i < m.nodes.size(); ++i) {
        m.node_var[m.nodes[i]] = m.num_edges() + static_cast<int>(i);
    }
    std::set<NodeId> touched;
    for (const auto& [h, t] : m.edges) {
        touched.insert(h);
        touched.insert(t);
    }
    m.incident.assign(touched.begin(), touched.end());
    for (size_t i = 0; i < m.incident.size(); ++i) {
        m.incident_index[m.incident[i]] = static_cast<int>(i);
    }
    return m;
}

std::vector<lp::Row> coupling_rows(const Model& m) {
    std::vector<lp::Row> rows;
    for (const Coupling& c : m.problem->couplings) {
        auto eit = std::lower_bound(m.edges.begin(), m.edges.end(), c.edge);
        if (eit == m.edges.end() || *eit != c.edge) {
            throw ConfigError("coupling references an edge without a weight");
        }
        int edge_var = static_cast<int>(eit - m.edges.begin());
        auto hit = m.node_var.find(c.head);
        auto tit = m.node_var.find(c.tail);
        if (hit == m.node_var.end() || tit == m.node_var.end()) {
            throw ConfigError("coupling references a node without a weight");
        }
        // 2 x_e - y_head - y_tail <= 0
        lp::Row row;
        row.terms.push_back({edge_var, 2.0});
        if (hit->second == tit->second) {
            row.terms.push_back({hit->second, -2.0});
        } else {
            row.terms.push_back({hit->second, -1.0});
            row.terms.push_back({tit->second, -1.0});
        }
        row.rhs = 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

// Deterministic directed-cycle finder over chosen edges; returns the edge
// variable indices of one cycle, or empty when acyclic.
std::vector<int> find_cycle(const Model& m, const std::vector<bool>& chosen) {
    std::map<NodeId, std::vector<std::pair<NodeId, int>>> succ;
    for (int e = 0; e < m.num_edges(); ++e) {
        if (chosen[e]) succ[m.edges[e].first].push_back({m.edges[e].second, e});
    }
    for (auto& [n, adj] : succ) std::sort(adj.begin(), adj.end());

    std::map<NodeId, int> state;  // 0 fresh, 1 on stack, 2 done
    std::vector<std::pair<NodeId, int>> stack;  // (node, chosen edge into it)

    std::function<std::vector<int>(NodeId)> dfs = [&](NodeId n) -> std::vector<int> {
        state[n] = 1;
        auto sit = succ.find(n);
        if (sit == succ.end()) {
            state[n] = 2;
            return {};
        }
        for (const auto& [next, evar] : sit->second) {
            int s = state[next];
            if (s == 1) {
                // unwind the stack back to `next`
                std::vector<int> cycle{evar};
                for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                    if (it->first == next) break;
                    cycle.push_back(it->second);
                }
                std::reverse(cycle.begin(), cycle.end());
                return cycle;
            }
            if (s == 0) {
                stack.push_back({next, evar});
                std::vector<int> found = dfs(next);
                stack.pop_back();
                if (!found.empty()) return found;
            }
        }
        state[n] = 2;
        return {};
    };

    for (const auto& [n, adj] : succ) {
        if (state[n] == 0) {
            stack.clear();
            stack.push_back({n, -1});
            std::vector<int> found = dfs(n);
            stack.pop_back();
            if (!found.empty()) return found;
        }
    }
    return {};
}

// Row oracle interface: inspects an LP point and emits violated rows.
// The lazy engine only reacts to integral points; the closure engine
// separates the materialized path/transitivity family at any point.
class RowOracle {
public:
    virtual ~RowOracle() = default;
    virtual int separate(const std::vector<double>& x, bool integral,
                         std::vector<lp::Row>& rows) = 0;
};

class LazyCycleOracle : public RowOracle {
public:
    explicit LazyCycleOracle(const Model& m) : m_(m) {}

    int separate(const std::vector<double>& x, bool integral, std::vector<lp::Row>& rows) override {
        if (!integral || !m_.problem->require_dag) return 0;
        std::vector<bool> chosen(m_.num_edges(), false);
        for (int e = 0; e < m_.num_edges(); ++e) chosen[e] = x[e] > 0.5;
        std::vector<int> cycle = find_cycle(m_, chosen);
        if (cycle.empty()) return 0;
        lp::Row cut;
        for (int e : cycle) cut.terms.push_back({e, 1.0});
        cut.rhs = static_cast<double>(cycle.size()) - 1.0;
        rows.push_back(std::move(cut));
        return 1;
    }

private:
    const Model& m_;
};

class ClosureOracle : public RowOracle {
public:
    explicit ClosureOracle(const Model& m) : m_(m) {}

    // Emits every violated member of the closure family at this point:
    //   x_e - b_(head,tail) <= 0                        (edge implies path)
    //   b_(u,v) + b_(v,w) - b_(u,w) <= 1   (u != w)     (transitivity)
    //   b_(u,v) + b_(v,u) <= 1             (u == w)     (diagonal is zero)
    int separate(const std::vector<double>& x, bool /*integral*/,
                 std::vector<lp::Row>& rows) override {
        if (!m_.problem->require_dag) return 0;
        int added = 0;
        int k = static_cast<int>(m_.incident.size());
        auto bval = [&](int u, int v) { return x[m_.path_var(u, v)]; };

        for (int e = 0; e < m_.num_edges(); ++e) {
            int u = m_.incident_index.at(m_.edges[e].first);
            int v = m_.incident_index.at(m_.edges[e].second);
            if (u == v) continue;  // degenerate edges handled by bound fixing
            if (x[e] - bval(u, v) > kIntTol) {
                rows.push_back({{{e, 1.0}, {m_.path_var(u, v), -1.0}}, 0.0});
                ++added;
            }
        }
        for (int u = 0; u < k; ++u) {
            for (int v = 0; v < k; ++v) {
                if (v == u) continue;
                double buv = bval(u, v);
                if (buv <= kIntTol) continue;  // row cannot be violated
                for (int w = 0; w < k; ++w) {
                    if (w == v) continue;
                    double lhs = buv + bval(v, w) - (w == u ? 0.0 : bval(u, w));
                    if (lhs > 1.0 + kIntTol) {
                        lp::Row row;
                        row.terms.push_back({m_.path_var(u, v), 1.0});
                        row.terms.push_back({m_.path_var(v, w), 1.0});
                        if (w != u) row.terms.push_back({m_.path_var(u, w), -1.0});
                        row.rhs = 1.0;
                        rows.push_back(std::move(row));
                        ++added;
                    }
                }
            }
        }
        return added;
    }

private:
    const Model& m_;
};

struct BbNode {
    std::vector<double> lower;
    std::vector<double> upper;
};

Selection extract_selection(const Model& m, const std::vector<double>& x) {
    Selection sel;
    std::vector<bool> edge_on(m.num_edges(), false);
    for (int e = 0; e < m.num_edges(); ++e) edge_on[e] = x[e] > 0.5;
    std::vector<bool> node_on(m.num_nodes(), false);
    for (int n = 0; n < m.num_nodes(); ++n) node_on[n] = x[m.num_edges() + n] > 0.5;

    // Zero-weight ties resolve to exclusion: drop chosen edges that do not
    // strictly improve the objective, then nodes that neither improve it nor
    // support a remaining edge.
    for (int e = 0; e < m.num_edges(); ++e) {
        if (edge_on[e] && m.edge_weight[e] >= -kObjTol) edge_on[e] = false;
    }
    std::set<NodeId> needed;
    for (int e = 0; e < m.num_edges(); ++e) {
        if (edge_on[e]) {
            needed.insert(m.edges[e].first);
            needed.insert(m.edges[e].second);
        }
    }
    for (int n = 0; n < m.num_nodes(); ++n) {
        if (node_on[n] && m.node_weight[n] >= -kObjTol && needed.count(m.nodes[n]) == 0) {
            node_on[n] = false;
        }
    }

    double obj = 0.0;
    for (int e = 0; e < m.num_edges(); ++e) {
        if (edge_on[e]) {
            sel.chosen_edges.insert(m.edges[e]);
            obj += m.edge_weight[e];
        }
    }
    for (int n = 0; n < m.num_nodes(); ++n) {
        if (node_on[n]) {
            sel.chosen_nodes.insert(m.nodes[n]);
            obj += m.node_weight[n];
        }
    }
    sel.objective = obj;
    return sel;
}

Selection branch_and_bound(const Model& m, bool with_paths, RowOracle& oracle,
                           const SolveOptions& opts, SolveStats* stats) {
    int nvars = m.total_vars(with_paths);
    std::vector<double> objective(nvars, 0.0);
    for (int e = 0; e < m.num_edges(); ++e) objective[e] = m.edge_weight[e];
    for (int n = 0; n < m.num_nodes(); ++n) objective[m.num_edges() + n] = m.node_weight[n];

    std::vector<lp::Row> rows = coupling_rows(m);
    SolveStats local;
    SolveStats& st = stats ? *stats : local;
    st = SolveStats{};

    BbNode root;
    root.lower.assign(nvars, 0.0);
    root.upper.assign(nvars, 1.0);
    if (with_paths) {
        // Diagonal path variables are identically zero.
        for (size_t i = 0; i < m.incident.size(); ++i) {
            int v = m.path_var(static_cast<int>(i), static_cast<int>(i));
            root.upper[v] = 0.0;
        }
    }
    if (m.problem->require_dag) {
        // A self-loop can never be part of an acyclic selection.
        for (int e = 0; e < m.num_edges(); ++e) {
            if (m.edges[e].first == m.edges[e].second) root.upper[e] = 0.0;
        }
    }

    // Incumbent: the empty selection is always feasible.
    double best_val = 0.0;
    std::vector<double> best_x(nvars, 0.0);
    bool exhausted = false;

    std::vector<BbNode> stack;
    stack.push_back(std::move(root));

    while (!stack.empty()) {
        if (st.nodes_explored >= opts.max_nodes) {
            exhausted = true;
            break;
        }
        ++st.nodes_explored;
        BbNode node = std::move(stack.back());
        stack.pop_back();

        bool pruned = false;
        bool converged = false;
        lp::Result res;
        for (int round = 0; round < 10000; ++round) {
            res = lp::minimize(objective, rows, node.lower, node.upper);
            ++st.lp_solves;
            if (res.status == lp::Status::Infeasible || res.objective >= best_val - kObjTol) {
                pruned = true;
                break;
            }
            bool integral = true;
            for (int j = 0; j < m.num_weighted(); ++j) {
                if (std::abs(res.x[j] - std::round(res.x[j])) > kIntTol) {
                    integral = false;
                    break;
                }
            }
            std::vector<lp::Row> fresh;
            int added = oracle.separate(res.x, integral, fresh);
            if (added > 0) {
                for (lp::Row& r : fresh) rows.push_back(std::move(r));
                st.cuts_added += added;
                continue;  // re-solve with the tightened relaxation
            }
            if (integral) {
                // Candidate incumbent; couplings hold via the LP, acyclicity
                // via the oracle reaching a fixpoint.
                double val = 0.0;
                for (int j = 0; j < m.num_weighted(); ++j) {
                    val += objective[j] * std::round(res.x[j]);
                }
                if (val < best_val - kObjTol) {
                    best_val = val;
                    best_x = res.x;
                    for (int j = 0; j < m.num_weighted(); ++j) best_x[j] = std::round(res.x[j]);
                }
                pruned = true;
            }
            converged = true;
            break;
        }
        if (pruned) continue;
        if (!converged) throw Error("solver: row generation did not converge");

        // Most fractional weighted variable; ties to the smallest index.
        int branch_var = -1;
        double best_frac = -1.0;
        for (int j = 0; j < m.num_weighted(); ++j) {
            double f = res.x[j] - std::floor(res.x[j]);
            double dist = std::min(f, 1.0 - f);
            if (dist > kIntTol && dist > best_frac + 1e-12) {
                best_frac = dist;
                branch_var = j;
            }
        }
        if (branch_var < 0) continue;  // numerically stuck; treat as explored

        double frac = res.x[branch_var];
        BbNode up = node;
        up.lower[branch_var] = 1.0;
        BbNode down = std::move(node);
        down.upper[branch_var] = 0.0;
        if (frac >= 0.5) {  // explore the rounded direction first (LIFO)
            stack.push_back(std::move(down));
            stack.push_back(std::move(up));
        } else {
            stack.push_back(std::move(up));
            stack.push_back(std::move(down));
        }
    }

    Selection sel = extract_selection(m, best_x);
    sel.certificate = exhausted ? Certificate::Heuristic : Certificate::Optimal;
    return sel;
}

} // namespace

Selection solve_transitive_closure(const WeightedSelectionProblem& p, const SolveOptions& opts,
                                   SolveStats* stats) {
    Model m = make_model(p);
    if (m.incident.size() > 60) {
        throw SizeError("transitive-closure engine supports at most 60 nodes with candidate "
                        "edges; got " +
                        std::to_string(m.incident.size()));
    }
    ClosureOracle oracle(m);
    return branch_and_bound(m, /*with_paths=*/p.require_dag, oracle, opts, stats);
}

Selection solve_lazy_cycles(const WeightedSelectionProblem& p, const SolveOptions& opts,
                            SolveStats* stats) {
    Model m = make_model(p);
    LazyCycleOracle oracle(m);
    return branch_and_bound(m, /*with_paths=*/false, oracle, opts, stats);
}

Selection brute_force(const WeightedSelectionProblem& p) {
    Model m = make_model(p);
    int k = m.num_weighted();
    if (k > 20) {
        throw SizeError("brute force enumeration supports at most 20 elements; got " +
                        std::to_string(k));
    }

    // Element order for the canonical tie-break: nodes ascending, then edges.
    std::vector<int> canon(k);
    for (int n = 0; n < m.num_nodes(); ++n) canon[m.num_edges() + n] = n;
    for (int e = 0; e < m.num_edges(); ++e) canon[e] = m.num_nodes() + e;

    // coupling edge var -> (node var, node var)
    std::vector<std::pair<int, int>> edge_nodes(m.num_edges(), {-1, -1});
    for (const Coupling& c : p.couplings) {
        auto eit = std::lower_bound(m.edges.begin(), m.edges.end(), c.edge);
        int e = static_cast<int>(eit - m.edges.begin());
        edge_nodes[e] = {m.node_var.at(c.head), m.node_var.at(c.tail)};
    }

    double best_val = std::numeric_limits<double>::infinity();
    std::vector<int> best_set;
    std::uint32_t best_mask = 0;

    std::vector<bool> chosen_edges(m.num_edges(), false);
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        double val = 0.0;
        bool ok = true;
        for (int e = 0; e < m.num_edges() && ok; ++e) {
            if (!(mask >> e & 1u)) continue;
            val += m.edge_weight[e];
            auto [hv, tv] = edge_nodes[e];
            if (hv >= 0 && (!(mask >> hv & 1u) || !(mask >> tv & 1u))) ok = false;
        }
        if (!ok) continue;
        for (int n = 0; n < m.num_nodes(); ++n) {
            if (mask >> (m.num_edges() + n) & 1u) val += m.node_weight[n];
        }
        if (val > best_val + 1e-9) continue;
        if (p.require_dag) {
            for (int e = 0; e < m.num_edges(); ++e) chosen_edges[e] = (mask >> e & 1u) != 0;
            if (!find_cycle(m, chosen_edges).empty()) continue;
        }

        std::vector<int> set;
        for (int j = 0; j < k; ++j) {
            if (mask >> j & 1u) set.push_back(canon[j]);
        }
        std::sort(set.begin(), set.end());
        if (val < best_val - 1e-9 || (std::abs(val - best_val) <= 1e-9 && set < best_set)) {
            best_val = val;
            best_set = std::move(set);
            best_mask = mask;
        }
    }

    Selection sel;
    double obj = 0.0;
    for (int e = 0; e < m.num_edges(); ++e) {
        if (best_mask >> e & 1u) {
            sel.chosen_edges.insert(m.edges[e]);
            obj += m.edge_weight[e];
        }
    }
    for (int n = 0; n < m.num_nodes(); ++n) {
        if (best_mask >> (m.num_edges() + n) & 1u) {
            sel.chosen_nodes.insert(m.nodes[n]);
            obj += m.node_weight[n];
        }
    }
    sel.objective = obj;
    sel.certificate = Certificate::Optimal;
    return sel;
}

std::string dump_lp_format(const WeightedSelectionProblem& p) {
    std::ostringstream out;
    out.precision(12);
    auto edge_name = [](const std::pair<NodeId, NodeId>& e) {
        return "x_" + std::to_string(e.first) + "_" + std::to_string(e.second);
    };
    out << "minimize:";
    bool first = true;
    for (const auto& [e, w] : p.edge_weights) {
        out << (first ? " " : " + ") << w << " " << edge_name(e);
        first = false;
    }
    for (const auto& [n, w] : p.node_weights) {
        out << (first ? " " : " + ") << w << " y_" << n;
        first = false;
    }
    out << "\nsubject to:\n";
    for (const Coupling& c : p.couplings) {
        out << "  y_" << c.head << " + y_" << c.tail << " - 2 " << edge_name(c.edge) << " >= 0\n";
    }
    if (p.require_dag) out << "  chosen edges form a directed acyclic graph\n";
    out << "binary:";
    for (const auto& [e, w] : p.edge_weights) out << " " << edge_name(e);
    for (const auto& [n, w] : p.node_weights) out << " y_" << n;
    out << "\n";
    return out.str();
}

} // namespace mdlgraph
