#include "mingain/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

namespace mingain {

namespace {

constexpr double kSnap = 1e-13;
// Flow below this is treated as no flow when reading residual graphs.
constexpr double kFlowEps = 1e-14;

std::vector<std::string> numbered(char prefix, std::size_t n)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(std::string(1, prefix) + std::to_string(i + 1));
    return out;
}

void check_marginal(std::span<const double> v, const char* what)
{
    double total = 0.0;
    for (double x : v) {
        if (!std::isfinite(x) || x < 0.0)
            throw Error(ErrorCode::InvalidProbability, std::string(what) + " marginal has a negative entry");
        total += x;
    }
    if (std::abs(total - 1.0) > kMassTolerance)
        throw Error(ErrorCode::InvalidProbability, std::string(what) + " marginal does not sum to 1");
}

std::string cell_name(const Frame& left, const Frame& right, std::size_t i, std::size_t j)
{
    return "(" + left.label(i) + ", " + right.label(j) + ")";
}

// Dinic's algorithm on a small dense-ish network with double capacities.
class MaxFlow {
public:
    explicit MaxFlow(std::size_t nodes) : adj_(nodes), level_(nodes), next_(nodes) {}

    std::size_t add_edge(std::size_t from, std::size_t to, double cap)
    {
        adj_[from].push_back(edges_.size());
        edges_.push_back({to, cap, 0.0});
        adj_[to].push_back(edges_.size());
        edges_.push_back({from, 0.0, 0.0});
        return edges_.size() - 2;
    }

    double run(std::size_t source, std::size_t sink)
    {
        double total = 0.0;
        while (bfs(source, sink)) {
            std::fill(next_.begin(), next_.end(), 0);
            while (true) {
                double pushed = dfs(source, sink, std::numeric_limits<double>::infinity());
                if (pushed <= kFlowEps)
                    break;
                total += pushed;
            }
        }
        return total;
    }

    double flow(std::size_t edge) const { return edges_[edge].flow; }

    /// Nodes reachable from `source` in the residual graph.
    std::vector<bool> reachable(std::size_t source) const
    {
        std::vector<bool> seen(adj_.size(), false);
        std::queue<std::size_t> q;
        q.push(source);
        seen[source] = true;
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            for (auto e : adj_[u]) {
                const auto& ed = edges_[e];
                if (!seen[ed.to] && ed.cap - ed.flow > kFlowEps) {
                    seen[ed.to] = true;
                    q.push(ed.to);
                }
            }
        }
        return seen;
    }

private:
    struct Edge {
        std::size_t to;
        double cap;
        double flow;
    };

    bool bfs(std::size_t source, std::size_t sink)
    {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<std::size_t> q;
        level_[source] = 0;
        q.push(source);
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            for (auto e : adj_[u]) {
                const auto& ed = edges_[e];
                if (level_[ed.to] < 0 && ed.cap - ed.flow > kFlowEps) {
                    level_[ed.to] = level_[u] + 1;
                    q.push(ed.to);
                }
            }
        }
        return level_[sink] >= 0;
    }

    double dfs(std::size_t u, std::size_t sink, double limit)
    {
        if (u == sink)
            return limit;
        for (auto& k = next_[u]; k < adj_[u].size(); ++k) {
            auto e = adj_[u][k];
            auto& ed = edges_[e];
            if (level_[ed.to] != level_[u] + 1 || ed.cap - ed.flow <= kFlowEps)
                continue;
            double pushed = dfs(ed.to, sink, std::min(limit, ed.cap - ed.flow));
            if (pushed > kFlowEps) {
                ed.flow += pushed;
                edges_[e ^ 1].flow -= pushed;
                return pushed;
            }
        }
        return 0.0;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::vector<Edge> edges_;
    std::vector<int> level_;
    std::vector<std::size_t> next_;
};

}  // namespace

// ---------------------------------------------------------------------------
// ConstraintSystem

ConstraintSystem::ConstraintSystem(Frame left, Frame right, std::vector<double> rows, std::vector<double> cols,
                                   std::span<const Cell> forbidden, std::span<const FixedCell> fixed)
    : left_(std::move(left)), right_(std::move(right)), rows_(std::move(rows)), cols_(std::move(cols))
{
    if (rows_.size() != left_.size() || cols_.size() != right_.size())
        throw Error(ErrorCode::DimensionMismatch, "marginals do not match the frames");
    check_marginal(rows_, "row");
    check_marginal(cols_, "column");

    const auto nr = rows_.size();
    const auto nc = cols_.size();
    kinds_.assign(nr * nc, CellKind::Free);
    fixed_.assign(nr * nc, 0.0);

    for (const auto& c : forbidden) {
        if (c.row >= nr || c.col >= nc)
            throw Error(ErrorCode::DimensionMismatch, "forbidden cell out of range");
        kinds_[c.row * nc + c.col] = CellKind::Forbidden;
    }
    for (const auto& f : fixed) {
        const auto [i, j] = f.cell;
        if (i >= nr || j >= nc)
            throw Error(ErrorCode::DimensionMismatch, "fixed cell out of range");
        if (!std::isfinite(f.value) || f.value < 0.0)
            throw Error(ErrorCode::InconsistentConditional,
                        "fixed value of cell " + cell_name(left_, right_, i, j) + " is negative");
        auto& k = kinds_[i * nc + j];
        if (f.value == 0.0) {
            if (k == CellKind::Fixed)
                throw Error(ErrorCode::InconsistentConditional,
                            "cell " + cell_name(left_, right_, i, j) + " fixed twice");
            k = CellKind::Forbidden;
            continue;
        }
        if (k == CellKind::Forbidden)
            throw Error(ErrorCode::InconsistentConditional,
                        "cell " + cell_name(left_, right_, i, j) + " is forbidden but fixed to a positive value");
        if (k == CellKind::Fixed)
            throw Error(ErrorCode::InconsistentConditional,
                        "cell " + cell_name(left_, right_, i, j) + " fixed twice");
        if (f.value > std::min(rows_[i], cols_[j]) + kMassTolerance)
            throw Error(ErrorCode::InconsistentConditional,
                        "fixed value of cell " + cell_name(left_, right_, i, j) + " exceeds a marginal");
        k = CellKind::Fixed;
        fixed_[i * nc + j] = f.value;
    }

    residual_rows_ = rows_;
    residual_cols_ = cols_;
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            if (kinds_[i * nc + j] == CellKind::Fixed) {
                residual_rows_[i] -= fixed_[i * nc + j];
                residual_cols_[j] -= fixed_[i * nc + j];
            }
    auto settle = [&](std::vector<double>& v, const Frame& frame, const char* what) {
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (v[k] < -kMassTolerance)
                throw Error(ErrorCode::InconsistentConditional,
                            std::string("fixed cells exceed the ") + what + " marginal of '" + frame.label(k) + "'");
            if (std::abs(v[k]) < kSnap || v[k] < 0.0)
                v[k] = 0.0;
        }
    };
    settle(residual_rows_, left_, "row");
    settle(residual_cols_, right_, "column");
}

ConstraintSystem ConstraintSystem::from_marginals(std::vector<double> rows, std::vector<double> cols,
                                                  std::span<const Cell> forbidden, std::span<const FixedCell> fixed)
{
    Frame left(numbered('r', rows.size()));
    Frame right(numbered('c', cols.size()));
    return ConstraintSystem(std::move(left), std::move(right), std::move(rows), std::move(cols), forbidden, fixed);
}

std::optional<double> ConstraintSystem::fixed_value(std::size_t i, std::size_t j) const
{
    switch (kind(i, j)) {
    case CellKind::Free: return std::nullopt;
    case CellKind::Forbidden: return 0.0;
    case CellKind::Fixed: return fixed_[i * cols_.size() + j];
    }
    return std::nullopt;
}

std::vector<Cell> ConstraintSystem::forbidden_cells() const
{
    std::vector<Cell> out;
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t j = 0; j < cols_.size(); ++j)
            if (kind(i, j) == CellKind::Forbidden)
                out.push_back({i, j});
    return out;
}

std::vector<FixedCell> ConstraintSystem::fixed_cells() const
{
    std::vector<FixedCell> out;
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t j = 0; j < cols_.size(); ++j)
            if (kind(i, j) == CellKind::Fixed)
                out.push_back({{i, j}, fixed_[i * cols_.size() + j]});
    return out;
}

std::size_t ConstraintSystem::free_count() const
{
    return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), CellKind::Free));
}

ConstraintSystem ConstraintSystem::transposed() const
{
    std::vector<Cell> forbidden;
    for (const auto& c : forbidden_cells())
        forbidden.push_back({c.col, c.row});
    std::vector<FixedCell> fixed;
    for (const auto& f : fixed_cells())
        fixed.push_back({{f.cell.col, f.cell.row}, f.value});
    return ConstraintSystem(right_, left_, cols_, rows_, forbidden, fixed);
}

// ---------------------------------------------------------------------------

ConstraintSystem assemble(const EvidenceBody& left, const EvidenceBody& right,
                          const JointCompatibility& joint, std::span<const Conditional> conditionals)
{
    if (!(joint.left() == left.frame()) || !(joint.right() == right.frame()))
        throw Error(ErrorCode::FrameMismatch, "joint relation is not over the two evidence frames");
    if (!(joint.target() == left.target()) || !(joint.target() == right.target()))
        throw Error(ErrorCode::FrameMismatch, "evidence bodies map onto different target frames");

    const auto& ps = left.prob();
    const auto& ps2 = right.prob();
    std::vector<Cell> forbidden;
    for (auto [s, s2] : joint.dead_pairs())
        forbidden.push_back({s, s2});

    std::vector<FixedCell> fixed;
    std::map<std::size_t, double> given_total;
    for (const auto& c : conditionals) {
        if (c.given >= ps.size() || c.then >= ps2.size())
            throw Error(ErrorCode::InconsistentConditional, "conditional refers to an unknown element");
        if (!std::isfinite(c.prob) || c.prob < 0.0 || c.prob > 1.0 + kMassTolerance)
            throw Error(ErrorCode::InconsistentConditional, "conditional probability outside [0, 1]");
        given_total[c.given] += c.prob;
        double value = ps[c.given] * c.prob;
        if (value > ps2[c.then] + kMassTolerance) {
            std::ostringstream os;
            os << "P(" << right.frame().label(c.then) << " | " << left.frame().label(c.given) << ") = " << c.prob
               << " puts " << value << " on a cell whose column marginal is " << ps2[c.then];
            throw Error(ErrorCode::InconsistentConditional, os.str());
        }
        fixed.push_back({{c.given, c.then}, value});
    }
    for (auto [s, total] : given_total)
        if (total > 1.0 + kMassTolerance)
            throw Error(ErrorCode::InconsistentConditional,
                        "conditionals given '" + left.frame().label(s) + "' sum above 1");

    return ConstraintSystem(left.frame(), right.frame(), std::vector<double>(ps.probs().begin(), ps.probs().end()),
                            std::vector<double>(ps2.probs().begin(), ps2.probs().end()), forbidden, fixed);
}

Feasibility check_feasible(const ConstraintSystem& cs, double tol)
{
    const auto nr = cs.row_count();
    const auto nc = cs.col_count();
    const auto& rr = cs.residual_rows();
    const auto& rc = cs.residual_cols();

    if (cs.free_count() == nr * nc) {
        Feasibility out;
        out.witness.emplace(JointDistribution::product(ProbabilityFunction(cs.left(), rr),
                                                       ProbabilityFunction(cs.right(), rc)));
        return out;
    }

    const std::size_t source = 0;
    const std::size_t sink = nr + nc + 1;
    auto row_node = [](std::size_t i) { return 1 + i; };
    auto col_node = [nr](std::size_t j) { return 1 + nr + j; };

    MaxFlow net(nr + nc + 2);
    double total = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
        net.add_edge(source, row_node(i), rr[i]);
        total += rr[i];
    }
    for (std::size_t j = 0; j < nc; ++j)
        net.add_edge(col_node(j), sink, rc[j]);
    std::vector<std::size_t> cell_edge(nr * nc, 0);
    const double unbounded = 2.0;  // more than any marginal can carry
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            if (cs.is_free(i, j))
                cell_edge[i * nc + j] = net.add_edge(row_node(i), col_node(j), unbounded);

    double flow = net.run(source, sink);

    Feasibility out;
    if (total - flow <= tol) {
        Matrix cells(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) {
                if (cs.is_free(i, j))
                    cells(i, j) = std::max(0.0, net.flow(cell_edge[i * nc + j]));
                else
                    cells(i, j) = *cs.fixed_value(i, j);
            }
        out.status = Feasibility::Status::Feasible;
        out.witness.emplace(cs.left(), cs.right(), std::move(cells));
        return out;
    }

    // Rows still reachable from the source form the deficient side of a
    // minimum cut.
    auto side = net.reachable(source);
    ConflictCertificate cert;
    std::vector<bool> col_hit(nc, false);
    for (std::size_t i = 0; i < nr; ++i) {
        if (!side[row_node(i)])
            continue;
        cert.rows.push_back(i);
        cert.row_labels.push_back(cs.left().label(i));
        cert.row_mass += rr[i];
        for (std::size_t j = 0; j < nc; ++j)
            if (cs.is_free(i, j))
                col_hit[j] = true;
    }
    for (std::size_t j = 0; j < nc; ++j)
        if (col_hit[j]) {
            cert.reachable_cols.push_back(j);
            cert.col_labels.push_back(cs.right().label(j));
            cert.reachable_mass += rc[j];
        }
    out.status = Feasibility::Status::Conflict;
    out.certificate = std::move(cert);
    return out;
}

std::vector<bool> extension_support(const ConstraintSystem& cs, const JointDistribution& witness)
{
    const auto nr = cs.row_count();
    const auto nc = cs.col_count();
    if (witness.cells().rows() != nr || witness.cells().cols() != nc)
        throw Error(ErrorCode::DimensionMismatch, "witness does not match the constraint system");

    // Two extensions differ by a circulation on the free cells. A free cell
    // can become positive iff it already is, or its column reaches its row
    // in the residual graph (row -> col always, col -> row where flow > 0).
    std::vector<std::vector<std::size_t>> adj(nr + nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) {
            if (!cs.is_free(i, j))
                continue;
            adj[i].push_back(nr + j);
            if (witness(i, j) > kFlowEps)
                adj[nr + j].push_back(i);
        }

    std::vector<bool> support(nr * nc, false);
    for (std::size_t j = 0; j < nc; ++j) {
        std::vector<bool> seen(nr + nc, false);
        std::vector<std::size_t> stack{nr + j};
        seen[nr + j] = true;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (auto v : adj[u])
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
        }
        for (std::size_t i = 0; i < nr; ++i)
            if (cs.is_free(i, j))
                support[i * nc + j] = witness(i, j) > kFlowEps || seen[i];
    }
    return support;
}

}  // namespace mingain
