#include "mingain/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mingain {

std::string_view to_string(SolverMethod method)
{
    switch (method) {
    case SolverMethod::IterativeScaling: return "iterative_scaling";
    case SolverMethod::DualAscentFallback: return "dual_ascent_fallback";
    }
    return "unknown";
}

double joint_entropy(const JointDistribution& joint)
{
    double h = 0.0;
    for (double p : joint.cells().data())
        if (p > 0.0)
            h -= p * std::log(p);
    return h;
}

namespace {

// Free cells that can carry mass, with the residual marginals they must meet.
struct Reduced {
    std::size_t nr = 0;
    std::size_t nc = 0;
    std::vector<Cell> cells;
    std::vector<double> row_target;
    std::vector<double> col_target;
    // Rows and columns with at least one support cell. The others cannot be
    // adjusted; their deviation was already bounded by the feasibility check.
    std::vector<bool> row_live;
    std::vector<bool> col_live;
};

Reduced reduce(const ConstraintSystem& cs)
{
    auto feas = check_feasible(cs);
    if (!feas.feasible()) {
        std::ostringstream os;
        os << "constraints admit no joint distribution (row mass " << feas.certificate->row_mass
           << " exceeds reachable column mass " << feas.certificate->reachable_mass << ")";
        throw Error(ErrorCode::NotFeasible, os.str());
    }
    auto support = extension_support(cs, *feas.witness);

    Reduced r;
    r.nr = cs.row_count();
    r.nc = cs.col_count();
    r.row_target = cs.residual_rows();
    r.col_target = cs.residual_cols();
    for (std::size_t i = 0; i < r.nr; ++i)
        for (std::size_t j = 0; j < r.nc; ++j)
            if (support[i * r.nc + j])
                r.cells.push_back({i, j});
    r.row_live.assign(r.nr, false);
    r.col_live.assign(r.nc, false);
    for (const auto& c : r.cells) {
        r.row_live[c.row] = true;
        r.col_live[c.col] = true;
    }
    return r;
}

double marginal_residual(const Reduced& r, const std::vector<double>& x)
{
    std::vector<double> rs(r.nr, 0.0), cs(r.nc, 0.0);
    for (std::size_t k = 0; k < r.cells.size(); ++k) {
        rs[r.cells[k].row] += x[k];
        cs[r.cells[k].col] += x[k];
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < r.nr; ++i)
        if (r.row_live[i])
            worst = std::max(worst, std::abs(rs[i] - r.row_target[i]));
    for (std::size_t j = 0; j < r.nc; ++j)
        if (r.col_live[j])
            worst = std::max(worst, std::abs(cs[j] - r.col_target[j]));
    return worst;
}

MaxEntSolution finish(const ConstraintSystem& cs, const Reduced& r, const std::vector<double>& x,
                      SolverReport report)
{
    Matrix cells(r.nr, r.nc);
    for (std::size_t i = 0; i < r.nr; ++i)
        for (std::size_t j = 0; j < r.nc; ++j)
            if (auto v = cs.fixed_value(i, j))
                cells(i, j) = *v;
    for (std::size_t k = 0; k < r.cells.size(); ++k)
        cells(r.cells[k].row, r.cells[k].col) = x[k];
    JointDistribution joint(cs.left(), cs.right(), std::move(cells));
    report.entropy = joint_entropy(joint);
    return {std::move(joint), report};
}

// Alternating row and column rescaling from a uniform start.
bool iterative_scaling(const Reduced& r, std::vector<double>& x, double tol, std::size_t max_iter,
                       SolverReport& report)
{
    double mass = 0.0;
    for (double t : r.row_target)
        mass += t;
    x.assign(r.cells.size(), r.cells.empty() ? 0.0 : mass / static_cast<double>(r.cells.size()));

    std::vector<double> sums;
    for (std::size_t it = 0;; ++it) {
        report.iterations = it;
        report.residual = marginal_residual(r, x);
        if (report.residual < tol)
            return true;
        if (it == max_iter)
            return false;

        sums.assign(r.nr, 0.0);
        for (std::size_t k = 0; k < x.size(); ++k)
            sums[r.cells[k].row] += x[k];
        for (std::size_t k = 0; k < x.size(); ++k) {
            auto i = r.cells[k].row;
            if (sums[i] > 0.0)
                x[k] *= r.row_target[i] / sums[i];
        }
        sums.assign(r.nc, 0.0);
        for (std::size_t k = 0; k < x.size(); ++k)
            sums[r.cells[k].col] += x[k];
        for (std::size_t k = 0; k < x.size(); ++k) {
            auto j = r.cells[k].col;
            if (sums[j] > 0.0)
                x[k] *= r.col_target[j] / sums[j];
        }
    }
}

// Solves (A + ridge I) d = b for symmetric positive semidefinite A, in place.
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n, double ridge)
{
    for (std::size_t i = 0; i < n; ++i)
        a[i * n + i] += ridge;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k)
            d -= a[j * n + k] * a[j * n + k];
        if (d <= 0.0)
            return false;
        d = std::sqrt(d);
        a[j * n + j] = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k)
                s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / d;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k)
            s -= a[i * n + k] * b[k];
        b[i] = s / a[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k)
            s -= a[k * n + i] * b[k];
        b[i] = s / a[i * n + i];
    }
    return true;
}

// Newton ascent on the Lagrange dual. Each support cell is k_row * k_col,
// i.e. exp(u_i + v_j); the dual objective is
//   sum exp(u_i + v_j) - sum r_i u_i - sum c_j v_j.
bool dual_newton(const Reduced& r, std::vector<double>& x, double tol, std::size_t max_iter, SolverReport& report)
{
    const std::size_t n = r.nr + r.nc;
    std::vector<double> z(n, 0.0);
    double mass = 0.0;
    for (double t : r.row_target)
        mass += t;
    for (std::size_t i = 0; i < r.nr; ++i)
        z[i] = r.row_target[i] > 0.0 ? std::log(r.row_target[i]) : 0.0;
    for (std::size_t j = 0; j < r.nc; ++j)
        z[r.nr + j] = r.col_target[j] > 0.0 ? std::log(r.col_target[j] / mass) : 0.0;

    auto cells_of = [&](const std::vector<double>& zz, std::vector<double>& out) {
        out.resize(r.cells.size());
        for (std::size_t k = 0; k < r.cells.size(); ++k)
            out[k] = std::exp(zz[r.cells[k].row] + zz[r.nr + r.cells[k].col]);
    };
    auto objective = [&](const std::vector<double>& zz, const std::vector<double>& p) {
        double f = 0.0;
        for (double v : p)
            f += v;
        for (std::size_t i = 0; i < r.nr; ++i)
            if (r.row_live[i])
                f -= r.row_target[i] * zz[i];
        for (std::size_t j = 0; j < r.nc; ++j)
            if (r.col_live[j])
                f -= r.col_target[j] * zz[r.nr + j];
        return f;
    };

    std::vector<double> grad(n), hess(n * n), step(n), trial(n), p_trial;
    cells_of(z, x);
    double f = objective(z, x);
    for (std::size_t it = 0;; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0);
        std::fill(hess.begin(), hess.end(), 0.0);
        for (std::size_t k = 0; k < r.cells.size(); ++k) {
            auto i = r.cells[k].row;
            auto j = r.nr + r.cells[k].col;
            grad[i] += x[k];
            grad[j] += x[k];
            hess[i * n + i] += x[k];
            hess[j * n + j] += x[k];
            hess[i * n + j] += x[k];
            hess[j * n + i] += x[k];
        }
        for (std::size_t i = 0; i < r.nr; ++i)
            grad[i] = r.row_live[i] ? grad[i] - r.row_target[i] : 0.0;
        for (std::size_t j = 0; j < r.nc; ++j)
            grad[r.nr + j] = r.col_live[j] ? grad[r.nr + j] - r.col_target[j] : 0.0;

        report.iterations = it;
        report.residual = 0.0;
        for (double g : grad)
            report.residual = std::max(report.residual, std::abs(g));
        if (report.residual < tol)
            return true;
        if (it == max_iter)
            return false;

        // Rows or columns without support cells keep a zero Hessian row; the
        // ridge keeps the system solvable and their gradient is zero.
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            scale = std::max(scale, hess[i * n + i]);
        for (std::size_t i = 0; i < n; ++i)
            step[i] = -grad[i];
        if (!cholesky_solve(hess, step, n, 1e-12 * (1.0 + scale)))
            return false;

        double slope = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            slope += grad[i] * step[i];
        double t = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
            for (std::size_t i = 0; i < n; ++i)
                trial[i] = z[i] + t * step[i];
            cells_of(trial, p_trial);
            double ft = objective(trial, p_trial);
            if (std::isfinite(ft) && ft <= f + 1e-4 * t * slope) {
                z.swap(trial);
                x.swap(p_trial);
                f = ft;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            return false;
    }
}

}  // namespace

MaxEntSolution solve_maxent(const ConstraintSystem& cs, double tol, std::size_t max_iter)
{
    auto reduced = reduce(cs);
    std::vector<double> x;
    SolverReport report;
    report.method = SolverMethod::IterativeScaling;
    if (iterative_scaling(reduced, x, tol, max_iter, report))
        return finish(cs, reduced, x, report);

    SolverReport fallback;
    fallback.method = SolverMethod::DualAscentFallback;
    if (dual_newton(reduced, x, tol, max_iter, fallback)) {
        fallback.iterations += report.iterations;
        return finish(cs, reduced, x, fallback);
    }
    std::ostringstream os;
    os << "no convergence after " << max_iter << " iterations (residual " << std::min(report.residual, fallback.residual)
       << ")";
    throw Error(ErrorCode::NoConvergence, os.str());
}

namespace detail {

MaxEntSolution solve_maxent_dual(const ConstraintSystem& cs, double tol, std::size_t max_iter)
{
    auto reduced = reduce(cs);
    std::vector<double> x;
    SolverReport report;
    report.method = SolverMethod::DualAscentFallback;
    if (!dual_newton(reduced, x, tol, max_iter, report))
        throw Error(ErrorCode::NoConvergence, "dual ascent did not converge");
    return finish(cs, reduced, x, report);
}

}  // namespace detail

}  // namespace mingain
