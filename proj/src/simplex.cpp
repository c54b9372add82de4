#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace udens {

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::iteration_limit: return "iteration_limit";
    }
    return "?";
}

void LpProblem::validate() const {
    if (num_rows == 0 || num_rows > 64)
        fail(Status::invalid_argument, "LpProblem: row count must be in [1, 64]");
    if (num_cols == 0) fail(Status::invalid_argument, "LpProblem: no columns");
    if (coeffs.size() != num_rows * num_cols || senses.size() != num_rows ||
        rhs.size() != num_rows || objective.size() != num_cols)
        fail(Status::invalid_argument, "LpProblem: inconsistent dimensions");
    for (double v : rhs)
        if (!std::isfinite(v)) fail(Status::invalid_argument, "LpProblem: non-finite rhs");
    for (double v : coeffs)
        if (!std::isfinite(v)) fail(Status::invalid_argument, "LpProblem: non-finite coefficient");
}

namespace {

constexpr double kPivotTol = 1e-10;
constexpr int kRefactorEvery = 50;

// Two-phase revised simplex working state over the standard form
//   [A | S] x = b (rows flipped so b >= 0), x >= 0,
// with implicit artificial columns e_r encoded as basis entry -(r+1).
struct Tableau {
    std::size_t m;
    std::size_t n;                 // structural + slack columns
    std::vector<double> cols;      // column-major, n * m
    std::vector<double> b;         // >= 0 after flips
    std::vector<double> flip;      // +1 / -1 per row
    std::vector<double> cost;      // phase-2 objective per standard column
    std::vector<int> basis;        // per row
    std::vector<double> binv;      // m x m row-major
    std::vector<double> xb;        // current basic values
    std::vector<char> in_basis;    // per standard column
    int pivots_since_refactor = 0;
    int iterations = 0;

    double col(std::size_t j, std::size_t i) const { return cols[j * m + i]; }

    // B^-1 column of the basis entry for row r applied to vector y:
    // artificial of row i is e_i.
    void column_of_basis_entry(int entry, std::vector<double>& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        if (entry < 0) {
            out[static_cast<std::size_t>(-entry - 1)] = 1.0;
        } else {
            for (std::size_t i = 0; i < m; ++i) out[i] = col(static_cast<std::size_t>(entry), i);
        }
    }

    void refactorize() {
        // Gauss-Jordan inversion of the basis matrix with partial pivoting.
        std::vector<double> work(m * m);
        std::vector<double> colbuf(m);
        for (std::size_t r = 0; r < m; ++r) {
            column_of_basis_entry(basis[r], colbuf);
            for (std::size_t i = 0; i < m; ++i) work[i * m + r] = colbuf[i];
        }
        std::vector<double> inv(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;
        for (std::size_t c = 0; c < m; ++c) {
            std::size_t piv = c;
            for (std::size_t i = c + 1; i < m; ++i)
                if (std::abs(work[i * m + c]) > std::abs(work[piv * m + c])) piv = i;
            if (std::abs(work[piv * m + c]) < 1e-13)
                fail(Status::lp_failure, "simplex: singular basis during refactorization");
            if (piv != c) {
                for (std::size_t j = 0; j < m; ++j) {
                    std::swap(work[piv * m + j], work[c * m + j]);
                    std::swap(inv[piv * m + j], inv[c * m + j]);
                }
            }
            const double d = work[c * m + c];
            for (std::size_t j = 0; j < m; ++j) {
                work[c * m + j] /= d;
                inv[c * m + j] /= d;
            }
            for (std::size_t i = 0; i < m; ++i) {
                if (i == c) continue;
                const double f = work[i * m + c];
                if (f == 0.0) continue;
                for (std::size_t j = 0; j < m; ++j) {
                    work[i * m + j] -= f * work[c * m + j];
                    inv[i * m + j] -= f * inv[c * m + j];
                }
            }
        }
        binv = std::move(inv);
        // xb = B^-1 b, with iterative refinement: bases pinned against the
        // feasibility boundary can be ill-conditioned enough to cost ~1e-7 in
        // the raw solve, and the spectrum contracts demand 1e-9 residuals.
        xb.assign(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += binv[i * m + j] * b[j];
            xb[i] = acc;
        }
        std::vector<double> colbuf2(m), resid(m);
        for (int pass = 0; pass < 2; ++pass) {
            // resid = b - B xb
            resid = b;
            for (std::size_t r = 0; r < m; ++r) {
                column_of_basis_entry(basis[r], colbuf2);
                const double x = xb[r];
                if (x == 0.0) continue;
                for (std::size_t i = 0; i < m; ++i) resid[i] -= colbuf2[i] * x;
            }
            for (std::size_t i = 0; i < m; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < m; ++j) acc += binv[i * m + j] * resid[j];
                xb[i] += acc;
            }
        }
        pivots_since_refactor = 0;
    }

    // One refinement pass for y^T B = cb^T (dual counterpart of the above).
    template <typename CostFn>
    void refine_duals(CostFn cb, std::vector<double>& y) const {
        std::vector<double> colbuf(m), resid(m);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t r = 0; r < m; ++r) {
                column_of_basis_entry(basis[r], colbuf);
                double acc = cb(basis[r]);
                for (std::size_t i = 0; i < m; ++i) acc -= y[i] * colbuf[i];
                resid[r] = acc;
            }
            // y^T += resid^T B^-1
            for (std::size_t r = 0; r < m; ++r) {
                const double f = resid[r];
                if (f == 0.0) continue;
                for (std::size_t j = 0; j < m; ++j) y[j] += f * binv[r * m + j];
            }
        }
    }

    // y = cb^T B^-1 for the given per-entry cost function.
    template <typename CostFn>
    void duals_for(CostFn cb, std::vector<double>& y) const {
        y.assign(m, 0.0);
        for (std::size_t r = 0; r < m; ++r) {
            const double c = cb(basis[r]);
            if (c == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) y[j] += c * binv[r * m + j];
        }
    }

    double reduced_cost(std::size_t j, const std::vector<double>& y, double cj) const {
        double acc = cj;
        const double* cp = cols.data() + j * m;
        for (std::size_t i = 0; i < m; ++i) acc -= y[i] * cp[i];
        return acc;
    }

    void ftran(std::size_t j, std::vector<double>& d) const {
        d.assign(m, 0.0);
        const double* cp = cols.data() + j * m;
        for (std::size_t i = 0; i < m; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < m; ++k) acc += binv[i * m + k] * cp[k];
            d[i] = acc;
        }
    }

    // Ratio test. Returns row index or -1 (unbounded direction). Among ratios
    // tied within an absolute 1e-12 window, prefer ejecting an artificial,
    // then the largest pivot magnitude, then the lowest row index. Under
    // Bland's rule the tie-break is the smallest basic variable index
    // (artificials ordered after all standard columns).
    int ratio_test(const std::vector<double>& d, bool bland) const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i)
            if (d[i] > kPivotTol) best = std::min(best, xb[i] / d[i]);
        if (!std::isfinite(best)) return -1;

        int pick = -1;
        for (std::size_t i = 0; i < m; ++i) {
            if (d[i] <= kPivotTol) continue;
            const double ratio = xb[i] / d[i];
            if (ratio > best + 1e-12) continue;
            if (pick < 0) {
                pick = static_cast<int>(i);
                continue;
            }
            if (bland) {
                auto varindex = [&](std::size_t r) {
                    return basis[r] >= 0 ? static_cast<long>(basis[r])
                                         : static_cast<long>(n) - basis[r];
                };
                if (varindex(i) < varindex(static_cast<std::size_t>(pick)))
                    pick = static_cast<int>(i);
            } else {
                const bool i_art = basis[i] < 0;
                const bool p_art = basis[static_cast<std::size_t>(pick)] < 0;
                if (i_art != p_art) {
                    if (i_art) pick = static_cast<int>(i);
                } else if (std::abs(d[i]) >
                           std::abs(d[static_cast<std::size_t>(pick)]) * (1.0 + 1e-12)) {
                    pick = static_cast<int>(i);
                }
            }
        }
        return pick;
    }

    void pivot(std::size_t enter, int leave_row, const std::vector<double>& d) {
        const auto r = static_cast<std::size_t>(leave_row);
        const double dr = d[r];
        // update B^-1
        for (std::size_t j = 0; j < m; ++j) binv[r * m + j] /= dr;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r) continue;
            const double f = d[i];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) binv[i * m + j] -= f * binv[r * m + j];
        }
        // update xb
        const double xr = xb[r] / dr;
        for (std::size_t i = 0; i < m; ++i) xb[i] -= d[i] * xr;
        xb[r] = xr;

        const int old = basis[r];
        if (old >= 0) in_basis[static_cast<std::size_t>(old)] = 0;
        basis[r] = static_cast<int>(enter);
        in_basis[enter] = 1;

        ++iterations;
        if (++pivots_since_refactor >= kRefactorEvery) refactorize();
    }
};

enum class PhaseResult { optimal_reached, unbounded, limit };

// Runs pricing loops for one phase. `cb(entry)` is the cost of a basis entry,
// `cj(j)` the cost of standard column j; artificials never enter.
template <typename CbFn, typename CjFn>
PhaseResult run_phase(Tableau& t, CbFn cb, CjFn cj, long max_iters) {
    std::vector<double> y, d;
    bool bland = false;
    long since_start = 0;
    bool restarted = false;
    for (;;) {
        if (since_start++ >= max_iters) {
            if (!restarted) {
                // Restart with Bland's rule against cycling.
                restarted = true;
                bland = true;
                since_start = 0;
                continue;
            }
            return PhaseResult::limit;
        }
        t.duals_for(cb, y);

        std::size_t enter = 0;
        double best = kPivotTol;
        bool found = false;
        for (std::size_t j = 0; j < t.n; ++j) {
            if (t.in_basis[j]) continue;
            const double rc = t.reduced_cost(j, y, cj(j));
            if (bland) {
                if (rc > kPivotTol) {
                    enter = j;
                    found = true;
                    break;
                }
            } else if (rc > best) {
                best = rc;
                enter = j;
                found = true;
            }
        }
        if (!found) return PhaseResult::optimal_reached;

        t.ftran(enter, d);
        const int leave = t.ratio_test(d, bland);
        if (leave < 0) return PhaseResult::unbounded;
        t.pivot(enter, leave, d);
    }
}

} // namespace

LpSolution solve(const LpProblem& problem) {
    problem.validate();
    const std::size_t m = problem.num_rows;
    const std::size_t n0 = problem.num_cols;

    Tableau t;
    t.m = m;
    std::size_t n_slack = 0;
    for (Sense s : problem.senses)
        if (s != Sense::eq) ++n_slack;
    t.n = n0 + n_slack;
    t.cols.assign(t.n * m, 0.0);
    t.cost.assign(t.n, 0.0);
    t.b.assign(m, 0.0);
    t.flip.assign(m, 1.0);

    for (std::size_t i = 0; i < m; ++i)
        if (problem.rhs[i] < 0.0) t.flip[i] = -1.0;
    for (std::size_t j = 0; j < n0; ++j) {
        for (std::size_t i = 0; i < m; ++i)
            t.cols[j * m + i] = t.flip[i] * problem.at(i, j);
        t.cost[j] = problem.objective[j];
    }
    {
        std::size_t sj = n0;
        for (std::size_t i = 0; i < m; ++i) {
            if (problem.senses[i] == Sense::eq) continue;
            const double sign = (problem.senses[i] == Sense::le) ? 1.0 : -1.0;
            t.cols[sj * m + i] = t.flip[i] * sign;
            ++sj;
        }
    }
    for (std::size_t i = 0; i < m; ++i) t.b[i] = t.flip[i] * problem.rhs[i];

    t.basis.resize(m);
    for (std::size_t i = 0; i < m; ++i) t.basis[i] = -static_cast<int>(i) - 1;
    t.in_basis.assign(t.n, 0);
    t.refactorize();

    const long max_iters = 10L * static_cast<long>(m + t.n);
    double bnorm = 0.0;
    for (double v : t.b) bnorm = std::max(bnorm, std::abs(v));

    LpSolution sol;
    sol.primal.assign(n0, 0.0);
    sol.duals.assign(m, 0.0);

    // Phase 1: maximize -(sum of artificials).
    auto cb1 = [](int entry) { return entry < 0 ? -1.0 : 0.0; };
    auto cj1 = [](std::size_t) { return 0.0; };
    const PhaseResult p1 = run_phase(t, cb1, cj1, max_iters);
    if (p1 == PhaseResult::limit) {
        sol.status = LpStatus::iteration_limit;
        sol.iterations = t.iterations;
        return sol;
    }
    if (p1 == PhaseResult::unbounded)
        fail(Status::internal_error, "simplex: phase 1 cannot be unbounded");

    t.refactorize();
    double art_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] < 0) art_sum += std::abs(t.xb[i]);
    if (art_sum > 1e-9 * (1.0 + bnorm)) {
        sol.status = LpStatus::infeasible;
        sol.iterations = t.iterations;
        // Expose the phase-1 duals: y with y . A_j >= -tol for every column
        // and y . b < 0, a Farkas-style certificate the caller can price new
        // columns against.
        std::vector<double> y;
        t.duals_for(cb1, y);
        t.refine_duals(cb1, y);
        for (std::size_t i = 0; i < m; ++i) sol.duals[i] = t.flip[i] * y[i];
        sol.objective_value = -art_sum;
        return sol;
    }

    // Drive leftover zero-valued artificials out where a usable pivot exists;
    // rows with no pivot are redundant and keep their artificial at zero.
    {
        std::vector<double> d(m);
        for (std::size_t r = 0; r < m; ++r) {
            if (t.basis[r] >= 0) continue;
            bool done = false;
            for (std::size_t j = 0; j < t.n && !done; ++j) {
                if (t.in_basis[j]) continue;
                t.ftran(j, d);
                if (std::abs(d[r]) > 1e-7) {
                    // degenerate pivot: xb[r] ~ 0, basis swap only
                    std::vector<double> dd = d;
                    t.pivot(j, static_cast<int>(r), dd);
                    done = true;
                }
            }
        }
    }

    // Phase 2: original objective; artificials keep cost 0 and never re-enter.
    auto cb2 = [&](int entry) { return entry < 0 ? 0.0 : t.cost[static_cast<std::size_t>(entry)]; };
    auto cj2 = [&](std::size_t j) { return t.cost[j]; };
    const PhaseResult p2 = run_phase(t, cb2, cj2, max_iters);
    sol.iterations = t.iterations;
    if (p2 == PhaseResult::limit) {
        sol.status = LpStatus::iteration_limit;
        return sol;
    }
    if (p2 == PhaseResult::unbounded) {
        sol.status = LpStatus::unbounded;
        return sol;
    }

    t.refactorize();
    sol.status = LpStatus::optimal;
    for (std::size_t r = 0; r < m; ++r) {
        const int e = t.basis[r];
        if (e >= 0 && static_cast<std::size_t>(e) < n0)
            sol.primal[static_cast<std::size_t>(e)] = std::max(0.0, t.xb[r]);
    }
    double obj = 0.0;
    for (std::size_t j = 0; j < n0; ++j) obj += problem.objective[j] * sol.primal[j];
    sol.objective_value = obj;

    std::vector<double> y;
    t.duals_for(cb2, y);
    t.refine_duals(cb2, y);
    for (std::size_t i = 0; i < m; ++i) sol.duals[i] = t.flip[i] * y[i];
    sol.basis = t.basis;
    return sol;
}

CertificateReport check_certificates(const LpProblem& problem, const LpSolution& solution) {
    if (solution.status != LpStatus::optimal)
        fail(Status::invalid_argument, "check_certificates: solution status is not optimal");
    if (solution.primal.size() != problem.num_cols || solution.duals.size() != problem.num_rows)
        fail(Status::invalid_argument, "check_certificates: size mismatch");

    const std::size_t m = problem.num_rows, n = problem.num_cols;
    double bnorm = 0.0;
    for (double v : problem.rhs) bnorm = std::max(bnorm, std::abs(v));

    CertificateReport rep;
    rep.primal_tol = 1e-9 * (1.0 + bnorm);
    rep.dual_tol = 1e-9;
    rep.slackness_tol = 1e-8 * (1.0 + std::abs(solution.objective_value));

    // Primal feasibility, including variable nonnegativity.
    std::vector<double> slack(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += problem.at(i, j) * solution.primal[j];
        const double diff = dot - problem.rhs[i];
        slack[i] = diff;
        double viol = 0.0;
        switch (problem.senses[i]) {
            case Sense::eq: viol = std::abs(diff); break;
            case Sense::le: viol = std::max(0.0, diff); break;
            case Sense::ge: viol = std::max(0.0, -diff); break;
        }
        rep.primal_residual = std::max(rep.primal_residual, viol);
    }
    for (std::size_t j = 0; j < n; ++j)
        rep.primal_residual = std::max(rep.primal_residual, -solution.primal[j]);

    // Dual feasibility: reduced costs <= 0 for a max problem, duals
    // sign-consistent with row senses (le: y >= 0, ge: y <= 0).
    for (std::size_t j = 0; j < n; ++j) {
        double rc = problem.objective[j];
        for (std::size_t i = 0; i < m; ++i) rc -= solution.duals[i] * problem.at(i, j);
        rep.dual_residual = std::max(rep.dual_residual, rc);
        // complementary slackness, column side
        rep.slackness_gap = std::max(rep.slackness_gap, std::abs(solution.primal[j] * rc));
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (problem.senses[i] == Sense::le)
            rep.dual_residual = std::max(rep.dual_residual, -solution.duals[i]);
        else if (problem.senses[i] == Sense::ge)
            rep.dual_residual = std::max(rep.dual_residual, solution.duals[i]);
        // complementary slackness, row side
        if (problem.senses[i] != Sense::eq)
            rep.slackness_gap =
                std::max(rep.slackness_gap, std::abs(solution.duals[i] * slack[i]));
    }

    // Duality gap.
    double dual_obj = 0.0;
    for (std::size_t i = 0; i < m; ++i) dual_obj += solution.duals[i] * problem.rhs[i];
    rep.slackness_gap =
        std::max(rep.slackness_gap, std::abs(dual_obj - solution.objective_value));
    return rep;
}

} // namespace udens
