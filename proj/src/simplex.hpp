#pragma once

#include <cstddef>
#include <vector>

#include "constraints.hpp"

namespace udens {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };
const char* to_string(LpStatus s);

// max objective . x  subject to  A x {<=,=,>=} b,  x >= 0.
// Dense row-major coefficients; at most 64 rows, column count is unbounded in
// principle (the solver prices all columns every iteration, which is the right
// trade at <= 64 rows).
struct LpProblem {
    std::size_t num_rows = 0;
    std::size_t num_cols = 0;
    std::vector<double> coeffs;  // row-major, num_rows * num_cols
    std::vector<Sense> senses;   // per row
    std::vector<double> rhs;     // per row
    std::vector<double> objective;  // per column

    double at(std::size_t r, std::size_t c) const { return coeffs[r * num_cols + c]; }
    void validate() const;
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double objective_value = 0.0;  // on infeasible: -(minimal constraint violation sum)
    std::vector<double> primal;  // size num_cols, nonnegative
    // Optimal: LP duals per original row. Infeasible: phase-1 duals y with
    // y . A_j >= -tol for every present column and y . b < 0 (a Farkas-style
    // certificate; a new column with y . A(t) < 0 can restore feasibility).
    std::vector<double> duals;
    std::vector<int> basis;      // standard-form column indices; -(r+1) marks row r's artificial
    int iterations = 0;
};

// Deterministic two-phase revised simplex: Dantzig pricing with lowest-index
// tie-break, Bland's-rule restart at the iteration cap, dense basis inverse
// refactorized every 50 pivots.
LpSolution solve(const LpProblem& problem);

struct CertificateReport {
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double slackness_gap = 0.0;
    double primal_tol = 0.0;
    double dual_tol = 0.0;
    double slackness_tol = 0.0;

    bool ok() const {
        return primal_residual <= primal_tol && dual_residual <= dual_tol &&
               slackness_gap <= slackness_tol;
    }
};

// Recomputes primal/dual/complementary-slackness residuals from the problem
// data and the solution vectors alone (independent of solver internals).
// Refuses non-optimal solutions.
CertificateReport check_certificates(const LpProblem& problem, const LpSolution& solution);

} // namespace udens
