#pragma once

#include <optional>
#include <string>
#include <vector>

#include "constraints.hpp"
#include "simplex.hpp"
#include "witness.hpp"

namespace udens {

// Spectrum values are aligned with grid.values().
struct KappaSpectrum {
    GridSpec grid;
    std::vector<double> values;
    bool normalized = false;

    double mass() const;
    double annihilation_residual() const;  // sum values * J0(t_i)
    void validate() const;
};

struct BoundReport {
    double delta_upper = 0.0;
    double quadratic_b = 0.0;
    double quadratic_c = 0.0;
    double lp_value_at_bound = 0.0;
    double delta_star = 0.0;
    int refinement_rounds = 0;
    bool verified = false;
    std::vector<std::string> constraint_provenance;
    // worst continuum dip when unverified
    double worst_violation_value = 0.0;
    double worst_violation_t = 0.0;
};

struct RunConfig {
    GridSpec grid;
    std::vector<TriangleSpec> triangles;
    std::vector<double> thetas;
    EdgePolicy edge_policy = EdgePolicy::complete;
    double bracket_lo = 0.20;
    double bracket_hi = 0.35;
    double bisect_tol = 1e-6;
    double verify_sample_step = 1e-3;
    int max_rounds = 20;
};

// A constraint row plus what generated it (needed to rebuild certificates).
struct PipelineRow {
    ConstraintRow row;
    std::optional<TriangleGraph> triangle_source;  // C1R rows
    std::optional<double> theta_source;            // CT rows
};

using RowSet = std::vector<PipelineRow>;

// CS, C0, one C1R row per triangle, one CT row per angle.
RowSet build_rows(const RunConfig& config);

struct LpValueResult {
    double s = 0.0;  // sup kappa(0) at this delta
    LpSolution solution;
};

// Solves max kappa(0) over the grid with the 1/delta right-hand sides
// instantiated. delta > 0.
LpValueResult lp_value(double delta, const RowSet& rows, const GridSpec& grid);

struct BisectResult {
    double delta_star = 0.0;
    LpSolution solution;
    int midpoint_solves = 0;
    // True when |s(delta_star) - delta_star| <= tol. On coarse grids the
    // feasible set can empty out before the fixed point is reached (the
    // right-hand sides grow with delta); the bisection then converges onto
    // that boundary from the feasible side and reports fixed_point = false.
    bool fixed_point = false;
    // Smallest delta at which the LP came back infeasible, if any.
    std::optional<double> first_infeasible_delta;
};

// Finds the fixed point s(delta) = delta by bisection; requires s(lo) > lo
// and s(hi) < hi, where an infeasible LP counts as s = -infinity (feasible
// sets are nested decreasing in delta, so infeasibility is monotone too).
BisectResult bisect_delta(const RowSet& rows, const GridSpec& grid, double lo, double hi,
                          double tol);

// Maps dual multipliers to certificate weights: CS -> v0, C0 -> v1,
// C1R -> w_G, CT -> -dual -> w_theta. Any required-nonnegative weight below
// -1e-9 is an error; small negatives are clamped to zero.
WitnessCertificate witness_from_dual(const LpSolution& solution, const RowSet& rows);

struct SolveOutcome {
    BoundReport report;
    KappaSpectrum spectrum;
    WitnessCertificate witness;
    VerificationResult verification;
    GridSpec final_grid;
};

// Bisect, extract the witness, verify on the continuum; on violations append
// the violating t (and its 0.01-spaced neighbors) as new grid columns and
// repeat, at most max_rounds times. The reported bound always comes from the
// verified witness quadratic, never from the raw LP optimum.
SolveOutcome refine_until_verified(const RunConfig& config);

struct ThetaScanRange {
    double lo = 0.0;
    double hi = 6.283185307179586;
    double step = 1e-3;
};

struct TriangleScanBox {
    double x1_lo = -1.2, x1_hi = 3.0;
    double x2_lo = -1.2, x2_hi = 3.0;
    double y_lo = 0.1, y_hi = 1.2;
    double step = 0.1;
};

struct ViolationHit {
    enum class Kind { ct_angle, c1r_triangle } kind = Kind::ct_angle;
    double theta = 0.0;
    TriangleSpec triangle;
    double violation = 0.0;  // positive when the row is violated by this much
    double row_value = 0.0;
    double rhs = 0.0;
    std::string describe() const;
};

// Scans angle and triangle candidates for rows the spectrum violates
// (delta taken as kappa(0)); coarse grid plus local pattern-search descent.
// Violators sorted by magnitude, largest first.
std::vector<ViolationHit> find_violated_configs(const KappaSpectrum& spectrum,
                                                const ThetaScanRange& theta_range,
                                                const std::vector<TriangleScanBox>& boxes,
                                                EdgePolicy policy = EdgePolicy::complete);

// f(r)/delta = sum kappa(t_i) J0(t_i r): the normalized radial autocorrelation.
double autocorrelation(const KappaSpectrum& spectrum, double r);

} // namespace udens
