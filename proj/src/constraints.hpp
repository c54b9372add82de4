#pragma once

#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace udens {

// Distances closer than this are merged into one term; distances below it are
// treated as zero and folded into the constant (J0(0) = 1).
inline constexpr double kDistanceMergeTol = 1e-12;

// Radial coefficient function c(t) = constant + sum_k weight_k * J0(t * d_k).
// Averaging a point configuration over rotations turns each distance into one
// such term, so rows need no explicit angular integration.
struct TermSet {
    double constant = 0.0;
    // (distance, weight), strictly increasing distance, weights merged.
    std::vector<std::pair<double, double>> terms;

    void add(double distance, double weight);

    double eval(double t) const;

    // eval(0) computed exactly: constant + sum of weights.
    double value_at_zero() const;

    double abs_weight_sum() const;
    double min_distance() const;  // +inf when empty

    // L with |c(t) - c(t')| <= L |t - t'|: max|J0'| * sum |w_k| d_k.
    double lipschitz_bound() const;
};

enum class RowKind { CS, C0, C1R, CT };
enum class Sense { le, eq, ge };

const char* to_string(RowKind k);
const char* to_string(Sense s);

// One normalized linear constraint on the spectrum:
//   sum_t kappa(t) * c(t)  <sense>  rhs_const + rhs_delta_coeff / delta.
// Isolating the 1/delta coefficient keeps rows reusable across the bisection.
struct ConstraintRow {
    RowKind kind = RowKind::CS;
    TermSet termset;
    Sense sense = Sense::eq;
    double rhs_const = 0.0;
    double rhs_delta_coeff = 0.0;
    std::string provenance;

    // Source distance counts before folding/merging (diagnostics).
    int positive_source_terms = 0;
    int negative_source_terms = 0;

    double rhs_at(double delta) const { return rhs_const + rhs_delta_coeff / delta; }
};

// Total mass: sum kappa = 1.
ConstraintRow row_cs();

// Unit-distance annihilation: sum kappa(t) J0(t) = 0.
ConstraintRow row_c0();

// Relaxed subgraph constraint: one +1 term per vertex norm (origin folds into
// the constant), one -1 term per edge length; row value <= alpha.
ConstraintRow row_c1r(const UnitDistanceGraph& g, std::string provenance = "");
ConstraintRow row_c1r(const TriangleGraph& t);

// Triple-correlation constraint at angle theta: +1 per pair distance of g1,
// -1 per vertex norm of g2 (V1 at the origin folds into constant -1);
// row value >= 5 - 1/delta.
ConstraintRow row_ct(double theta);

// Discretization grid: t_i = i * step for i < count, plus sorted refinement
// points merged in. values() is strictly increasing with t_0 = 0.
struct GridSpec {
    double step = 0.05;
    int count = 12001;
    std::vector<double> extras;

    GridSpec() = default;
    GridSpec(double step_, int count_);

    std::size_t size() const { return static_cast<std::size_t>(count) + extras.size(); }

    // Adds a refinement point unless it coincides (within the merge tolerance)
    // with a base point or an existing extra. Returns true if added.
    bool add_extra(double t);

    // All grid values, sorted strictly increasing (base points merged with extras).
    std::vector<double> values() const;
};

double eval_row(const ConstraintRow& row, double t);
std::vector<double> sample_row(const ConstraintRow& row, const GridSpec& grid);

} // namespace udens
