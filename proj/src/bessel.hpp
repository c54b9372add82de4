#pragma once

namespace udens {

// Largest argument the evaluator accepts. The grid tops out at t = 600 and no
// configuration distance exceeds 4, so 4000 leaves headroom for refinement
// points and witness sampling.
inline constexpr double kBesselMaxArg = 4000.0;

// Certified absolute error of omega2 on [0, kBesselMaxArg]. The rational
// minimax branches are good to a few ulp; 1e-11 is a deliberately loose cap.
inline constexpr double kBesselAbsErr = 1e-11;

// Upper bound for max_x |J0'(x)| = max_x |J1(x)| = 0.58186522428...;
// rounded up in the last digit so Lipschitz constants built from it are valid.
inline constexpr double kMaxAbsJ0Deriv = 0.5818652243;

struct BesselEval {
    double argument;
    double value;
    double abs_error_bound;
};

// J0(x), the rotational average of a plane wave at radius x.
// Throws Error(range_error) unless 0 <= x <= kBesselMaxArg.
double omega2(double x);

BesselEval omega2_eval(double x);

// d/dx J0(x) = -J1(x), absolute error <= 1e-9 on the same range.
double omega2_deriv(double x);

// sqrt(2/(pi x)): valid upper bound for |J0(x)| for every x > 0.
double envelope(double x);

struct IntervalMin {
    double argmin;
    double min;
};

// Global minimum of J0 on [lo, hi] (0 <= lo < hi <= kBesselMaxArg),
// argmin resolved to about 1e-9 by grid scan plus golden-section refinement.
IntervalMin min_on_interval(double lo, double hi);

} // namespace udens
