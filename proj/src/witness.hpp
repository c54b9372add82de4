#pragma once

#include <optional>
#include <vector>

#include "constraints.hpp"
#include "geometry.hpp"

namespace udens {

// One weighted subgraph block of a witness: w * (sum_x J0(t|x|) - sum_edges J0(t|x-y|)).
struct WitnessGraphEntry {
    UnitDistanceGraph graph;
    int alpha = 0;
    double weight = 0.0;
    // Generative parameters when the graph is one of the isosceles triangles
    // (the serializable form); absent for other graphs.
    std::optional<TriangleSpec> triangle;
    EdgePolicy policy = EdgePolicy::complete;
};

// One weighted triple-correlation block at angle theta.
struct WitnessAngleEntry {
    double theta = 0.0;
    double weight = 0.0;
};

// Dual certificate W(t) = v0 + v1 J0(t) + sum_G w_G c_G(t) - sum_theta w_theta c_theta(t).
// If W(0) >= 1 and W(t) >= 0 for t > 0, the certified density bound is the
// positive root of delta^2 = B delta + C (see bound_from_witness).
struct WitnessCertificate {
    double v0 = 0.0;
    double v1 = 0.0;
    std::vector<WitnessGraphEntry> graphs;
    std::vector<WitnessAngleEntry> angles;

    // Optional quadratic shipped next to a bundled certificate, reported for
    // comparison against the recomputed one.
    std::optional<std::pair<double, double>> reference_quadratic;  // (b, c)

    // Checks weight nonnegativity and that stored alphas match the graphs.
    void validate() const;
};

struct VerificationResult {
    bool verified = false;
    double w_at_zero = 0.0;
    double checked_hi = 0.0;        // nonnegativity checked on (0, checked_hi]
    double sample_step = 0.0;
    double lipschitz_constant = 0.0;
    double tail_threshold = 0.0;    // W(t) > 0 certified for t > this via the envelope
    double worst_value = 0.0;
    double worst_t = 0.0;
    std::vector<double> violations;  // cluster representatives, worst first
};

double eval_W(const WitnessCertificate& cert, double t);

// L such that |W(t) - W(t')| <= L |t - t'|, additive over certificate blocks.
double lipschitz_bound(const WitnessCertificate& cert);

// Smallest T beyond which the envelope bound sqrt(2/(pi t d)) certifies
// W(t) > 0. Requires v0 > 0.
double tail_threshold(const WitnessCertificate& cert);

// Checks W(0) >= 1 - 1e-9 and W >= 0 on (0, T]: Lipschitz guard at
// sample_step, intervals failing the guard recursively halved to width 1e-7;
// a sampled value below -1e-9 is a violation.
VerificationResult verify_nonneg(const WitnessCertificate& cert, double sample_step = 1e-3);

// Local minima of f below cutoff on [lo, hi], deepest first, each polished by
// pattern descent. Used to price continuum refinement columns.
std::vector<double> negative_dips(const TermSet& f, double lo, double hi, double step,
                                  double cutoff);

// Negative local minima of W on [lo, hi], deepest first: column candidates for
// grid refinement when a full verification is out of reach (near-ray duals at
// the feasibility cliff have Lipschitz constants and tail thresholds far too
// large to scan). The depth cutoff scales with the certificate magnitude.
std::vector<double> scan_negative_dips(const WitnessCertificate& cert, double lo, double hi,
                                       double step);

struct QuadraticBound {
    double delta = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// delta = (B + sqrt(B^2 + 4C)) / 2 with B = v0 + sum w_G alpha_G - 5 sum w_theta,
// C = sum w_theta.
QuadraticBound bound_from_witness(const WitnessCertificate& cert);

// Positive root of x^2 = b x + c for c >= 0.
double positive_quadratic_root(double b, double c);

} // namespace udens
