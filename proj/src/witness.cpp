#include "witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bessel.hpp"
#include "error.hpp"

namespace udens {

namespace {

constexpr double kNonnegTol = 1e-9;
constexpr double kMinIntervalWidth = 1e-7;
constexpr std::size_t kMaxRawViolations = 4096;

ConstraintRow graph_row(const WitnessGraphEntry& e) {
    auto row = row_c1r(e.graph);
    row.rhs_const = static_cast<double>(e.alpha);
    return row;
}

// Certificate blocks merged into one coefficient function; evaluating this is
// identical to eval_W up to summation order.
TermSet aggregate(const WitnessCertificate& cert) {
    TermSet agg;
    agg.constant = cert.v0;
    if (cert.v1 != 0.0) agg.add(1.0, cert.v1);
    for (const auto& e : cert.graphs) {
        const auto row = graph_row(e);
        agg.constant += e.weight * row.termset.constant;
        for (const auto& [d, w] : row.termset.terms) agg.add(d, e.weight * w);
    }
    for (const auto& e : cert.angles) {
        const auto row = row_ct(e.theta);
        agg.constant -= e.weight * row.termset.constant;
        for (const auto& [d, w] : row.termset.terms) agg.add(d, -e.weight * w);
    }
    return agg;
}

} // namespace

void WitnessCertificate::validate() const {
    // v0 and v1 multiply the two equality conditions (total mass, unit-distance
    // annihilation), so the bound derivation never uses their sign; the block
    // weights multiply inequalities and must be nonnegative.
    if (!std::isfinite(v0) || !std::isfinite(v1))
        fail(Status::invalid_argument, "witness: v0 and v1 must be finite");
    for (const auto& e : graphs) {
        if (!(e.weight >= 0.0))
            fail(Status::invalid_argument, "witness: graph weight must be nonnegative");
        const int alpha = independence_number(e.graph);
        if (alpha != e.alpha)
            fail(Status::invalid_argument,
                 "witness: stored alpha " + std::to_string(e.alpha) +
                     " contradicts the graph's independence number " + std::to_string(alpha));
    }
    for (const auto& e : angles)
        if (!(e.weight >= 0.0))
            fail(Status::invalid_argument, "witness: angle weight must be nonnegative");
}

double eval_W(const WitnessCertificate& cert, double t) {
    double acc = cert.v0 + cert.v1 * omega2(t);
    for (const auto& e : cert.graphs) acc += e.weight * eval_row(graph_row(e), t);
    for (const auto& e : cert.angles) acc -= e.weight * eval_row(row_ct(e.theta), t);
    return acc;
}

double lipschitz_bound(const WitnessCertificate& cert) {
    double L = std::abs(cert.v1) * kMaxAbsJ0Deriv;
    for (const auto& e : cert.graphs) L += e.weight * graph_row(e).termset.lipschitz_bound();
    for (const auto& e : cert.angles) L += e.weight * row_ct(e.theta).termset.lipschitz_bound();
    return L;
}

double tail_threshold(const WitnessCertificate& cert) {
    const auto agg = aggregate(cert);
    // The constant fold-ins on top of v0 are nonnegative (origin vertices
    // enter graph blocks with +1 and the correlation block with -(-1)), so a
    // positive aggregate constant is the exact requirement for a tail bound.
    if (!(agg.constant > 0.0))
        fail(Status::invalid_argument,
             "tail_threshold: constant part of the witness is not positive, "
             "tail cannot be certified");
    // envelope(t * d) = envelope(d) / sqrt(t), so
    // W(t) >= constant - s / sqrt(t) > 0 for t > (s / constant)^2.
    double s = 0.0;
    for (const auto& [d, w] : agg.terms) s += std::abs(w) * envelope(d);
    const double t = s / agg.constant;
    return t * t;
}

namespace {

struct Scanner {
    const TermSet& f;
    double L;
    double worst_value = std::numeric_limits<double>::infinity();
    double worst_t = 0.0;
    std::vector<double> raw_violations;
    bool aborted = false;

    double eval(double t) {
        const double v = f.eval(t);
        if (v < worst_value) {
            worst_value = v;
            worst_t = t;
        }
        return v;
    }

    void record(double t) {
        if (raw_violations.size() < kMaxRawViolations)
            raw_violations.push_back(t);
        else
            aborted = true;
    }

    // Certify W >= 0 on [a, b] given endpoint values; endpoints below the
    // tolerance are violations, intervals failing the Lipschitz guard are
    // halved down to kMinIntervalWidth and then accepted at tolerance level.
    void certify(double a, double fa, double b, double fb, int depth) {
        if (aborted) return;
        bool bad = false;
        if (fa < -kNonnegTol) {
            record(a);
            bad = true;
        }
        if (fb < -kNonnegTol) {
            record(b);
            bad = true;
        }
        if (bad) return;
        const double need = L * (b - a) * 0.5 - kNonnegTol;
        if (fa >= need && fb >= need) return;
        if (b - a <= kMinIntervalWidth || depth > 60) return;  // accepted at tolerance level
        const double m = 0.5 * (a + b);
        const double fm = eval(m);
        certify(a, fa, m, fm, depth + 1);
        certify(m, fm, b, fb, depth + 1);
    }
};

} // namespace

VerificationResult verify_nonneg(const WitnessCertificate& cert, double sample_step) {
    if (!(sample_step > 0.0))
        fail(Status::invalid_argument, "verify_nonneg: sample_step must be positive");
    cert.validate();

    VerificationResult res;
    res.sample_step = sample_step;
    res.lipschitz_constant = lipschitz_bound(cert);
    res.tail_threshold = tail_threshold(cert);
    res.checked_hi = res.tail_threshold;

    const auto agg = aggregate(cert);
    res.w_at_zero = agg.value_at_zero();
    const bool ok_at_zero = res.w_at_zero >= 1.0 - kNonnegTol;

    Scanner scan{agg, res.lipschitz_constant};
    const double T = res.tail_threshold;
    if (T > 0.0) {
        const long n = std::max(1L, static_cast<long>(std::ceil(T / sample_step)));
        double prev_t = 0.0;
        double prev_v = res.w_at_zero;
        for (long i = 1; i <= n && !scan.aborted; ++i) {
            const double t = std::min(T, i * sample_step);
            const double v = scan.eval(t);
            scan.certify(prev_t, prev_v, t, v, 0);
            prev_t = t;
            prev_v = v;
        }
    }

    res.worst_value = scan.worst_value == std::numeric_limits<double>::infinity()
                          ? res.w_at_zero
                          : scan.worst_value;
    res.worst_t = scan.worst_t;

    // Cluster raw violations: keep the locally worst representative of each
    // group of samples closer than 0.02, polished down to the local minimum
    // so refinement lands a column right at the dip. Worst first overall.
    auto& raw = scan.raw_violations;
    std::sort(raw.begin(), raw.end());
    std::vector<double> reps;
    std::size_t i = 0;
    while (i < raw.size()) {
        std::size_t j = i;
        double best_t = raw[i];
        double best_v = agg.eval(raw[i]);
        while (j + 1 < raw.size() && raw[j + 1] - raw[j] < 0.02) {
            ++j;
            const double v = agg.eval(raw[j]);
            if (v < best_v) {
                best_v = v;
                best_t = raw[j];
            }
        }
        for (double h = sample_step * 0.5; h > 1e-8; h *= 0.5) {
            for (int steps = 0; steps < 64; ++steps) {
                bool improved = false;
                for (double cand : {best_t - h, best_t + h}) {
                    if (cand <= 0.0) continue;
                    const double cv = agg.eval(cand);
                    if (cv < best_v) {
                        best_v = cv;
                        best_t = cand;
                        improved = true;
                    }
                }
                if (!improved) break;
            }
        }
        if (best_v < res.worst_value) {
            res.worst_value = best_v;
            res.worst_t = best_t;
        }
        reps.push_back(best_t);
        i = j + 1;
    }
    std::sort(reps.begin(), reps.end(),
              [&](double a, double b) { return agg.eval(a) < agg.eval(b); });
    if (reps.size() > 64) reps.resize(64);
    res.violations = std::move(reps);

    res.verified = ok_at_zero && res.violations.empty() && !scan.aborted;
    return res;
}

std::vector<double> negative_dips(const TermSet& f, double lo, double hi, double step,
                                  double cutoff) {
    if (!(lo >= 0.0) || !(lo < hi) || !(step > 0.0))
        fail(Status::invalid_argument, "negative_dips: bad range");

    const long n = static_cast<long>(std::ceil((hi - lo) / step));
    std::vector<std::pair<double, double>> dips;  // (value, t)
    double prev2 = std::numeric_limits<double>::infinity();
    double prev1 = std::numeric_limits<double>::infinity();
    double prev1_t = lo;
    for (long i = 0; i <= n; ++i) {
        const double t = std::min(hi, lo + i * step);
        const double v = f.eval(t);
        if (prev1 < cutoff && prev1 <= prev2 && prev1 <= v) {
            // polish the local minimum
            double bt = prev1_t, bv = prev1;
            for (double h = step * 0.5; h > 1e-8; h *= 0.5)
                for (int it = 0; it < 64; ++it) {
                    bool improved = false;
                    for (double cand : {bt - h, bt + h}) {
                        if (cand <= lo || cand >= hi) continue;
                        const double cv = f.eval(cand);
                        if (cv < bv) {
                            bv = cv;
                            bt = cand;
                            improved = true;
                        }
                    }
                    if (!improved) break;
                }
            dips.emplace_back(bv, bt);
        }
        prev2 = prev1;
        prev1 = v;
        prev1_t = t;
    }
    std::sort(dips.begin(), dips.end());
    std::vector<double> out;
    for (const auto& [v, t] : dips) {
        bool near = false;
        for (double u : out) near = near || std::abs(u - t) < 0.02;
        if (!near) out.push_back(t);
        if (out.size() >= 64) break;
    }
    return out;
}

std::vector<double> scan_negative_dips(const WitnessCertificate& cert, double lo, double hi,
                                       double step) {
    const auto agg = aggregate(cert);
    const double scale = std::max(1.0, std::abs(agg.constant) + agg.abs_weight_sum());
    return negative_dips(agg, lo, hi, step, -1e-9 * scale);
}

double positive_quadratic_root(double b, double c) {
    if (c < 0.0) fail(Status::invalid_argument, "positive_quadratic_root: c must be >= 0");
    const double disc = b * b + 4.0 * c;
    return 0.5 * (b + std::sqrt(disc));
}

QuadraticBound bound_from_witness(const WitnessCertificate& cert) {
    cert.validate();
    QuadraticBound out;
    double wg_alpha = 0.0;
    for (const auto& e : cert.graphs) wg_alpha += e.weight * static_cast<double>(e.alpha);
    double wt = 0.0;
    for (const auto& e : cert.angles) wt += e.weight;
    out.b = cert.v0 + wg_alpha - 5.0 * wt;
    out.c = wt;
    out.delta = positive_quadratic_root(out.b, out.c);
    return out;
}

} // namespace udens
