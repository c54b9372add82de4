#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bessel.hpp"
#include "error.hpp"

namespace udens {

double KappaSpectrum::mass() const {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
}

double KappaSpectrum::annihilation_residual() const {
    const auto ts = grid.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] != 0.0) acc += values[i] * omega2(ts[i]);
    return acc;
}

void KappaSpectrum::validate() const {
    if (values.size() != grid.size())
        fail(Status::invalid_argument, "spectrum: value count does not match grid");
    for (double v : values)
        if (!(v >= 0.0)) fail(Status::invalid_argument, "spectrum: negative coefficient");
    if (std::abs(mass() - 1.0) > 1e-9)
        fail(Status::invalid_argument, "spectrum: total mass differs from 1 beyond 1e-9");
}

RowSet build_rows(const RunConfig& config) {
    RowSet rows;
    rows.push_back({row_cs(), std::nullopt, std::nullopt});
    rows.push_back({row_c0(), std::nullopt, std::nullopt});
    for (const auto& spec : config.triangles) {
        auto tri = build_triangle(spec, config.edge_policy);
        PipelineRow pr;
        pr.row = row_c1r(tri);
        pr.triangle_source = std::move(tri);
        rows.push_back(std::move(pr));
    }
    for (double theta : config.thetas) rows.push_back({row_ct(theta), std::nullopt, theta});
    return rows;
}

namespace {

// Grid-sampled LP whose only delta dependence sits in the right-hand sides.
struct SampledLp {
    LpProblem problem;
    std::vector<double> rhs_const;
    std::vector<double> rhs_delta;

    void instantiate(double delta) {
        if (!(delta > 0.0)) fail(Status::invalid_argument, "lp_value: delta must be positive");
        for (std::size_t i = 0; i < problem.num_rows; ++i)
            problem.rhs[i] = rhs_const[i] + rhs_delta[i] / delta;
    }
};

SampledLp sample_rows(const RowSet& rows, const GridSpec& grid) {
    SampledLp out;
    const auto ts = grid.values();
    out.problem.num_rows = rows.size();
    out.problem.num_cols = ts.size();
    out.problem.coeffs.resize(rows.size() * ts.size());
    out.problem.senses.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto s = sample_row(rows[r].row, grid);
        std::copy(s.begin(), s.end(), out.problem.coeffs.begin() + r * ts.size());
        out.problem.senses.push_back(rows[r].row.sense);
        out.rhs_const.push_back(rows[r].row.rhs_const);
        out.rhs_delta.push_back(rows[r].row.rhs_delta_coeff);
    }
    out.problem.rhs.assign(rows.size(), 0.0);
    out.problem.objective.assign(ts.size(), 0.0);
    out.problem.objective[0] = 1.0;  // t_0 = 0 column
    return out;
}

LpValueResult solve_at(SampledLp& lp, double delta) {
    lp.instantiate(delta);
    LpValueResult out;
    out.solution = solve(lp.problem);
    if (out.solution.status != LpStatus::optimal)
        fail(Status::lp_failure,
             std::string("lp_value: solver returned ") + to_string(out.solution.status));
    out.s = out.solution.objective_value;
    return out;
}

struct Probe {
    bool feasible = false;
    double s = 0.0;
    LpSolution solution;
};

Probe probe_at(SampledLp& lp, double delta) {
    lp.instantiate(delta);
    Probe out;
    out.solution = solve(lp.problem);
    if (out.solution.status == LpStatus::optimal) {
        out.feasible = true;
        out.s = out.solution.objective_value;
    } else if (out.solution.status != LpStatus::infeasible) {
        fail(Status::lp_failure,
             std::string("lp_value: solver returned ") + to_string(out.solution.status));
    }
    return out;
}

BisectResult bisect_on(SampledLp& lp, double lo, double hi, double tol) {
    if (!(lo > 0.0) || !(lo < hi)) fail(Status::invalid_argument, "bisect_delta: bad bracket");
    if (!(tol > 0.0)) fail(Status::invalid_argument, "bisect_delta: bad tolerance");

    auto plo = probe_at(lp, lo);
    if (!plo.feasible || !(plo.s > lo))
        fail(Status::lp_failure,
             "bisect_delta: bracket invalid at lo = " + std::to_string(lo) +
                 (plo.feasible ? ": s(lo) = " + std::to_string(plo.s) + " <= lo"
                               : ": LP infeasible"));
    auto phi = probe_at(lp, hi);
    if (phi.feasible && !(phi.s < hi))
        fail(Status::lp_failure, "bisect_delta: bracket invalid at hi = " + std::to_string(hi) +
                                     ": s(hi) = " + std::to_string(phi.s) + " >= hi");

    BisectResult out;
    out.delta_star = lo;
    out.solution = std::move(plo.solution);
    if (!phi.feasible) out.first_infeasible_delta = hi;
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        auto pm = probe_at(lp, mid);
        ++out.midpoint_solves;
        if (pm.feasible && std::abs(pm.s - mid) <= tol) {
            out.delta_star = mid;
            out.solution = std::move(pm.solution);
            out.fixed_point = true;
            return out;
        }
        if (pm.feasible && pm.s > mid) {
            lo = mid;
            out.delta_star = mid;
            out.solution = std::move(pm.solution);
        } else {
            hi = mid;
            if (!pm.feasible)
                out.first_infeasible_delta =
                    out.first_infeasible_delta ? std::min(*out.first_infeasible_delta, mid) : mid;
        }
        if (hi - lo <= std::max(1e-12, 1e-4 * tol)) break;
    }
    // No fixed point on this grid: the feasible set empties out just above
    // delta_star. The caller holds the last feasible solve.
    out.fixed_point = false;
    return out;
}

} // namespace

LpValueResult lp_value(double delta, const RowSet& rows, const GridSpec& grid) {
    auto lp = sample_rows(rows, grid);
    return solve_at(lp, delta);
}

BisectResult bisect_delta(const RowSet& rows, const GridSpec& grid, double lo, double hi,
                          double tol) {
    auto lp = sample_rows(rows, grid);
    return bisect_on(lp, lo, hi, tol);
}

WitnessCertificate witness_from_dual(const LpSolution& solution, const RowSet& rows) {
    // Optimal solves carry LP duals; infeasible solves carry phase-1 duals,
    // which map to a homogeneous certificate under the same sign convention.
    if (solution.status != LpStatus::optimal && solution.status != LpStatus::infeasible)
        fail(Status::invalid_argument, "witness_from_dual: no dual information for status " +
                                           std::string(to_string(solution.status)));
    if (solution.duals.size() != rows.size())
        fail(Status::invalid_argument, "witness_from_dual: dual count mismatch");

    WitnessCertificate cert;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double y = solution.duals[i];
        // >= rows carry nonpositive duals under the max convention; negate.
        const double w = rows[i].row.sense == Sense::ge ? -y : y;
        // Inequality duals must come out nonnegative; a violation beyond
        // tolerance signals a solver sign-convention bug. Equality duals
        // (total mass, annihilation) are free.
        if (rows[i].row.sense != Sense::eq && w < -1e-9)
            fail(Status::lp_failure,
                 "witness_from_dual: dual multiplier for row '" + rows[i].row.provenance +
                     "' is negative beyond tolerance (" + std::to_string(w) + ")");
        const double clamped = rows[i].row.sense == Sense::eq ? w : std::max(0.0, w);
        switch (rows[i].row.kind) {
            case RowKind::CS: cert.v0 += clamped; break;
            case RowKind::C0: cert.v1 += clamped; break;
            case RowKind::C1R: {
                if (clamped == 0.0) break;
                if (!rows[i].triangle_source)
                    fail(Status::internal_error,
                         "witness_from_dual: subgraph row without its source graph");
                WitnessGraphEntry e;
                e.graph = rows[i].triangle_source->graph;
                e.alpha = rows[i].triangle_source->alpha;
                e.triangle = rows[i].triangle_source->spec;
                e.policy = rows[i].triangle_source->policy;
                e.weight = clamped;
                cert.graphs.push_back(std::move(e));
                break;
            }
            case RowKind::CT: {
                if (clamped == 0.0) break;
                if (!rows[i].theta_source)
                    fail(Status::internal_error,
                         "witness_from_dual: correlation row without its source angle");
                cert.angles.push_back({*rows[i].theta_source, clamped});
                break;
            }
        }
    }
    return cert;
}

namespace {

KappaSpectrum spectrum_from(const LpSolution& solution, const GridSpec& grid) {
    KappaSpectrum sp;
    sp.grid = grid;
    sp.values.assign(solution.primal.size(), 0.0);
    for (std::size_t i = 0; i < solution.primal.size(); ++i)
        sp.values[i] = std::max(0.0, solution.primal[i]);
    sp.normalized = std::abs(sp.mass() - 1.0) <= 1e-9;
    return sp;
}

} // namespace

SolveOutcome refine_until_verified(const RunConfig& config) {
    const RowSet rows = build_rows(config);
    GridSpec grid = config.grid;

    SolveOutcome out;
    for (auto& pr : rows) out.report.constraint_provenance.push_back(pr.row.provenance);

    const int rounds = std::max(1, config.max_rounds);
    for (int round = 1; round <= rounds; ++round) {
        auto lp = sample_rows(rows, grid);
        auto bis = bisect_on(lp, config.bracket_lo, config.bracket_hi, config.bisect_tol);
        out.witness = witness_from_dual(bis.solution, rows);
        out.spectrum = spectrum_from(bis.solution, grid);
        out.final_grid = grid;
        out.report.delta_star = bis.delta_star;
        out.report.lp_value_at_bound = bis.solution.objective_value;
        out.report.refinement_rounds = round;

        const auto q = bound_from_witness(out.witness);
        out.report.quadratic_b = q.b;
        out.report.quadratic_c = q.c;
        out.report.delta_upper = q.delta;

        if (!bis.fixed_point) {
            // Feasibility cliff: the right-hand sides grow with delta and the
            // grid LP runs out of feasible spectra before s(delta) meets
            // delta. The phase-1 duals of the first infeasible probe form a
            // homogeneous certificate Z with W_Z >= 0 on every grid column
            // and B_Z + C_Z/delta < 0; scaled so W(0) >= 1 it is a standard
            // witness whose quadratic root sits at the feasibility boundary.
            // If Z fails continuum verification, its dips are precisely the
            // columns the grid is missing.
            if (!bis.first_infeasible_delta)
                fail(Status::internal_error,
                     "refine_until_verified: bisection stalled without infeasibility");
            lp.instantiate(*bis.first_infeasible_delta);
            const auto farkas = solve(lp.problem);
            if (farkas.status != LpStatus::infeasible)
                fail(Status::internal_error,
                     "refine_until_verified: expected an infeasible probe at delta = " +
                         std::to_string(*bis.first_infeasible_delta));
            auto ray = witness_from_dual(farkas, rows);
            const double w0 = eval_W(ray, 0.0);
            if (w0 > 1e-8) {
                const double inv = 1.0 / w0;
                ray.v0 *= inv;
                ray.v1 *= inv;
                for (auto& e : ray.graphs) e.weight *= inv;
                for (auto& e : ray.angles) e.weight *= inv;
                out.witness = std::move(ray);
            } else {
                // W_Z(0) ~ 0: tilt by the feasible dual, which has W(0) >= 1.
                auto combo = out.witness;
                combo.v0 += ray.v0;
                combo.v1 += ray.v1;
                for (const auto& e : ray.graphs) {
                    bool merged = false;
                    for (auto& have : combo.graphs) {
                        if (have.triangle && e.triangle && have.policy == e.policy &&
                            have.triangle->x1 == e.triangle->x1 &&
                            have.triangle->x2 == e.triangle->x2 &&
                            have.triangle->y == e.triangle->y) {
                            have.weight += e.weight;
                            merged = true;
                            break;
                        }
                    }
                    if (!merged) combo.graphs.push_back(e);
                }
                for (const auto& e : ray.angles) {
                    bool merged = false;
                    for (auto& have : combo.angles) {
                        if (have.theta == e.theta) {
                            have.weight += e.weight;
                            merged = true;
                            break;
                        }
                    }
                    if (!merged) combo.angles.push_back(e);
                }
                out.witness = std::move(combo);
            }
            const auto qz = bound_from_witness(out.witness);
            out.report.quadratic_b = qz.b;
            out.report.quadratic_c = qz.c;
            out.report.delta_upper = qz.delta;
        }

        out.verification = verify_nonneg(out.witness, config.verify_sample_step);
        out.report.verified = out.verification.verified;
        out.report.worst_violation_value = out.verification.worst_value;
        out.report.worst_violation_t = out.verification.worst_t;
        if (out.verification.verified) {
            // Contract on the returned spectrum: it satisfies every generated
            // row within 1e-8 when re-evaluated independently of the solver.
            const auto ts = grid.values();
            for (const auto& pr : rows) {
                double value = 0.0;
                for (std::size_t i = 0; i < out.spectrum.values.size(); ++i)
                    if (out.spectrum.values[i] != 0.0)
                        value += out.spectrum.values[i] * pr.row.termset.eval(ts[i]);
                const double rhs = pr.row.rhs_at(bis.delta_star);
                const double viol = pr.row.sense == Sense::eq   ? std::abs(value - rhs)
                                    : pr.row.sense == Sense::le ? value - rhs
                                                                : rhs - value;
                if (viol > 1e-8) {
                    char buf[192];
                    std::snprintf(buf, sizeof buf,
                                  "refine_until_verified: spectrum violates row '%s' by %.3e",
                                  pr.row.provenance.c_str(), viol);
                    fail(Status::internal_error, buf);
                }
            }
            return out;
        }
        const std::vector<double>& new_columns = out.verification.violations;

        // Append the violating t values (and their 0.01-spaced neighbors) as
        // fresh columns; at most the 40 worst per round.
        std::size_t added = 0;
        for (std::size_t i = 0; i < new_columns.size() && i < 40; ++i) {
            const double t = new_columns[i];
            if (grid.add_extra(t)) ++added;
            if (t - 0.01 > 0.0 && grid.add_extra(t - 0.01)) ++added;
            if (grid.add_extra(t + 0.01)) ++added;
        }
        if (added == 0) break;  // nothing will change next round
    }
    return out;  // verified == false; report carries the worst violation
}

std::string ViolationHit::describe() const {
    char buf[160];
    if (kind == Kind::ct_angle)
        std::snprintf(buf, sizeof buf, "CT theta=%.9g value=%.6g rhs=%.6g violation=%.3g", theta,
                      row_value, rhs, violation);
    else
        std::snprintf(buf, sizeof buf, "C1R %s value=%.6g rhs=%.6g violation=%.3g",
                      triangle.describe().c_str(), row_value, rhs, violation);
    return buf;
}

namespace {

struct SparseSpectrum {
    std::vector<double> ts;
    std::vector<double> ks;
    double kappa0 = 0.0;
};

SparseSpectrum sparsify(const KappaSpectrum& sp) {
    SparseSpectrum out;
    const auto ts = sp.grid.values();
    for (std::size_t i = 0; i < sp.values.size(); ++i) {
        if (sp.values[i] > 0.0) {
            out.ts.push_back(ts[i]);
            out.ks.push_back(sp.values[i]);
            if (ts[i] == 0.0) out.kappa0 = sp.values[i];
        }
    }
    return out;
}

double row_value_under(const SparseSpectrum& sp, const ConstraintRow& row) {
    double acc = 0.0;
    for (std::size_t i = 0; i < sp.ts.size(); ++i) acc += sp.ks[i] * row.termset.eval(sp.ts[i]);
    return acc;
}

} // namespace

std::vector<ViolationHit> find_violated_configs(const KappaSpectrum& spectrum,
                                                const ThetaScanRange& theta_range,
                                                const std::vector<TriangleScanBox>& boxes,
                                                EdgePolicy policy) {
    spectrum.validate();
    const auto sp = sparsify(spectrum);
    if (!(sp.kappa0 > 0.0))
        fail(Status::invalid_argument, "find_violated_configs: spectrum has no mass at t = 0");
    const double delta = sp.kappa0;

    std::vector<ViolationHit> hits;

    auto eval_theta = [&](double theta) -> std::optional<std::pair<double, double>> {
        try {
            const auto row = row_ct(theta);
            const double value = row_value_under(sp, row);
            return std::make_pair(row.rhs_at(delta) - value, value);
        } catch (const Error&) {
            return std::nullopt;  // degenerate configuration
        }
    };

    // ---- angle scan + local descent on the violation ----
    if (theta_range.step > 0.0 && theta_range.hi > theta_range.lo) {
        std::vector<double> seeds;
        const long n = static_cast<long>(std::floor((theta_range.hi - theta_range.lo) /
                                                    theta_range.step));
        std::vector<std::pair<double, double>> coarse;  // (violation, theta)
        for (long i = 0; i <= n; ++i) {
            const double theta = theta_range.lo + i * theta_range.step;
            const auto v = eval_theta(theta);
            if (v) coarse.emplace_back(v->first, theta);
        }
        std::sort(coarse.rbegin(), coarse.rend());
        for (std::size_t i = 0; i < coarse.size() && seeds.size() < 8; ++i) {
            bool near = false;
            for (double s : seeds) near = near || std::abs(s - coarse[i].second) < 0.05;
            if (!near) seeds.push_back(coarse[i].second);
        }
        for (double seed : seeds) {
            double theta = seed;
            double best = eval_theta(theta) ? eval_theta(theta)->first
                                            : -std::numeric_limits<double>::infinity();
            for (double h = theta_range.step; h > 1e-7; h *= 0.5) {
                for (double cand : {theta - h, theta + h}) {
                    if (cand < theta_range.lo || cand > theta_range.hi) continue;
                    const auto v = eval_theta(cand);
                    if (v && v->first > best) {
                        best = v->first;
                        theta = cand;
                    }
                }
            }
            const auto v = eval_theta(theta);
            if (v && v->first > 1e-9) {
                ViolationHit hit;
                hit.kind = ViolationHit::Kind::ct_angle;
                hit.theta = theta;
                hit.violation = v->first;
                hit.row_value = v->second;
                hit.rhs = v->second + v->first;
                hits.push_back(hit);
            }
        }
    }

    // ---- triangle scan ----
    auto eval_triangle = [&](const TriangleSpec& spec)
        -> std::optional<std::pair<double, double>> {
        try {
            const auto tri = build_triangle(spec, policy);
            if (tri.graph.min_separation() < kSeparationRule) return std::nullopt;
            const auto row = row_c1r(tri);
            const double value = row_value_under(sp, row);
            return std::make_pair(value - row.rhs_at(delta), value);
        } catch (const Error&) {
            return std::nullopt;
        }
    };

    for (const auto& box : boxes) {
        std::vector<std::pair<double, TriangleSpec>> coarse;
        for (double x1 = box.x1_lo; x1 <= box.x1_hi + 1e-12; x1 += box.step)
            for (double x2 = box.x2_lo; x2 <= box.x2_hi + 1e-12; x2 += box.step)
                for (double y = box.y_lo; y <= box.y_hi + 1e-12; y += box.step) {
                    const TriangleSpec spec{x1, x2, y};
                    const auto v = eval_triangle(spec);
                    if (v) coarse.emplace_back(v->first, spec);
                }
        std::sort(coarse.begin(), coarse.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        const std::size_t refine = std::min<std::size_t>(coarse.size(), 8);
        for (std::size_t i = 0; i < refine; ++i) {
            TriangleSpec spec = coarse[i].second;
            double best = coarse[i].first;
            for (double h = box.step; h > 1e-6; h *= 0.5) {
                bool improved = true;
                while (improved) {
                    improved = false;
                    for (int dim = 0; dim < 3; ++dim)
                        for (double sgn : {-1.0, 1.0}) {
                            TriangleSpec cand = spec;
                            (dim == 0 ? cand.x1 : dim == 1 ? cand.x2 : cand.y) += sgn * h;
                            const auto v = eval_triangle(cand);
                            if (v && v->first > best) {
                                best = v->first;
                                spec = cand;
                                improved = true;
                            }
                        }
                }
            }
            const auto v = eval_triangle(spec);
            if (v && v->first > 1e-9) {
                ViolationHit hit;
                hit.kind = ViolationHit::Kind::c1r_triangle;
                hit.triangle = spec;
                hit.violation = v->first;
                hit.row_value = v->second;
                hit.rhs = v->second - v->first;
                hits.push_back(hit);
            }
        }
    }

    std::sort(hits.begin(), hits.end(),
              [](const ViolationHit& a, const ViolationHit& b) { return a.violation > b.violation; });
    // drop near-duplicates found from different descent seeds
    std::vector<ViolationHit> unique;
    for (const auto& h : hits) {
        bool dup = false;
        for (const auto& u : unique) {
            if (h.kind != u.kind) continue;
            if (h.kind == ViolationHit::Kind::ct_angle)
                dup = std::abs(h.theta - u.theta) < 1e-4;
            else
                dup = std::abs(h.triangle.x1 - u.triangle.x1) < 1e-4 &&
                      std::abs(h.triangle.x2 - u.triangle.x2) < 1e-4 &&
                      std::abs(h.triangle.y - u.triangle.y) < 1e-4;
            if (dup) break;
        }
        if (!dup) unique.push_back(h);
    }
    return unique;
}

double autocorrelation(const KappaSpectrum& spectrum, double r) {
    if (!(r >= 0.0)) fail(Status::range_error, "autocorrelation: r must be >= 0");
    const auto ts = spectrum.grid.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < spectrum.values.size(); ++i)
        if (spectrum.values[i] != 0.0) acc += spectrum.values[i] * omega2(ts[i] * r);
    return acc;
}

} // namespace udens
