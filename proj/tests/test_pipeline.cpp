#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bessel.hpp"
#include "error.hpp"
#include "oracle_bessel.hpp"
#include "pipeline.hpp"
#include "reference_data.hpp"

using namespace udens;

#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))

namespace {

RowSet cs_only() {
    RowSet rows;
    rows.push_back({row_cs(), std::nullopt, std::nullopt});
    return rows;
}

RowSet cs_c0() {
    auto rows = cs_only();
    rows.push_back({row_c0(), std::nullopt, std::nullopt});
    return rows;
}

RunConfig full_config() {
    RunConfig c;
    for (const auto& t : refdata::kTriangles) c.triangles.push_back({t[0], t[1], t[2]});
    for (double th : refdata::kAngles) c.thetas.push_back(th);
    return c;
}

// Continuum optimum of the two-row problem: -m/(1-m) with m = min J0,
// computed from the long-double series oracle.
double baseline_oracle() {
    long double am, mv;
    oracle::j0_min_scan(2.0L, 6.0L, &am, &mv);
    return static_cast<double>(-mv / (1.0L - mv));
}

} // namespace

TEST_CASE("lp_value") {
    const GridSpec grid;
    SUBCASE("total-mass row alone puts everything at t = 0") {
        const auto r = lp_value(0.25, cs_only(), grid);
        CHECK_NEAR(r.s, 1.0, 1e-12);
    }
    SUBCASE("two-row problem lands within 5e-4 of the continuum optimum") {
        const auto r = lp_value(0.25, cs_c0(), grid);
        CHECK_NEAR(r.s, baseline_oracle(), 5e-4);
    }
    SUBCASE("delta must be positive") {
        CHECK_THROWS_AS(lp_value(0.0, cs_only(), grid), Error);
    }
}

TEST_CASE("lp_value is non-increasing in delta on the full row set") {
    const auto config = full_config();
    const auto rows = build_rows(config);
    double prev = 1e9;
    for (double d : {0.20, 0.23, 0.25, 0.252}) {
        const auto r = lp_value(d, rows, config.grid);
        CHECK(r.s <= prev + 1e-9);
        prev = r.s;
    }
}

TEST_CASE("removing a constraint row never decreases the optimum") {
    auto config = full_config();
    const auto rows = build_rows(config);
    const double full = lp_value(0.24, rows, config.grid).s;
    for (std::size_t drop = 2; drop < rows.size(); ++drop) {
        RowSet fewer;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != drop) fewer.push_back(rows[i]);
        CHECK(lp_value(0.24, fewer, config.grid).s >= full - 1e-9);
    }
}

TEST_CASE("bisect_delta") {
    const GridSpec grid;
    SUBCASE("two-row problem: s is constant, the root is s itself") {
        const auto r = bisect_delta(cs_c0(), grid, 0.20, 0.35, 1e-6);
        CHECK(r.fixed_point);
        CHECK_NEAR(r.delta_star, baseline_oracle(), 5e-4);
    }
    SUBCASE("coarse tolerance needs at most 4 midpoint solves") {
        const auto r = bisect_delta(cs_c0(), grid, 0.20, 0.35, 1e-2);
        CHECK(r.midpoint_solves <= 4);
    }
    SUBCASE("bracket that misses the root is rejected loudly") {
        CHECK_THROWS_AS(bisect_delta(cs_c0(), grid, 0.30, 0.35, 1e-6), Error);
    }
}

TEST_CASE("witness_from_dual") {
    const GridSpec grid;
    SUBCASE("two-row dual reproduces the hand-solved multipliers") {
        const auto r = bisect_delta(cs_c0(), grid, 0.20, 0.35, 1e-6);
        const auto cert = witness_from_dual(r.solution, cs_c0());
        // v0 = -m/(1-m), v1 = 1/(1-m) up to the grid offset in m.
        CHECK_NEAR(cert.v0, 0.287119, 5e-4);
        CHECK_NEAR(cert.v1, 0.712881, 5e-4);
        CHECK_NEAR(cert.v0 + cert.v1, 1.0, 1e-9);  // W(0) = 1 binds
        CHECK(cert.graphs.empty());
        CHECK(cert.angles.empty());
        // dual feasibility restated: W >= 0 on every grid point
        for (double t : grid.values()) CHECK(eval_W(cert, t) >= -1e-8);
    }
    SUBCASE("mass row alone gives the constant witness") {
        const auto r = bisect_delta(cs_only(), grid, 0.20, 1.5, 1e-6);
        const auto cert = witness_from_dual(r.solution, cs_only());
        CHECK_NEAR(cert.v0, 1.0, 1e-10);
        CHECK(eval_W(cert, 17.3) == cert.v0);
    }
}

TEST_CASE("full row set: inequality duals are nonnegative after sign normalization") {
    const auto config = full_config();
    const auto rows = build_rows(config);
    const auto r = lp_value(0.24, rows, config.grid);
    REQUIRE(r.solution.duals.size() == 17);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double y = r.solution.duals[i];
        const double w = rows[i].row.sense == Sense::ge ? -y : y;
        if (rows[i].row.sense != Sense::eq) CHECK(w >= -1e-9);
    }
    CHECK_NOTHROW(witness_from_dual(r.solution, rows));
}

TEST_CASE("refine_until_verified on the two-row baseline") {
    RunConfig config;  // no triangles, no angles
    const auto out = refine_until_verified(config);
    CHECK(out.report.verified);
    CHECK(out.report.refinement_rounds <= 2);
    CHECK_NEAR(out.report.delta_upper, baseline_oracle(), 5e-4);
    // quadratic degenerates to delta = v0
    CHECK(out.report.quadratic_c == 0.0);
    CHECK_NEAR(out.report.delta_upper, out.witness.v0, 1e-12);
    // bound dominance: the verified bound can only be weaker than the grid one
    CHECK(out.report.delta_upper >= out.report.delta_star - 1e-6);

    // spectrum invariants
    out.spectrum.validate();
    CHECK(out.spectrum.normalized);
    CHECK(std::abs(out.spectrum.annihilation_residual()) <= 1e-9);

    SUBCASE("a grid already containing the witness minimum verifies in one round") {
        RunConfig again;
        again.grid = out.final_grid;
        const auto out2 = refine_until_verified(again);
        CHECK(out2.report.verified);
        CHECK(out2.report.refinement_rounds == 1);
    }
}

TEST_CASE("find_violated_configs") {
    SUBCASE("all mass at t = 0 satisfies the correlation rows") {
        KappaSpectrum sp;
        sp.grid = GridSpec(0.05, 201);
        sp.values.assign(sp.grid.size(), 0.0);
        sp.values[0] = 1.0;
        sp.normalized = true;
        // kappa(0) = 1: CT right-hand side 5 - 1/1 = 4, row value 14 >= 4.
        const auto hits = find_violated_configs(sp, ThetaScanRange{1.80, 2.00, 1e-3}, {});
        CHECK(hits.empty());
    }
    SUBCASE("baseline-optimal spectrum violates bundled angles and triangles") {
        RunConfig config;
        const auto base = refine_until_verified(config);
        REQUIRE(base.report.verified);

        // every bundled angle's row is violated under the baseline spectrum
        const auto sp = base.spectrum;
        const auto ts = sp.grid.values();
        const double delta = sp.values[0];
        for (double th : refdata::kAngles) {
            const auto row = row_ct(th);
            double val = 0.0;
            for (std::size_t i = 0; i < sp.values.size(); ++i)
                if (sp.values[i] > 0.0) val += sp.values[i] * row.termset.eval(ts[i]);
            CHECK(val < row.rhs_at(delta));
        }

        // the search finds angle and triangle violations, sorted by magnitude
        const auto hits = find_violated_configs(sp, ThetaScanRange{1.8, 2.0, 1e-3},
                                                {TriangleScanBox{-0.6, 0.8, -0.4, 0.8, 0.1, 0.6, 0.1}});
        REQUIRE_FALSE(hits.empty());
        for (std::size_t i = 1; i < hits.size(); ++i)
            CHECK(hits[i - 1].violation >= hits[i].violation);
        bool has_angle = false, has_triangle = false;
        for (const auto& h : hits) {
            has_angle = has_angle || h.kind == ViolationHit::Kind::ct_angle;
            has_triangle = has_triangle || h.kind == ViolationHit::Kind::c1r_triangle;
        }
        CHECK(has_angle);
        CHECK(has_triangle);
    }
}

TEST_CASE("autocorrelation") {
    SUBCASE("spectrum with mass only at t = 1 vanishes at the first zero") {
        KappaSpectrum sp;
        sp.grid = GridSpec(1.0, 2);  // t = 0, 1
        sp.values = {0.0, 1.0};
        CHECK_NEAR(autocorrelation(sp, 2.404825557695773), 0.0, 1e-10);
        CHECK_NEAR(autocorrelation(sp, 0.0), 1.0, 1e-15);
    }
    SUBCASE("baseline spectrum: value 1 at r = 0, zero at r = 1, bounded by 1") {
        RunConfig config;
        const auto out = refine_until_verified(config);
        CHECK_NEAR(autocorrelation(out.spectrum, 0.0), 1.0, 1e-9);
        CHECK_NEAR(autocorrelation(out.spectrum, 1.0), 0.0, 1e-9);
        for (double r = 0.0; r <= 3.0; r += 0.037)
            CHECK(std::abs(autocorrelation(out.spectrum, r)) <= 1.0 + 1e-9);
    }
}

TEST_CASE("spectrum validation") {
    KappaSpectrum sp;
    sp.grid = GridSpec(0.05, 3);
    sp.values = {0.5, 0.25, 0.25};
    CHECK_NOTHROW(sp.validate());
    sp.values[1] = -0.25;
    CHECK_THROWS_AS(sp.validate(), Error);
    sp.values = {0.5, 0.25};
    CHECK_THROWS_AS(sp.validate(), Error);
    sp.values = {0.5, 0.25, 0.2};
    CHECK_THROWS_AS(sp.validate(), Error);
}
