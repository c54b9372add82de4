#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "formats.hpp"
#include "reference_data.hpp"

using namespace udens;

#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))

namespace {

std::string reference_witness_json() {
    WitnessCertificate cert;
    cert.v0 = refdata::kWitnessV0;
    cert.v1 = refdata::kWitnessV1;
    for (int i = 0; i < 10; ++i) {
        WitnessGraphEntry e;
        auto tri = build_triangle(TriangleSpec{refdata::kTriangles[i][0],
                                               refdata::kTriangles[i][1],
                                               refdata::kTriangles[i][2]});
        e.graph = tri.graph;
        e.alpha = tri.alpha;
        e.triangle = tri.spec;
        e.policy = tri.policy;
        e.weight = refdata::kTriangleWeights[i];
        cert.graphs.push_back(std::move(e));
    }
    for (int i = 0; i < 5; ++i)
        cert.angles.push_back({refdata::kAngles[i], refdata::kAngleWeights[i]});
    cert.reference_quadratic = {{refdata::kReferenceQuadB, refdata::kReferenceQuadC}};
    return witness_to_json(cert);
}

} // namespace

TEST_CASE("witness JSON round trip is byte-stable") {
    const std::string first = reference_witness_json();
    const auto cert = witness_from_json(first);
    const std::string second = witness_to_json(cert);
    CHECK(first == second);
    const std::string third = witness_to_json(witness_from_json(second));
    CHECK(second == third);
}

TEST_CASE("witness JSON validation") {
    SUBCASE("negative block weight is rejected") {
        const std::string text = R"({"v0": 1.0, "v1": 0.0,
            "graphs": [], "angles": [{"theta": 1.851176, "weight": -0.1}]})";
        CHECK_THROWS_AS(witness_from_json(text), Error);
    }
    SUBCASE("alpha contradicting the rebuilt graph is rejected") {
        const std::string text = R"({"v0": 1.0, "v1": 0.0,
            "graphs": [{"triangle": {"x1": 0.3, "x2": 0.7, "y": 0.2},
                        "edge_policy": "complete", "alpha": 2, "weight": 0.5}],
            "angles": []})";
        CHECK_THROWS_AS(witness_from_json(text), Error);
    }
    SUBCASE("malformed JSON carries line/column diagnostics") {
        try {
            witness_from_json("{\n  \"v0\": 1.0,\n  oops\n}");
            FAIL("expected a parse error");
        } catch (const Error& e) {
            CHECK(e.code() == Status::parse_error);
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
    SUBCASE("missing field is a parse error") {
        CHECK_THROWS_AS(witness_from_json(R"({"v1": 0.0})"), Error);
    }
}

TEST_CASE("config JSON") {
    const std::string text = R"({
        "grid": {"step": 0.05, "count": 201},
        "c1r_triangles": [{"x1": 0.3, "x2": 0.7, "y": 0.2}],
        "ct_angles": [1.851176],
        "triangle_edge_policy": "unit",
        "bracket": [0.21, 0.34],
        "tolerance": 1e-5
    })";
    const auto c = config_from_json(text);
    CHECK(c.grid.step == 0.05);
    CHECK(c.grid.count == 201);
    CHECK(c.triangles.size() == 1);
    CHECK(c.thetas.size() == 1);
    CHECK(c.edge_policy == EdgePolicy::unit);
    CHECK(c.bracket_lo == 0.21);
    CHECK(c.bisect_tol == 1e-5);

    // round trip through the emitter
    const auto c2 = config_from_json(config_to_json(c));
    CHECK(c2.grid.count == c.grid.count);
    CHECK(c2.triangles.size() == c.triangles.size());
    CHECK(c2.edge_policy == c.edge_policy);

    CHECK_THROWS_AS(config_from_json("{\"grid\": {\"step\": -1, \"count\": 10}}"), Error);
    CHECK_THROWS_AS(config_from_json("not json"), Error);
}

TEST_CASE("spectrum CSV round trip is bitwise") {
    KappaSpectrum sp;
    sp.grid = GridSpec(0.05, 200);
    sp.grid.add_extra(3.8317059702075123);
    sp.values.assign(sp.grid.size(), 0.0);
    sp.values[0] = 0.28711937124529927;
    // the extra sits between base points 76 and 77 in sorted order
    const auto ts = sp.grid.values();
    std::size_t extra_index = 0;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] == 3.8317059702075123) extra_index = i;
    sp.values[extra_index] = 1.0 - sp.values[0];
    sp.normalized = true;

    const std::string csv = spectrum_to_csv(sp);
    const auto back = spectrum_from_csv(csv);
    REQUIRE(back.values.size() == sp.values.size());
    const auto ts2 = back.grid.values();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(ts2[i] == ts[i]);
        CHECK(back.values[i] == sp.values[i]);
    }
    CHECK(back.normalized);

    CHECK_THROWS_AS(spectrum_from_csv(""), Error);
    CHECK_THROWS_AS(spectrum_from_csv("0,1\nbogus\n"), Error);
    CHECK_THROWS_AS(spectrum_from_csv("1,0.5\n2,0.5\n"), Error);  // must start at t = 0
}

TEST_CASE("autocorrelation series and SVG") {
    KappaSpectrum sp;
    sp.grid = GridSpec(0.05, 200);
    sp.grid.add_extra(3.8317059702075123);
    sp.values.assign(sp.grid.size(), 0.0);
    sp.values[0] = 0.28711937124529927;
    const auto ts = sp.grid.values();
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] == 3.8317059702075123) sp.values[i] = 1.0 - sp.values[0];
    sp.normalized = true;

    const auto series = autocorrelation_series(sp, 3.0, 0.005);
    REQUIRE(series.r.size() == 601);
    CHECK_NEAR(series.value[0], 1.0, 1e-12);
    CHECK_NEAR(series.value[200], 0.0, 1e-9);  // r = 1: annihilation restated
    const std::string csv = series_to_csv(series);
    CHECK(csv.substr(0, 4) == "0,1\n");

    const std::string svg = series_to_svg(series);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("viewBox") != std::string::npos);
    // self-contained: no external references
    CHECK(svg.find("href") == std::string::npos);
}

TEST_CASE("verify report carries the reference quadratic comparison") {
    const auto cert = witness_from_json(reference_witness_json());
    const auto rep = make_verify_report(cert, 1e-3);
    CHECK_FALSE(rep.verification.verified);  // the bundled ledger does not verify as printed
    CHECK_NEAR(rep.bound.c, 1.893645, 2e-6);
    CHECK_NEAR(rep.bound.b, -5.295057, 1e-3);
    REQUIRE(rep.has_reference);
    CHECK_NEAR(rep.reference_delta, 0.254416, 1e-6);
    CHECK(std::abs(rep.bound.b - rep.reference_b) > 1e-2);
    const auto json_text = verify_report_to_json(rep);
    CHECK(json_text.find("reference_quadratic") != std::string::npos);
    CHECK(json_text.find("b_difference") != std::string::npos);
}

TEST_CASE("graph dumps") {
    const auto g = ct_graphs_to_json(1.851176);
    CHECK(g.find("\"independence_number\": 3") != std::string::npos);
    const auto t = triangle_to_json(TriangleSpec{0.3, 0.7, 0.2}, EdgePolicy::complete);
    CHECK(t.find("\"alpha\": 1") != std::string::npos);
    const auto warn = triangle_to_json(TriangleSpec{0.01, 0.7, 0.2}, EdgePolicy::complete);
    CHECK(warn.find("separation_warning") != std::string::npos);
}
