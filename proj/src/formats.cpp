#include "formats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "bessel.hpp"
#include "error.hpp"

namespace udens {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

// json numbers print with up to 17 significant digits through this helper so
// serialization round-trips exactly
json jnum(double v) { return json(v); }

[[noreturn]] void parse_fail(const std::string& text, const nlohmann::json::exception& e,
                             std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    fail(Status::parse_error, "JSON parse error at line " + std::to_string(line) + ", column " +
                                  std::to_string(col) + ": " + e.what());
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(text, e, e.byte);
    }
}

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        fail(Status::parse_error, std::string("missing or non-numeric field '") + key + "'");
    return j.at(key).get<double>();
}

} // namespace

RunConfig config_from_json(const std::string& text) {
    const json j = parse(text);
    RunConfig c;
    try {
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            c.grid = GridSpec(require_number(g, "step"),
                              static_cast<int>(require_number(g, "count")));
        }
        if (j.contains("triangle_edge_policy"))
            c.edge_policy = edge_policy_from_string(j.at("triangle_edge_policy").get<std::string>());
        if (j.contains("c1r_triangles"))
            for (const auto& t : j.at("c1r_triangles"))
                c.triangles.push_back(
                    {require_number(t, "x1"), require_number(t, "x2"), require_number(t, "y")});
        if (j.contains("ct_angles"))
            for (const auto& t : j.at("ct_angles")) c.thetas.push_back(t.get<double>());
        if (j.contains("bracket")) {
            c.bracket_lo = j.at("bracket").at(0).get<double>();
            c.bracket_hi = j.at("bracket").at(1).get<double>();
        }
        if (j.contains("tolerance")) c.bisect_tol = j.at("tolerance").get<double>();
        if (j.contains("sample_step")) c.verify_sample_step = j.at("sample_step").get<double>();
        if (j.contains("max_rounds")) c.max_rounds = j.at("max_rounds").get<int>();
    } catch (const json::exception& e) {
        fail(Status::parse_error, std::string("bad run configuration: ") + e.what());
    }
    if (!(c.bracket_lo > 0.0) || !(c.bracket_lo < c.bracket_hi))
        fail(Status::invalid_argument, "bad run configuration: bracket must satisfy 0 < lo < hi");
    if (!(c.bisect_tol > 0.0) || !(c.verify_sample_step > 0.0))
        fail(Status::invalid_argument, "bad run configuration: tolerances must be positive");
    return c;
}

std::string config_to_json(const RunConfig& c) {
    json j;
    j["grid"] = {{"step", jnum(c.grid.step)}, {"count", c.grid.count}};
    j["triangle_edge_policy"] = to_string(c.edge_policy);
    j["c1r_triangles"] = json::array();
    for (const auto& t : c.triangles)
        j["c1r_triangles"].push_back({{"x1", jnum(t.x1)}, {"x2", jnum(t.x2)}, {"y", jnum(t.y)}});
    j["ct_angles"] = json::array();
    for (double th : c.thetas) j["ct_angles"].push_back(jnum(th));
    j["bracket"] = {jnum(c.bracket_lo), jnum(c.bracket_hi)};
    j["tolerance"] = jnum(c.bisect_tol);
    j["sample_step"] = jnum(c.verify_sample_step);
    j["max_rounds"] = c.max_rounds;
    return j.dump(2) + "\n";
}

WitnessCertificate witness_from_json(const std::string& text) {
    const json j = parse(text);
    WitnessCertificate cert;
    try {
        cert.v0 = require_number(j, "v0");
        cert.v1 = require_number(j, "v1");
        if (j.contains("graphs")) {
            for (const auto& g : j.at("graphs")) {
                WitnessGraphEntry e;
                const auto& t = g.at("triangle");
                TriangleSpec spec{require_number(t, "x1"), require_number(t, "x2"),
                                  require_number(t, "y")};
                e.policy = g.contains("edge_policy")
                               ? edge_policy_from_string(g.at("edge_policy").get<std::string>())
                               : EdgePolicy::complete;
                auto tri = build_triangle(spec, e.policy);
                e.graph = std::move(tri.graph);
                e.triangle = spec;
                e.alpha = static_cast<int>(require_number(g, "alpha"));
                e.weight = require_number(g, "weight");
                if (e.weight < 0.0)
                    fail(Status::invalid_argument, "witness: negative graph weight");
                cert.graphs.push_back(std::move(e));
            }
        }
        if (j.contains("angles")) {
            for (const auto& a : j.at("angles")) {
                WitnessAngleEntry e{require_number(a, "theta"), require_number(a, "weight")};
                if (e.weight < 0.0)
                    fail(Status::invalid_argument, "witness: negative angle weight");
                cert.angles.push_back(e);
            }
        }
        if (j.contains("reference_quadratic")) {
            const auto& q = j.at("reference_quadratic");
            cert.reference_quadratic = {{require_number(q, "b"), require_number(q, "c")}};
        }
    } catch (const json::exception& e) {
        fail(Status::parse_error, std::string("bad witness: ") + e.what());
    }
    cert.validate();  // cross-checks alpha against each rebuilt graph
    return cert;
}

std::string witness_to_json(const WitnessCertificate& cert) {
    json j;
    j["v0"] = jnum(cert.v0);
    j["v1"] = jnum(cert.v1);
    j["graphs"] = json::array();
    for (const auto& e : cert.graphs) {
        if (!e.triangle)
            fail(Status::invalid_argument,
                 "witness_to_json: only triangle-generated graphs are serializable");
        j["graphs"].push_back({{"triangle",
                                {{"x1", jnum(e.triangle->x1)},
                                 {"x2", jnum(e.triangle->x2)},
                                 {"y", jnum(e.triangle->y)}}},
                               {"edge_policy", to_string(e.policy)},
                               {"alpha", e.alpha},
                               {"weight", jnum(e.weight)}});
    }
    j["angles"] = json::array();
    for (const auto& e : cert.angles)
        j["angles"].push_back({{"theta", jnum(e.theta)}, {"weight", jnum(e.weight)}});
    if (cert.reference_quadratic)
        j["reference_quadratic"] = {{"b", jnum(cert.reference_quadratic->first)},
                                    {"c", jnum(cert.reference_quadratic->second)}};
    return j.dump(2) + "\n";
}

namespace {

json verification_to_json(const VerificationResult& v) {
    json j;
    j["verified"] = v.verified;
    j["w_at_zero"] = jnum(v.w_at_zero);
    j["checked_hi"] = jnum(v.checked_hi);
    j["sample_step"] = jnum(v.sample_step);
    j["lipschitz_constant"] = jnum(v.lipschitz_constant);
    j["tail_threshold"] = jnum(v.tail_threshold);
    j["worst_value"] = jnum(v.worst_value);
    j["worst_t"] = jnum(v.worst_t);
    j["violations"] = json::array();
    for (double t : v.violations) j["violations"].push_back(jnum(t));
    return j;
}

} // namespace

std::string bound_report_to_json(const BoundReport& report, const VerificationResult& ver,
                                 const GridSpec& grid) {
    json j;
    j["delta_upper"] = jnum(report.delta_upper);
    j["quadratic_b"] = jnum(report.quadratic_b);
    j["quadratic_c"] = jnum(report.quadratic_c);
    j["lp_value_at_bound"] = jnum(report.lp_value_at_bound);
    j["delta_star"] = jnum(report.delta_star);
    j["refinement_rounds"] = report.refinement_rounds;
    j["verified"] = report.verified;
    j["constraints"] = report.constraint_provenance;
    j["verification"] = verification_to_json(ver);
    j["grid"] = {{"step", jnum(grid.step)}, {"count", grid.count}};
    j["grid"]["extras"] = json::array();
    for (double t : grid.extras) j["grid"]["extras"].push_back(jnum(t));
    return j.dump(2) + "\n";
}

VerifyReport make_verify_report(const WitnessCertificate& cert, double sample_step) {
    VerifyReport rep;
    rep.verification = verify_nonneg(cert, sample_step);
    rep.bound = bound_from_witness(cert);
    if (cert.reference_quadratic) {
        rep.has_reference = true;
        rep.reference_b = cert.reference_quadratic->first;
        rep.reference_c = cert.reference_quadratic->second;
        rep.reference_delta = positive_quadratic_root(rep.reference_b, rep.reference_c);
    }
    return rep;
}

std::string verify_report_to_json(const VerifyReport& rep) {
    json j;
    j["verification"] = verification_to_json(rep.verification);
    j["bound"] = {{"delta", jnum(rep.bound.delta)},
                  {"b", jnum(rep.bound.b)},
                  {"c", jnum(rep.bound.c)}};
    if (rep.has_reference) {
        j["reference_quadratic"] = {{"b", jnum(rep.reference_b)},
                                    {"c", jnum(rep.reference_c)},
                                    {"delta", jnum(rep.reference_delta)},
                                    {"b_difference", jnum(rep.bound.b - rep.reference_b)},
                                    {"c_difference", jnum(rep.bound.c - rep.reference_c)}};
    }
    return j.dump(2) + "\n";
}

std::string spectrum_to_csv(const KappaSpectrum& spectrum) {
    if (spectrum.values.size() != spectrum.grid.size())
        fail(Status::invalid_argument, "spectrum_to_csv: value count does not match grid");
    const auto ts = spectrum.grid.values();
    std::string out;
    out.reserve(ts.size() * 24);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out += format_double(ts[i]);
        out += ',';
        out += format_double(spectrum.values[i]);
        out += '\n';
    }
    return out;
}

KappaSpectrum spectrum_from_csv(const std::string& text) {
    std::vector<std::pair<double, double>> entries;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double t, v;
        if (std::sscanf(line.c_str(), "%lf,%lf", &t, &v) != 2)
            fail(Status::parse_error,
                 "spectrum CSV: cannot parse line " + std::to_string(lineno) + ": '" + line + "'");
        entries.emplace_back(t, v);
    }
    if (entries.empty()) fail(Status::parse_error, "spectrum CSV: no data");
    if (!std::is_sorted(entries.begin(), entries.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; }))
        fail(Status::parse_error, "spectrum CSV: t values must be strictly increasing");
    if (entries.front().first != 0.0)
        fail(Status::parse_error, "spectrum CSV: first t value must be 0");

    // Reconstruct the grid: leading run of equally spaced values forms the
    // base grid, everything off the lattice becomes an extra point.
    KappaSpectrum sp;
    const double step = entries.size() > 1 ? entries[1].first - entries[0].first : 0.05;
    GridSpec grid(step > 0 ? step : 0.05, 1);
    std::vector<double> extras;
    int base_count = 1;
    for (std::size_t i = 1; i < entries.size(); ++i) {
        const double t = entries[i].first;
        const double k = std::round(t / grid.step);
        if (std::abs(t - k * grid.step) <= 1e-9 && k == base_count) {
            ++base_count;
        } else {
            extras.push_back(t);
        }
    }
    grid.count = base_count;
    for (double t : extras) grid.add_extra(t);
    if (grid.size() != entries.size())
        fail(Status::parse_error, "spectrum CSV: values do not form a grid plus extras");
    sp.grid = std::move(grid);
    const auto ts = sp.grid.values();
    sp.values.resize(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (std::abs(ts[i] - entries[i].first) > 1e-9)
            fail(Status::parse_error, "spectrum CSV: could not reconstruct the grid");
        sp.values[i] = entries[i].second;
    }
    sp.normalized = std::abs(sp.mass() - 1.0) <= 1e-9;
    return sp;
}

FigureSeries autocorrelation_series(const KappaSpectrum& spectrum, double r_max, double r_step) {
    if (!(r_max > 0.0) || !(r_step > 0.0))
        fail(Status::invalid_argument, "autocorrelation_series: bad range");
    FigureSeries out;
    const long n = static_cast<long>(std::round(r_max / r_step));
    out.r.reserve(n + 1);
    out.value.reserve(n + 1);
    for (long i = 0; i <= n; ++i) {
        const double r = i * r_step;
        out.r.push_back(r);
        out.value.push_back(autocorrelation(spectrum, r));
    }
    return out;
}

std::string series_to_csv(const FigureSeries& series) {
    std::string out;
    out.reserve(series.r.size() * 24);
    for (std::size_t i = 0; i < series.r.size(); ++i) {
        out += format_double(series.r[i]);
        out += ',';
        out += format_double(series.value[i]);
        out += '\n';
    }
    return out;
}

std::string series_to_svg(const FigureSeries& series) {
    if (series.r.empty()) fail(Status::invalid_argument, "series_to_svg: empty series");
    const double width = 840, height = 480;
    const double x0 = 60, x1 = 820, y0 = 440, y1 = 20;
    const double rmin = series.r.front(), rmax = series.r.back();
    double vmin = series.value[0], vmax = series.value[0];
    for (double v : series.value) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    const double pad = 0.05 * std::max(1e-12, vmax - vmin);
    vmin -= pad;
    vmax += pad;
    auto mapx = [&](double r) { return x0 + (r - rmin) / (rmax - rmin) * (x1 - x0); };
    auto mapy = [&](double v) { return y0 + (v - vmin) / (vmax - vmin) * (y1 - y0); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    svg << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    // axes: r axis at value 0 if visible, plus the frame
    svg << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";
    if (vmin < 0.0 && vmax > 0.0)
        svg << "  <line x1=\"" << x0 << "\" y1=\"" << mapy(0.0) << "\" x2=\"" << x1 << "\" y2=\""
            << mapy(0.0) << "\" stroke=\"#bbbbbb\"/>\n";
    svg << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series.r.size(); ++i) {
        if (i) svg << ' ';
        svg << mapx(series.r[i]) << ',' << mapy(series.value[i]);
    }
    svg << "\"/>\n</svg>\n";
    return svg.str();
}

namespace {

json graph_to_json(const UnitDistanceGraph& g) {
    json j;
    j["vertices"] = json::array();
    for (const auto& v : g.vertices) j["vertices"].push_back({jnum(v.x), jnum(v.y)});
    j["edges"] = json::array();
    for (const auto& [a, b] : g.edges) j["edges"].push_back({a, b});
    j["independence_number"] = independence_number(g);
    const auto triples = independent_subsets(g, independence_number(g));
    j["maximum_independent_sets"] = json::array();
    for (const auto& s : triples) j["maximum_independent_sets"].push_back(s);
    j["min_separation"] = jnum(g.min_separation());
    return j;
}

} // namespace

std::string ct_graphs_to_json(double theta) {
    const auto pair = build_ct_graphs(theta);
    json j;
    j["theta"] = jnum(theta);
    j["g1"] = graph_to_json(pair.g1);
    j["g2"] = graph_to_json(pair.g2);
    return j.dump(2) + "\n";
}

std::string triangle_to_json(const TriangleSpec& spec, EdgePolicy policy) {
    const auto tri = build_triangle(spec, policy);
    json j;
    j["triangle"] = {{"x1", jnum(spec.x1)}, {"x2", jnum(spec.x2)}, {"y", jnum(spec.y)}};
    j["edge_policy"] = to_string(policy);
    j["graph"] = graph_to_json(tri.graph);
    j["alpha"] = tri.alpha;
    if (tri.graph.min_separation() < kSeparationRule)
        j["separation_warning"] =
            "configuration has a distance or norm below 0.1; numerical margins may degrade";
    return j.dump(2) + "\n";
}

std::string violations_to_json(const std::vector<ViolationHit>& hits) {
    json j = json::array();
    for (const auto& h : hits) {
        json e;
        e["kind"] = h.kind == ViolationHit::Kind::ct_angle ? "ct_angle" : "c1r_triangle";
        if (h.kind == ViolationHit::Kind::ct_angle)
            e["theta"] = jnum(h.theta);
        else
            e["triangle"] = {{"x1", jnum(h.triangle.x1)},
                             {"x2", jnum(h.triangle.x2)},
                             {"y", jnum(h.triangle.y)}};
        e["violation"] = jnum(h.violation);
        e["row_value"] = jnum(h.row_value);
        e["rhs"] = jnum(h.rhs);
        j.push_back(e);
    }
    return j.dump(2) + "\n";
}

} // namespace udens
