#pragma once

#include <string>

#include "pipeline.hpp"
#include "witness.hpp"

namespace udens {

// All floats are serialized with 17 significant digits so every value
// round-trips bit-exactly; data files carry no timestamps.

std::string format_double(double v);

// ---- run configuration ----
// {"grid": {"step": 0.05, "count": 12001},
//  "c1r_triangles": [{"x1": ..., "x2": ..., "y": ...}, ...],
//  "ct_angles": [...],
//  "triangle_edge_policy": "complete",
//  optional: "bracket": [lo, hi], "tolerance": ..., "sample_step": ...,
//            "max_rounds": ...}
RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& config);

// ---- witness certificates ----
// {"v0": ..., "v1": ...,
//  "graphs": [{"triangle": {"x1","x2","y"}, "edge_policy": "complete",
//              "alpha": 1, "weight": ...}, ...],
//  "angles": [{"theta": ..., "weight": ...}, ...],
//  optional: "reference_quadratic": {"b": ..., "c": ...}}
// Loading rebuilds each graph from its parameters and cross-checks the stored
// alpha; negative block weights are rejected.
WitnessCertificate witness_from_json(const std::string& text);
std::string witness_to_json(const WitnessCertificate& cert);

// ---- reports ----
std::string bound_report_to_json(const BoundReport& report, const VerificationResult& ver,
                                 const GridSpec& grid);

struct VerifyReport {
    VerificationResult verification;
    QuadraticBound bound;
    bool has_reference = false;
    double reference_b = 0.0;
    double reference_c = 0.0;
    double reference_delta = 0.0;
};

VerifyReport make_verify_report(const WitnessCertificate& cert, double sample_step);
std::string verify_report_to_json(const VerifyReport& report);

// ---- series ----
// Spectrum CSV: one "t,kappa" pair per line, sorted by t, no header.
std::string spectrum_to_csv(const KappaSpectrum& spectrum);
KappaSpectrum spectrum_from_csv(const std::string& text);

struct FigureSeries {
    std::vector<double> r;
    std::vector<double> value;
};

FigureSeries autocorrelation_series(const KappaSpectrum& spectrum, double r_max = 3.0,
                                    double r_step = 0.005);
std::string series_to_csv(const FigureSeries& series);
std::string series_to_svg(const FigureSeries& series);

// ---- graph dumps ----
std::string ct_graphs_to_json(double theta);
std::string triangle_to_json(const TriangleSpec& spec, EdgePolicy policy);
std::string violations_to_json(const std::vector<ViolationHit>& hits);

} // namespace udens
