#include "udens.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "bessel.hpp"
#include "error.hpp"
#include "formats.hpp"
#include "pipeline.hpp"
#include "witness.hpp"

using namespace udens;

struct udens_config {
    RunConfig config;
};

struct udens_result {
    SolveOutcome outcome;
};

struct udens_witness {
    WitnessCertificate cert;
};

struct udens_spectrum {
    KappaSpectrum spectrum;
};

namespace {

thread_local std::string g_last_error;

int set_error(Status code, const char* what) {
    g_last_error = what;
    return static_cast<int>(code);
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return UDENS_OK;
    } catch (const Error& e) {
        return set_error(e.code(), e.what());
    } catch (const std::bad_alloc& e) {
        return set_error(Status::internal_error, "out of memory");
    } catch (const std::exception& e) {
        return set_error(Status::internal_error, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char* what) {
    if (!ok) fail(Status::invalid_argument, what);
}

} // namespace

extern "C" {

const char* udens_status_name(int status) {
    switch (status) {
        case UDENS_OK: return "ok";
        case UDENS_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case UDENS_ERR_PARSE: return "parse_error";
        case UDENS_ERR_RANGE: return "range_error";
        case UDENS_ERR_LP: return "lp_failure";
        case UDENS_ERR_VERIFY: return "verify_failure";
        case UDENS_ERR_IO: return "io_error";
        case UDENS_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* udens_last_error(void) { return g_last_error.c_str(); }

void udens_string_free(char* s) { delete[] s; }

int udens_config_create(udens_config** out) {
    return guarded([&] {
        require(out != nullptr, "out must not be null");
        *out = new udens_config{};
    });
}

int udens_config_parse(const char* json_text, udens_config** out) {
    return guarded([&] {
        require(json_text != nullptr && out != nullptr, "arguments must not be null");
        *out = new udens_config{config_from_json(json_text)};
    });
}

void udens_config_free(udens_config* config) { delete config; }

int udens_config_set_grid(udens_config* config, double step, int count) {
    return guarded([&] {
        require(config != nullptr, "config must not be null");
        config->config.grid = GridSpec(step, count);
    });
}

int udens_config_set_bracket(udens_config* config, double lo, double hi) {
    return guarded([&] {
        require(config != nullptr, "config must not be null");
        require(lo > 0.0 && lo < hi, "bracket must satisfy 0 < lo < hi");
        config->config.bracket_lo = lo;
        config->config.bracket_hi = hi;
    });
}

int udens_config_set_tolerance(udens_config* config, double tol) {
    return guarded([&] {
        require(config != nullptr, "config must not be null");
        require(tol > 0.0, "tolerance must be positive");
        config->config.bisect_tol = tol;
    });
}

int udens_config_set_sample_step(udens_config* config, double step) {
    return guarded([&] {
        require(config != nullptr, "config must not be null");
        require(step > 0.0, "sample step must be positive");
        config->config.verify_sample_step = step;
    });
}

int udens_config_set_edge_policy(udens_config* config, const char* policy) {
    return guarded([&] {
        require(config != nullptr && policy != nullptr, "arguments must not be null");
        config->config.edge_policy = edge_policy_from_string(policy);
    });
}

int udens_config_add_triangle(udens_config* config, double x1, double x2, double y) {
    return guarded([&] {
        require(config != nullptr, "config must not be null");
        build_triangle(TriangleSpec{x1, x2, y}, config->config.edge_policy);  // validates
        config->config.triangles.push_back(TriangleSpec{x1, x2, y});
    });
}

int udens_config_add_angle(udens_config* config, double theta) {
    return guarded([&] {
        require(config != nullptr, "config must not be null");
        build_ct_graphs(theta);  // validates
        config->config.thetas.push_back(theta);
    });
}

int udens_config_to_json(const udens_config* config, char** json_out) {
    return guarded([&] {
        require(config != nullptr && json_out != nullptr, "arguments must not be null");
        *json_out = dup_string(config_to_json(config->config));
    });
}

int udens_solve(const udens_config* config, udens_result** out) {
    return guarded([&] {
        require(config != nullptr && out != nullptr, "arguments must not be null");
        *out = new udens_result{refine_until_verified(config->config)};
    });
}

void udens_result_free(udens_result* result) { delete result; }

int udens_result_verified(const udens_result* result, int* verified) {
    return guarded([&] {
        require(result != nullptr && verified != nullptr, "arguments must not be null");
        *verified = result->outcome.report.verified ? 1 : 0;
    });
}

int udens_result_delta_upper(const udens_result* result, double* delta) {
    return guarded([&] {
        require(result != nullptr && delta != nullptr, "arguments must not be null");
        *delta = result->outcome.report.delta_upper;
    });
}

int udens_result_bound_json(const udens_result* result, char** json_out) {
    return guarded([&] {
        require(result != nullptr && json_out != nullptr, "arguments must not be null");
        *json_out = dup_string(bound_report_to_json(result->outcome.report,
                                                    result->outcome.verification,
                                                    result->outcome.final_grid));
    });
}

int udens_result_spectrum_csv(const udens_result* result, char** csv_out) {
    return guarded([&] {
        require(result != nullptr && csv_out != nullptr, "arguments must not be null");
        *csv_out = dup_string(spectrum_to_csv(result->outcome.spectrum));
    });
}

int udens_result_witness_json(const udens_result* result, char** json_out) {
    return guarded([&] {
        require(result != nullptr && json_out != nullptr, "arguments must not be null");
        *json_out = dup_string(witness_to_json(result->outcome.witness));
    });
}

int udens_witness_parse(const char* json_text, udens_witness** out) {
    return guarded([&] {
        require(json_text != nullptr && out != nullptr, "arguments must not be null");
        *out = new udens_witness{witness_from_json(json_text)};
    });
}

void udens_witness_free(udens_witness* witness) { delete witness; }

int udens_witness_verify(const udens_witness* witness, double sample_step,
                         char** report_json_out, int* verified) {
    return guarded([&] {
        require(witness != nullptr, "witness must not be null");
        const auto rep = make_verify_report(witness->cert, sample_step > 0 ? sample_step : 1e-3);
        if (report_json_out) *report_json_out = dup_string(verify_report_to_json(rep));
        if (verified) *verified = rep.verification.verified ? 1 : 0;
    });
}

int udens_witness_bound(const udens_witness* witness, double* delta, double* b, double* c) {
    return guarded([&] {
        require(witness != nullptr, "witness must not be null");
        const auto q = bound_from_witness(witness->cert);
        if (delta) *delta = q.delta;
        if (b) *b = q.b;
        if (c) *c = q.c;
    });
}

int udens_spectrum_parse_csv(const char* csv_text, udens_spectrum** out) {
    return guarded([&] {
        require(csv_text != nullptr && out != nullptr, "arguments must not be null");
        *out = new udens_spectrum{spectrum_from_csv(csv_text)};
    });
}

void udens_spectrum_free(udens_spectrum* spectrum) { delete spectrum; }

int udens_spectrum_normalized(const udens_spectrum* spectrum, int* normalized) {
    return guarded([&] {
        require(spectrum != nullptr && normalized != nullptr, "arguments must not be null");
        *normalized = spectrum->spectrum.normalized ? 1 : 0;
    });
}

int udens_autocorr_csv(const udens_spectrum* spectrum, double r_max, double r_step,
                       char** csv_out) {
    return guarded([&] {
        require(spectrum != nullptr && csv_out != nullptr, "arguments must not be null");
        const auto series = autocorrelation_series(spectrum->spectrum, r_max, r_step);
        *csv_out = dup_string(series_to_csv(series));
    });
}

int udens_autocorr_svg(const udens_spectrum* spectrum, double r_max, double r_step,
                       char** svg_out) {
    return guarded([&] {
        require(spectrum != nullptr && svg_out != nullptr, "arguments must not be null");
        const auto series = autocorrelation_series(spectrum->spectrum, r_max, r_step);
        *svg_out = dup_string(series_to_svg(series));
    });
}

int udens_search(const udens_spectrum* spectrum, const char* params_json, char** hits_json_out) {
    return guarded([&] {
        require(spectrum != nullptr && hits_json_out != nullptr, "arguments must not be null");
        ThetaScanRange theta;
        std::vector<TriangleScanBox> boxes{TriangleScanBox{}};
        EdgePolicy policy = EdgePolicy::complete;
        if (params_json != nullptr && params_json[0] != '\0') {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(params_json);
            } catch (const nlohmann::json::parse_error& e) {
                fail(Status::parse_error, std::string("bad search parameters: ") + e.what());
            }
            try {
                if (j.contains("theta")) {
                    theta.lo = j["theta"].value("lo", theta.lo);
                    theta.hi = j["theta"].value("hi", theta.hi);
                    theta.step = j["theta"].value("step", theta.step);
                }
                if (j.contains("boxes")) {
                    boxes.clear();
                    for (const auto& b : j["boxes"]) {
                        TriangleScanBox box;
                        box.x1_lo = b.value("x1_lo", box.x1_lo);
                        box.x1_hi = b.value("x1_hi", box.x1_hi);
                        box.x2_lo = b.value("x2_lo", box.x2_lo);
                        box.x2_hi = b.value("x2_hi", box.x2_hi);
                        box.y_lo = b.value("y_lo", box.y_lo);
                        box.y_hi = b.value("y_hi", box.y_hi);
                        box.step = b.value("step", box.step);
                        boxes.push_back(box);
                    }
                }
                if (j.contains("edge_policy"))
                    policy = edge_policy_from_string(j["edge_policy"].get<std::string>());
            } catch (const nlohmann::json::exception& e) {
                fail(Status::parse_error, std::string("bad search parameters: ") + e.what());
            }
        }
        const auto hits = find_violated_configs(spectrum->spectrum, theta, boxes, policy);
        *hits_json_out = dup_string(violations_to_json(hits));
    });
}

int udens_bessel_j0(double x, double* value, double* abs_error_bound) {
    return guarded([&] {
        require(value != nullptr, "value must not be null");
        const auto e = omega2_eval(x);
        *value = e.value;
        if (abs_error_bound) *abs_error_bound = e.abs_error_bound;
    });
}

int udens_bessel_j0_deriv(double x, double* value) {
    return guarded([&] {
        require(value != nullptr, "value must not be null");
        *value = omega2_deriv(x);
    });
}

int udens_ct_graphs_json(double theta, char** json_out) {
    return guarded([&] {
        require(json_out != nullptr, "json_out must not be null");
        *json_out = dup_string(ct_graphs_to_json(theta));
    });
}

int udens_triangle_json(double x1, double x2, double y, const char* edge_policy,
                        char** json_out) {
    return guarded([&] {
        require(json_out != nullptr, "json_out must not be null");
        const EdgePolicy policy =
            edge_policy ? edge_policy_from_string(edge_policy) : EdgePolicy::complete;
        *json_out = dup_string(triangle_to_json(TriangleSpec{x1, x2, y}, policy));
    });
}

} // extern "C"
