#include "constraints.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bessel.hpp"
#include "error.hpp"

namespace udens {

void TermSet::add(double distance, double weight) {
    if (!(distance >= 0.0) || !std::isfinite(distance) || !std::isfinite(weight))
        fail(Status::invalid_argument, "TermSet::add: bad term");
    if (distance <= kDistanceMergeTol) {
        constant += weight;
        return;
    }
    auto it = std::lower_bound(terms.begin(), terms.end(), distance - kDistanceMergeTol,
                               [](const auto& t, double d) { return t.first < d; });
    if (it != terms.end() && std::abs(it->first - distance) <= kDistanceMergeTol) {
        it->second += weight;
        return;
    }
    terms.insert(it, {distance, weight});
}

double TermSet::eval(double t) const {
    if (!(t >= 0.0)) fail(Status::range_error, "TermSet::eval: t must be >= 0");
    double acc = constant;
    for (const auto& [d, w] : terms) acc += w * omega2(t * d);
    return acc;
}

double TermSet::value_at_zero() const {
    double acc = constant;
    for (const auto& [d, w] : terms) acc += w;
    return acc;
}

double TermSet::abs_weight_sum() const {
    double acc = 0.0;
    for (const auto& [d, w] : terms) acc += std::abs(w);
    return acc;
}

double TermSet::min_distance() const {
    return terms.empty() ? std::numeric_limits<double>::infinity() : terms.front().first;
}

double TermSet::lipschitz_bound() const {
    double acc = 0.0;
    for (const auto& [d, w] : terms) acc += std::abs(w) * d;
    return kMaxAbsJ0Deriv * acc;
}

const char* to_string(RowKind k) {
    switch (k) {
        case RowKind::CS: return "CS";
        case RowKind::C0: return "C0";
        case RowKind::C1R: return "C1R";
        case RowKind::CT: return "CT";
    }
    return "?";
}

const char* to_string(Sense s) {
    switch (s) {
        case Sense::le: return "<=";
        case Sense::eq: return "=";
        case Sense::ge: return ">=";
    }
    return "?";
}

ConstraintRow row_cs() {
    ConstraintRow row;
    row.kind = RowKind::CS;
    row.termset.constant = 1.0;
    row.sense = Sense::eq;
    row.rhs_const = 1.0;
    row.provenance = "total mass";
    return row;
}

ConstraintRow row_c0() {
    ConstraintRow row;
    row.kind = RowKind::C0;
    row.termset.add(1.0, 1.0);
    row.sense = Sense::eq;
    row.rhs_const = 0.0;
    row.provenance = "unit distance";
    row.positive_source_terms = 1;
    return row;
}

ConstraintRow row_c1r(const UnitDistanceGraph& g, std::string provenance) {
    if (g.size() == 0) fail(Status::invalid_argument, "row_c1r: empty graph");
    ConstraintRow row;
    row.kind = RowKind::C1R;
    for (const auto& v : g.vertices) {
        const double nv = norm(v);
        row.termset.add(nv, 1.0);
        if (nv > kDistanceMergeTol) ++row.positive_source_terms;
    }
    for (const auto& [i, j] : g.edges) {
        row.termset.add(dist(g.vertices[i], g.vertices[j]), -1.0);
        ++row.negative_source_terms;
    }
    row.sense = Sense::le;
    row.rhs_const = static_cast<double>(independence_number(g));
    row.provenance = provenance.empty() ? "graph" : std::move(provenance);
    return row;
}

ConstraintRow row_c1r(const TriangleGraph& t) {
    auto row = row_c1r(t.graph, t.spec.describe() + " edges=" + to_string(t.policy));
    row.rhs_const = static_cast<double>(t.alpha);
    return row;
}

ConstraintRow row_ct(double theta) {
    const auto pair = build_ct_graphs(theta);
    ConstraintRow row;
    row.kind = RowKind::CT;
    for (std::size_t i = 0; i < pair.g1.size(); ++i)
        for (std::size_t j = i + 1; j < pair.g1.size(); ++j) {
            row.termset.add(dist(pair.g1.vertices[i], pair.g1.vertices[j]), 1.0);
            ++row.positive_source_terms;
        }
    for (const auto& v : pair.g2.vertices) {
        const double nv = norm(v);
        row.termset.add(nv, -1.0);
        if (nv > kDistanceMergeTol) ++row.negative_source_terms;
    }
    row.sense = Sense::ge;
    row.rhs_const = 5.0;
    row.rhs_delta_coeff = -1.0;
    char buf[48];
    std::snprintf(buf, sizeof buf, "theta=%.9g", theta);
    row.provenance = buf;
    return row;
}

GridSpec::GridSpec(double step_, int count_) : step(step_), count(count_) {
    if (!(step > 0.0) || count < 1)
        fail(Status::invalid_argument, "GridSpec: need step > 0 and count >= 1");
}

bool GridSpec::add_extra(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) fail(Status::invalid_argument, "GridSpec: bad extra");
    // coincides with a base point?
    const double k = std::round(t / step);
    if (k < count && std::abs(t - k * step) <= kDistanceMergeTol) return false;
    auto it = std::lower_bound(extras.begin(), extras.end(), t - kDistanceMergeTol);
    if (it != extras.end() && std::abs(*it - t) <= kDistanceMergeTol) return false;
    extras.insert(it, t);
    return true;
}

std::vector<double> GridSpec::values() const {
    std::vector<double> out;
    out.reserve(size());
    std::size_t e = 0;
    for (int i = 0; i < count; ++i) {
        const double base = i * step;
        while (e < extras.size() && extras[e] < base) out.push_back(extras[e++]);
        out.push_back(base);
    }
    while (e < extras.size()) out.push_back(extras[e++]);
    return out;
}

double eval_row(const ConstraintRow& row, double t) { return row.termset.eval(t); }

std::vector<double> sample_row(const ConstraintRow& row, const GridSpec& grid) {
    const auto ts = grid.values();
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) out.push_back(row.termset.eval(t));
    return out;
}

} // namespace udens
