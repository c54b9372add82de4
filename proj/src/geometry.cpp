#include "geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>

#include "error.hpp"

namespace udens {

double norm(const Point2& p) { return std::hypot(p.x, p.y); }

double dist(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

void check_points(const std::vector<Point2>& pts, double tol) {
    for (const auto& p : pts)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            fail(Status::invalid_argument, "graph vertex has non-finite coordinates");
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (dist(pts[i], pts[j]) <= tol)
                fail(Status::invalid_argument,
                     "duplicate vertices at indices " + std::to_string(i) + " and " +
                         std::to_string(j));
}

std::vector<std::uint32_t> adjacency_masks(const UnitDistanceGraph& g) {
    std::vector<std::uint32_t> adj(g.size(), 0);
    for (const auto& [i, j] : g.edges) {
        adj[i] |= 1u << j;
        adj[j] |= 1u << i;
    }
    return adj;
}

int mis_size(const std::vector<std::uint32_t>& adj, std::uint32_t candidates) {
    if (candidates == 0) return 0;
    const int v = std::countr_zero(candidates);
    const std::uint32_t without = candidates & ~(1u << v);
    // a vertex with no neighbors among the remaining candidates is always taken
    if ((adj[v] & without) == 0) return 1 + mis_size(adj, without);
    const int skip = mis_size(adj, without);
    const int take = 1 + mis_size(adj, without & ~adj[v]);
    return std::max(skip, take);
}

} // namespace

UnitDistanceGraph UnitDistanceGraph::with_unit_edges(std::vector<Point2> pts, double tol) {
    check_points(pts, tol);
    UnitDistanceGraph g;
    g.vertices = std::move(pts);
    g.edge_tolerance = tol;
    const int n = static_cast<int>(g.vertices.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(dist(g.vertices[i], g.vertices[j]) - 1.0) <= tol)
                g.edges.emplace_back(i, j);
    return g;
}

UnitDistanceGraph UnitDistanceGraph::with_edges(std::vector<Point2> pts,
                                                std::vector<std::pair<int, int>> edge_list,
                                                double tol) {
    check_points(pts, tol);
    const int n = static_cast<int>(pts.size());
    for (auto& [i, j] : edge_list) {
        if (i == j) fail(Status::invalid_argument, "self-loop edge");
        if (i < 0 || j < 0 || i >= n || j >= n)
            fail(Status::invalid_argument, "edge index out of range");
        if (i > j) std::swap(i, j);
    }
    std::sort(edge_list.begin(), edge_list.end());
    if (std::adjacent_find(edge_list.begin(), edge_list.end()) != edge_list.end())
        fail(Status::invalid_argument, "duplicate edge");
    UnitDistanceGraph g;
    g.vertices = std::move(pts);
    g.edges = std::move(edge_list);
    g.edge_tolerance = tol;
    return g;
}

bool UnitDistanceGraph::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

double UnitDistanceGraph::min_separation() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const double nv = norm(vertices[i]);
        if (nv > edge_tolerance) m = std::min(m, nv);
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            m = std::min(m, dist(vertices[i], vertices[j]));
    }
    return m;
}

EdgePolicy edge_policy_from_string(const std::string& s) {
    if (s == "complete") return EdgePolicy::complete;
    if (s == "unit") return EdgePolicy::unit;
    if (s == "none") return EdgePolicy::none;
    fail(Status::invalid_argument, "unknown edge policy '" + s + "' (complete|unit|none)");
}

const char* to_string(EdgePolicy p) {
    switch (p) {
        case EdgePolicy::complete: return "complete";
        case EdgePolicy::unit: return "unit";
        case EdgePolicy::none: return "none";
    }
    return "?";
}

std::vector<Point2> TriangleSpec::points() const { return {{x1, 0.0}, {x2, y}, {x2, -y}}; }

std::string TriangleSpec::describe() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "triangle(%.9g, %.9g, %.9g)", x1, x2, y);
    return buf;
}

TriangleGraph build_triangle(const TriangleSpec& spec, EdgePolicy policy) {
    if (!std::isfinite(spec.x1) || !std::isfinite(spec.x2) || !std::isfinite(spec.y))
        fail(Status::invalid_argument, "triangle parameters must be finite");
    auto pts = spec.points();
    // check_points inside the constructors rejects degenerate (duplicate) specs
    TriangleGraph out;
    switch (policy) {
        case EdgePolicy::complete:
            out.graph = UnitDistanceGraph::with_edges(std::move(pts), {{0, 1}, {0, 2}, {1, 2}});
            break;
        case EdgePolicy::unit:
            out.graph = UnitDistanceGraph::with_unit_edges(std::move(pts));
            break;
        case EdgePolicy::none:
            out.graph = UnitDistanceGraph::with_edges(std::move(pts), {});
            break;
    }
    out.spec = spec;
    out.policy = policy;
    out.alpha = independence_number(out.graph);
    return out;
}

CtGraphPair build_ct_graphs(double theta) {
    if (!std::isfinite(theta)) fail(Status::invalid_argument, "theta must be finite");
    const double s3 = std::sqrt(3.0);
    const double c = std::cos(theta), s = std::sin(theta);
    const Point2 v1{0.0, 0.0};
    const Point2 v2{s3 / 2.0, 0.5};
    const Point2 v3{s3 / 2.0, -0.5};
    const Point2 v4{s3, 0.0};
    const Point2 v5{c, s};
    const Point2 v6{s3 / 2.0 + c, 0.5 + s};
    const Point2 v7{s3 / 2.0 + c, -0.5 + s};
    const Point2 v8{s3 + c, s};
    CtGraphPair out;
    out.g1 = UnitDistanceGraph::with_unit_edges({v1, v2, v3, v4, v5, v6, v7});
    out.g2 = UnitDistanceGraph::with_unit_edges({v1, v2, v3, v4, v6, v7, v8});
    return out;
}

int independence_number(const UnitDistanceGraph& g) {
    const std::size_t n = g.size();
    if (n > 24) fail(Status::invalid_argument, "independence_number: more than 24 vertices");
    const auto adj = adjacency_masks(g);
    const std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1u);
    return mis_size(adj, all);
}

std::vector<std::vector<int>> independent_subsets(const UnitDistanceGraph& g, int k) {
    const int n = static_cast<int>(g.size());
    if (n > 24) fail(Status::invalid_argument, "independent_subsets: more than 24 vertices");
    if (k < 0) fail(Status::invalid_argument, "independent_subsets: negative k");
    std::vector<std::vector<int>> out;
    if (k > n) return out;
    const auto adj = adjacency_masks(g);

    std::vector<int> pick;
    std::uint32_t mask = 0;
    auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(pick.size()) == k) {
            out.push_back(pick);
            return;
        }
        for (int v = next; v <= n - (k - static_cast<int>(pick.size())); ++v) {
            if (adj[v] & mask) continue;
            pick.push_back(v);
            mask |= 1u << v;
            self(self, v + 1);
            mask &= ~(1u << v);
            pick.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<double> pair_distances(const std::vector<Point2>& points) {
    if (points.size() < 2) fail(Status::invalid_argument, "pair_distances: need at least 2 points");
    std::vector<double> out;
    out.reserve(points.size() * (points.size() - 1) / 2);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            out.push_back(dist(points[i], points[j]));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace udens
