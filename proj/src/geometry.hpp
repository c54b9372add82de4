#pragma once

#include <string>
#include <utility>
#include <vector>

namespace udens {

// Distance within which two points count as one, and within which an edge
// counts as a unit edge. Configuration coordinates are exact algebraic
// expressions evaluated in double, so anything below 1e-6 would do; 1e-9
// guards against accumulated floating error.
inline constexpr double kUnitEdgeTol = 1e-9;

// Pairwise separation the bundled configurations are expected to respect;
// falling below it is a warning, not an error.
inline constexpr double kSeparationRule = 0.1;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

double norm(const Point2& p);
double dist(const Point2& a, const Point2& b);

// Finite planar graph with embedded vertices. Edges are index pairs (i < j).
// Unit-distance graphs come out of with_unit_edges; arbitrary edge sets (used
// by the relaxed subgraph constraint) come out of with_edges.
struct UnitDistanceGraph {
    std::vector<Point2> vertices;
    std::vector<std::pair<int, int>> edges;
    double edge_tolerance = kUnitEdgeTol;

    // Connects every pair at distance 1 (within tol). Rejects duplicate points.
    static UnitDistanceGraph with_unit_edges(std::vector<Point2> pts, double tol = kUnitEdgeTol);

    // Explicit edge list. Rejects self-loops, duplicate edges, duplicate points.
    static UnitDistanceGraph with_edges(std::vector<Point2> pts,
                                        std::vector<std::pair<int, int>> edge_list,
                                        double tol = kUnitEdgeTol);

    std::size_t size() const { return vertices.size(); }
    bool has_edge(int i, int j) const;

    // Smallest nonzero vertex norm or pairwise distance (for the separation rule).
    double min_separation() const;
};

enum class EdgePolicy { complete, unit, none };

EdgePolicy edge_policy_from_string(const std::string& s);
const char* to_string(EdgePolicy p);

// Isosceles triangle {(x1, 0), (x2, y), (x2, -y)}.
struct TriangleSpec {
    double x1 = 0.0;
    double x2 = 0.0;
    double y = 0.0;

    std::vector<Point2> points() const;
    std::string describe() const;
};

struct TriangleGraph {
    UnitDistanceGraph graph;
    TriangleSpec spec;
    EdgePolicy policy = EdgePolicy::complete;
    int alpha = 0;
};

// Builds the triangle with the configured edge set and records its
// independence number. Degenerate (duplicate-point) specs are an error.
TriangleGraph build_triangle(const TriangleSpec& spec, EdgePolicy policy = EdgePolicy::complete);

// The two 7-vertex graphs of the triple-correlation constraint, parameterized
// by the angle of the translating unit vector:
//   V1 (0,0), V2 (s3/2, 1/2), V3 (s3/2, -1/2), V4 (s3, 0),
//   V5 = V1+u, V6 = V2+u, V7 = V3+u, V8 = V4+u with u = (cos theta, sin theta).
// g1 has vertices {V1..V7}, g2 has {V1,V2,V3,V4,V6,V7,V8}; edges are all unit
// pairs. Angles that collapse two vertices onto one point are an error.
struct CtGraphPair {
    UnitDistanceGraph g1;
    UnitDistanceGraph g2;
};

CtGraphPair build_ct_graphs(double theta);

// Exact independence number by exhaustive bitmask search; |vertices| <= 24.
int independence_number(const UnitDistanceGraph& g);

// All k-subsets of vertex indices with no internal edge, lexicographic.
std::vector<std::vector<int>> independent_subsets(const UnitDistanceGraph& g, int k);

// All C(n,2) pairwise distances, with multiplicity, sorted ascending.
std::vector<double> pair_distances(const std::vector<Point2>& points);

} // namespace udens
