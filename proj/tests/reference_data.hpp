#pragma once

// Reference configuration bundled with the repository (the published
// coefficient set): ten isosceles triangles, five angles, and the witness
// weights that accompany them. Mirrors data/paper_constraints.json and
// data/paper_witness.json so tests do not depend on file lookup.

namespace refdata {

inline constexpr double kTriangles[10][3] = {
    {-0.123996, 1.946331, 0.501521},  {-0.157711, 0.542869, 0.499760},
    {0.553873, -0.276937, 0.479669},  {-0.424898, 0.382590, 0.490199},
    {2.70637, 1.842120, 0.506318},    {-0.955984, 0.026128, 0.112481},
    {-0.767499, 0.143459, 0.340280},  {0.476394, -0.337821, 0.486967},
    {0.668340, -0.199610, 0.428893},  {-0.177622, 0.519323, 0.499597},
};

inline constexpr double kAngles[5] = {1.851176, 1.864223, 1.911210, 1.935475, 1.954980};

inline constexpr double kWitnessV0 = 1.4024971970;
inline constexpr double kWitnessV1 = 10.9609841893;

inline constexpr double kTriangleWeights[10] = {
    0.1938457698, 0.2751221022, 0.5079791712, 0.3069034307, 0.3404898985,
    0.3361763782, 0.1961680281, 0.0133266364, 0.5532445066, 0.0474157478,
};

inline constexpr double kAngleWeights[5] = {
    0.3055968204, 0.6557537159, 0.1173616739, 0.5306336291, 0.2842993917,
};

// Quadratic printed alongside the reference witness: delta^2 = b*delta + c.
inline constexpr double kReferenceQuadB = -7.188702;
inline constexpr double kReferenceQuadC = 1.893645;

} // namespace refdata
