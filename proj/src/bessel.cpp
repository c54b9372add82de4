#include "bessel.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "error.hpp"

// Rational minimax coefficients for J0/J1 by Xiaogang Zhang, from Boost.Math
// (Boost Software License 1.0): root-bracketing approximations for x <= 8 and
// Hankel-form approximations beyond. The x > 8 phase terms are evaluated as
// cos(x - pi/4) = (cos x + sin x)/sqrt(2) etc. so no accuracy is lost
// subtracting the phase offset at large arguments.

namespace udens {
namespace {

template <std::size_t N>
double rational(const double (&p)[N], const double (&q)[N], double x) {
    double num = p[N - 1];
    double den = q[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) {
        num = num * x + p[i];
        den = den * x + q[i];
    }
    return num / den;
}

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490393;

// ----- J0 ------------------------------------------------------------------

const double J0P1[] = {
    -4.1298668500990866786e+11, 2.7282507878605942706e+10, -6.2140700423540120665e+08,
    6.6302997904833794242e+06,  -3.6629814655107086448e+04, 1.0344222815443188943e+02,
    -1.2117036164593528341e-01,
};
const double J0Q1[] = {
    2.3883787996332290397e+12, 2.6328198300859648632e+10, 1.3985097372263433271e+08,
    4.5612696224219938200e+05, 9.3614022392337710626e+02, 1.0,
    0.0,
};
const double J0P2[] = {
    -1.8319397969392084011e+03, -1.2254078161378989535e+04, -7.2879702464464618998e+03,
    1.0341910641583726701e+04,  1.1725046279757103576e+04,  4.4176707025325087628e+03,
    7.4321196680624245801e+02,  4.8591703355916499363e+01,
};
const double J0Q2[] = {
    -3.5783478026152301072e+05, 2.4599102262586308984e+05, -8.4055062591169562211e+04,
    1.8680990008359188352e+04,  -2.9458766545509337327e+03, 3.3307310774649071172e+02,
    -2.5258076240801555057e+01, 1.0,
};
const double J0PC[] = {
    2.2779090197304684302e+04, 4.1345386639580765797e+04, 2.1170523380864944322e+04,
    3.4806486443249270347e+03, 1.5376201909008354296e+02, 8.8961548424210455236e-01,
};
const double J0QC[] = {
    2.2779090197304684318e+04, 4.1370412495510416640e+04, 2.1215350561880115730e+04,
    3.5028735138235608207e+03, 1.5711159858080893649e+02, 1.0,
};
const double J0PS[] = {
    -8.9226600200800094098e+01, -1.8591953644342993800e+02, -1.1183429920482737611e+02,
    -2.2300261666214198472e+01, -1.2441026745835638459e+00, -8.8033303048680751817e-03,
};
const double J0QS[] = {
    5.7105024128512061905e+03, 1.1951131543434613647e+04, 7.2642780169211018836e+03,
    1.4887231232283756582e+03, 9.0593769594993125859e+01, 1.0,
};

double j0_impl(double x) {
    if (x == 0.0) return 1.0;
    if (x <= 4.0) {
        const double y = x * x;
        const double r = rational(J0P1, J0Q1, y);
        const double x1 = 2.4048255576957727686e+00;
        const double factor = (x + x1) * ((x - 616.0 / 256.0) - (-1.42444230422723137837e-03));
        return factor * r;
    }
    if (x <= 8.0) {
        const double y = 1.0 - (x * x) / 64.0;
        const double r = rational(J0P2, J0Q2, y);
        const double x2 = 5.5200781102863106496e+00;
        const double factor = (x + x2) * ((x - 1413.0 / 256.0) - 5.46860286310649596604e-04);
        return factor * r;
    }
    const double y = 8.0 / x;
    const double y2 = y * y;
    const double rc = rational(J0PC, J0QC, y2);
    const double rs = rational(J0PS, J0QS, y2);
    const double factor = std::sqrt(2.0 / (kPi * x));
    const double cx = std::cos(x);
    const double sx = std::sin(x);
    // cos(x - pi/4) = (cx + sx)/sqrt2, sin(x - pi/4) = (sx - cx)/sqrt2
    return factor * kInvSqrt2 * (rc * (cx + sx) - y * rs * (sx - cx));
}

// ----- J1 ------------------------------------------------------------------

const double J1P1[] = {
    -1.4258509801366645672e+11, 6.6781041261492395835e+09, -1.1548696764841276794e+08,
    9.8062904098958257677e+05,  -4.4615792982775076130e+03, 1.0650724020080236441e+01,
    -1.0767857011487300348e-02,
};
const double J1Q1[] = {
    4.1868604460820175290e+12, 4.2091902282580133541e+10, 2.0228375140097033958e+08,
    5.9117614494174794095e+05, 1.0742272239517380498e+03, 1.0,
    0.0,
};
const double J1P2[] = {
    -1.7527881995806511112e+16, 1.6608531731299018674e+15, -3.6658018905416665164e+13,
    3.5580665670910619166e+11,  -1.8113931269860667829e+09, 5.0793266148011179143e+06,
    -7.5023342220781607561e+03, 4.6179191852758252278e+00,
};
const double J1Q2[] = {
    1.7253905888447681194e+18, 1.7128800897135812012e+16, 8.4899346165481429307e+13,
    2.7622777286244082666e+11, 6.4872502899596389593e+08, 1.1267125065029138050e+06,
    1.3886978985861357615e+03, 1.0,
};
const double J1PC[] = {
    -4.4357578167941278571e+06, -9.9422465050776411957e+06, -6.6033732483649391093e+06,
    -1.5235293511811373833e+06, -1.0982405543459346727e+05, -1.6116166443246101165e+03,
    0.0,
};
const double J1QC[] = {
    -4.4357578167941278568e+06, -9.9341243899345856590e+06, -6.5853394797230870728e+06,
    -1.5118095066341608816e+06, -1.0726385991103820119e+05, -1.4550094401904961825e+03,
    1.0,
};
const double J1PS[] = {
    3.3220913409857223519e+04, 8.5145160675335701966e+04, 6.6178836581270835179e+04,
    1.8494262873223866797e+04, 1.7063754290207680021e+03, 3.5265133846636032186e+01,
    0.0,
};
const double J1QS[] = {
    7.0871281941028743574e+05, 1.8194580422439972989e+06, 1.4194606696037208929e+06,
    4.0029443582266975117e+05, 3.7890229745772202641e+04, 8.6383677696049909675e+02,
    1.0,
};

double j1_impl(double x) {
    if (x == 0.0) return 0.0;
    if (x <= 4.0) {
        const double y = x * x;
        const double r = rational(J1P1, J1Q1, y);
        const double x1 = 3.8317059702075123156e+00;
        const double factor = x * (x + x1) * ((x - 981.0 / 256.0) - (-3.2527979248768438556e-04));
        return factor * r;
    }
    if (x <= 8.0) {
        const double y = x * x;
        const double r = rational(J1P2, J1Q2, y);
        const double x2 = 7.0155866698156187535e+00;
        const double factor = x * (x + x2) * ((x - 1796.0 / 256.0) - (-3.8330184381246462950e-05));
        return factor * r;
    }
    const double y = 8.0 / x;
    const double y2 = y * y;
    const double rc = rational(J1PC, J1QC, y2);
    const double rs = rational(J1PS, J1QS, y2);
    const double factor = std::sqrt(2.0 / (kPi * x));
    const double cx = std::cos(x);
    const double sx = std::sin(x);
    // cos(x - 3pi/4) = (sx - cx)/sqrt2, sin(x - 3pi/4) = -(sx + cx)/sqrt2
    return factor * kInvSqrt2 * (rc * (sx - cx) + y * rs * (sx + cx));
}

void check_range(double x, const char* fn) {
    if (!(x >= 0.0) || !(x <= kBesselMaxArg))
        fail(Status::range_error,
             std::string(fn) + ": argument must lie in [0, 4000], got " + std::to_string(x));
}

} // namespace

double omega2(double x) {
    check_range(x, "omega2");
    return j0_impl(x);
}

BesselEval omega2_eval(double x) { return BesselEval{x, omega2(x), kBesselAbsErr}; }

double omega2_deriv(double x) {
    check_range(x, "omega2_deriv");
    return -j1_impl(x);
}

double envelope(double x) {
    if (!(x > 0.0)) fail(Status::range_error, "envelope: argument must be positive");
    return std::sqrt(2.0 / (kPi * x));
}

namespace {

// Golden-section search for the minimum of J0 on [a, b]; returns the midpoint
// of the final bracket.
double golden_min(double a, double b) {
    const double gold = 0.6180339887498948482;
    double c = b - gold * (b - a);
    double d = a + gold * (b - a);
    double fc = j0_impl(c);
    double fd = j0_impl(d);
    // Function comparisons lose meaning once the bracket shrinks to the
    // rounding floor sqrt(eps/curvature) ~ 1e-7; stop there and polish on the
    // derivative instead.
    while (b - a > 1e-7) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gold * (b - a);
            fc = j0_impl(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gold * (b - a);
            fd = j0_impl(d);
        }
    }
    return 0.5 * (a + b);
}

// Sharpen an interior minimum by bisecting the sign change of J0' = -J1.
double polish_min(double t, double lo, double hi) {
    double a = std::max(lo, t - 1e-5);
    double b = std::min(hi, t + 1e-5);
    double da = -j1_impl(a);
    double db = -j1_impl(b);
    if (!(da < 0.0 && db > 0.0)) return t;
    for (int i = 0; i < 80 && b - a > 1e-13; ++i) {
        const double m = 0.5 * (a + b);
        const double dm = -j1_impl(m);
        if (dm < 0.0)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

} // namespace

IntervalMin min_on_interval(double lo, double hi) {
    if (!(lo >= 0.0) || !(lo < hi) || !(hi <= kBesselMaxArg))
        fail(Status::range_error, "min_on_interval: need 0 <= lo < hi <= 4000");

    // J0's oscillation period approaches 2*pi, so a 0.02 scan step cannot skip
    // a local minimum basin.
    const double span = hi - lo;
    const double step = std::min(0.02, span / 64.0);
    const int n = std::max(2, static_cast<int>(std::ceil(span / step)));

    std::vector<double> ts(n + 1), fs(n + 1);
    for (int i = 0; i <= n; ++i) {
        ts[i] = (i == n) ? hi : lo + i * (span / n);
        fs[i] = j0_impl(ts[i]);
    }

    double best_arg = ts[0];
    double best_val = fs[0];
    auto consider = [&](double t, double v) {
        if (v < best_val) {
            best_val = v;
            best_arg = t;
        }
    };
    consider(ts[n], fs[n]);

    for (int i = 1; i < n; ++i) {
        if (fs[i] <= fs[i - 1] && fs[i] <= fs[i + 1]) {
            const double m = polish_min(golden_min(ts[i - 1], ts[i + 1]), lo, hi);
            consider(m, j0_impl(m));
        }
    }
    // Endpoint basins: the minimum may sit against lo or hi with no interior
    // scan point below both neighbors.
    const double m0 = polish_min(golden_min(ts[0], ts[1]), lo, hi);
    consider(m0, j0_impl(m0));
    const double m1 = polish_min(golden_min(ts[n - 1], ts[n]), lo, hi);
    consider(m1, j0_impl(m1));

    return IntervalMin{best_arg, best_val};
}

} // namespace udens
