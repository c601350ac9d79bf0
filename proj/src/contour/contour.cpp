#include "qpl/contour/contour.hpp"

#include "qpl/numerics/errors.hpp"

#include <cmath>

namespace qpl {

namespace mp = boost::multiprecision;

std::string to_string(ContourLabel label) {
    switch (label) {
        case ContourLabel::gamma0: return "Gamma0";
        case ContourLabel::gamma1: return "Gamma1";
        case ContourLabel::gamma2: return "Gamma2";
        case ContourLabel::gamma3: return "Gamma3";
        case ContourLabel::gamma4: return "Gamma4";
        case ContourLabel::lens_upper: return "lens_upper";
        case ContourLabel::lens_lower: return "lens_lower";
        case ContourLabel::real_line: return "real_line";
    }
    return "?";
}

std::vector<Complex> ContourPiece::truncated(const Real& radius) const {
    std::vector<Complex> out = vertices;
    if (!unbounded) return out;
    const Complex& last = vertices.back();
    const Real extra = radius - abs(last);
    if (extra > 0) out.push_back(last + direction * extra);
    return out;
}

Complex ContourPath::weight_of(ContourLabel label) const {
    for (const auto& p : pieces) {
        if (p.label == label) return p.weight;
    }
    return {};
}

Complex ray_point(int line, const Real& r) {
    const Real q = pi() / 4;
    return polar(r, line == 1 ? q : Real(-q));
}

ContourPath build_ray_contour(const Complex& alpha, const Complex& beta) {
    const Real q = pi() / 4;
    auto ray = [](ContourLabel label, const Real& angle, int orientation, const Complex& weight) {
        ContourPiece p;
        p.label = label;
        p.vertices = {Complex(0)};
        p.unbounded = true;
        p.direction = polar(Real(1), angle);
        p.orientation = orientation;
        p.weight = weight;
        return p;
    };
    ContourPath path;
    // increasing r runs outward on the r > 0 halves and inward on the r < 0 halves
    path.pieces.push_back(ray(ContourLabel::gamma1, q, 1, alpha));
    path.pieces.push_back(ray(ContourLabel::gamma2, 3 * q, -1, Complex(1) - beta));
    path.pieces.push_back(ray(ContourLabel::gamma3, 5 * q, -1, beta));
    path.pieces.push_back(ray(ContourLabel::gamma4, -q, 1, Complex(1) - alpha));
    return path;
}

ContourPath build_real_line_contour() {
    ContourPath path;
    for (int sign : {1, -1}) {
        ContourPiece p;
        p.label = ContourLabel::real_line;
        p.vertices = {Complex(0)};
        p.unbounded = true;
        p.direction = Complex(sign);
        p.orientation = sign;
        path.pieces.push_back(p);
    }
    return path;
}

namespace {

// Smallest R >= 1 with g(R) >= target for an eventually increasing g, by bisection.
template <class G>
double solve_radius(G g, double target) {
    double lo = 1;
    double hi = 2;
    while (g(hi) < target) {
        lo = hi;
        hi *= 2;
        if (hi > 1e8) throw DomainError("weight does not decay along the contour");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

Real ray_truncation_radius(const Real& t, int N, int K, int digits) {
    if (!(t < 0)) throw DomainError("the ray contour needs t < 0");
    const double at = std::fabs(t.convert_to<double>());
    const double target = (digits + 10) * std::log(10.0);
    // bisection needs g increasing beyond its minimum; start past it
    auto g = [&](double R) {
        const double r4 = R * R * R * R;
        const double val = N * at * r4 / 4 - K * std::log(R);
        return R * R * R * R < K / (N * at) ? -1e300 : val;
    };
    return Real(solve_radius(g, target));
}

Real real_line_truncation_radius(const Real& t, int N, int K, int digits) {
    if (t < 0) throw DomainError("the real-line contour needs t >= 0");
    const double td = t.convert_to<double>();
    const double target = (digits + 10) * std::log(10.0);
    auto g = [&](double R) {
        const double val = N * (R * R / 2 + td * R * R * R * R / 4) - K * std::log(R);
        return N * R * R < K ? -1e300 : val;
    };
    return Real(solve_radius(g, target));
}

}  // namespace qpl
