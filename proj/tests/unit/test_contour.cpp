#include "doctest.h"

#include "qpl/contour/contour.hpp"
#include "qpl/numerics/errors.hpp"
#include "qpl/orthopoly/orthopoly.hpp"

#include <array>

using namespace qpl;
namespace mp = boost::multiprecision;

namespace {

PrecisionContext ctx30() { return PrecisionContext::make(30); }

const std::array<TracedCurve, 4>& critical_curves() {
    static const std::array<TracedCurve, 4> curves = [] {
        const auto ctx = ctx30();
        PrecisionGuard g(ctx);
        std::array<TracedCurve, 4> c;
        for (int j = 1; j <= 4; ++j) c[j - 1] = trace_steepest(j, PhiFunction::critical_cr(), TraceOptions{}, ctx);
        return c;
    }();
    return curves;
}

Real max_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    REQUIRE(a.size() == b.size());
    Real d = 0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, abs(a[k] - b[k]));
    return d;
}

std::vector<Complex> negated(std::vector<Complex> v) {
    for (auto& z : v) z = -z;
    return v;
}

}  // namespace

TEST_CASE("steepest descent curve Gamma1 of phi_cr") {
    const auto ctx = ctx30();
    PrecisionGuard g(ctx);
    const auto& c = critical_curves()[0];
    CHECK(c.complete);
    CHECK(c.quality < trace_tolerance(ctx));
    CHECK(c.phase_level == 0);
    // local model C (z - sqrt 8)^{5/2} with C > 0: real and negative at angle 2 pi / 5
    CHECK(mp::abs(c.departure_angle - 2 * pi() / 5) < Real("1e-5"));
    CHECK(mp::abs(abs(c.points.back()) - 4) < Real("1e-18"));
    for (std::size_t k = 0; k < c.points.size(); ++k) {
        CHECK(mp::abs(c.phi[k].im - c.phase_level) <= c.quality);
        if (k) CHECK(c.phi[k].re < c.phi[k - 1].re);
    }
    // stored phi agrees with an independent evaluation from the branch point
    const auto direct = eval_phi(PhiFunction::critical_cr(), c.points.back(), ctx);
    CHECK(abs(direct - c.phi.back()) < Real("1e-18"));
}

TEST_CASE("Gamma1 turns towards arg z = pi/4") {
    const auto ctx = ctx30();
    PrecisionGuard g(ctx);
    TraceOptions opt;
    opt.max_step = Real(1) / 2;
    opt.stop_radius = 10;
    const auto near = trace_steepest(1, PhiFunction::critical_cr(), opt, ctx);
    opt.stop_radius = 40;
    const auto far = trace_steepest(1, PhiFunction::critical_cr(), opt, ctx);
    const Real dev_near = mp::abs(arg(near.points.back()) - pi() / 4);
    const Real dev_far = mp::abs(arg(far.points.back()) - pi() / 4);
    CHECK(dev_far < dev_near);
    CHECK(dev_far < Real("0.01"));
    // beyond a bounded core the curve stays in the sector pi/8 < arg z < 3 pi/8
    for (const auto& z : far.points) {
        if (abs(z) > 5) {
            CHECK(arg(z) > pi() / 8);
            CHECK(arg(z) < 3 * pi() / 8);
        }
    }
}

TEST_CASE("traced curves respect the symmetries of phi_cr") {
    const auto& c = critical_curves();
    const Real tol = 10 * std::max({c[0].quality, c[1].quality, c[2].quality, c[3].quality});
    CHECK(max_distance(c[2].points, negated(c[0].points)) < tol);
    CHECK(max_distance(c[1].points, negated(c[3].points)) < tol);
    std::vector<Complex> mirrored;
    for (const auto& z : c[0].points) mirrored.push_back(conj(z));
    CHECK(max_distance(c[3].points, mirrored) < tol);
    // phi(-z) = phi(z) +- pi i
    CHECK(mp::abs(c[1].phase_level - pi()) < Real("1e-18"));
    CHECK(mp::abs(c[2].phase_level + pi()) < Real("1e-18"));
}

TEST_CASE("halving the step keeps the end point") {
    const auto ctx = ctx30();
    PrecisionGuard g(ctx);
    const auto& ref = critical_curves()[0];
    TraceOptions opt;
    opt.max_step = Real(1) / 40;
    const auto fine = trace_steepest(1, PhiFunction::critical_cr(), opt, ctx);
    CHECK(fine.points.size() > ref.points.size());
    CHECK(abs(fine.points.back() - ref.points.back()) < 10 * std::max(ref.quality, fine.quality));
}

TEST_CASE("trace options and errors") {
    const auto ctx = ctx30();
    PrecisionGuard g(ctx);
    TraceOptions opt;
    opt.arc_budget = Real(1) / 2;
    const auto partial = trace_steepest(1, PhiFunction::critical_cr(), opt, ctx);
    CHECK_FALSE(partial.complete);
    CHECK(partial.s.back() <= opt.arc_budget);
    CHECK_THROWS_AS((void)trace_steepest(5, PhiFunction::critical_cr(), TraceOptions{}, ctx), UsageError);
    CHECK_THROWS_AS((void)trace_steepest(1, PhiFunction::critical_circ(), TraceOptions{}, ctx), UsageError);
    opt = TraceOptions{};
    opt.stop_radius = 2;
    CHECK_THROWS_AS((void)trace_steepest(1, PhiFunction::critical_cr(), opt, ctx), UsageError);
}

TEST_CASE("lens lips where arg phi_cr = +-2 pi") {
    const auto ctx = ctx30();
    PrecisionGuard g(ctx);
    TraceOptions opt;
    opt.stop_radius = 3;
    const auto up = trace_phase_curve(1, opt, ctx);
    const auto down = trace_phase_curve(-1, opt, ctx);
    CHECK(up.complete);
    CHECK(up.kind == LevelKind::argument);
    CHECK(up.phase_level == 2 * pi());
    CHECK(down.phase_level == -2 * pi());
    CHECK(up.quality < trace_tolerance(ctx));
    // (5/2) arg = 2 pi in the local model
    CHECK(mp::abs(up.departure_angle - 4 * pi() / 5) < Real("1e-5"));
    for (const auto& p : up.phi) CHECK(p.re > 0);
    std::vector<Complex> mirrored;
    for (const auto& z : up.points) mirrored.push_back(conj(z));
    CHECK(max_distance(down.points, mirrored) < 10 * up.quality);
    CHECK_THROWS_AS((void)trace_phase_curve(0, opt, ctx), UsageError);
}

TEST_CASE("regular steepest descent curves leave the saddle d_t vertically") {
    const auto ctx = ctx30();
    PrecisionGuard g(ctx);
    const Real t = Real(-1) / 24;
    const auto phi = PhiFunction::regular(t);
    TraceOptions opt;
    opt.stop_radius = 8;  // d_t is about 4.65 here
    const auto c1 = trace_steepest(1, phi, opt, ctx);
    CHECK(c1.complete);
    CHECK(c1.start.re == *endpoints(t).d);
    CHECK(mp::abs(c1.departure_angle - pi() / 2) < Real("1e-5"));
    CHECK(c1.quality < trace_tolerance(ctx));
    for (std::size_t k = 1; k < c1.phi.size(); ++k) CHECK(c1.phi[k].re < c1.phi[k - 1].re);
    // phi_t < 0 at the saddle, which lies right of c_t
    CHECK(c1.phi.front().re < 0);
}

TEST_CASE("moments do not change under contour deformation") {
    const auto ctx = ctx30();
    PrecisionGuard g(ctx);
    struct Case {
        Real t;
        int N;
        Complex alpha;
        Complex beta;
        bool regular;
    };
    const std::vector<Case> cases = {
        {Real(-1) / 12, 4, Complex(Real("0.7"), Real("0.2")), Complex(Real("0.3")), false},
        {Real(-1) / 24, 6, Complex(Real(1) / 2), Complex(Real(1) / 2), false},
        {Real("-0.05"), 2, Complex(1), Complex(0), false},
        {Real(-1) / 24, 3, Complex(Real("0.2"), Real("-0.4")), Complex(Real("1.5")), true},
    };
    for (const auto& cs : cases) {
        std::array<TracedCurve, 4> curves;
        if (cs.regular) {
            TraceOptions opt;
            opt.stop_radius = 8;
            for (int j = 1; j <= 4; ++j) curves[j - 1] = trace_steepest(j, PhiFunction::regular(cs.t), opt, ctx);
        } else {
            curves = critical_curves();
        }
        auto spec = make_spec(cs.t, cs.N, cs.alpha, cs.beta);
        const auto rays = compute_moments(spec, 14, ctx);
        spec.contour = build_deformed_contour(cs.alpha, cs.beta, curves);
        const auto deformed = compute_moments(spec, 14, ctx);
        for (int k = 0; k <= 14; ++k) {
            CHECK(abs(rays.m[k] - deformed.m[k]) < 100 * ctx.quad_tol);
        }
    }
}

TEST_CASE("deformed contour layout") {
    const auto ctx = ctx30();
    PrecisionGuard g(ctx);
    const auto& c = critical_curves();
    const auto path = build_deformed_contour(Complex(Real("0.25")), Complex(Real("0.75")), c, 6);
    REQUIRE(path.pieces.size() == 5);
    CHECK(path.pieces[0].label == ContourLabel::gamma0);
    CHECK(path.pieces[0].vertices.front() == -c[0].start);
    CHECK(path.weight_of(ContourLabel::gamma1) == Complex(Real("0.25")));
    CHECK(path.weight_of(ContourLabel::gamma2) == Complex(Real("0.25")));
    CHECK(path.weight_of(ContourLabel::gamma3) == Complex(Real("0.75")));
    CHECK(path.weight_of(ContourLabel::gamma4) == Complex(Real("0.75")));
    for (std::size_t j = 1; j < 5; ++j) {
        // start point, at most 6 curve points, the closing point on the bisector
        CHECK(path.pieces[j].vertices.size() <= 8);
        CHECK(path.pieces[j].unbounded);
        const Complex& last = path.pieces[j].vertices.back();
        CHECK(abs(last / abs(last) - path.pieces[j].direction) < Real("1e-25"));
    }
}

TEST_CASE("sign regions of Re phi_cr") {
    const auto ctx = ctx30();
    PrecisionGuard g(ctx);
    const BoundingBox box;  // [-6, 6]^2, node spacing 3/4 on a 17 x 17 grid
    const auto par = region_sign_map(PhiFunction::critical_cr(), box, 17, 17, ctx, Execution::parallel);
    const auto ser = region_sign_map(PhiFunction::critical_cr(), box, 17, 17, ctx, Execution::serial);
    CHECK(par.cells == ser.cells);
    CHECK(par.node(14, 8) == Complex(Real("4.5")));
    CHECK(par.at(14, 8) == RegionSign::plus);  // right of sqrt 8 on the axis
    CHECK(par.at(16, 8) == RegionSign::plus);
    CHECK(par.at(8, 8) == RegionSign::cut);    // the origin
    CHECK(par.at(5, 8) == RegionSign::cut);    // -2.25
    CHECK(par.at(14, 14) == RegionSign::minus);  // 4.5 + 4.5i, along Gamma1 far out
    CHECK(par.at(2, 2) == RegionSign::minus);    // along Gamma3
    CHECK(par.at(8, 16) == RegionSign::plus);    // 6i, where z^4 > 0
    CHECK_THROWS_AS((void)region_sign_map(PhiFunction::critical_cr(), box, 8, 17, ctx), UsageError);
}

TEST_CASE("conformal map f near sqrt 8") {
    const auto ctx = ctx30();
    PrecisionGuard g(ctx);
    const Real a = mp::sqrt(Real(8));
    const Real slope = mp::pow(Real(2), Real(-1) / 10) * mp::pow(Real(3), Real(-2) / 5);
    const Real c3 = mp::pow(Real(2), Real(1) / 10) * mp::pow(Real(3), Real(2) / 5);
    CHECK(conformal_f(Complex(a), ctx) == Complex(0));
    const Real h = Real("1e-12");
    const Complex fh = conformal_f(Complex(a + h), ctx);
    CHECK(mp::abs(fh.re / h - slope) < Real("1e-10"));
    CHECK(fh.im == 0);
    CHECK(mp::abs(h / fh.re - c3) < Real("1e-10"));
    CHECK(mp::abs(slope - Real("0.6012408755")) < Real("1e-10"));
    // series and direct quotient agree off the cut
    for (const auto& z : {Complex(a + Real("0.1"), Real("0.3")), Complex(a - Real("1"), Real("0.5")),
                          Complex(a + Real("2"), Real("-1"))}) {
        CHECK(abs(conformal_f(z, ctx) - conformal_f_direct(z, ctx)) < Real("1e-18"));
    }
    // the interval left of sqrt 8 goes to the negative axis
    const Complex left = conformal_f(Complex(a - Real("0.5")), ctx);
    CHECK(left.re < 0);
    CHECK(mp::abs(left.im) < Real("1e-25"));
    // Gamma1 goes to arg = 2 pi/5, the upper lip to arg = 4 pi/5
    for (const auto& z : critical_curves()[0].points) {
        if (abs(z - Complex(a)) < 1) CHECK(mp::abs(arg(conformal_f(z, ctx)) - 2 * pi() / 5) < Real("1e-15"));
    }
    TraceOptions opt;
    opt.stop_radius = 3;
    for (const auto& z : trace_phase_curve(1, opt, ctx).points) {
        if (abs(z - Complex(a)) < 1) CHECK(mp::abs(arg(conformal_f(z, ctx)) - 4 * pi() / 5) < Real("1e-15"));
    }
    CHECK_THROWS_AS((void)conformal_f(Complex(Real(-3)), ctx), BranchCutError);
}

TEST_CASE("u_circ is analytic at sqrt 8") {
    const auto ctx = ctx30();
    PrecisionGuard g(ctx);
    const Real a = mp::sqrt(Real(8));
    const Real value = -mp::pow(Real(2), Real(9) / 5) * mp::pow(Real(3), Real(6) / 5);
    const Real c1 = mp::pow(Real(2), Real(-9) / 5) * mp::pow(Real(3), Real(-6) / 5);
    const Complex u0 = conformal_ucirc(Complex(a), ctx);
    CHECK(mp::abs(u0.re - value) < Real("1e-25"));
    CHECK(mp::abs(u0.re * c1 + 1) < Real("1e-25"));
    CHECK(mp::abs(value + Real("13.01366125")) < Real("1e-8"));
    // Richardson extrapolation of the direct quotient at offsets 0.1 / 2^k
    const Real h0 = Real("0.1");
    constexpr int kLevels = 5;
    std::vector<Real> d(kLevels);
    for (int k = 0; k < kLevels; ++k) d[k] = conformal_ucirc_direct(Complex(a + h0 / (1 << k)), ctx).re;
    const Real first = d[0];
    for (int order = 1; order < kLevels; ++order) {
        const Real w = mp::pow(Real(2), order);
        for (int k = kLevels - 1; k >= order; --k) d[k] = (w * d[k] - d[k - 1]) / (w - 1);
    }
    CHECK(mp::abs(d[kLevels - 1] - u0.re) < Real("1e-6"));
    CHECK(abs(conformal_ucirc(Complex(a + h0), ctx) - Complex(first)) < Real("1e-18"));
    const Complex z(a - Real("0.7"), Real("0.4"));
    CHECK(abs(conformal_ucirc(z, ctx) - conformal_ucirc_direct(z, ctx)) < Real("1e-18"));
    // u_t scales with t + 1/12 and vanishes at the critical value
    CHECK(abs(conformal_ut(Real(-1) / 12, Complex(a), ctx)) < Real("1e-28"));
    CHECK(abs(conformal_ut(Real(-1) / 12 + Real("0.01"), Complex(a), ctx) - u0 * Real("0.01")) < Real("1e-27"));
}

TEST_CASE("curve CSV and SVG export") {
    const auto& c = critical_curves()[0];
    const auto csv = curve_csv(c);
    CHECK(csv.rfind("s,re_z,im_z,re_phi,im_phi\n", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == c.points.size() + 1);
    const auto ctx = ctx30();
    PrecisionGuard g(ctx);
    const BoundingBox box;
    const auto raster = region_sign_map(PhiFunction::critical_cr(), box, 16, 16, ctx);
    const std::vector<SvgCurve> curves = {{c.points, "#c00", "Gamma1"}};
    const auto svg = render_svg(&raster, curves, box);
    CHECK(svg == render_svg(&raster, curves, box));
    CHECK(svg.find("<polyline id=\"Gamma1\"") != std::string::npos);
    CHECK(svg.find("#c8d3e0") != std::string::npos);
}
