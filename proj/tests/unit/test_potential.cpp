#include <doctest.h>

#include "../oracles/closed_forms.hpp"
#include "qpl/numerics/errors.hpp"
#include "qpl/potential/potential.hpp"

using namespace qpl;
namespace mp = boost::multiprecision;

TEST_CASE("potential and endpoints") {
    PrecisionGuard g(60);
    CHECK(eval_potential(Real(0), Complex(2)) == Complex(2));
    CHECK(eval_potential(Real("-0.3"), Complex(0)) == Complex(0));
    const Real s8 = mp::sqrt(Real(8));
    CHECK(abs(eval_potential(t_critical(), Complex(s8)) - Complex(Real(8) / 3)) < pow10(-55));

    auto e = endpoints(t_critical());
    CHECK(mp::abs(e.c2 - 8) < pow10(-55));
    REQUIRE(e.d.has_value());
    CHECK(mp::abs(e.d2 - 8) < pow10(-55));

    auto e0 = endpoints(Real(0));
    CHECK(e0.c2 == 4);
    CHECK_FALSE(e0.d.has_value());
    auto small = endpoints(Real("-1e-30"));
    CHECK(mp::abs(small.c2 - 4) < Real("1e-28"));

    auto e12 = endpoints(Real(1) / 12);
    CHECK(mp::abs(e12.c2 - 8 * (mp::sqrt(Real(2)) - 1)) < pow10(-55));
    CHECK(mp::abs(e12.c2 - Real("3.313708")) < Real("1e-6"));
    CHECK_FALSE(e12.d.has_value());

    CHECK_THROWS_AS(endpoints(Real("-0.09")), DomainError);
}

TEST_CASE("densities") {
    auto ctx = PrecisionContext::make(60);
    PrecisionGuard g(ctx);
    CHECK(mp::abs(density_mu(t_critical(), Real(0)) - mp::pow(Real(8), Real(3) / 2) / (24 * pi())) < pow10(-55));
    CHECK(mp::abs(density_mu(t_critical(), Real(0)) - Real("0.300105")) < Real("1e-6"));
    const Real t = Real(-1) / 24;
    const Real c = endpoints(t).c;
    CHECK(density_mu(t, c) == 0);
    CHECK(density_mu(t, -c) == 0);
    CHECK_THROWS_AS(density_mu(t, c + Real("0.01")), DomainError);

    CHECK(mp::abs(density_vcirc(Real(0)) - mp::sqrt(Real(2)) / pi()) < pow10(-55));
    CHECK(mp::abs(density_vcirc(Real(2)) - 2 / pi()) < pow10(-55));
    CHECK(mp::abs(density_vcirc(Real(0)) - Real("0.450158")) < Real("1e-6"));
    CHECK_THROWS_AS(density_vcirc(mp::sqrt(Real(8))), DomainError);

    // critical form agrees with the regular closed form on a grid
    Real worst = 0;
    for (int k = -28; k <= 28; ++k) {
        const Real x = Real(k) / 10;
        worst = std::max(worst, Real(mp::abs(density_mu(t_critical(), x) - density_mu_critical(x))));
    }
    CHECK(worst < pow10(-55));
}

TEST_CASE("total mass of both measures") {
    auto ctx = PrecisionContext::make(60);
    PrecisionGuard g(ctx);
    for (const char* ts : {"-1/12", "-1/24", "-0.01"}) {
        const Real t = parse_real(ts);
        auto m = total_mass(MeasureDensity::regular(t), ctx);
        CHECK(mp::abs(m.value - 1) < 10 * ctx.quad_tol);
    }
    for (const char* ts : {"-1/12", "-0.09", "-0.07"}) {
        auto m = total_mass(MeasureDensity::modified(parse_real(ts)), ctx);
        CHECK(mp::abs(m.value - 1) < 10 * ctx.quad_tol);
    }
    auto v = integrate_real([](const RealPoint& p) {
        return (8 + 4 * p.x * p.x - p.x * p.x * p.x * p.x) / (2 * pi() * mp::sqrt(p.from_a * p.to_b));
    }, -mp::sqrt(Real(8)), mp::sqrt(Real(8)), QuadratureRule{}, ctx);
    CHECK(mp::abs(v.value) < 10 * ctx.quad_tol);
}

TEST_CASE("singular integral equation for the correction density") {
    auto ctx = PrecisionContext::make(60);
    PrecisionGuard g(ctx);
    const Real a = mp::sqrt(Real(8));
    auto vc = [](const RealPoint& p) {
        const Real x2 = p.x * p.x;
        return (8 + 4 * x2 - x2 * x2) / (2 * pi() * mp::sqrt(p.from_a * p.to_b));
    };
    for (const char* xs : {"-2", "-1", "0.5", "1", "2"}) {
        const Real x = parse_real(xs);
        auto r = integrate_pv(vc, -a, a, x, QuadratureRule{}, ctx);
        CHECK(mp::abs(r.value - x * x * x / 2) < 100 * ctx.quad_tol);
        auto r2 = integrate_pv(vc, -a, a, x, QuadratureRule{}, ctx, Real(1) / 4);
        CHECK(mp::abs(r.value - r2.value) < ctx.quad_tol);
    }
}

TEST_CASE("Euler-Lagrange constancy") {
    auto ctx = PrecisionContext::make(60);
    PrecisionGuard g(ctx);
    auto crit = euler_lagrange_residual(MeasureDensity::modified(t_critical()), {Real(0), Real(1), Real(2)}, ctx);
    CHECK(crit.residual < 10 * ctx.quad_tol);
    auto reg = euler_lagrange_residual(MeasureDensity::regular(Real(-1) / 24),
                                       {Real(0), Real("0.7"), Real("1.5")}, ctx);
    CHECK(reg.residual < 10 * ctx.quad_tol);
    auto sym = euler_lagrange_residual(MeasureDensity::regular(Real(-1) / 24), {Real("-1.1"), Real("1.1")}, ctx);
    CHECK(sym.residual < 10 * ctx.quad_tol);
    // the signed minimiser off criticality satisfies the same identity
    auto off = euler_lagrange_residual(MeasureDensity::modified(Real("-0.09")), {Real("-2.5"), Real(0), Real(2)}, ctx);
    CHECK(off.residual < 10 * ctx.quad_tol);
    // a wrong t breaks it
    MeasureDensity wrong = MeasureDensity::regular(Real(-1) / 24);
    wrong.d2 += Real("0.5");
    auto bad = euler_lagrange_residual(wrong, {Real(0), Real(2)}, ctx);
    CHECK(bad.residual > Real("1e-3"));
}

TEST_CASE("phi functions against closed forms") {
    auto ctx = PrecisionContext::make(60);
    PrecisionGuard g(ctx);
    const auto cr = PhiFunction::critical_cr();
    const auto circ = PhiFunction::critical_circ();
    const Real s8 = mp::sqrt(Real(8));
    CHECK(eval_phi(cr, Complex(s8), ctx) == Complex(0));
    for (auto z : {Complex(Real(4)), Complex(Real(1), Real(2)), Complex(Real(-3), Real("0.2")),
                   Complex(Real(-1), Real("-0.1")), Complex(Real(2), Real(-3))}) {
        CHECK(abs(eval_phi(cr, z, ctx) - oracle::phi_cr(z)) < pow10(-45));
        CHECK(abs(eval_phi(circ, z, ctx) - oracle::phi_circ(z)) < pow10(-45));
    }
}

TEST_CASE("phi local behaviour, decomposition, paths and sign") {
    auto ctx = PrecisionContext::make(60);
    PrecisionGuard g(ctx);
    const auto cr = PhiFunction::critical_cr();
    const auto circ = PhiFunction::critical_circ();
    const Real s8 = mp::sqrt(Real(8));
    const Real h = Real("1e-12");
    const Complex a = eval_phi(cr, Complex(s8 + h), ctx);
    CHECK(mp::abs(a.re / mp::pow(h, Real(5) / 2) - mp::pow(Real(2), Real(7) / 4) / 15) < Real("1e-9"));
    const Complex b = eval_phi(circ, Complex(s8 + h), ctx);
    CHECK(mp::abs(b.re / mp::sqrt(h) + 3 * mp::pow(Real(2), Real(7) / 4)) < Real("1e-9"));

    const Real t = Real("-0.09");
    const auto pt = PhiFunction::critical_t(t);
    for (auto z : {Complex(Real(1), Real(1)), Complex(Real(5))}) {
        const Complex lhs = eval_phi(pt, z, ctx);
        const Complex rhs = eval_phi(cr, z, ctx) + eval_phi(circ, z, ctx) * (t + Real(1) / 12);
        CHECK(abs(lhs - rhs) < pow10(-55));
    }

    const Complex z{Real(-1), Real(2)};
    const Complex p1 = eval_phi_path(cr, z, {}, ctx);
    const Complex p2 = eval_phi_path(cr, z, {Complex(Real(3), Real(3))}, ctx);
    CHECK(abs(p1 - p2) < 10 * ctx.quad_tol * (1 + abs(p1)));
    CHECK_THROWS_AS(eval_phi(cr, Complex(Real(1)), ctx), BranchCutError);
    CHECK_THROWS_AS(eval_phi_path(cr, Complex(Real(-1), Real(1)), {Complex(Real(3), Real(1)), Complex(Real(0), Real(-1))}, ctx),
                    BranchCutError);

    // large z: phi_cr ~ z^4/96, phi_circ ~ -z^4/8, next terms O(z^2)
    const Complex big = polar(Real(400), pi() / 5);
    const Complex z4 = pow(big, 4);
    CHECK(abs(eval_phi(cr, big, ctx) * Real(96) / z4 - Complex(1)) < Real("1e-3"));
    CHECK(abs(eval_phi(circ, big, ctx) * Real(-8) / z4 - Complex(1)) < Real("1e-3"));

    // regular phi is negative between c_t and d_t
    const Real tr = Real(-1) / 24;
    const auto e = endpoints(tr);
    const auto pr = PhiFunction::regular(tr);
    for (int k = 1; k < 10; ++k) {
        const Real x = e.c + (*e.d - e.c) * k / 10;
        const Complex v = eval_phi(pr, Complex(x), ctx);
        CHECK(v.re < 0);
        CHECK(mp::abs(v.im) < pow10(-55));
    }
}
