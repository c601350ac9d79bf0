#include <doctest.h>

#include "qpl/numerics/errors.hpp"
#include "qpl/numerics/ode.hpp"
#include "qpl/painleve/painleve.hpp"

#include <random>

using namespace qpl;
namespace mp = boost::multiprecision;
using boost::multiprecision::cpp_rational;

namespace {

PrecisionContext painleve_ctx() { return PrecisionContext::make(kPainleveDigits); }

// one solve per alpha shared by several cases
const PainleveSolution& half_solution() {
    static const PainleveSolution s = [] {
        auto ctx = painleve_ctx();
        PrecisionGuard g(ctx);
        return solve_painleve(PainleveParameters::make(Complex(Real(1) / 2)), Real(-4), ctx);
    }();
    return s;
}

}  // namespace

TEST_CASE("Stokes multipliers satisfy the cyclic relation") {
    PrecisionGuard g(60);
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> d(-3, 3);
    for (int i = 0; i < 20; ++i) {
        const Complex alpha(Real(d(rng)) + Real(1) / 3, Real(d(rng)) / 7);
        const auto s = stokes_multipliers(alpha);
        // exact up to the rounding of 1 - alpha
        CHECK(stokes_relation_defect(s) < pow10(-55));
        CHECK(s(0) == Complex(0));
        CHECK(s(-2) == i_unit());
        CHECK(s(-1) == i_unit() * (Complex(1) - alpha));
    }
}

TEST_CASE("series coefficients") {
    PrecisionGuard g(60);
    const auto q = series_q_exact(40);
    CHECK(q[1] == cpp_rational(-1, 8));
    CHECK(q[2] == cpp_rational(-49, 128));
    const auto a = series_coefficients(40);
    CHECK(mp::abs(a[1] + mp::sqrt(Real(6)) / 48) < pow10(-58));
    CHECK(mp::abs(a[2] + Real(49) / 768) < pow10(-58));
    CHECK(mp::abs(a[1] - Real("-0.051031036")) < Real("1e-9"));
    for (int k = 0; k <= 40; ++k) {
        const Real exact = Real(boost::multiprecision::numerator(q[k])) / Real(boost::multiprecision::denominator(q[k])) /
                           mp::pow(mp::sqrt(Real(6)), k);
        CHECK(mp::abs(a[k] - exact) < pow10(-55) * mp::abs(exact));
    }
    // residual of the K-term sum at x = -40 is led by the first omitted term
    const Real x = -40;
    const Real u = 40;
    for (int K : {3, 6}) {
        const auto sv = series_value(a, x, K);
        const Real res = mp::abs(sv.d2y - 6 * sv.y * sv.y - x);
        const Real first_omitted = 2 * u * mp::abs(a[K + 1]) * mp::pow(u, -Real(5 * (K + 1)) / 2);
        CHECK(res / first_omitted > Real("0.5"));
        CHECK(res / first_omitted < Real(2));
        CHECK(res < mp::pow(u, -Real(5 * (K + 1)) / 2 + 2) * mp::abs(a[K + 1]) * 10);
    }
}

TEST_CASE("exponential mode and the lateral sums") {
    auto ctx = painleve_ctx();
    PrecisionGuard g(ctx);
    const Real x = -30;
    const auto a = series_coefficients(160);
    const auto mode = exponential_mode(x, a);
    const Complex lead = kapaev_leading(Complex(Real(1) / 2), x);
    // -i(1/2 - 1) = i/2 times the mode, to leading order
    const Real expect = mp::pow(Real(30), Real(-1) / 8) *
                        mp::exp(-kapaev_kappa() * mp::pow(Real(30), Real(5) / 4)) /
                        (2 * mp::sqrt(pi()) * mp::pow(Real(2), Real(11) / 8) * mp::pow(Real(3), Real(1) / 8));
    CHECK(mp::abs(lead.im - expect) < pow10(-60) * expect);
    CHECK(lead.re == 0);
    CHECK(mp::abs(mode.D / (2 * expect) - 1) < Real("0.02"));
    CHECK(mode.rel_error < pow10(-20));
    CHECK(mp::abs(kapaev_kappa() - Real(4) / 5 * mp::pow(Real(24), Real(1) / 4)) < pow10(-95));

    // the two lateral sums are conjugate and split by exactly the mode
    const auto up = borel_lateral_sum(x, 160, 1, ctx);
    const auto down = borel_lateral_sum(x, 160, -1, ctx);
    CHECK(abs(up.y - conj(down.y)) < pow10(-90));
    CHECK(mp::abs(up.y.im / (-mode.D / 2) - 1) < pow10(-40));
    CHECK(mp::abs(up.dy.im / (-mode.dD / 2) - 1) < pow10(-40));
    CHECK(mp::abs(up.y.re - series_value(series_coefficients(8), x, 4).y) < Real("1e-12"));
}

TEST_CASE("seed states") {
    auto ctx = painleve_ctx();
    PrecisionGuard g(ctx);
    auto p1 = PainleveParameters::make(Complex(1));
    const auto s1 = seed_state(p1, ctx);
    const auto lat = borel_lateral_sum(p1.x0, p1.series_order, 1, ctx);
    CHECK(abs(s1.y - lat.y) < 10 * s1.error);
    CHECK(mp::abs(s1.y.re / mp::sqrt(Real(5)) - 1) < mp::pow(Real(30), Real(-5) / 2));

    // alpha and 1 - conj(alpha) give conjugate seeds
    const Complex al = parse_complex("0.3+0.4i");
    const auto sa = seed_state(PainleveParameters::make(al), ctx);
    const auto sb = seed_state(PainleveParameters::make(Complex(1) - conj(al)), ctx);
    CHECK(sa.y == conj(sb.y));
    CHECK(sa.dy == conj(sb.dy));
    const auto sh = seed_state(PainleveParameters::make(Complex(Real(1) / 2)), ctx);
    CHECK(sh.y.im == 0);

    // cutting the series at its smallest term is far too crude at x0 = -30
    auto pt = PainleveParameters::make(Complex(Real(1) / 2));
    pt.seed_method = SeedMethod::truncated;
    CHECK_THROWS_AS(seed_state(pt, ctx), SeedAccuracyError);
    pt.seed_tol = Real("1e-40");
    const auto st = seed_state(pt, ctx);
    CHECK(abs(st.y - sh.y) < st.error);
    CHECK(st.error > pow10(-70));

    auto bad = PainleveParameters::make(Complex(1));
    bad.x0 = -5;
    CHECK_THROWS_AS(seed_state(bad, ctx), UsageError);
}

TEST_CASE("solution for alpha = 1/2") {
    auto ctx = painleve_ctx();
    PrecisionGuard g(ctx);
    const auto& s = half_solution();
    CHECK_FALSE(s.halted());
    for (const auto& v : s.y) CHECK(mp::abs(v.im) < pow10(-ctx.digits / 2));
    // H at the seed point is the definition applied to the seed
    CHECK(s.H.front() == hamiltonian(s.x0, s.seed.y, s.seed.dy));
    // series and ODE agree deep in the asymptotic range
    const auto a = series_coefficients(160);
    CHECK(abs(s.y_at(Real(-20)) - Complex(series_value(a, Real(-20)).y)) < Real("1e-10"));
    CHECK(abs(s.y_at(Real(-25)) - Complex(series_value(a, Real(-25)).y)) < Real("1e-12"));
    // H' = -y on [-30, -5]
    CHECK(hamiltonian_drift(s, Real("-29.6"), Real(-5), 26, ctx) < 100 * ctx.ode_tol);
    // reference value at x = -5 (agrees with an independent mpmath Borel-Pade + Taylor run)
    CHECK(abs(s.y_at(Real(-5)) - Complex(Real("0.91201667945477534844143686915614342392562"))) < Real("1e-40"));
    CHECK(s.seed_error_at(Real(-5)) < Real("1e-45"));
    CHECK_THROWS_AS((void)s.y_at(Real(-3)), UsageError);
}

TEST_CASE("seed point independence and conjugation") {
    auto ctx = painleve_ctx();
    PrecisionGuard g(ctx);
    auto p = PainleveParameters::make(parse_complex("0.8"));
    const auto s30 = solve_painleve(p, Real(-5), ctx);
    p.x0 = -40;
    const auto s40 = solve_painleve(p, Real(-5), ctx);
    const Real bound = s30.seed_error.back() + s40.seed_error.back();
    CHECK(abs(s30.y.back() - s40.y.back()) < 10 * bound);
    CHECK(mp::abs(s30.y.back().im) > Real("1e-8"));  // exponentially small but resolved

    auto q = PainleveParameters::make(parse_complex("0.2"));
    const auto c30 = solve_painleve(q, Real(-5), ctx);
    CHECK(abs(c30.y.back() - conj(s30.y.back())) < 10 * s30.seed_error.back());
}

TEST_CASE("precision monotonicity") {
    auto lo = PrecisionContext::make(60);
    auto hi = PrecisionContext::make(kPainleveDigits);
    PrecisionGuard g(hi);
    const auto p = PainleveParameters::make(Complex(Real(1) / 2));
    const auto a = solve_painleve(p, Real(-5), lo);
    const auto& b = half_solution();
    CHECK(abs(a.y.back() - b.y_at(Real(-5))) < a.seed_error.back());
    CHECK(a.seed_error.back() > b.seed_error_at(Real(-5)));
}

TEST_CASE("poles on the positive axis") {
    auto ctx = painleve_ctx();
    PrecisionGuard g(ctx);
    const auto s = solve_painleve(PainleveParameters::make(Complex(Real(1) / 2)), Real(10), ctx);
    REQUIRE(s.halted());
    const auto& pole = s.poles.front();
    CHECK(pole.pole_estimate > 0);
    CHECK(pole.pole_estimate < 10);
    CHECK(abs(pole.y_approach) > Real(1e8));
    CHECK_THROWS_AS((void)s.y_at(pole.pole_estimate + Real(1)), PoleHit);
    CHECK_NOTHROW((void)s.y_at(Real(0)));
}

TEST_CASE("Runge-Kutta cross-check of the Taylor integrator") {
    auto ctx = PrecisionContext::make(40, -30, -26);
    PrecisionGuard g(ctx);
    const auto& ref = half_solution();
    std::vector<Complex> y0{Complex(ref.seed.y.re), Complex(ref.seed.dy.re)};
    auto rhs = [](const Real& x, std::span<const Complex> y, std::span<Complex> dy) {
        dy[0] = y[1];
        dy[1] = y[0] * y[0] * Real(6) + Complex(x);
    };
    OdeOptions opt;
    opt.outputs = {Real(-25)};
    auto tr = ode_solve(rhs, Real(-30), Real(-25), y0, ctx, opt);
    auto at = tr.at_node(Real(-25));
    REQUIRE(at.has_value());
    // local errors of size ode_tol grow like exp(kappa (30^{5/4} - 25^{5/4})) ~ 1e11 along the way
    CHECK(abs((*at)[0] - ref.y_at(Real(-25))) < Real("1e-13"));
}

TEST_CASE("eval_y_and_H and JSON") {
    auto ctx = painleve_ctx();
    PrecisionGuard g(ctx);
    clear_painleve_cache();
    const auto p = PainleveParameters::make(Complex(Real(1) / 2));
    const auto v = eval_y_and_H(p, {Real(-25), Real(-6), Real(-5)}, ctx);
    REQUIRE(v.size() == 3);
    CHECK(abs(v[2].y - half_solution().y_at(Real(-5))) < Real("1e-45"));
    CHECK(abs(v[0].H - half_solution().H_at(Real(-25))) < Real("1e-80"));
    CHECK_THROWS_AS(eval_y_and_H(p, {Real(9)}, ctx), PoleHit);

    auto small = solve_painleve(p, Real(-28), ctx, PainleveOptions{Real(1) / 2});
    const auto back = painleve_from_json(Json::parse(to_json(small).dump()));
    REQUIRE(back.grid.size() == small.grid.size());
    for (std::size_t i = 0; i < small.grid.size(); ++i) {
        CHECK(back.grid[i] == small.grid[i]);
        CHECK(back.y[i] == small.y[i]);
        CHECK(back.H[i] == small.H[i]);
    }
    CHECK(back.seed.error == small.seed.error);
    CHECK(painleve_csv(small).rfind("x,re_y", 0) == 0);
}
