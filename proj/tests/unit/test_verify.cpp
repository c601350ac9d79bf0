#include "doctest.h"

#include "qpl/numerics/errors.hpp"
#include "qpl/verify/verify.hpp"

using namespace qpl;
namespace mp = boost::multiprecision;

TEST_CASE("scaling constants") {
    PrecisionGuard g(60);
    const auto c = scaling_constants();
    // independent route through exp/log
    CHECK(mp::abs(c.c1 - mp::exp(-Real(9) / 5 * mp::log(Real(2)) - Real(6) / 5 * mp::log(Real(3)))) < pow10(-55));
    CHECK(mp::abs(mp::pow(c.c2, 5) - 72) < pow10(-50));
    CHECK(mp::abs(mp::pow(c.c3, 10) - 162) < pow10(-50));
    CHECK(mp::abs(1 / mp::pow(c.c1, 5) - 512 * 729) < pow10(-45));
    CHECK(mp::abs(c.c2 - mp::sqrt(Real(2)) * c.c3) < pow10(-55));
    CHECK(scaling_constants_consistent());
    CHECK(mp::abs(c.c3 - Real("1.6632269040768861")) < 1e-15);
}

TEST_CASE("regular limit") {
    PrecisionGuard g(60);
    CHECK(mp::abs(regular_limit(Real(-1) / 24) - (4 - 2 * mp::sqrt(Real(2)))) < pow10(-55));
    CHECK(regular_limit(Real(0)) == 1);
    // 1 - 3t + 18t^2 + ... near 0
    const Real t = pow10(-12);
    CHECK(mp::abs(regular_limit(t) - (1 - 3 * t)) < pow10(-22));
    CHECK(mp::abs(regular_limit(Real(-1) / 12) - 2) < pow10(-55));
    CHECK_THROWS_AS((void)regular_limit(Real(-1) / 10), DomainError);
}

TEST_CASE("critical t") {
    PrecisionGuard g(60);
    for (int n : {4, 16, 64}) CHECK(critical_t(Real(0), n) == Real(-1) / 12);
    const Real tn = critical_t(Real(-5), 32);
    CHECK(tn > Real(-1) / 12);
    CHECK(mp::abs((tn + Real(1) / 12) * mp::pow(Real(32), Real(4) / 5) - 5 * scaling_constants().c1) < pow10(-50));
}

TEST_CASE("fits and median test") {
    PrecisionGuard g(40);
    const std::vector<int> ns{16, 24, 32, 48, 64};
    std::vector<Real> clean, defect;
    for (int n : ns) {
        clean.push_back(Real(3) * mp::pow(Real(n), Real(-3) / 5));
        defect.push_back(Real(3) * mp::pow(Real(n), Real(-1) / 5) + Real(3) * mp::pow(Real(n), Real(-3) / 5));
    }
    const auto f = fit_power(ns, clean);
    CHECK(f.p == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK(absence_of_n15_term(ns, clean));
    CHECK_FALSE(absence_of_n15_term(ns, defect));
    CHECK_THROWS_AS((void)fit_power({16, 32}, {Real(1), Real(2)}), InsufficientData);
    CHECK_THROWS_AS((void)fit_line({1.0}, {1.0}), InsufficientData);

    const auto l = fit_line({0, 1, 2, 3}, {1, -1, -3, -5});
    CHECK(l.slope == doctest::Approx(-2));
    CHECK(l.intercept == doctest::Approx(1));

    CHECK(within_factor_of_median({Real(1), Real(1.5), Real(2)}, 2.0));
    CHECK_FALSE(within_factor_of_median({Real(1), Real(1.5), Real(3.1)}, 2.0));
    CHECK_FALSE(within_factor_of_median({Real(0.7), Real(1.5), Real(2)}, 2.0));
    CHECK_FALSE(within_factor_of_median({}, 2.0));
}

TEST_CASE("experiment validation") {
    PrecisionGuard g(40);
    auto e = ScalingExperiment::regular(Real(-1) / 24, Complex(Real(1) / 2), Complex(Real(1) / 2), {8, 8});
    CHECK_THROWS_AS(e.validate(), UsageError);
    e.n_list = {};
    CHECK_THROWS_AS(e.validate(), UsageError);
    e.n_list = {8};
    e.t = Real(-1) / 10;
    CHECK_THROWS_AS(e.validate(), DomainError);
    e.t = Real(-1) / 24;
    CHECK_THROWS_AS((void)run_critical(e), UsageError);
    e.n_list = {64};
    CHECK(e.working_digits() == 384);
}

TEST_CASE("regular run") {
    PrecisionGuard g(60);
    const std::vector<int> ns{8, 12, 16};
    auto sym = ScalingExperiment::regular(Real(-1) / 24, Complex(Real(1) / 2), Complex(Real(1) / 2), ns);
    sym.digits = 80;
    const auto rs = run_regular(sym);
    CHECK(rs.pass());
    REQUIRE(rs.records.size() == 3);
    for (const auto& r : rs.records) {
        CHECK(r.digits == 80);
        CHECK(abs(r.b) < pow10(-30));
        CHECK(r.scaled_a > 1e-3);
        CHECK(r.scaled_a < 1e-2);
    }
    CHECK(to_text(rs).find("overall: PASS") != std::string::npos);

    // a_nn does not see alpha up to exponentially small terms
    auto asym = sym;
    asym.alpha = Complex(Real("0.7"));
    asym.beta = Complex(Real("0.3"));
    const auto ra = run_regular(asym);
    CHECK(ra.pass());
    for (std::size_t k = 0; k < ns.size(); ++k) {
        PrecisionGuard g80(80);
        const Real gap = abs(ra.records[k].a - rs.records[k].a);
        CHECK(gap < 100 * ra.records[k].residual_b);
        CHECK(ra.records[k].residual_b > pow10(-30));
    }

    // bit-identical on a rerun
    CHECK(to_json(run_regular(sym)).dump() == to_json(rs).dump());
}

TEST_CASE("critical run, symmetric, small n") {
    PrecisionGuard g(60);
    auto e = ScalingExperiment::critical(Real(-5), Complex(Real(1) / 2), Complex(Real(1) / 2), {8, 12, 16});
    e.digits = 120;
    const auto r = run_critical(e);
    CHECK(abs(r.y_alpha - r.y_beta) == 0);
    CHECK(mp::abs(r.y_alpha.re - Real("0.912016679454775348441436869156143423925")) < pow10(-35));
    for (const auto& rec : r.records) {
        CHECK(abs(rec.prediction_b) == 0);
        CHECK(rec.lattice_gap >= 0);
    }
    bool lattice = false, vanishes = false;
    for (const auto& c : r.criteria) {
        if (c.name == "lattice_cross_check") lattice = c.pass;
        if (c.name == "b_vanishes") vanishes = c.pass;
    }
    CHECK(lattice);
    CHECK(vanishes);
    const auto j = to_json(r);
    CHECK(j["records"].size() == 3);
    CHECK(j["records"][0]["digits"] == 120);
    CHECK(j["painleve"]["digits"] == 100);
}
