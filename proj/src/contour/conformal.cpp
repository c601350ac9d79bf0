#include "qpl/contour/contour.hpp"

#include "qpl/numerics/errors.hpp"

#include <cmath>

namespace qpl {

namespace mp = boost::multiprecision;

namespace {

// Taylor coefficients in h = z - sqrt 8 of
//   G(h) = (5/4) phi_cr / h^{5/2}   and   P(h) = phi_circ / h^{1/2},
// both analytic for |h| < 2 sqrt 8.
struct LocalSeries {
    std::vector<Real> g;
    std::vector<Real> p;
};

LocalSeries local_series(int terms) {
    const Real a = mp::sqrt(Real(8));
    const Real two_a = 2 * a;
    LocalSeries s;
    // binomial series of (1 + x)^{3/2} and (1 + x)^{-1/2}
    std::vector<Real> b32(terms), bm12(terms);
    b32[0] = 1;
    bm12[0] = 1;
    for (int k = 1; k < terms; ++k) {
        b32[k] = b32[k - 1] * (Real(3) / 2 - (k - 1)) / k;
        bm12[k] = bm12[k - 1] * (Real(-1) / 2 - (k - 1)) / k;
    }
    // phi_cr' = (1/24) h^{3/2} (2a + h)^{3/2}
    s.g.resize(terms);
    Real scale = mp::pow(two_a, Real(3) / 2);
    for (int k = 0; k < terms; ++k) {
        s.g[k] = Real(5) / 96 * scale * b32[k] / (Real(k) + Real(5) / 2);
        scale /= two_a;
    }
    // phi_circ' = (1/2) (8 + 4 s^2 - s^4) h^{-1/2} (2a + h)^{-1/2}; numerator in powers of h
    const Real n[5] = {Real(8) + 4 * 8 - 64, 8 * a - 4 * 8 * a, Real(4) - 6 * 8, -4 * a, Real(-1)};
    std::vector<Real> r(terms);
    scale = 1 / mp::sqrt(two_a);
    for (int k = 0; k < terms; ++k) {
        r[k] = scale * bm12[k];
        scale /= two_a;
    }
    s.p.resize(terms);
    for (int k = 0; k < terms; ++k) {
        Real c = 0;
        for (int j = 0; j <= std::min(k, 4); ++j) c += n[j] * r[k - j];
        s.p[k] = c / 2 / (Real(k) + Real(1) / 2);
    }
    return s;
}

Complex horner(const std::vector<Real>& c, const Complex& x) {
    Complex v;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + Complex(c[k]);
    return v;
}

int series_terms(int digits) { return static_cast<int>(std::ceil(digits * std::log2(10.0))) + 20; }

bool in_series_disk(const Complex& h) { return abs(h) < mp::sqrt(Real(8)); }

}  // namespace

Complex conformal_f_direct(const Complex& z, const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    const Complex h = z - Complex(mp::sqrt(Real(8)));
    if (h == Complex(0)) return {};
    const Complex phi = eval_phi(PhiFunction::critical_cr(), z, ctx);
    const Complex G = phi * (Real(5) / 4) / (h * h * sqrt(h));
    if (G.re <= 0 && G.im == 0) throw BranchCutError("5/4 phi_cr / (z - sqrt 8)^{5/2} is not on the principal branch");
    return h * pow(G, Real(2) / 5);
}

Complex conformal_ucirc_direct(const Complex& z, const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    const Complex h = z - Complex(mp::sqrt(Real(8)));
    if (h == Complex(0)) throw DomainError("the direct quotient is 0/0 at sqrt 8");
    const Complex cr = eval_phi(PhiFunction::critical_cr(), z, ctx);
    const Complex circ = eval_phi(PhiFunction::critical_circ(), z, ctx);
    const Complex root = sqrt(h);
    // phi_cr^{1/5} on the branch positive for small h > 0
    const Complex cr5 = root * pow(cr / (h * h * root), Real(1) / 5);
    return circ / cr5 * mp::pow(Real(4) / 5, Real(1) / 5);
}

Complex conformal_f(const Complex& z, const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    const Complex h = z - Complex(mp::sqrt(Real(8)));
    if (!in_series_disk(h)) return conformal_f_direct(z, ctx);
    const auto s = local_series(series_terms(ctx.digits));
    return h * pow(horner(s.g, h), Real(2) / 5);
}

Complex conformal_ucirc(const Complex& z, const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    const Complex h = z - Complex(mp::sqrt(Real(8)));
    if (!in_series_disk(h)) return conformal_ucirc_direct(z, ctx);
    const auto s = local_series(series_terms(ctx.digits));
    // (4/5)^{1/5} h^{1/2} P / (h^{1/2} ((4/5) G)^{1/5}) = P / G^{1/5}
    return horner(s.p, h) / pow(horner(s.g, h), Real(1) / 5);
}

Complex conformal_ut(const Real& t, const Complex& z, const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    return conformal_ucirc(z, ctx) * (t + Real(1) / 12);
}

}  // namespace qpl
