#include "qpl/numerics/errors.hpp"
#include "qpl/numerics/linalg.hpp"
#include "qpl/numerics/quadrature.hpp"
#include "qpl/painleve/painleve.hpp"

namespace qpl {

namespace mp = boost::multiprecision;

std::string to_string(SeedMethod m) { return m == SeedMethod::borel_pade ? "borel_pade" : "truncated"; }

SeedMethod parse_seed_method(std::string_view s) {
    if (s == "borel_pade") return SeedMethod::borel_pade;
    if (s == "truncated") return SeedMethod::truncated;
    throw UsageError("unknown seed method '" + std::string(s) + "'");
}

PainleveParameters PainleveParameters::make(const Complex& alpha) {
    PainleveParameters p;
    p.alpha = alpha;
    p.x0 = Real(-30);
    return p;
}

void PainleveParameters::validate() const {
    if (!(x0 <= -10)) throw UsageError("the seed point must satisfy x0 <= -10");
    if (series_order < 8) throw UsageError("series order must be at least 8");
}

namespace {

struct Pade {
    std::vector<Real> p;
    std::vector<Real> q;  // q[0] = 1

    [[nodiscard]] Complex operator()(const Complex& s) const {
        Complex num, den;
        for (std::size_t i = p.size(); i-- > 0;) num = num * s + Complex(p[i]);
        for (std::size_t i = q.size(); i-- > 0;) den = den * s + Complex(q[i]);
        return num / den;
    }
};

// [L/M] approximant to sum g_k s^k from g_0..g_{L+M}.
Pade pade(const std::vector<Real>& g, int L, int M) {
    auto at = [&](int k) { return k < 0 ? Real(0) : g[k]; };
    std::vector<std::vector<Real>> A(M, std::vector<Real>(M));
    std::vector<Real> rhs(M);
    for (int i = 1; i <= M; ++i) {
        for (int j = 1; j <= M; ++j) A[i - 1][j - 1] = at(L + i - j);
        rhs[i - 1] = -at(L + i);
    }
    auto sol = solve_linear(std::move(A), std::move(rhs));
    Pade out;
    out.q.assign(static_cast<std::size_t>(M) + 1, Real(0));
    out.q[0] = 1;
    for (int j = 1; j <= M; ++j) out.q[j] = sol[j - 1];
    out.p.assign(static_cast<std::size_t>(L) + 1, Real(0));
    for (int i = 0; i <= L; ++i) {
        for (int j = 0; j <= std::min(i, M); ++j) out.p[i] += out.q[j] * g[i - j];
    }
    return out;
}

}  // namespace

LateralSum borel_lateral_sum(const Real& x, int series_order, int side, const PrecisionContext& ctx) {
    if (!(x < 0)) throw DomainError("the Borel sum needs x < 0");
    if (side != 1 && side != -1) throw UsageError("side must be +1 or -1");
    PrecisionContext inner = PrecisionContext::make(ctx.digits + 40);
    inner.quad_tol = pow10(-(ctx.digits + 15));
    Complex y, dy;
    {
        PrecisionGuard guard(inner);
        const int K = series_order;
        const auto a = series_coefficients(K);
        const Real kappa = kapaev_kappa();
        const Real k2 = kappa * kappa;
        // Borel transform tau * G(tau^2), G(s) = sum_{k>=0} a_{k+1} s^k / (2k+1)!, in sigma = s / kappa^2
        std::vector<Real> g(static_cast<std::size_t>(K));
        Real fact = 1;  // (2k+1)!
        Real kp = 1;
        for (int k = 0; k < K; ++k) {
            if (k > 0) fact *= Real(2 * k) * Real(2 * k + 1);
            g[k] = a[k + 1] * kp / fact;
            kp *= k2;
        }
        const int L = (K - 1) / 2;
        const auto G = pade(g, L, K - 1 - L);
        const Real u = -x;
        const Real z = mp::pow(u, Real(-5) / 4);
        const Real theta = side * pi() / 6;
        const Complex dir = polar(Real(1), theta);
        const Real R = z * (Real(inner.digits + 20) * mp::log(Real(10)) + 50) / mp::cos(theta);
        const Real iz = 1 / z;
        const Real iz2 = iz * iz;
        auto acc = [&](const LegPoint& p, const Complex& factor, std::span<Complex> sums) {
            const Complex& tau = p.z;
            const Complex v = exp(-tau * iz) * tau * G(tau * tau / k2) * factor;
            sums[0] += v;
            sums[1] += v * tau * iz2;
        };
        auto r = integrate_leg_vector(acc, 2, Segment{Complex(0), dir * R}, QuadratureRule{}, inner);
        const Complex f = Complex(1) + r.value[0];
        const Complex fz = r.value[1];
        const Real y0 = mp::sqrt(u / 6);
        y = f * y0;
        // dS/du = S / (2u) + y0 f'(z) dz/du, dz/du = -(5/4) z / u
        const Complex dSdu = y / (2 * u) - fz * (y0 * Real(5) / 4 * z / u);
        dy = -dSdu;
    }
    PrecisionGuard guard(ctx);
    return LateralSum{at_default_precision(y), at_default_precision(dy), series_order};
}

SeedState seed_state(const PainleveParameters& p, const PrecisionContext& ctx) {
    p.validate();
    PrecisionGuard guard(ctx);
    const auto a = series_coefficients(p.series_order);
    const auto mode = exponential_mode(p.x0, a);
    SeedState s;
    s.method = p.seed_method;
    Real base_y, base_dy;
    Real err = 0;
    if (p.seed_method == SeedMethod::borel_pade) {
        const auto lat = borel_lateral_sum(p.x0, p.series_order, 1, ctx);
        base_y = lat.y.re;
        base_dy = lat.dy.re;
        // the imaginary part of the alpha = 1 sum is -D/2; its defect measures the resummation error
        const Real dy_def = mp::abs(lat.y.im + mode.D / 2);
        const Real ddy_def = mp::abs(lat.dy.im + mode.dD / 2);
        s.lateral_defect = dy_def / mode.D;
        err = std::max(dy_def, ddy_def);
        s.series_terms = p.series_order;
    } else {
        const auto sv = series_value(a, p.x0, -1);
        base_y = sv.y;
        base_dy = sv.dy;
        // optimal truncation: the remainder is of the order of the smallest term, with some slack
        err = 2 * sv.last_term;
        s.series_terms = sv.terms;
        s.lateral_defect = -1;
    }
    const Complex k = (p.alpha - Complex(Real(1) / 2)) * i_unit();
    s.y = Complex(base_y) - k * mode.D;
    s.dy = Complex(base_dy) - k * mode.dD;
    err += abs(k) * (mode.D + mp::abs(mode.dD)) * mode.rel_error;
    err += pow10(-ctx.digits) * (1 + abs(s.y) + abs(s.dy));
    s.error = err;
    const Real tol = p.seed_tol ? *p.seed_tol : ctx.ode_tol * pow10(10);
    if (err > tol) {
        throw SeedAccuracyError("estimated seed error " + to_string(err, 3) + " exceeds " + to_string(tol, 3) +
                                " at x0 = " + to_string(p.x0, 6));
    }
    return s;
}

}  // namespace qpl

