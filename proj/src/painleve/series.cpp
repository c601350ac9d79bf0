#include "qpl/numerics/errors.hpp"
#include "qpl/painleve/painleve.hpp"

namespace qpl {

namespace mp = boost::multiprecision;
using boost::multiprecision::cpp_rational;

std::vector<cpp_rational> series_q_exact(int K) {
    if (K < 0) throw UsageError("series order must be nonnegative");
    // with y = sum_m c_m u^{1/2 - 5m/2}, u = -x, and c_m = q_m / sqrt(6)^{m+1}, matching
    // powers in y_uu = 6 y^2 - u gives
    // q_m = (q_{m-1} P_{m-1} - sum_{j=1}^{m-1} q_j q_{m-j}) / 2, P_j = p_j (p_j - 1), p_j = 1/2 - 5j/2
    std::vector<cpp_rational> q(static_cast<std::size_t>(K) + 1);
    q[0] = 1;
    for (int m = 1; m <= K; ++m) {
        const cpp_rational p = cpp_rational(1, 2) - cpp_rational(5 * (m - 1), 2);
        cpp_rational s = 0;
        for (int j = 1; j < m; ++j) s += q[j] * q[m - j];
        q[m] = (q[m - 1] * p * (p - 1) - s) / 2;
    }
    return q;
}

std::vector<Real> series_coefficients(int K) {
    if (K < 0) throw UsageError("series order must be nonnegative");
    std::vector<Real> q(static_cast<std::size_t>(K) + 1);
    q[0] = 1;
    for (int m = 1; m <= K; ++m) {
        const Real p = Real(1) / 2 - Real(5 * (m - 1)) / 2;
        Real s = 0;
        for (int j = 1; j < m; ++j) s += q[j] * q[m - j];
        q[m] = (q[m - 1] * p * (p - 1) - s) / 2;
    }
    const Real r6 = mp::sqrt(Real(6));
    Real scale = 1;
    std::vector<Real> a(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
        a[k] = q[k] / scale;
        scale *= r6;
    }
    return a;
}

SeriesValue series_value(const std::vector<Real>& a, const Real& x, int K) {
    if (!(x < 0)) throw DomainError("the asymptotic series needs x < 0");
    if (K >= static_cast<int>(a.size())) throw UsageError("not enough series coefficients");
    const Real u = -x;
    const Real y0 = mp::sqrt(u / 6);
    const Real step = mp::pow(u, Real(-5) / 2);
    SeriesValue out;
    // y = y0 sum a_k u^{-5k/2} = sum c_k u^{p_k}, p_k = 1/2 - 5k/2
    Real f = 0;
    Real fu = 0;  // sum p_k a_k u^{-5k/2}
    Real fuu = 0;
    Real power = 1;
    Real prev = -1;
    const int kmax = K < 0 ? static_cast<int>(a.size()) - 1 : K;
    for (int k = 0; k <= kmax; ++k) {
        const Real term = a[k] * power;
        const Real mag = mp::abs(term);
        if (K < 0 && k > 1 && mag >= prev) break;
        const Real p = Real(1) / 2 - Real(5 * k) / 2;
        f += term;
        fu += term * p;
        fuu += term * p * (p - 1);
        out.last_term = mag * y0;
        out.terms = k + 1;
        prev = mag;
        power *= step;
    }
    out.y = y0 * f;
    out.dy = -y0 * fu / u;
    out.d2y = y0 * fuu / (u * u);
    return out;
}

Real kapaev_kappa() { return mp::pow(Real(2), Real(11) / 4) * mp::pow(Real(3), Real(1) / 4) / 5; }

namespace {

Real kapaev_constant() {
    return 1 / (mp::sqrt(pi()) * mp::pow(Real(2), Real(11) / 8) * mp::pow(Real(3), Real(1) / 8));
}

}  // namespace

Complex kapaev_leading(const Complex& alpha, const Real& x) {
    if (!(x < 0)) throw DomainError("the exponential correction needs x < 0");
    const Real u = -x;
    const Real mag = kapaev_constant() * mp::pow(u, Real(-1) / 8) * mp::exp(-kapaev_kappa() * mp::pow(u, Real(5) / 4));
    return -(i_unit() * (alpha - Complex(1))) * mag;
}

ExponentialMode exponential_mode(const Real& x, const std::vector<Real>& a) {
    if (!(x < 0)) throw DomainError("the exponential mode needs x < 0");
    const Real u = -x;
    // Riccati w = D_u / D solves w_u + w^2 = 12 y. With w = sum w_m u^{e_m},
    // e_m = 1/4 - 5m/4, and 12 y = sqrt(24 u) (1 + sum a_k u^{-5k/2}):
    // 2 w_0 w_m + sum_{i=1}^{m-1} w_i w_{m-i} + e_{m-1} w_{m-1} = sqrt(24) a_{m/2} [m even]
    const int mmax = 2 * (static_cast<int>(a.size()) - 1);
    const Real r24 = mp::sqrt(Real(24));
    std::vector<Real> w(static_cast<std::size_t>(mmax) + 1);
    auto e = [](int m) { return Real(1) / 4 - Real(5 * m) / 4; };
    w[0] = -mp::sqrt(r24);
    for (int m = 1; m <= mmax; ++m) {
        Real rhs = m % 2 == 0 ? r24 * a[m / 2] : Real(0);
        for (int i = 1; i < m; ++i) rhs -= w[i] * w[m - i];
        rhs -= e(m - 1) * w[m - 1];
        w[m] = rhs / (2 * w[0]);
    }
    // log D = w_0 u^{5/4} / (5/4) - (1/8) log u + sum_{m>=2} w_m u^{e_m + 1} / (e_m + 1) + log C
    const Real kappa = kapaev_kappa();
    Real logD = -kappa * mp::pow(u, Real(5) / 4) - mp::log(u) / 8;
    Real W = w[0] * mp::pow(u, e(0)) + w[1] * mp::pow(u, e(1));
    ExponentialMode out;
    out.terms = 2;
    Real prev = -1;
    const Real step = mp::pow(u, Real(-5) / 4);
    Real power = mp::pow(u, e(2) + 1);  // u^{-5/4}
    Real wpow = mp::pow(u, e(2));
    out.rel_error = 0;
    for (int m = 2; m <= mmax; ++m) {
        const Real term = w[m] * power / (e(m) + 1);
        const Real mag = mp::abs(term) + mp::abs(w[m] * wpow * u);
        if (m > 3 && mag >= prev) break;
        logD += term;
        W += w[m] * wpow;
        out.rel_error = mag;
        out.terms = m + 1;
        prev = mag;
        power *= step;
        wpow *= step;
    }
    out.D = kapaev_constant() * mp::exp(logD);
    out.dD = -W * out.D;  // d/dx = -d/du
    return out;
}

}  // namespace qpl
