#include "qpl/potential/potential.hpp"

#include "qpl/numerics/errors.hpp"

#include <algorithm>

namespace qpl {

namespace mp = boost::multiprecision;

Complex eval_potential(const Real& t, const Complex& z) {
    const Complex z2 = z * z;
    return z2 / Real(2) + z2 * z2 * (t / 4);
}

Real t_critical() { return Real(-1) / 12; }

bool is_critical(const Real& t) {
    const int digits = static_cast<int>(Real::default_precision());
    return mp::abs(t + Real(1) / 12) < pow10(-(digits - 5));
}

namespace {

// sqrt(1 + 12t), with roundoff below zero at the critical point clamped.
Real root12(const Real& t) {
    Real r = 1 + 12 * t;
    if (r < 0) {
        if (is_critical(t)) return Real(0);
        throw DomainError("t < -1/12: the endpoint c_t is not real");
    }
    return mp::sqrt(r);
}

}  // namespace

Endpoints endpoints(const Real& t) {
    const Real s = root12(t);
    Endpoints e;
    // (2/(3t))(s - 1) rewritten without the cancellation at small t
    e.c2 = 8 / (s + 1);
    e.c = mp::sqrt(e.c2);
    if (t < 0) {
        e.d2 = -(s + 2) / (3 * t);
        e.d = mp::sqrt(e.d2);
    }
    return e;
}

Real density_mu_critical(const Real& x) {
    const Real r = 8 - x * x;
    if (r < 0) throw DomainError("x outside [-sqrt 8, sqrt 8]");
    return r * mp::sqrt(r) / (24 * pi());
}

Real density_mu(const Real& t, const Real& x) {
    if (!(t < 0)) throw DomainError("density_mu needs -1/12 <= t < 0");
    return MeasureDensity::regular(t)(x);
}

Real density_vcirc(const Real& x) {
    if (mp::abs(x) >= mp::sqrt(Real(8))) throw DomainError("v is defined for |x| < sqrt 8");
    const Real x2 = x * x;
    return (8 + 4 * x2 - x2 * x2) / (2 * pi() * mp::sqrt(8 - x2));
}

MeasureDensity MeasureDensity::regular(const Real& t) {
    if (!(t < 0)) throw DomainError("regular measure needs -1/12 <= t < 0");
    const auto e = endpoints(t);
    return {Kind::regular, t, e.c, e.d2};
}

MeasureDensity MeasureDensity::modified(const Real& t) { return {Kind::modified, t, mp::sqrt(Real(8)), Real(8)}; }

Real MeasureDensity::operator()(const Real& x, const Real& from_left, const Real& to_right) const {
    if (from_left < 0 || to_right < 0) throw DomainError("density evaluated outside its support");
    const Real w = from_left * to_right;  // c^2 - x^2
    const Real p = pi();
    if (kind == Kind::regular) return t / (2 * p) * (x * x - d2) * mp::sqrt(w);
    const Real sw = mp::sqrt(w);
    const Real cr = w * sw / (24 * p);
    const Real k = t + Real(1) / 12;
    if (k == 0) return cr;
    const Real x2 = x * x;
    return cr + k * (8 + 4 * x2 - x2 * x2) / (2 * p * sw);
}

QuadResult<Real> total_mass(const MeasureDensity& m, const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    auto f = [&](const RealPoint& p) { return m(p.x, p.from_a, p.to_b); };
    return integrate_real(f, -m.c, m.c, QuadratureRule{}, ctx, Execution::serial);
}

ELResult euler_lagrange_residual(const MeasureDensity& m, const std::vector<Real>& probes,
                                 const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    if (probes.empty()) throw UsageError("no probe points");
    ELResult out;
    const QuadratureRule rule;
    for (const Real& x : probes) {
        if (!(x > -m.c && x < m.c)) throw DomainError("probe points must lie strictly inside the support");
        const Real U = mp::sqrt(x + m.c);
        const Real W = mp::sqrt(m.c - x);
        // y = x - u^2: y + c = (U - u)(U + u), c - y = c - x + u^2
        auto left = [&](const RealPoint& p) {
            const Real& u = p.x;
            if (u == 0) return Real(0);
            const Real u2 = u * u;
            return 2 * u * mp::log(u2) * m(x - u2, p.to_b * (U + u), (m.c - x) + u2);
        };
        auto right = [&](const RealPoint& p) {
            const Real& u = p.x;
            if (u == 0) return Real(0);
            const Real u2 = u * u;
            return 2 * u * mp::log(u2) * m(x + u2, (x + m.c) + u2, p.to_b * (W + u));
        };
        const auto l = integrate_real(left, Real(0), U, rule, ctx, Execution::serial);
        const auto r = integrate_real(right, Real(0), W, rule, ctx, Execution::serial);
        out.values.push_back(2 * (l.value + r.value) - eval_potential(m.t, Complex(x)).re);
    }
    out.residual = 0;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        for (std::size_t j = i + 1; j < out.values.size(); ++j) {
            out.residual = std::max(out.residual, Real(mp::abs(out.values[i] - out.values[j])));
        }
    }
    return out;
}

PhiFunction PhiFunction::regular(const Real& t) {
    if (!(t < 0) || t < t_critical()) throw DomainError("regular phi needs -1/12 <= t < 0");
    return {PhiVariant::regular, t};
}
PhiFunction PhiFunction::critical_cr() { return {PhiVariant::critical_cr, t_critical()}; }
PhiFunction PhiFunction::critical_circ() { return {PhiVariant::critical_circ, t_critical()}; }
PhiFunction PhiFunction::critical_t(const Real& t) { return {PhiVariant::critical_t, t}; }

Real PhiFunction::endpoint() const {
    if (variant == PhiVariant::regular) return endpoints(t).c;
    return mp::sqrt(Real(8));
}

Complex phi_prime(const PhiFunction& phi, const Complex& z) {
    return phi_prime(phi, z, z - Complex(phi.endpoint()));
}

Complex phi_prime(const PhiFunction& phi, const Complex& z, const Complex& z_minus_c) {
    const Real c = phi.endpoint();
    const Complex root = sqrt(z_minus_c) * sqrt(z_minus_c + Complex(2 * c));
    const Complex z2 = z * z;
    switch (phi.variant) {
        case PhiVariant::regular: {
            const Real d2 = endpoints(phi.t).d2;
            return (z2 - Complex(d2)) * root * (-phi.t / 2);
        }
        case PhiVariant::critical_cr:
            return root * root * root / Real(24);
        case PhiVariant::critical_circ:
            return (Complex(8) + z2 * Real(4) - z2 * z2) / (root * Real(2));
        case PhiVariant::critical_t: {
            const Complex cr = root * root * root / Real(24);
            const Complex circ = (Complex(8) + z2 * Real(4) - z2 * z2) / (root * Real(2));
            return cr + circ * (phi.t + Real(1) / 12);
        }
    }
    return {};
}

Complex integrate_phi_prime(const PhiFunction& phi, const Complex& a, const Complex& b, const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    if (a == b) return {};
    const Complex c(phi.endpoint());
    const Complex d = b - a;
    const Complex a_off = a - c;
    const Complex b_off = b - c;
    auto f = [&](const LegPoint& p) {
        const Complex off = p.s <= p.s_comp ? a_off + d * p.s : b_off - d * p.s_comp;
        return phi_prime(phi, p.z, off);
    };
    return integrate_leg(f, Segment{a, b}, QuadratureRule{}, ctx, Execution::serial).value;
}

namespace {

void check_segment(const Complex& a, const Complex& b, const Real& c) {
    // Where does the segment meet the real axis?
    if (a.im == 0 && b.im == 0) {
        if (std::min(a.re, b.re) < c) throw BranchCutError("path runs along the cut");
        return;
    }
    if ((a.im > 0 && b.im > 0) || (a.im < 0 && b.im < 0)) return;
    Real x;
    if (a.im == 0) {
        x = a.re;
    } else if (b.im == 0) {
        x = b.re;
    } else {
        const Real s = a.im / (a.im - b.im);
        x = a.re + (b.re - a.re) * s;
    }
    if (x < c) throw BranchCutError("path crosses the cut left of the branch point");
}

}  // namespace

Complex eval_phi_path(const PhiFunction& phi, const Complex& z, const std::vector<Complex>& waypoints,
                      const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    if (phi.variant == PhiVariant::critical_t) {
        const Complex cr = eval_phi_path(PhiFunction::critical_cr(), z, waypoints, ctx);
        const Complex circ = eval_phi_path(PhiFunction::critical_circ(), z, waypoints, ctx);
        return cr + circ * (phi.t + Real(1) / 12);
    }
    const Real c = phi.endpoint();
    std::vector<Complex> pts;
    pts.emplace_back(c);
    pts.insert(pts.end(), waypoints.begin(), waypoints.end());
    pts.push_back(z);
    if (z.im == 0 && z.re < c) throw BranchCutError("phi is not defined on the cut");
    // The first segment leaves from the branch point, so it can only meet the cut
    // if its far end lies on it.
    if (pts[1].im == 0 && pts[1].re < c) throw BranchCutError("waypoint on the cut");
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) check_segment(pts[i], pts[i + 1], c);
    Complex total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += integrate_phi_prime(phi, pts[i], pts[i + 1], ctx);
    return total;
}

Complex eval_phi(const PhiFunction& phi, const Complex& z, const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    const Real c = phi.endpoint();
    if (z.im == 0 && z.re < c) throw BranchCutError("phi is not defined on the cut");
    if (z.re >= c || mp::abs(z.im) >= Real(1) / 2) return eval_phi_path(phi, z, {}, ctx);
    const Real sigma = z.im > 0 ? Real(1) : Real(-1);
    return eval_phi_path(phi, z, {Complex(c, sigma)}, ctx);
}

}  // namespace qpl
