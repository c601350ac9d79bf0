#include "qpl/contour/contour.hpp"

#include "qpl/numerics/errors.hpp"

#include <algorithm>

namespace qpl {

namespace mp = boost::multiprecision;

Real trace_tolerance(const PrecisionContext& ctx) { return pow10(-ctx.digits / 4); }

namespace {

struct Increment {
    Complex value;
    Real error;
};

// Integral of phi' from a to b. The integrand is scaled to order one so the
// quadrature tolerance acts relative to the size of the increment.
Increment phi_increment(const PhiFunction& phi, const Complex& a, const Complex& b, const PrecisionContext& ctx) {
    const Complex d = b - a;
    const Real scale = std::max(abs(phi_prime(phi, a)), abs(phi_prime(phi, b))) * abs(d);
    if (scale == 0) return {Complex(), Real(0)};
    const Real inv = 1 / scale;
    const Complex c(phi.endpoint());
    const Complex a_off = a - c;
    const Complex b_off = b - c;
    auto f = [&](const LegPoint& p) {
        const Complex off = p.s <= p.s_comp ? a_off + d * p.s : b_off - d * p.s_comp;
        return phi_prime(phi, p.z, off) * inv;
    };
    auto r = integrate_leg(f, Segment{a, b}, QuadratureRule{}, ctx, Execution::serial);
    return {r.value * scale, r.error * scale};
}

struct State {
    Complex z;
    Complex phi;  // relative to the start point
    Real error;   // accumulated quadrature error in phi
};

class Tracer {
public:
    Tracer(const PhiFunction& phi, int sigma, const PrecisionContext& ctx) : phi_(phi), sigma_(sigma), ctx_(ctx) {}

    // Unit vector along which Re phi falls (sigma = +1) or rises (sigma = -1).
    [[nodiscard]] Complex direction(const Complex& z) const {
        const Complex d = phi_prime(phi_, z);
        const Real m = abs(d);
        if (m == 0) throw SingularStart("phi' vanishes on the traced curve at " + to_string(z.re, 10));
        return conj(d) * (-sigma_ / m);
    }

    [[nodiscard]] State advance(const State& from, const Complex& to) const {
        const auto inc = phi_increment(phi_, from.z, to, ctx_);
        return {to, from.phi + inc.value, from.error + inc.error};
    }

    // Newton along the normal until Im phi = 0 relative to |phi|.
    [[nodiscard]] State project(State s) const {
        const Real floor = pow10(-2 * ctx_.digits);
        for (int it = 0; it < 16; ++it) {
            const Real tol = ctx_.quad_tol * 10 * std::max(abs(s.phi), floor);
            if (mp::abs(s.phi.im) <= tol) return s;
            const Complex n = direction(s.z) * i_unit();
            const Real slope = (phi_prime(phi_, s.z) * n).im;
            if (slope == 0) break;
            s = advance(s, s.z + n * (-s.phi.im / slope));
        }
        throw StallError("projection onto the level set did not converge near " + to_string(s.z.re, 10) + " + " +
                         to_string(s.z.im, 10) + "i");
    }

private:
    const PhiFunction& phi_;
    int sigma_;
    const PrecisionContext& ctx_;
};

// Angle in the open upper (half = 1) or lower (half = -1) half plane where phi,
// taken relative to start, is real with sign -sigma at distance eps.
Real departure_angle(const PhiFunction& phi, const Complex& start, int half, int sigma, const Real& eps,
                     const PrecisionContext& ctx) {
    constexpr int kScan = 96;
    auto im_at = [&](const Real& theta, Real* re) {
        const auto inc = phi_increment(phi, start, start + polar(eps, theta), ctx);
        if (re) *re = inc.value.re;
        return inc.value.im;
    };
    std::vector<std::pair<Real, Real>> brackets;
    Real prev_theta = pi() * half / kScan;
    Real prev_re;
    Real prev_im = im_at(prev_theta, &prev_re);
    for (int m = 2; m < kScan; ++m) {
        const Real theta = pi() * half * m / kScan;
        Real re;
        const Real im = im_at(theta, &re);
        if ((im > 0) != (prev_im > 0) && sigma * re < 0 && sigma * prev_re < 0) brackets.emplace_back(prev_theta, theta);
        prev_theta = theta;
        prev_im = im;
        prev_re = re;
    }
    if (brackets.size() != 1) {
        throw SingularStart("expected one departure direction, found " + std::to_string(brackets.size()));
    }
    auto [lo, hi] = brackets.front();
    Real f_lo = im_at(lo, nullptr);
    // coarse bisection; the Newton projection at the first point does the rest
    for (int it = 0; it < 20; ++it) {
        const Real mid = (lo + hi) / 2;
        const Real f_mid = im_at(mid, nullptr);
        if ((f_mid > 0) == (f_lo > 0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2;
}

TracedCurve trace_level(const PhiFunction& phi, const Complex& start, int half, int sigma, LevelKind kind,
                        const TraceOptions& opt, const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    if (!(opt.max_step > 0) || !(opt.stop_radius > abs(start)) || !(opt.arc_budget > 0)) {
        throw UsageError("trace options need max_step > 0, arc_budget > 0 and stop_radius beyond the start");
    }
    const Real eps = opt.epsilon ? *opt.epsilon : pow10(-ctx.digits / 5);
    const Tracer tracer(phi, sigma, ctx);
    const State origin{start, Complex(), Real(0)};

    const Real theta = departure_angle(phi, start, half, sigma, eps, ctx);
    State cur = tracer.project(tracer.advance(origin, start + polar(eps, theta)));

    TracedCurve out;
    out.kind = kind;
    out.start = start;
    out.departure_angle = arg(cur.z - start);
    std::vector<State> states{cur};
    Real arc = 0;
    std::vector<Real> arcs{arc};

    auto step_to = [&](const State& s, const Complex& v, const Real& h) {
        return tracer.project(tracer.advance(s, s.z + v * h));
    };

    for (;;) {
        const Real h = std::min(opt.max_step, abs(cur.z - start) / 2);
        if (arc + h > opt.arc_budget) break;
        const Complex v = tracer.direction(cur.z);
        State next = step_to(cur, v, h);
        bool landed = false;
        if (abs(next.z) >= opt.stop_radius) {
            // land on |z| = stop_radius: Illinois regula falsi on the step length
            Real a = 0;
            Real b = h;
            Real ga = abs(cur.z) - opt.stop_radius;
            Real gb = abs(next.z) - opt.stop_radius;
            int last = 0;
            const Real tol = ctx.quad_tol * opt.stop_radius;
            bool done = gb <= tol;
            for (int it = 0; it < 100 && !done; ++it) {
                const Real c = b - gb * (b - a) / (gb - ga);
                State sc = step_to(cur, v, c);
                const Real gc = abs(sc.z) - opt.stop_radius;
                done = mp::abs(gc) <= tol;
                if (done || gc > 0) {
                    b = c;
                    gb = gc;
                    next = sc;
                    if (last == 1) ga /= 2;
                    last = 1;
                } else {
                    a = c;
                    ga = gc;
                    if (last == -1) gb /= 2;
                    last = -1;
                }
            }
            landed = true;
        }
        if (!(sigma * (next.phi.re - cur.phi.re) < 0)) {
            throw StallError("Re phi failed to " + std::string(sigma > 0 ? "decrease" : "increase") + " near " +
                             to_string(cur.z.re, 10) + " + " + to_string(cur.z.im, 10) + "i");
        }
        arc += abs(next.z - cur.z);
        cur = next;
        states.push_back(cur);
        arcs.push_back(arc);
        if (landed) {
            out.complete = true;
            break;
        }
    }

    // phi at the start on the side the curve leaves into
    Complex shift;
    if (kind == LevelKind::imaginary_part && start.re < phi.endpoint()) {
        shift = eval_phi(phi, states.front().z, ctx) - states.front().phi;
    } else if (start.re > phi.endpoint()) {
        shift = eval_phi(phi, start, ctx);
    }
    out.phase_level = kind == LevelKind::imaginary_part ? shift.im : 2 * pi() * half;
    out.quality = 0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& s = states[k];
        out.points.push_back(s.z);
        out.phi.push_back(s.phi + shift);
        out.s.push_back(arcs[k]);
        Real dev = mp::abs(s.phi.im) + s.error;
        if (kind == LevelKind::argument) dev /= abs(s.phi);
        out.quality = std::max(out.quality, dev);
    }
    return out;
}

}  // namespace

TracedCurve trace_steepest(int quadrant, const PhiFunction& phi, const TraceOptions& opt, const PrecisionContext& ctx) {
    if (quadrant < 1 || quadrant > 4) throw UsageError("quadrant must be 1..4");
    PrecisionGuard guard(ctx);
    Real z0;
    switch (phi.variant) {
        case PhiVariant::critical_cr: z0 = phi.endpoint(); break;
        case PhiVariant::regular: {
            const auto e = endpoints(phi.t);
            if (!e.d) throw DomainError("the regular steepest descent curves need d_t");
            z0 = *e.d;
            break;
        }
        default: throw UsageError("steepest descent tracing supports the critical_cr and regular phi");
    }
    const bool right = quadrant == 1 || quadrant == 4;
    const int half = quadrant <= 2 ? 1 : -1;
    return trace_level(phi, Complex(right ? z0 : Real(-z0)), half, 1, LevelKind::imaginary_part, opt, ctx);
}

TracedCurve trace_phase_curve(int side, const TraceOptions& opt, const PrecisionContext& ctx) {
    if (side != 1 && side != -1) throw UsageError("side must be +1 or -1");
    PrecisionGuard guard(ctx);
    const auto phi = PhiFunction::critical_cr();
    return trace_level(phi, Complex(phi.endpoint()), side, -1, LevelKind::argument, opt, ctx);
}

ContourPath build_deformed_contour(const Complex& alpha, const Complex& beta, const std::array<TracedCurve, 4>& curves,
                                   int max_vertices) {
    if (max_vertices < 2) throw UsageError("max_vertices must be at least 2");
    const Complex right = curves[0].start;
    ContourPath path;
    ContourPiece g0;
    g0.label = ContourLabel::gamma0;
    g0.vertices = {-right, right};
    path.pieces.push_back(g0);
    const ContourLabel labels[4] = {ContourLabel::gamma1, ContourLabel::gamma2, ContourLabel::gamma3,
                                    ContourLabel::gamma4};
    const Complex weights[4] = {alpha, Complex(1) - beta, beta, Complex(1) - alpha};
    const int orient[4] = {1, -1, -1, 1};
    for (int j = 0; j < 4; ++j) {
        const auto& c = curves[j];
        if (c.points.empty()) throw UsageError("empty traced curve");
        ContourPiece p;
        p.label = labels[j];
        p.weight = weights[j];
        p.orientation = orient[j];
        p.unbounded = true;
        p.direction = polar(Real(1), pi() * (2 * j + 1) / 4);
        p.vertices.push_back(c.start);
        const std::size_t n = c.points.size();
        const std::size_t keep = std::min<std::size_t>(n, static_cast<std::size_t>(max_vertices));
        for (std::size_t k = 0; k < keep; ++k) {
            const std::size_t idx = keep == 1 ? n - 1 : k * (n - 1) / (keep - 1);
            p.vertices.push_back(c.points[idx]);
        }
        // close onto the bisector so the tail is an exact ray
        p.vertices.push_back(p.direction * abs(c.points.back()));
        path.pieces.push_back(p);
    }
    return path;
}

}  // namespace qpl
