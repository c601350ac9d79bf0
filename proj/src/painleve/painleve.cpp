#include "qpl/painleve/painleve.hpp"

#include "qpl/numerics/errors.hpp"
#include "qpl/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace qpl {

namespace mp = boost::multiprecision;

StokesData stokes_multipliers(const Complex& alpha) {
    const Complex i = i_unit();
    StokesData d;
    d.s[0] = Complex(0);
    d.s[1] = i * alpha;
    d.s[2] = i;
    d.s[3] = i;                          // s_{-2}
    d.s[4] = i * (Complex(1) - alpha);  // s_{-1}
    return d;
}

Real stokes_relation_defect(const StokesData& s) {
    Real worst = 0;
    for (int k = 0; k < 5; ++k) {
        const Complex r = Complex(1) + s(k) * s(k + 1) + i_unit() * s(k + 3);
        worst = std::max(worst, abs(r));
    }
    return worst;
}

Complex hamiltonian(const Real& x, const Complex& y, const Complex& dy) {
    return dy * dy / Real(2) - Real(2) * y * y * y - y * x;
}

namespace {

int taylor_order(const PrecisionContext& ctx) {
    const double ln_tol = ctx.ode_tol_log10() * std::log(10.0);
    return static_cast<int>(std::ceil(-ln_tol / 2)) + 4;
}

// Coefficients of y'' = 6 y^2 + x about xc.
void taylor_coefficients(const Real& xc, const Complex& y, const Complex& dy, int n, std::vector<Complex>& c) {
    c.assign(static_cast<std::size_t>(n) + 1, Complex());
    c[0] = y;
    c[1] = dy;
    for (int k = 0; k + 2 <= n; ++k) {
        Complex conv;
        for (int j = 0; j < (k + 1) / 2; ++j) conv.add_product(c[j], c[k - j]);
        conv = conv * Real(2);
        if (k % 2 == 0) conv.add_product(c[k / 2], c[k / 2]);
        Complex rhs = conv * Real(6);
        if (k == 0) rhs += Complex(xc);
        if (k == 1) rhs += Complex(1);
        c[k + 2] = rhs / Real((k + 1) * (k + 2));
    }
}

// Variation e'' = 12 y e along the same step.
void variational_coefficients(const std::vector<Complex>& c, const Complex& e0, const Complex& de0,
                              std::vector<Complex>& e) {
    const int n = static_cast<int>(c.size()) - 1;
    e.assign(c.size(), Complex());
    e[0] = e0;
    e[1] = de0;
    for (int k = 0; k + 2 <= n; ++k) {
        Complex conv;
        for (int j = 0; j <= k; ++j) conv.add_product(c[j], e[k - j]);
        e[k + 2] = conv * Real(12) / Real((k + 1) * (k + 2));
    }
}

void eval_poly(const std::vector<Complex>& c, const Real& s, Complex& v, Complex& dv) {
    v = Complex();
    dv = Complex();
    for (std::size_t k = c.size(); k-- > 0;) {
        dv = dv * s + v;
        v = v * s + c[k];
    }
}

// Radius of convergence estimate from the tail of the coefficients (log10 scale).
double radius_estimate(const std::vector<Complex>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    double worst = -1e300;
    for (int k = n / 2; k <= n; ++k) {
        const double l = log10_abs(abs(c[k]));
        if (!std::isfinite(l)) continue;
        worst = std::max(worst, l / k);
    }
    if (worst == -1e300) return 1e300;
    return std::pow(10.0, -worst);
}

const TaylorPiece& piece_for(const std::vector<TaylorPiece>& pieces, const Real& x) {
    auto it = std::upper_bound(pieces.begin(), pieces.end(), x,
                               [](const Real& v, const TaylorPiece& p) { return v < p.x; });
    if (it != pieces.begin()) --it;
    return *it;
}

}  // namespace

PainleveSolution solve_painleve(const PainleveParameters& p, const Real& x_target, const PrecisionContext& ctx,
                                const PainleveOptions& opt) {
    p.validate();
    PrecisionGuard guard(ctx);
    if (!(x_target > p.x0)) throw UsageError("x_target must exceed the seed point");
    PainleveSolution sol;
    sol.alpha = p.alpha;
    sol.x0 = p.x0;
    sol.digits = ctx.digits;
    sol.seed = seed_state(p, ctx);

    const int n = taylor_order(ctx);
    const Real hmin = pow10(-ctx.digits / 2);
    Real x = p.x0;
    Complex y = sol.seed.y, dy = sol.seed.dy;
    Complex e1(1), de1(0), e2(0), de2(1);
    while (x < x_target) {
        TaylorPiece piece;
        piece.x = x;
        taylor_coefficients(x, y, dy, n, piece.c);
        const double rho = radius_estimate(piece.c);
        Real h = Real(rho * std::exp(-2.0));
        h = std::min(h, Real(2));
        if (x + h > x_target) h = x_target - x;
        if (h < hmin) throw StepUnderflow("Taylor step fell below 1e-" + std::to_string(ctx.digits / 2));
        piece.h = h;
        variational_coefficients(piece.c, e1, de1, piece.e1);
        variational_coefficients(piece.c, e2, de2, piece.e2);
        eval_poly(piece.c, h, y, dy);
        eval_poly(piece.e1, h, e1, de1);
        eval_poly(piece.e2, h, e2, de2);
        x = x + h;
        if (x_target - x < hmin) x = x_target;
        sol.pieces.push_back(std::move(piece));
        if (abs(y) > opt.blowup_ceiling) {
            PoleEvent ev;
            ev.x_approach = x;
            ev.y_approach = y;
            ev.pole_estimate = x + (Complex(1) / sqrt(y)).re;
            sol.poles.push_back(ev);
            break;
        }
    }
    sol.x_end = x;

    // output grid: x0 + k * step, plus the end point
    const Real last = sol.halted() ? sol.pieces.back().x : sol.x_end;
    for (int k = 0;; ++k) {
        const Real g = p.x0 + opt.grid_step * k;
        if (!(g < last)) break;
        sol.grid.push_back(g);
    }
    if (!sol.halted()) sol.grid.push_back(sol.x_end);
    for (const auto& g : sol.grid) {
        const auto& pc = piece_for(sol.pieces, g);
        Complex v, dv;
        eval_poly(pc.c, g - pc.x, v, dv);
        sol.y.push_back(v);
        sol.dy.push_back(dv);
        sol.H.push_back(hamiltonian(g, v, dv));
        sol.seed_error.push_back(sol.seed_error_at(g));
    }
    return sol;
}

namespace {

void check_range(const PainleveSolution& s, const Real& x) {
    if (!s.poles.empty() && x >= s.poles.front().x_approach) {
        throw PoleHit("x = " + to_string(x, 8) + " lies beyond the pole near " +
                          to_string(s.poles.front().pole_estimate, 12),
                      s.poles.front().pole_estimate.convert_to<double>());
    }
    if (x < s.x0 || x > s.x_end) throw UsageError("x = " + to_string(x, 8) + " is outside the solved range");
    if (s.pieces.empty()) throw UsageError("dense output is not available for a loaded solution");
}

}  // namespace

Complex PainleveSolution::y_at(const Real& x) const {
    check_range(*this, x);
    const auto& pc = piece_for(pieces, x);
    Complex v, dv;
    eval_poly(pc.c, x - pc.x, v, dv);
    return v;
}

Complex PainleveSolution::dy_at(const Real& x) const {
    check_range(*this, x);
    const auto& pc = piece_for(pieces, x);
    Complex v, dv;
    eval_poly(pc.c, x - pc.x, v, dv);
    return dv;
}

Complex PainleveSolution::H_at(const Real& x) const {
    check_range(*this, x);
    const auto& pc = piece_for(pieces, x);
    Complex v, dv;
    eval_poly(pc.c, x - pc.x, v, dv);
    return hamiltonian(x, v, dv);
}

Real PainleveSolution::seed_error_at(const Real& x) const {
    if (pieces.empty()) throw UsageError("dense output is not available for a loaded solution");
    const auto& pc = piece_for(pieces, x);
    Complex a, da, b, db;
    eval_poly(pc.e1, x - pc.x, a, da);
    eval_poly(pc.e2, x - pc.x, b, db);
    return seed.error * (abs(a) + abs(b));
}

Real hamiltonian_drift(const PainleveSolution& s, const Real& a, const Real& b, int samples,
                       const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    if (samples < 1) throw UsageError("need at least one sample");
    const int m = 32;
    const Real h = Real(1) / 100;
    if (a - m * h < s.x0 || b + m * h > s.x_end) throw UsageError("stencil leaves the solved range");
    std::vector<Real> offsets;
    for (int j = -m; j <= m; ++j) offsets.push_back(h * j);
    const auto w = fd_weights_first_derivative(offsets);
    Real worst = 0;
    for (int i = 0; i < samples; ++i) {
        const Real x = samples == 1 ? a : a + (b - a) * i / (samples - 1);
        Complex dH;
        for (int j = 0; j <= 2 * m; ++j) {
            if (w[j] == 0) continue;
            dH += s.H_at(x + offsets[j]) * w[j];
        }
        worst = std::max(worst, abs(dH + s.y_at(x)));
    }
    return worst;
}

namespace {

std::mutex cache_mutex;
std::map<std::string, PainleveSolution> cache;

std::string cache_key(const PainleveParameters& p, const PrecisionContext& ctx) {
    return to_string(p.alpha) + "|" + to_string(p.x0) + "|" + std::to_string(p.series_order) + "|" +
           to_string(p.seed_method) + "|" + std::to_string(ctx.digits) + "|" + to_string(ctx.ode_tol);
}

}  // namespace

std::vector<PointValue> eval_y_and_H(const PainleveParameters& p, const std::vector<Real>& xs,
                                     const PrecisionContext& ctx) {
    if (xs.empty()) return {};
    PrecisionGuard guard(ctx);
    Real hi = *std::max_element(xs.begin(), xs.end());
    const std::string key = cache_key(p, ctx);
    const PainleveSolution* sol = nullptr;
    {
        std::lock_guard lock(cache_mutex);
        auto it = cache.find(key);
        const bool covered = it != cache.end() && (it->second.halted() || it->second.x_end >= hi);
        if (!covered) {
            const Real target = std::max(hi, p.x0 + 1);
            cache[key] = solve_painleve(p, target, ctx);
            it = cache.find(key);
        }
        sol = &it->second;
    }
    std::vector<PointValue> out;
    for (const auto& x : xs) {
        PointValue v;
        v.x = x;
        v.y = sol->y_at(x);
        v.H = sol->H_at(x);
        v.error = sol->seed_error_at(x);
        out.push_back(v);
    }
    return out;
}

void clear_painleve_cache() {
    std::lock_guard lock(cache_mutex);
    cache.clear();
}

Json to_json(const PainleveSolution& s) {
    Json j;
    j["alpha"] = complex_to_json(s.alpha);
    j["digits"] = s.digits;
    j["seed"] = {{"x0", real_to_json(s.x0)},
                 {"method", to_string(s.seed.method)},
                 {"series_terms", s.seed.series_terms},
                 {"y", complex_to_json(s.seed.y)},
                 {"dy", complex_to_json(s.seed.dy)},
                 {"error", real_to_json(s.seed.error)},
                 {"lateral_defect", real_to_json(s.seed.lateral_defect)}};
    Json grid = Json::array();
    for (const auto& g : s.grid) grid.push_back(real_to_json(g));
    j["grid"] = grid;
    j["y"] = complex_array(s.y);
    j["dy"] = complex_array(s.dy);
    j["H"] = complex_array(s.H);
    Json err = Json::array();
    for (const auto& e : s.seed_error) err.push_back(real_to_json(e));
    j["seed_error"] = err;
    Json poles = Json::array();
    for (const auto& p : s.poles) {
        poles.push_back({{"x_approach", real_to_json(p.x_approach)},
                         {"y_approach", complex_to_json(p.y_approach)},
                         {"pole_estimate", real_to_json(p.pole_estimate)}});
    }
    j["poles"] = poles;
    j["x_end"] = real_to_json(s.x_end);
    return j;
}

PainleveSolution painleve_from_json(const Json& j) {
    PainleveSolution s;
    s.digits = j.at("digits").get<int>();
    PrecisionGuard guard(s.digits);
    s.alpha = complex_from_json(j.at("alpha"));
    const auto& seed = j.at("seed");
    s.x0 = real_from_json(seed.at("x0"));
    s.seed.method = parse_seed_method(seed.at("method").get<std::string>());
    s.seed.series_terms = seed.at("series_terms").get<int>();
    s.seed.y = complex_from_json(seed.at("y"));
    s.seed.dy = complex_from_json(seed.at("dy"));
    s.seed.error = real_from_json(seed.at("error"));
    s.seed.lateral_defect = real_from_json(seed.at("lateral_defect"));
    for (const auto& g : j.at("grid")) s.grid.push_back(real_from_json(g));
    s.y = complex_vector(j.at("y"));
    s.dy = complex_vector(j.at("dy"));
    s.H = complex_vector(j.at("H"));
    for (const auto& e : j.at("seed_error")) s.seed_error.push_back(real_from_json(e));
    for (const auto& p : j.at("poles")) {
        PoleEvent ev;
        ev.x_approach = real_from_json(p.at("x_approach"));
        ev.y_approach = complex_from_json(p.at("y_approach"));
        ev.pole_estimate = real_from_json(p.at("pole_estimate"));
        s.poles.push_back(ev);
    }
    s.x_end = real_from_json(j.at("x_end"));
    return s;
}

std::string painleve_csv(const PainleveSolution& s) {
    std::string out = "x,re_y,im_y,re_dy,im_dy,re_H,im_H,seed_error\n";
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        out += to_string(s.grid[i]) + "," + to_string(s.y[i].re) + "," + to_string(s.y[i].im) + "," +
               to_string(s.dy[i].re) + "," + to_string(s.dy[i].im) + "," + to_string(s.H[i].re) + "," +
               to_string(s.H[i].im) + "," + to_string(s.seed_error[i], 6) + "\n";
    }
    return out;
}

}  // namespace qpl
