#include "qpl/numerics/ode.hpp"

#include "qpl/numerics/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace qpl {

namespace {

struct Frac {
    long num;
    long den;
};

constexpr int kStages = 13;

// Fehlberg's 7(8) pair.
constexpr std::array<Frac, kStages> kC = {{{0, 1}, {2, 27}, {1, 9}, {1, 6}, {5, 12}, {1, 2}, {5, 6},
                                           {1, 6}, {2, 3}, {1, 3}, {1, 1}, {0, 1}, {1, 1}}};

constexpr std::array<std::array<Frac, kStages - 1>, kStages> kA = {{
    {{}},
    {{{2, 27}}},
    {{{1, 36}, {1, 12}}},
    {{{1, 24}, {0, 1}, {1, 8}}},
    {{{5, 12}, {0, 1}, {-25, 16}, {25, 16}}},
    {{{1, 20}, {0, 1}, {0, 1}, {1, 4}, {1, 5}}},
    {{{-25, 108}, {0, 1}, {0, 1}, {125, 108}, {-65, 27}, {125, 54}}},
    {{{31, 300}, {0, 1}, {0, 1}, {0, 1}, {61, 225}, {-2, 9}, {13, 900}}},
    {{{2, 1}, {0, 1}, {0, 1}, {-53, 6}, {704, 45}, {-107, 9}, {67, 90}, {3, 1}}},
    {{{-91, 108}, {0, 1}, {0, 1}, {23, 108}, {-976, 135}, {311, 54}, {-19, 60}, {17, 6}, {-1, 12}}},
    {{{2383, 4100}, {0, 1}, {0, 1}, {-341, 164}, {4496, 1025}, {-301, 82}, {2133, 4100}, {45, 82}, {45, 164},
      {18, 41}}},
    {{{3, 205}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {-6, 41}, {-3, 205}, {-3, 41}, {3, 41}, {6, 41}, {0, 1}}},
    {{{-1777, 4100}, {0, 1}, {0, 1}, {-341, 164}, {4496, 1025}, {-289, 82}, {2193, 4100}, {51, 82}, {33, 164},
      {12, 41}, {0, 1}, {1, 1}}},
}};

// Eighth-order weights; the seventh-order solution differs by 41/840 (k0 + k10 - k11 - k12).
constexpr std::array<Frac, kStages> kB8 = {{{0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {34, 105}, {9, 35}, {9, 35},
                                            {9, 280}, {9, 280}, {0, 1}, {41, 840}, {41, 840}}};

struct Tableau {
    std::array<Real, kStages> c;
    std::array<std::array<Real, kStages - 1>, kStages> a;
    std::array<Real, kStages> b8;
    Real err;

    Tableau() {
        auto r = [](Frac f) { return Real(f.num) / Real(f.den); };
        for (int i = 0; i < kStages; ++i) {
            c[i] = r(kC[i]);
            b8[i] = r(kB8[i]);
            for (int j = 0; j < kStages - 1; ++j) a[i][j] = kA[i][j].den == 0 ? Real(0) : r(kA[i][j]);
        }
        err = Real(41) / 840;
    }
};

Real max_abs(std::span<const Complex> v) {
    Real m = 0;
    for (const auto& z : v) m = std::max(m, abs(z));
    return m;
}

}  // namespace

OdeTrajectory ode_solve(const OdeRhs& rhs, const Real& x_start, const Real& x_end, std::vector<Complex> y_start,
                        const PrecisionContext& ctx, const OdeOptions& options) {
    PrecisionGuard guard(ctx);
    const Tableau tab;
    const std::size_t dim = y_start.size();
    const Real span = x_end - x_start;
    const int dir = span >= 0 ? 1 : -1;
    const Real h_min = pow10(-ctx.digits / 2);

    std::vector<Real> stops = options.outputs;
    stops.push_back(x_end);
    std::sort(stops.begin(), stops.end(), [dir](const Real& l, const Real& r) { return dir > 0 ? l < r : l > r; });
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    // stops past x_end are never reached
    while (!stops.empty() && dir * (stops.back() - x_end) > 0) stops.pop_back();

    OdeTrajectory out;
    std::vector<Complex> y = std::move(y_start);
    std::vector<Complex> f(dim);
    Real x = x_start;
    rhs(x, y, f);
    out.x.push_back(x);
    out.y.push_back(y);
    out.dy.push_back(f);
    if (span == 0) return out;

    Real h = options.initial_step > 0 ? Real(options.initial_step)
                                      : std::min(Real(abs(span)), Real(boost::multiprecision::pow(ctx.ode_tol, Real(1) / 8)));
    std::array<std::vector<Complex>, kStages> k;
    for (auto& v : k) v.resize(dim);
    std::vector<Complex> tmp(dim);
    std::vector<Complex> y_new(dim);
    std::size_t stop_index = 0;
    while (stop_index < stops.size() && dir * (stops[stop_index] - x) <= 0) ++stop_index;

    for (std::size_t step = 0; step < options.max_steps; ++step) {
        if (stop_index >= stops.size()) return out;
        const Real& target = stops[stop_index];
        bool hits_stop = false;
        Real hh = h;
        if (hh >= abs(target - x)) {
            hh = abs(target - x);
            hits_stop = true;
        }
        const Real hs = dir * hh;

        k[0] = f;
        for (int s = 1; s < kStages; ++s) {
            for (std::size_t d = 0; d < dim; ++d) {
                tmp[d] = y[d];
                for (int j = 0; j < s; ++j) {
                    if (tab.a[s][j] != 0) tmp[d] += k[j][d] * (hs * tab.a[s][j]);
                }
            }
            rhs(x + hs * tab.c[s], tmp, k[s]);
        }
        Real err = 0;
        for (std::size_t d = 0; d < dim; ++d) {
            y_new[d] = y[d];
            for (int s = 0; s < kStages; ++s) {
                if (tab.b8[s] != 0) y_new[d] += k[s][d] * (hs * tab.b8[s]);
            }
            const Complex e = (k[0][d] + k[10][d] - k[11][d] - k[12][d]) * (hs * tab.err);
            const Real ed = abs(e) / (1 + abs(y_new[d]));
            if (!boost::multiprecision::isfinite(ed) || !boost::multiprecision::isfinite(abs(y_new[d]))) {
                err = std::numeric_limits<Real>::infinity();
            } else if (ed > err) {
                err = ed;
            }
        }

        const bool finite = boost::multiprecision::isfinite(err);
        if (finite && err <= ctx.ode_tol) {
            const Real x_new = hits_stop ? target : Real(x + hs);
            if (max_abs(y_new) > options.blowup_ceiling) {
                out.events.push_back({OdeEvent::Kind::blowup, x, x_new});
                return out;
            }
            x = x_new;
            y.swap(y_new);
            rhs(x, y, f);
            out.x.push_back(x);
            out.y.push_back(y);
            out.dy.push_back(f);
            if (hits_stop) ++stop_index;
            const Real ratio = err == 0 ? Real(4) : Real(0.9 * boost::multiprecision::pow(ctx.ode_tol / err, Real(1) / 8));
            h = hh * std::clamp(ratio, Real(0.2), Real(4));
            if (hits_stop && h < hh) h = hh;
        } else {
            ++out.rejected;
            const Real ratio = finite ? Real(0.9 * boost::multiprecision::pow(ctx.ode_tol / err, Real(1) / 8)) : Real(0.1);
            h = hh * std::clamp(ratio, Real(0.1), Real(0.9));
        }
        if (h < h_min) {
            throw StepUnderflow("step size fell below 1e-" + std::to_string(ctx.digits / 2) + " at x = " +
                                to_string(x, 20));
        }
    }
    throw StepUnderflow("step budget exhausted at x = " + to_string(x, 20));
}

std::vector<Complex> OdeTrajectory::interpolate(const Real& at) const {
    if (x.empty()) throw DomainError("empty trajectory");
    const bool increasing = x.size() < 2 || x.back() >= x.front();
    auto less = [increasing](const Real& l, const Real& r) { return increasing ? l < r : l > r; };
    if (less(at, x.front()) || less(x.back(), at)) throw DomainError("interpolation point outside trajectory");
    auto it = std::lower_bound(x.begin(), x.end(), at, less);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    if (i < x.size() && x[i] == at) return y[i];
    const std::size_t i0 = i - 1;
    const Real h = x[i] - x[i0];
    const Real s = (at - x[i0]) / h;
    const Real s2 = s * s;
    const Real s3 = s2 * s;
    const Real h00 = 2 * s3 - 3 * s2 + 1;
    const Real h10 = s3 - 2 * s2 + s;
    const Real h01 = -2 * s3 + 3 * s2;
    const Real h11 = s3 - s2;
    std::vector<Complex> out(y[i0].size());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = y[i0][d] * h00 + dy[i0][d] * (h * h10) + y[i][d] * h01 + dy[i][d] * (h * h11);
    }
    return out;
}

std::optional<std::vector<Complex>> OdeTrajectory::at_node(const Real& at) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == at) return y[i];
    }
    return std::nullopt;
}

std::vector<Complex> rk4_fixed(const OdeRhs& rhs, const Real& x_start, const Real& x_end,
                               std::vector<Complex> y, long steps) {
    const std::size_t dim = y.size();
    const Real h = (x_end - x_start) / steps;
    std::vector<Complex> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    for (long n = 0; n < steps; ++n) {
        const Real x = x_start + h * n;
        rhs(x, y, k1);
        for (std::size_t d = 0; d < dim; ++d) tmp[d] = y[d] + k1[d] * (h / 2);
        rhs(x + h / 2, tmp, k2);
        for (std::size_t d = 0; d < dim; ++d) tmp[d] = y[d] + k2[d] * (h / 2);
        rhs(x + h / 2, tmp, k3);
        for (std::size_t d = 0; d < dim; ++d) tmp[d] = y[d] + k3[d] * h;
        rhs(x + h, tmp, k4);
        for (std::size_t d = 0; d < dim; ++d) {
            y[d] += (k1[d] + Real(2) * k2[d] + Real(2) * k3[d] + k4[d]) * (h / 6);
        }
    }
    return y;
}

}  // namespace qpl
