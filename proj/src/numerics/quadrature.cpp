#include "qpl/numerics/quadrature.hpp"

#include "qpl/numerics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <utility>

namespace qpl {

namespace detail {

namespace {

std::mutex& table_mutex() {
    static std::mutex m;
    return m;
}

// Abscissa range: the node is dropped once 1 - s falls below 10^(-3 digits),
// far enough out to cover integrable endpoint singularities.
double tanh_sinh_tmax(unsigned digits) {
    const double target = 3.0 * static_cast<double>(digits) * std::log(10.0);
    return std::asinh(target / M_PI);
}

void push_symmetric(std::vector<UnitNode>& out, const Real& t, const Real& h, const Real& half_pi) {
    const Real u = half_pi * boost::multiprecision::sinh(t);
    const Real e = boost::multiprecision::exp(-2 * u);
    const Real s = 1 / (1 + e);
    const Real sc = e / (1 + e);
    const Real w = h * 2 * half_pi * boost::multiprecision::cosh(t) * s * sc;
    out.push_back({s, sc, w});
    if (t != 0) out.push_back({sc, s, w});
}

}  // namespace

const std::vector<UnitNode>& tanh_sinh_level(int level) {
    static std::map<unsigned, std::deque<std::vector<UnitNode>>> cache;
    const unsigned digits = Real::default_precision();
    std::lock_guard<std::mutex> lock(table_mutex());
    auto& levels = cache[digits];
    const double tmax = tanh_sinh_tmax(digits);
    const Real half_pi = pi() / 2;
    while (static_cast<int>(levels.size()) <= level) {
        const int L = static_cast<int>(levels.size());
        std::vector<UnitNode> nodes;
        const Real h = boost::multiprecision::ldexp(Real(1), -L);
        if (L == 0) {
            for (int k = 0; k <= static_cast<int>(tmax); ++k) push_symmetric(nodes, Real(k), h, half_pi);
        } else {
            const long count = static_cast<long>(std::ldexp(tmax, L));
            for (long j = 1; j <= count; j += 2) {
                push_symmetric(nodes, boost::multiprecision::ldexp(Real(j), -L), h, half_pi);
            }
        }
        levels.push_back(std::move(nodes));
    }
    return levels[static_cast<std::size_t>(level)];
}

const std::vector<UnitNode>& gauss_legendre_unit(int n) {
    static std::map<std::pair<unsigned, int>, std::vector<UnitNode>> cache;
    const unsigned digits = Real::default_precision();
    std::lock_guard<std::mutex> lock(table_mutex());
    auto it = cache.find({digits, n});
    if (it != cache.end()) return it->second;

    std::vector<UnitNode> nodes(static_cast<std::size_t>(n));
    const Real eps = pow10(-static_cast<int>(digits));
    const Real p = pi();
    for (int i = 0; i < (n + 1) / 2; ++i) {
        Real x = boost::multiprecision::cos(p * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
        Real dp;
        for (int iter = 0; iter < 100; ++iter) {
            Real p0 = 1;
            Real p1 = x;
            for (int k = 2; k <= n; ++k) {
                Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = std::move(p1);
                p1 = std::move(p2);
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const Real dx = p1 / dp;
            x -= dx;
            if (boost::multiprecision::abs(dx) < eps) break;
        }
        // Recompute the derivative at the converged root for the weight.
        Real p0 = 1;
        Real p1 = x;
        for (int k = 2; k <= n; ++k) {
            Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = std::move(p1);
            p1 = std::move(p2);
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const Real w = 1 / ((1 - x * x) * dp * dp);  // half of the [-1, 1] weight
        const Real s = (1 + x) / 2;
        const Real sc = (1 - x) / 2;
        nodes[static_cast<std::size_t>(i)] = {sc, s, w};
        nodes[static_cast<std::size_t>(n - 1 - i)] = {s, sc, w};
    }
    return cache.emplace(std::make_pair(digits, n), std::move(nodes)).first->second;
}

std::vector<UnitNode> gauss_legendre_composite(int level, int nodes_per_panel) {
    const auto& base = gauss_legendre_unit(nodes_per_panel);
    const long panels = 1L << level;
    std::vector<UnitNode> out;
    out.reserve(static_cast<std::size_t>(panels) * base.size());
    for (long p = 0; p < panels; ++p) {
        const Real lo = boost::multiprecision::ldexp(Real(p), -level);
        const Real hi_comp = boost::multiprecision::ldexp(Real(panels - p - 1), -level);
        for (const auto& b : base) {
            out.push_back({lo + boost::multiprecision::ldexp(b.s, -level),
                           hi_comp + boost::multiprecision::ldexp(b.s_comp, -level),
                           boost::multiprecision::ldexp(b.weight, -level)});
        }
    }
    return out;
}

}  // namespace detail

namespace {

using NodeEval = std::function<void(const detail::UnitNode&, std::span<Complex>)>;

constexpr std::size_t kBlocks = 64;

void sweep(const NodeEval& eval, const std::vector<detail::UnitNode>& nodes, std::vector<Complex>& acc,
           Execution exec) {
    const std::size_t m = acc.size();
    if (exec == Execution::serial || nodes.size() < 2 * kBlocks) {
        for (const auto& node : nodes) eval(node, acc);
        return;
    }
    std::vector<std::vector<Complex>> partial(kBlocks, std::vector<Complex>(m));
    const std::size_t n = nodes.size();
    bool failed = false;
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t b = 0; b < kBlocks; ++b) {
        const std::size_t lo = n * b / kBlocks;
        const std::size_t hi = n * (b + 1) / kBlocks;
        try {
            for (std::size_t k = lo; k < hi; ++k) eval(nodes[k], partial[b]);
        } catch (...) {
#pragma omp critical(qpl_quad_error)
            {
                if (!failed) {
                    failed = true;
                    error = std::current_exception();
                }
            }
        }
    }
    if (failed) std::rethrow_exception(error);
    for (const auto& p : partial) {
        for (std::size_t k = 0; k < m; ++k) acc[k] += p[k];
    }
}

VectorQuadResult drive(const NodeEval& eval, std::size_t m, const QuadratureRule& rule, const PrecisionContext& ctx,
                       Execution exec) {
    if (rule.max_levels < rule.min_levels || rule.min_levels < 1) throw UsageError("bad quadrature level bounds");
    VectorQuadResult out;
    std::vector<Complex> total(m);
    std::vector<Complex> previous;
    Real worst_rel;
    for (int level = 0; level <= rule.max_levels; ++level) {
        std::vector<Complex> fresh(m);
        if (rule.kind == RuleKind::tanh_sinh) {
            const auto& nodes = detail::tanh_sinh_level(level);
            sweep(eval, nodes, fresh, exec);
            out.evaluations += nodes.size();
            for (std::size_t k = 0; k < m; ++k) {
                if (level > 0) total[k] /= Real(2);
                total[k] += fresh[k];
            }
        } else {
            const auto nodes = detail::gauss_legendre_composite(level, rule.gl_nodes);
            sweep(eval, nodes, fresh, exec);
            out.evaluations += nodes.size();
            total = std::move(fresh);
        }
        if (level > 0) {
            out.errors.assign(m, Real(0));
            worst_rel = 0;
            for (std::size_t k = 0; k < m; ++k) {
                out.errors[k] = abs(total[k] - previous[k]);
                const Real rel = out.errors[k] / (1 + abs(total[k]));
                if (rel > worst_rel) worst_rel = rel;
            }
            if (level >= rule.min_levels && worst_rel < ctx.quad_tol) {
                out.value = std::move(total);
                out.levels = level;
                return out;
            }
        }
        previous = total;
    }
    throw NonConvergence("quadrature did not converge within " + std::to_string(rule.max_levels) + " levels",
                         log10_abs(worst_rel));
}

}  // namespace

VectorQuadResult integrate_leg_vector(const LegAccumulator& f, std::size_t components, const Segment& leg,
                                      const QuadratureRule& rule, const PrecisionContext& ctx, Execution exec) {
    PrecisionGuard guard(ctx);
    const Complex d = leg.b - leg.a;
    NodeEval eval = [&](const detail::UnitNode& node, std::span<Complex> acc) {
        LegPoint p;
        // Evaluate from the nearer end so the point is accurate near both ends.
        p.z = node.s <= node.s_comp ? leg.a + d * node.s : leg.b - d * node.s_comp;
        p.s = node.s;
        p.s_comp = node.s_comp;
        f(p, d * node.weight, acc);
    };
    return drive(eval, components, rule, ctx, exec);
}

QuadResult<Complex> integrate_leg(const LegIntegrand& f, const Segment& leg, const QuadratureRule& rule,
                                  const PrecisionContext& ctx, Execution exec) {
    auto acc = [&](const LegPoint& p, const Complex& factor, std::span<Complex> out) {
        out[0].add_product(factor, f(p));
    };
    auto r = integrate_leg_vector(acc, 1, leg, rule, ctx, exec);
    return {std::move(r.value[0]), std::move(r.errors[0]), r.levels, r.evaluations};
}

QuadResult<Real> integrate_real(const RealIntegrand& f, const Real& a, const Real& b, const QuadratureRule& rule,
                                const PrecisionContext& ctx, Execution exec) {
    PrecisionGuard guard(ctx);
    const Real len = b - a;
    NodeEval eval = [&](const detail::UnitNode& node, std::span<Complex> acc) {
        RealPoint p;
        p.from_a = len * node.s;
        p.to_b = len * node.s_comp;
        p.x = node.s <= node.s_comp ? a + p.from_a : b - p.to_b;
        acc[0].re += len * node.weight * f(p);
    };
    auto r = drive(eval, 1, rule, ctx, exec);
    return {std::move(r.value[0].re), std::move(r.errors[0]), r.levels, r.evaluations};
}

QuadResult<Real> integrate_pv(const RealIntegrand& g, const Real& a, const Real& b, const Real& x0,
                              const QuadratureRule& rule, const PrecisionContext& ctx,
                              const Real& excision_fraction) {
    PrecisionGuard guard(ctx);
    if (!(a < x0 && x0 < b)) throw PoleOnBoundary("principal value point must lie strictly inside (a, b)");
    if (!(excision_fraction > 0 && excision_fraction < 1)) throw UsageError("excision fraction must be in (0, 1)");
    const Real rho = excision_fraction * std::min(Real(x0 - a), Real(b - x0));
    const Real left_end = x0 - rho;
    const Real right_start = x0 + rho;

    auto left = [&](const RealPoint& p) {
        RealPoint q{p.x, p.from_a, (b - left_end) + p.to_b};
        return g(q) / (x0 - p.x);
    };
    auto right = [&](const RealPoint& p) {
        RealPoint q{p.x, (right_start - a) + p.from_a, p.to_b};
        return g(q) / (x0 - p.x);
    };
    auto middle = [&](const RealPoint& p) {
        const Real& u = p.x;
        RealPoint lo{x0 - u, (x0 - a) - u, (b - x0) + u};
        RealPoint hi{x0 + u, (x0 - a) + u, (b - x0) - u};
        return (g(lo) - g(hi)) / u;
    };
    auto r1 = integrate_real(left, a, left_end, rule, ctx, Execution::serial);
    auto r2 = integrate_real(right, right_start, b, rule, ctx, Execution::serial);
    auto r3 = integrate_real(middle, Real(0), rho, rule, ctx, Execution::serial);
    QuadResult<Real> out;
    out.value = r1.value + r2.value + r3.value;
    out.error = r1.error + r2.error + r3.error;
    out.levels = std::max({r1.levels, r2.levels, r3.levels});
    out.evaluations = r1.evaluations + r2.evaluations + 2 * r3.evaluations;
    return out;
}

}  // namespace qpl
