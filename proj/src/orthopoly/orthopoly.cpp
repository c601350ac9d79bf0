#include "qpl/orthopoly/orthopoly.hpp"

#include "qpl/numerics/errors.hpp"
#include "qpl/potential/potential.hpp"

#include <algorithm>
#include <cmath>

namespace qpl {

namespace mp = boost::multiprecision;

BilinearFormSpec make_spec(const Real& t, int N, const Complex& alpha, const Complex& beta) {
    if (N <= 0) throw UsageError("N must be positive");
    BilinearFormSpec s;
    s.t = t;
    s.N = N;
    s.alpha = alpha;
    s.beta = beta;
    s.contour = t < 0 ? build_ray_contour(alpha, beta) : build_real_line_contour();
    return s;
}

namespace {

Real truncation_for(const BilinearFormSpec& spec, int k_max, int digits) {
    if (spec.t < 0) return ray_truncation_radius(spec.t, spec.N, k_max, digits) * Real(1.1);
    return real_line_truncation_radius(spec.t, spec.N, k_max, digits) * Real(1.1);
}

// Decimal digits lost to cancellation on oscillatory legs: log10 of the peak of
// |z^K e^{-N V_t(z)}| along the rays, where only the quartic part damps.
int cancellation_digits(const BilinearFormSpec& spec, int k_max) {
    if (!(spec.t < 0) || k_max == 0) return 0;
    const double at = std::fabs(spec.t.convert_to<double>());
    const double r4 = static_cast<double>(k_max) / (spec.N * at);
    const double peak = k_max * std::log(r4) / 4 - spec.N * at * r4 / 4;
    return std::max(0, static_cast<int>(std::ceil(peak / std::log(10.0))));
}

// Moments are integrated with guard digits so that quad_tol stays reachable
// despite the cancellation.
PrecisionContext moment_context(const BilinearFormSpec& spec, int k_max, const PrecisionContext& ctx) {
    PrecisionContext inner = ctx;
    inner.digits = ctx.digits + 20 + cancellation_digits(spec, k_max);
    return inner;
}

struct PieceResult {
    std::vector<Complex> value;
    std::vector<Real> errors;
};

PieceResult integrate_piece(const BilinearFormSpec& spec, const ContourPiece& piece, int k_max, const Real& radius,
                            const PrecisionContext& ctx, Execution exec) {
    const std::size_t K = static_cast<std::size_t>(k_max) + 1;
    PieceResult out{std::vector<Complex>(K), std::vector<Real>(K)};
    const auto verts = piece.truncated(radius);
    const Real N = spec.N;
    const Real t = spec.t;
    auto acc = [&](const LegPoint& p, const Complex& factor, std::span<Complex> sums) {
        const Complex z2 = p.z * p.z;
        const Complex v = z2 * (N / 2) + z2 * z2 * (N * t / 4);
        Complex w = exp(-v) * factor;
        for (std::size_t k = 0; k < sums.size(); ++k) {
            sums[k] += w;
            w *= p.z;
        }
    };
    for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
        auto r = integrate_leg_vector(acc, K, Segment{verts[i], verts[i + 1]}, spec.rule, ctx, exec);
        for (std::size_t k = 0; k < K; ++k) {
            out.value[k] += r.value[k];
            out.errors[k] += r.errors[k];
        }
    }
    if (piece.orientation < 0) {
        for (auto& v : out.value) v = -v;
    }
    return out;
}

}  // namespace

std::vector<std::vector<Complex>> compute_piece_moments(const BilinearFormSpec& spec, int k_max,
                                                        const PrecisionContext& ctx, Execution exec) {
    const PrecisionContext inner = moment_context(spec, k_max, ctx);
    std::vector<std::vector<Complex>> out;
    {
        PrecisionGuard guard(inner);
        const Real radius = truncation_for(spec, k_max, ctx.digits);
        for (const auto& piece : spec.contour.pieces) {
            out.push_back(integrate_piece(spec, piece, k_max, radius, inner, exec).value);
        }
    }
    PrecisionGuard guard(ctx);
    for (auto& v : out) {
        for (auto& z : v) z = at_default_precision(z);
    }
    return out;
}

MomentTable compute_moments(const BilinearFormSpec& spec, int k_max, const PrecisionContext& ctx, Execution exec) {
    if (k_max < 0) throw UsageError("k_max must be nonnegative");
    const PrecisionContext inner = moment_context(spec, k_max, ctx);
    MomentTable table;
    {
        PrecisionGuard guard(inner);
        table.k_max = k_max;
        table.m.assign(static_cast<std::size_t>(k_max) + 1, Complex());
        table.errors.assign(static_cast<std::size_t>(k_max) + 1, Real(0));
        table.truncation_radius = truncation_for(spec, k_max, ctx.digits);
        for (const auto& piece : spec.contour.pieces) {
            if (piece.weight == Complex(0)) continue;
            auto r = integrate_piece(spec, piece, k_max, table.truncation_radius, inner, exec);
            const Real wabs = abs(piece.weight);
            for (std::size_t k = 0; k < r.value.size(); ++k) {
                table.m[k] += piece.weight * r.value[k];
                table.errors[k] += wabs * r.errors[k];
            }
        }
    }
    // results carry the caller's precision, not the guard digits
    PrecisionGuard guard(ctx);
    for (auto& z : table.m) z = at_default_precision(z);
    for (auto& e : table.errors) e = at_default_precision(e);
    table.truncation_radius = at_default_precision(table.truncation_radius);
    return table;
}

void RecurrenceTable::require(int n) const {
    if (n < 0 || n > n_max) throw UsageError("degree " + std::to_string(n) + " outside the computed table");
    if (first_degenerate >= 0 && n >= first_degenerate) {
        throw DegenerateForm("orthogonal polynomial data unavailable at n = " + std::to_string(n) +
                                 " (h_" + std::to_string(first_degenerate) + " vanishes)",
                             first_degenerate);
    }
}

RecurrenceTable stieltjes_recurrence(const MomentTable& moments, int n_max, const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    if (n_max < 0) throw UsageError("n_max must be nonnegative");
    if (moments.k_max < 2 * n_max + 2) {
        throw UsageError("moments up to degree " + std::to_string(2 * n_max + 2) + " are needed");
    }
    const auto& m = moments.m;
    Real mmax = 0;
    for (const auto& v : m) mmax = std::max(mmax, abs(v));
    const Real threshold = pow10(-ctx.digits / 2) * mmax;

    RecurrenceTable tab;
    tab.n_max = n_max;
    tab.a.assign(static_cast<std::size_t>(n_max) + 2, Complex());
    tab.b.assign(static_cast<std::size_t>(n_max) + 1, Complex());
    tab.h.assign(static_cast<std::size_t>(n_max) + 2, Complex());
    tab.exists.assign(static_cast<std::size_t>(n_max) + 2, false);

    std::vector<Complex> prev;          // pi_{n-1}
    std::vector<Complex> cur{Complex(1)};  // pi_n, coefficients by ascending power
    tab.exists[0] = true;
    for (int n = 0; n <= n_max + 1; ++n) {
        // mu_j = <pi_n, z^j> for j = 0..n+1
        const int jmax = std::min(n + 1, moments.k_max - n);
        std::vector<Complex> mu(static_cast<std::size_t>(jmax) + 1);
        for (int j = 0; j <= jmax; ++j) {
            Complex s;
            for (int i = 0; i <= n; ++i) s.add_product(cur[i], m[i + j]);
            mu[j] = s;
        }
        Complex h;
        for (int j = 0; j <= n; ++j) h.add_product(cur[j], mu[j]);
        tab.h[n] = h;
        if (abs(h) < threshold) {
            tab.first_degenerate = n;
            break;
        }
        if (n + 1 < static_cast<int>(tab.exists.size())) tab.exists[n + 1] = true;
        if (n >= 1) tab.a[n] = h / tab.h[n - 1];
        if (n > n_max) break;
        Complex zh;  // <z pi_n, pi_n>
        for (int j = 0; j <= n; ++j) zh.add_product(cur[j], mu[j + 1]);
        tab.b[n] = zh / h;
        // pi_{n+1} = (z - b_n) pi_n - a_n pi_{n-1}
        std::vector<Complex> next(static_cast<std::size_t>(n) + 2);
        for (int i = 0; i <= n; ++i) {
            next[i + 1] += cur[i];
            next[i] -= tab.b[n] * cur[i];
        }
        if (n >= 1) {
            for (int i = 0; i < n; ++i) next[i] -= tab.a[n] * prev[i];
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return tab;
}

FreudResidual freud_residual(const std::vector<Complex>& a, const Real& t, int N, int n_last) {
    const int last = n_last < 0 ? static_cast<int>(a.size()) - 2 : n_last;
    if (last < 1 || last + 1 >= static_cast<int>(a.size())) throw UsageError("not enough coefficients for the residual");
    FreudResidual out;
    out.max = 0;
    out.per_n.assign(static_cast<std::size_t>(last) + 1, Real(0));
    for (int n = 1; n <= last; ++n) {
        const Complex& an = a[n];
        const Complex am = n == 1 ? Complex() : a[n - 1];
        const Complex r = an + an * (am + an + a[n + 1]) * t - Complex(Real(n) / N);
        out.per_n[n] = abs(r);
        out.max = std::max(out.max, out.per_n[n]);
    }
    return out;
}

FreudLattice freud_lattice(const Real& t, int N, const Complex& a1, const Complex& a2, int n_max,
                           const PrecisionContext& ctx) {
    PrecisionGuard guard(ctx);
    if (t == 0) throw DomainError("the lattice divides by t");
    if (n_max < 2) throw UsageError("n_max must be at least 2");
    FreudLattice out;
    out.a.assign(static_cast<std::size_t>(n_max) + 1, Complex());
    out.condition.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    out.a[1] = a1;
    out.a[2] = a2;
    const Real tiny = pow10(-ctx.digits / 2);
    // tangent vectors for perturbations of a_1 and a_2
    Complex u_prev(1), u_cur(0), v_prev(0), v_cur(1);
    for (int n = 2; n < n_max; ++n) {
        const Complex& an = out.a[n];
        if (abs(an) < tiny) throw LatticeBlowup("a_" + std::to_string(n) + " is numerically zero", n);
        const Complex q = Complex(Real(n)) / (an * (t * N));
        out.a[n + 1] = q - Complex(1 / t) - out.a[n - 1] - an;
        // d a_{n+1} = -(n / (N t a_n^2) + 1) d a_n - d a_{n-1}
        const Complex g = -(q / an + Complex(1));
        const Complex u_next = g * u_cur - u_prev;
        const Complex v_next = g * v_cur - v_prev;
        u_prev = u_cur;
        u_cur = u_next;
        v_prev = v_cur;
        v_cur = v_next;
        const Real growth = std::max(abs(u_cur), abs(v_cur));
        out.condition[n + 1] = log10_abs(growth);
    }
    return out;
}

int default_orthopoly_digits(int n_max) { return std::max(120, 6 * n_max); }

}  // namespace qpl

namespace qpl {

Json to_json(const RecurrenceRecord& rec) {
    Json j;
    j["spec"] = {{"t", real_to_json(rec.t)},
                 {"N", rec.N},
                 {"alpha", complex_to_json(rec.alpha)},
                 {"beta", complex_to_json(rec.beta)},
                 {"digits", rec.digits}};
    j["moments"] = complex_array(rec.moments.m);
    Json err = Json::array();
    for (const auto& e : rec.moments.errors) err.push_back(real_to_json(e));
    j["moment_errors"] = err;
    j["truncation_radius"] = real_to_json(rec.moments.truncation_radius);
    j["n_max"] = rec.table.n_max;
    j["a"] = complex_array(rec.table.a);
    j["b"] = complex_array(rec.table.b);
    j["h"] = complex_array(rec.table.h);
    j["exists"] = rec.table.exists;
    j["first_degenerate"] = rec.table.first_degenerate;
    return j;
}

RecurrenceRecord recurrence_from_json(const Json& j) {
    RecurrenceRecord rec;
    const auto& s = j.at("spec");
    rec.digits = s.at("digits").get<int>();
    PrecisionGuard guard(rec.digits);
    rec.t = real_from_json(s.at("t"));
    rec.N = s.at("N").get<int>();
    rec.alpha = complex_from_json(s.at("alpha"));
    rec.beta = complex_from_json(s.at("beta"));
    rec.moments.m = complex_vector(j.at("moments"));
    rec.moments.k_max = static_cast<int>(rec.moments.m.size()) - 1;
    if (j.contains("moment_errors")) {
        for (const auto& e : j["moment_errors"]) rec.moments.errors.push_back(real_from_json(e));
    }
    if (j.contains("truncation_radius")) rec.moments.truncation_radius = real_from_json(j["truncation_radius"]);
    rec.table.n_max = j.at("n_max").get<int>();
    rec.table.a = complex_vector(j.at("a"));
    rec.table.b = complex_vector(j.at("b"));
    rec.table.h = complex_vector(j.at("h"));
    rec.table.exists = j.at("exists").get<std::vector<bool>>();
    rec.table.first_degenerate = j.value("first_degenerate", -1);
    return rec;
}

std::string recurrence_csv(const RecurrenceTable& table) {
    std::string out = "n,re_a,im_a,re_b,im_b\n";
    for (int n = 0; n <= table.n_max; ++n) {
        if (table.first_degenerate >= 0 && n >= table.first_degenerate) break;
        const Complex a = n < static_cast<int>(table.a.size()) ? table.a[n] : Complex();
        const Complex& b = table.b[n];
        out += std::to_string(n) + "," + to_string(a.re) + "," + to_string(a.im) + "," + to_string(b.re) + "," +
               to_string(b.im) + "\n";
    }
    return out;
}

}  // namespace qpl
