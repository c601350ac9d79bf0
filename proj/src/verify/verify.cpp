#include "qpl/verify/verify.hpp"

#include "qpl/numerics/errors.hpp"
#include "qpl/orthopoly/orthopoly.hpp"
#include "qpl/painleve/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpl {

namespace mp = boost::multiprecision;

ScalingConstants scaling_constants() {
    const Real two = 2;
    const Real three = 3;
    return {mp::pow(two, Real(-9) / 5) * mp::pow(three, Real(-6) / 5),
            mp::pow(two, Real(3) / 5) * mp::pow(three, Real(2) / 5),
            mp::pow(two, Real(1) / 10) * mp::pow(three, Real(2) / 5)};
}

bool scaling_constants_consistent() {
    // exponents of 2 and 3: c2 = (3/5, 2/5), sqrt 2 c3 = (1/2 + 1/10, 2/5)
    using boost::multiprecision::cpp_rational;
    const bool exact = cpp_rational(3, 5) == cpp_rational(1, 2) + cpp_rational(1, 10);
    const auto c = scaling_constants();
    const Real gap = mp::abs(c.c2 - mp::sqrt(Real(2)) * c.c3) / c.c2;
    return exact && gap < pow10(-static_cast<int>(Real::default_precision()) + 3);
}

Real regular_limit(const Real& t) {
    if (t == 0) return Real(1);
    if (t < Real(-1) / 12) throw DomainError("the regular limit needs t >= -1/12");
    return (mp::sqrt(1 + 12 * t) - 1) / (6 * t);
}

Real critical_t(const Real& x, int n) {
    return Real(-1) / 12 - scaling_constants().c1 * x * mp::pow(Real(n), Real(-4) / 5);
}

ScalingExperiment ScalingExperiment::regular(const Real& t, const Complex& alpha, const Complex& beta,
                                             std::vector<int> ns) {
    ScalingExperiment e;
    e.mode = ExperimentMode::regular;
    e.t = t;
    e.alpha = alpha;
    e.beta = beta;
    e.n_list = std::move(ns);
    return e;
}

ScalingExperiment ScalingExperiment::critical(const Real& x, const Complex& alpha, const Complex& beta,
                                              std::vector<int> ns) {
    ScalingExperiment e;
    e.mode = ExperimentMode::critical;
    e.x = x;
    e.alpha = alpha;
    e.beta = beta;
    e.n_list = std::move(ns);
    return e;
}

void ScalingExperiment::validate() const {
    if (n_list.empty()) throw UsageError("n_list is empty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw UsageError("n must be positive");
        if (i && n_list[i] <= n_list[i - 1]) throw UsageError("n_list must be increasing");
    }
    if (mode == ExperimentMode::regular && !(t > Real(-1) / 12 && t < 0)) {
        throw DomainError("the regular experiment needs -1/12 < t < 0");
    }
    if (digits != 0 && digits < 30) throw UsageError("digits must be at least 30");
}

int ScalingExperiment::working_digits() const {
    return digits > 0 ? digits : default_orthopoly_digits(n_list.back());
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InsufficientData("a line fit needs at least 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw InsufficientData("a line fit needs distinct abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0 ? 1.0 : sxy * sxy / (sxx * syy);
    return f;
}

bool within_factor_of_median(const std::vector<Real>& v, double factor) {
    if (v.empty()) return false;
    std::vector<Real> s = v;
    std::sort(s.begin(), s.end());
    const std::size_t m = s.size();
    const Real median = m % 2 ? s[m / 2] : (s[m / 2 - 1] + s[m / 2]) / 2;
    if (!(median > 0)) return false;
    return s.back() <= median * factor && s.front() * factor >= median;
}

bool VerificationReport::pass() const {
    if (criteria.empty()) return false;
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass; });
}

PowerFit fit_power(const std::vector<int>& n, const std::vector<Real>& residual) {
    if (n.size() != residual.size()) throw UsageError("n and residual lengths differ");
    if (n.size() < 3) throw InsufficientData("the exponent fit needs at least 3 n-values");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(residual[i] > 0)) throw InsufficientData("residuals must be positive for a log-log fit");
        lx.push_back(std::log(static_cast<double>(n[i])));
        ly.push_back(log10_abs(residual[i]) * std::log(10.0));
    }
    const auto f = fit_line(lx, ly);
    return {-f.slope, f.intercept, f.r2};
}

bool absence_of_n15_term(const std::vector<int>& n, const std::vector<Real>& residual) {
    return fit_power(n, residual).p >= 0.5;
}

bool absence_of_n15_term(const VerificationReport& report) {
    std::vector<int> n;
    std::vector<Real> r;
    for (const auto& rec : report.records) {
        n.push_back(rec.n);
        r.push_back(rec.residual_a);
    }
    return absence_of_n15_term(n, r);
}

namespace {

struct Coefficients {
    Complex a;
    Complex b;
    Real freud;
    std::vector<Complex> a_all;
};

Coefficients recurrence_at(const Real& t, int n, const Complex& alpha, const Complex& beta,
                           const PrecisionContext& ctx) {
    const auto spec = make_spec(t, n, alpha, beta);
    const auto moments = compute_moments(spec, 2 * n + 2, ctx);
    const auto table = stieltjes_recurrence(moments, n, ctx);
    table.require(n);
    Coefficients c;
    c.a = table.a[n];
    c.b = table.b[n];
    c.a_all = table.a;
    c.freud = freud_residual(table.a, t, n, n).max;
    return c;
}

std::string sci(const Real& x) { return to_string(x, 4); }

CriterionResult freud_criterion(const std::vector<ScalingRecord>& recs, int digits) {
    Real worst = 0;
    for (const auto& r : recs) worst = std::max(worst, r.freud_residual);
    const Real tol = pow10(-digits / 2);
    return {"freud_residual", worst < tol, "max " + sci(worst) + " vs " + sci(tol)};
}

bool symmetric(const ScalingExperiment& e) { return e.alpha == e.beta; }

}  // namespace

VerificationReport run_regular(const ScalingExperiment& exp) {
    if (exp.mode != ExperimentMode::regular) throw UsageError("run_regular needs a regular experiment");
    exp.validate();
    const int digits = exp.working_digits();
    const auto ctx = PrecisionContext::make(digits);
    PrecisionGuard guard(ctx);
    VerificationReport rep;
    rep.experiment = exp;
    rep.constants = scaling_constants();
    rep.limit = regular_limit(exp.t);
    for (int n : exp.n_list) {
        const auto c = recurrence_at(exp.t, n, exp.alpha, exp.beta, ctx);
        ScalingRecord r;
        r.n = n;
        r.t_n = exp.t;
        r.a = c.a;
        r.b = c.b;
        r.prediction_a = Complex(rep.limit);
        r.prediction_b = Complex();
        r.residual_a = abs(c.a - r.prediction_a);
        r.residual_b = abs(c.b);
        r.scaled_a = r.residual_a * n;
        r.scaled_b = r.residual_b > 0 ? Real(mp::log(r.residual_b)) : Real(-std::numeric_limits<double>::infinity());
        r.digits = digits;
        r.freud_residual = c.freud;
        rep.records.push_back(r);
    }
    std::vector<Real> scaled;
    for (const auto& r : rep.records) scaled.push_back(r.scaled_a);
    rep.criteria.push_back({"scaled_a_bounded", within_factor_of_median(scaled, 2.5),
                            "n |a - L| within a factor 2.5 of the median"});
    if (symmetric(exp)) {
        Real worst = 0;
        for (const auto& r : rep.records) worst = std::max(worst, r.residual_b);
        const Real tol = pow10(-digits / 4);
        rep.criteria.push_back({"b_vanishes", worst < tol, "max |b| " + sci(worst) + " vs " + sci(tol)});
    } else if (rep.records.size() >= 2) {
        std::vector<double> ns, lb;
        bool decreasing = true;
        for (std::size_t i = 0; i < rep.records.size(); ++i) {
            ns.push_back(rep.records[i].n);
            lb.push_back(rep.records[i].scaled_b.convert_to<double>());
            if (i && !(rep.records[i].residual_b < rep.records[i - 1].residual_b)) decreasing = false;
        }
        const auto fit = fit_line(ns, lb);
        std::ostringstream os;
        os << "log|b| slope " << fit.slope << ", r^2 " << fit.r2;
        rep.criteria.push_back({"b_exponentially_small", decreasing && fit.slope < 0 && fit.r2 >= 0.9, os.str()});
    }
    // the string equation only holds for the even weight
    if (symmetric(exp)) rep.criteria.push_back(freud_criterion(rep.records, digits));
    return rep;
}

VerificationReport run_critical(const ScalingExperiment& exp) {
    if (exp.mode != ExperimentMode::critical) throw UsageError("run_critical needs a critical experiment");
    exp.validate();
    VerificationReport rep;
    rep.experiment = exp;

    // Painleve values first: a pole at x stops the run before any moments are computed
    const int pd = exp.painleve_digits > 0 ? exp.painleve_digits : kPainleveDigits;
    const auto pctx = PrecisionContext::make(pd);
    {
        PrecisionGuard guard(pctx);
        const auto ya = eval_y_and_H(PainleveParameters::make(exp.alpha), {exp.x}, pctx).front();
        const auto yb = symmetric(exp) ? ya : eval_y_and_H(PainleveParameters::make(exp.beta), {exp.x}, pctx).front();
        rep.y_alpha = ya.y;
        rep.y_beta = yb.y;
        rep.painleve_error = std::max(ya.error, yb.error);
        rep.painleve_digits = pd;
    }

    const int digits = exp.working_digits();
    const auto ctx = PrecisionContext::make(digits);
    PrecisionGuard guard(ctx);
    rep.constants = scaling_constants();
    rep.y_alpha = at_default_precision(rep.y_alpha);
    rep.y_beta = at_default_precision(rep.y_beta);
    rep.painleve_error = at_default_precision(rep.painleve_error);
    rep.limit = 2;
    const auto& k = rep.constants;
    for (int n : exp.n_list) {
        const Real tn = critical_t(exp.x, n);
        const auto c = recurrence_at(tn, n, exp.alpha, exp.beta, ctx);
        const Real n25 = mp::pow(Real(n), Real(-2) / 5);
        const Real n35 = mp::pow(Real(n), Real(3) / 5);
        ScalingRecord r;
        r.n = n;
        r.t_n = tn;
        r.a = c.a;
        r.b = c.b;
        r.prediction_a = Complex(2) - (rep.y_alpha + rep.y_beta) * (k.c2 * n25);
        r.prediction_b = (rep.y_beta - rep.y_alpha) * (k.c3 * n25);
        r.residual_a = abs(c.a - r.prediction_a);
        r.residual_b = abs(c.b - r.prediction_b);
        r.scaled_a = r.residual_a * n35;
        r.scaled_b = r.residual_b * n35;
        r.digits = digits;
        r.freud_residual = c.freud;
        if (symmetric(exp) && n >= 3) {
            try {
                const auto lat = freud_lattice(tn, n, c.a_all[1], c.a_all[2], n + 1, ctx);
                Real gap = 0;
                for (int j = 1; j <= n + 1; ++j) gap = std::max(gap, abs(lat.a[j] - c.a_all[j]));
                r.lattice_gap = gap;
            } catch (const LatticeBlowup&) {
                r.lattice_gap = std::numeric_limits<double>::infinity();
            }
        }
        rep.records.push_back(r);
    }

    std::vector<Real> sa, sb;
    for (const auto& r : rep.records) {
        sa.push_back(r.scaled_a);
        sb.push_back(r.scaled_b);
    }
    rep.criteria.push_back({"constants", scaling_constants_consistent(), "c2 = sqrt 2 c3"});
    rep.criteria.push_back({"scaled_a_bounded", within_factor_of_median(sa, 2.0),
                            "n^{3/5} |a - prediction| within a factor 2 of the median"});
    if (symmetric(exp)) {
        Real worst = 0;
        for (const auto& r : rep.records) worst = std::max(worst, abs(r.b));
        const Real tol = pow10(-digits / 4);
        rep.criteria.push_back({"b_vanishes", worst < tol, "max |b| " + sci(worst) + " vs " + sci(tol)});
        Real gap = 0;
        for (const auto& r : rep.records) gap = std::max(gap, r.lattice_gap);
        const Real gtol = pow10(-digits / 2);
        rep.criteria.push_back({"lattice_cross_check", gap < gtol, "max gap " + sci(gap) + " vs " + sci(gtol)});
    } else {
        rep.criteria.push_back({"scaled_b_bounded", within_factor_of_median(sb, 2.0),
                                "n^{3/5} |b - prediction| within a factor 2 of the median"});
    }
    if (rep.records.size() >= 3) {
        const bool ok = absence_of_n15_term(rep);
        std::vector<int> ns;
        std::vector<Real> ra;
        for (const auto& r : rep.records) {
            ns.push_back(r.n);
            ra.push_back(r.residual_a);
        }
        std::ostringstream os;
        os << "fitted exponent " << fit_power(ns, ra).p;
        rep.criteria.push_back({"no_n15_term", ok, os.str()});
    }
    if (symmetric(exp)) rep.criteria.push_back(freud_criterion(rep.records, digits));
    return rep;
}

Json to_json(const VerificationReport& rep) {
    const auto& e = rep.experiment;
    Json j;
    Json ex;
    ex["mode"] = e.mode == ExperimentMode::regular ? "regular" : "critical";
    if (e.mode == ExperimentMode::regular) {
        ex["t"] = real_to_json(e.t);
    } else {
        ex["x"] = real_to_json(e.x);
    }
    ex["alpha"] = complex_to_json(e.alpha);
    ex["beta"] = complex_to_json(e.beta);
    ex["n"] = e.n_list;
    ex["digits"] = e.working_digits();
    j["experiment"] = ex;
    j["constants"] = {{"c1", real_to_json(rep.constants.c1)},
                      {"c2", real_to_json(rep.constants.c2)},
                      {"c3", real_to_json(rep.constants.c3)}};
    if (e.mode == ExperimentMode::regular) {
        j["limit"] = real_to_json(rep.limit);
    } else {
        j["painleve"] = {{"y_alpha", complex_to_json(rep.y_alpha)},
                         {"y_beta", complex_to_json(rep.y_beta)},
                         {"error", real_to_json(rep.painleve_error)},
                         {"digits", rep.painleve_digits}};
    }
    Json recs = Json::array();
    for (const auto& r : rep.records) {
        Json o;
        o["n"] = r.n;
        o["digits"] = r.digits;
        o["t_n"] = real_to_json(r.t_n);
        o["a"] = complex_to_json(r.a);
        o["b"] = complex_to_json(r.b);
        o["prediction_a"] = complex_to_json(r.prediction_a);
        o["prediction_b"] = complex_to_json(r.prediction_b);
        o["residual_a"] = real_to_json(r.residual_a);
        o["residual_b"] = real_to_json(r.residual_b);
        o["scaled_a"] = real_to_json(r.scaled_a);
        o["scaled_b"] = real_to_json(r.scaled_b);
        o["freud_residual"] = real_to_json(r.freud_residual);
        if (r.lattice_gap >= 0) o["lattice_gap"] = real_to_json(r.lattice_gap);
        recs.push_back(o);
    }
    j["records"] = recs;
    Json crit = Json::array();
    for (const auto& c : rep.criteria) crit.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["criteria"] = crit;
    j["pass"] = rep.pass();
    return j;
}

std::string to_text(const VerificationReport& rep) {
    std::ostringstream os;
    const auto& e = rep.experiment;
    if (e.mode == ExperimentMode::regular) {
        os << "regular experiment, t = " << to_string(e.t, 12) << ", L(t) = " << to_string(rep.limit, 15) << "\n";
    } else {
        os << "critical experiment, x = " << to_string(e.x, 12) << ", y_alpha = " << to_string(rep.y_alpha.re, 15)
           << " + " << to_string(rep.y_alpha.im, 6) << "i, y_beta = " << to_string(rep.y_beta.re, 15) << " + "
           << to_string(rep.y_beta.im, 6) << "i\n";
    }
    os << "alpha = " << to_string(e.alpha.re, 8) << " + " << to_string(e.alpha.im, 8) << "i, beta = "
       << to_string(e.beta.re, 8) << " + " << to_string(e.beta.im, 8) << "i, digits = " << e.working_digits()
       << "\n\n";
    char line[256];
    std::snprintf(line, sizeof line, "%6s %22s %22s %12s %12s %12s %12s\n", "n", "Re a", "Re prediction a",
                  "resid a", "scaled a", "|b|", "scaled b");
    os << line;
    for (const auto& r : rep.records) {
        std::snprintf(line, sizeof line, "%6d %22s %22s %12s %12s %12s %12s\n", r.n, to_string(r.a.re, 16).c_str(),
                      to_string(r.prediction_a.re, 16).c_str(), sci(r.residual_a).c_str(), sci(r.scaled_a).c_str(),
                      sci(abs(r.b)).c_str(), sci(r.scaled_b).c_str());
        os << line;
    }
    os << "\n";
    for (const auto& c : rep.criteria) os << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    os << (rep.pass() ? "overall: PASS\n" : "overall: FAIL\n");
    return os.str();
}

}  // namespace qpl
