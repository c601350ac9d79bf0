#include "qpl/numerics/precision.hpp"

#include "qpl/numerics/errors.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace qpl {

PrecisionContext PrecisionContext::make(int digits) {
    return make(digits, -(digits - 10), -(digits - 10));
}

PrecisionContext PrecisionContext::make(int digits, int quad_tol_exp10, int ode_tol_exp10) {
    PrecisionGuard guard(digits);
    PrecisionContext ctx;
    ctx.digits = digits;
    ctx.quad_tol = pow10(quad_tol_exp10);
    ctx.ode_tol = pow10(ode_tol_exp10);
    ctx.validate();
    return ctx;
}

void PrecisionContext::validate() const {
    if (digits < 30) {
        throw DomainError("precision must be at least 30 digits, got " + std::to_string(digits));
    }
    const double floor_log10 = -(digits - 10) - 1e-9;
    if (quad_tol <= 0 || quad_tol_log10() < floor_log10) {
        throw DomainError("quad_tol is not achievable at " + std::to_string(digits) + " digits");
    }
    if (ode_tol <= 0 || ode_tol_log10() < floor_log10) {
        throw DomainError("ode_tol is not achievable at " + std::to_string(digits) + " digits");
    }
}

double PrecisionContext::quad_tol_log10() const { return log10_abs(quad_tol); }
double PrecisionContext::ode_tol_log10() const { return log10_abs(ode_tol); }

PrecisionGuard::PrecisionGuard(int digits) : previous_(Real::default_precision()) {
    Real::default_precision(static_cast<unsigned>(digits));
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(previous_); }

Real pow10(int exponent) {
    Real ten = 10;
    return boost::multiprecision::pow(ten, exponent);
}

Real pi() { return boost::math::constants::pi<Real>(); }

Real parse_real(std::string_view text) {
    std::string s(text);
    auto trim = [](std::string& v) {
        const auto b = v.find_first_not_of(" \t");
        const auto e = v.find_last_not_of(" \t");
        v = (b == std::string::npos) ? std::string{} : v.substr(b, e - b + 1);
    };
    trim(s);
    if (s.empty()) throw UsageError("empty number");
    const auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            std::string num = s.substr(0, slash);
            std::string den = s.substr(slash + 1);
            trim(num);
            trim(den);
            Real n(num);
            Real d(den);
            if (d == 0) throw UsageError("zero denominator in '" + s + "'");
            return n / d;
        }
        for (char c : s) {
            if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' ||
                  c == '+' || c == '-')) {
                throw UsageError("malformed number '" + s + "'");
            }
        }
        return Real(s);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("malformed number '" + s + "'");
    }
}

int round_trip_digits() {
    const double bits = static_cast<double>(Real::default_precision()) * 3.321928094887362;
    return static_cast<int>(std::ceil(bits * 0.30102999566398120)) + 3;
}

std::string to_string(const Real& x) {
    const double bits = static_cast<double>(mpfr_get_prec(x.backend().data()));
    const int digits = static_cast<int>(std::ceil(bits * 0.30102999566398120)) + 2;
    return x.str(digits, std::ios_base::scientific);
}

std::string to_string(const Real& x, int significant) {
    return x.str(significant, std::ios_base::scientific);
}

double log10_abs(const Real& x) {
    if (x == 0) return -std::numeric_limits<double>::infinity();
    long exp2 = 0;
    const double mant = mpfr_get_d_2exp(&exp2, x.backend().data(), MPFR_RNDN);
    return std::log10(std::fabs(mant)) + static_cast<double>(exp2) * 0.30102999566398120;
}

Real at_default_precision(const Real& x) { return Real(x, Real::default_precision()); }

}  // namespace qpl
