#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <string_view>

namespace qpl {

/// Extended-precision real. The precision of freshly constructed values is the
/// process-wide MPFR default, which PrecisionGuard installs for the duration of
/// a computation.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

/// Working precision plus the tolerance policy every kernel reads.
struct PrecisionContext {
    int digits = 50;
    Real quad_tol;
    Real ode_tol;

    /// Tolerances default to 10^-(digits-10), the tightest the invariants allow.
    static PrecisionContext make(int digits);
    static PrecisionContext make(int digits, int quad_tol_exp10, int ode_tol_exp10);

    /// Throws DomainError when the invariants (digits >= 30, tolerances
    /// achievable at this precision) do not hold.
    void validate() const;

    /// log10 of quad_tol / ode_tol as doubles (tolerances may underflow a double).
    [[nodiscard]] double quad_tol_log10() const;
    [[nodiscard]] double ode_tol_log10() const;
};

/// Installs ctx.digits as the default precision and restores the previous
/// value on destruction. Only the thread that owns a computation may hold one;
/// worker threads inherit the installed default.
class PrecisionGuard {
public:
    explicit PrecisionGuard(int digits);
    explicit PrecisionGuard(const PrecisionContext& ctx) : PrecisionGuard(ctx.digits) {}
    ~PrecisionGuard();
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    unsigned previous_;
};

Real pow10(int exponent);
Real pi();

/// Parses decimals ("-0.0417", "1e-30") and exact fractions ("-1/12") at the
/// current default precision. Throws UsageError on malformed input.
Real parse_real(std::string_view text);

/// Round-trippable scientific representation (re-parsing at the same precision
/// reproduces the value bit for bit).
std::string to_string(const Real& x);

/// Short representation for tables and logs.
std::string to_string(const Real& x, int significant);

/// Number of decimal digits needed so that decimal -> binary round trips.
int round_trip_digits();

double log10_abs(const Real& x);

/// Copy of x rounded to the current default precision.
Real at_default_precision(const Real& x);

}  // namespace qpl
