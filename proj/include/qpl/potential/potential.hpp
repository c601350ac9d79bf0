#pragma once

#include "qpl/numerics/complex.hpp"
#include "qpl/numerics/precision.hpp"
#include "qpl/numerics/quadrature.hpp"

#include <optional>
#include <vector>

namespace qpl {

/// V_t(z) = z^2/2 + t z^4/4 with weight scale N.
struct QuarticPotential {
    Real t;
    int N = 1;
};

Complex eval_potential(const Real& t, const Complex& z);

/// The critical parameter -1/12 at the current precision.
Real t_critical();

/// True when t lies within roundoff of -1/12.
bool is_critical(const Real& t);

struct Endpoints {
    Real c;
    Real c2;
    std::optional<Real> d;  // empty when d_t^2 <= 0 (t >= 0)
    Real d2;                // meaningful only when d is set
};

/// c_t and d_t; at t = 0 returns the limit c = 2 with d unset. Throws
/// DomainError for t < -1/12.
Endpoints endpoints(const Real& t);

/// Equilibrium density mu_t on [-c_t, c_t] for -1/12 <= t < 0.
Real density_mu(const Real& t, const Real& x);
/// (8 - x^2)^{3/2} / (24 pi).
Real density_mu_critical(const Real& x);
/// The correction density (8 + 4x^2 - x^4) / (2 pi sqrt(8 - x^2)), |x| < sqrt 8.
Real density_vcirc(const Real& x);

/// A density on [-c, c] that can be evaluated from accurate distances to both
/// ends, which keeps endpoint behaviour exact under quadrature.
struct MeasureDensity {
    enum class Kind { regular, modified } kind;
    Real t;
    Real c;
    Real d2;  // regular only

    static MeasureDensity regular(const Real& t);
    /// mu_cr + (t + 1/12) v on [-sqrt 8, sqrt 8].
    static MeasureDensity modified(const Real& t);

    /// Density at x with from_left = x + c and to_right = c - x supplied accurately.
    [[nodiscard]] Real operator()(const Real& x, const Real& from_left, const Real& to_right) const;
    [[nodiscard]] Real operator()(const Real& x) const { return (*this)(x, c + x, c - x); }
};

QuadResult<Real> total_mass(const MeasureDensity& m, const PrecisionContext& ctx);

struct ELResult {
    Real residual;            // max_ij |E(x_i) - E(x_j)|
    std::vector<Real> values;  // E(x_i); their common value is the Lagrange constant
};

/// E(x) = 2 int log|x - y| dnu(y) - V_t(x) at each probe; the log singularity is
/// removed by y = x -/+ u^2 on either side of x.
ELResult euler_lagrange_residual(const MeasureDensity& m, const std::vector<Real>& probes,
                                 const PrecisionContext& ctx);

enum class PhiVariant { regular, critical_cr, critical_circ, critical_t };

struct PhiFunction {
    PhiVariant variant = PhiVariant::critical_cr;
    Real t;  // regular and critical_t only

    static PhiFunction regular(const Real& t);
    static PhiFunction critical_cr();
    static PhiFunction critical_circ();
    static PhiFunction critical_t(const Real& t);

    /// Branch point the integral starts from (c_t or sqrt 8).
    [[nodiscard]] Real endpoint() const;
};

/// phi'(z); fractional powers use sqrt(z - c) sqrt(z + c), cut on [-c, c].
Complex phi_prime(const PhiFunction& phi, const Complex& z);
/// Same, with z - c supplied separately so values near the branch point keep full accuracy.
Complex phi_prime(const PhiFunction& phi, const Complex& z, const Complex& z_minus_c);

/// phi(z) = integral of phi' from the endpoint to z. The default path is the
/// straight segment, or two segments via a point off the axis when z sits close
/// to the real axis left of the endpoint. Throws BranchCutError for z on (-inf, c).
Complex eval_phi(const PhiFunction& phi, const Complex& z, const PrecisionContext& ctx);

/// phi(z) along endpoint -> waypoints... -> z. Throws BranchCutError if a segment
/// meets the real axis left of the endpoint.
Complex eval_phi_path(const PhiFunction& phi, const Complex& z, const std::vector<Complex>& waypoints,
                      const PrecisionContext& ctx);

/// Integral of phi' along a straight segment [a, b] (no branch checks).
Complex integrate_phi_prime(const PhiFunction& phi, const Complex& a, const Complex& b,
                            const PrecisionContext& ctx);

}  // namespace qpl
