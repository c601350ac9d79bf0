#pragma once

#include "qpl/io/json.hpp"
#include "qpl/numerics/complex.hpp"
#include "qpl/numerics/precision.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <optional>
#include <vector>

namespace qpl {

/// s_k for k mod 5, built from alpha: s_0 = 0, s_1 = i alpha, s_{-1} = i(1 - alpha), s_{+-2} = i.
struct StokesData {
    std::array<Complex, 5> s;

    [[nodiscard]] const Complex& operator()(int k) const { return s[static_cast<std::size_t>(((k % 5) + 5) % 5)]; }
};

StokesData stokes_multipliers(const Complex& alpha);

/// max_k |1 + s_k s_{k+1} + i s_{k+3}|.
Real stokes_relation_defect(const StokesData& s);

enum class SeedMethod {
    borel_pade,  // median Borel-Pade sum of the series plus the exponential mode
    truncated,   // series cut at its smallest term plus the exponential mode
};

std::string to_string(SeedMethod m);
SeedMethod parse_seed_method(std::string_view s);

struct PainleveParameters {
    Complex alpha;
    Real x0;
    int series_order = 160;  // series coefficients fed to the seed
    SeedMethod seed_method = SeedMethod::borel_pade;
    std::optional<Real> seed_tol;  // default: 10^10 ode_tol

    static PainleveParameters make(const Complex& alpha);  // x0 = -30
    void validate() const;
    [[nodiscard]] StokesData stokes() const { return stokes_multipliers(alpha); }
};

/// Exact q_k with a_k = q_k / 6^{k/2}, k = 0..K (q_0 = 1). Rational arithmetic,
/// intended for K <= 40.
std::vector<boost::multiprecision::cpp_rational> series_q_exact(int K);

/// a_0..a_K of y ~ sqrt(-x/6) (1 + sum a_k (-x)^{-5k/2}) at the current precision.
std::vector<Real> series_coefficients(int K);

struct SeriesValue {
    Real y;
    Real dy;  // d/dx
    Real d2y;
    Real last_term;  // |size of the last included correction| times sqrt(-x/6)
    int terms = 0;
};

/// Partial sum with terms a_0..a_K (K < 0: stop before the smallest term).
SeriesValue series_value(const std::vector<Real>& a, const Real& x, int K = -1);

/// Decaying mode of the linearisation about the series, normalised as
/// D(x) = (-x)^{-1/8} e^{-kappa (-x)^{5/4}} (1 + o(1)) / (sqrt(pi) 2^{11/8} 3^{1/8}).
struct ExponentialMode {
    Real D;
    Real dD;  // d/dx
    Real rel_error;
    int terms = 0;
};

ExponentialMode exponential_mode(const Real& x, const std::vector<Real>& a);

/// Leading Kapaev term -i(alpha-1) (-x)^{-1/8} e^{-kappa (-x)^{5/4}} / (sqrt(pi) 2^{11/8} 3^{1/8}).
Complex kapaev_leading(const Complex& alpha, const Real& x);

/// kappa = (1/5) 2^{11/4} 3^{1/4}
Real kapaev_kappa();

/// Lateral Borel-Pade sum of the series at x < 0 along arg tau = side * pi/6
/// (side = +1 gives the solution with alpha = 1).
struct LateralSum {
    Complex y;
    Complex dy;
    int pade_order = 0;
};

LateralSum borel_lateral_sum(const Real& x, int series_order, int side, const PrecisionContext& ctx);

struct SeedState {
    Complex y;
    Complex dy;
    Real error;             // estimated absolute error of (y, y')
    Real lateral_defect;    // |Im y_1 + D/2| / D, a check on the exponential mode (borel only)
    int series_terms = 0;
    SeedMethod method = SeedMethod::borel_pade;
};

/// Throws SeedAccuracyError when the estimated error exceeds the seed tolerance.
SeedState seed_state(const PainleveParameters& p, const PrecisionContext& ctx);

struct PoleEvent {
    Real x_approach;
    Complex y_approach;
    Real pole_estimate;  // x_approach + y^{-1/2}
};

/// One Taylor step of y'' = 6y^2 + x about `x`, used for dense output.
struct TaylorPiece {
    Real x;
    Real h;
    std::vector<Complex> c;   // y(x + s) = sum c_k s^k
    std::vector<Complex> e1;  // d y / d y(x0)
    std::vector<Complex> e2;  // d y / d y'(x0)
};

struct PainleveSolution {
    Complex alpha;
    Real x0;
    SeedState seed;
    int digits = 0;
    std::vector<Real> grid;
    std::vector<Complex> y;
    std::vector<Complex> dy;
    std::vector<Complex> H;
    std::vector<Real> seed_error;  // seed error propagated to each grid point
    std::vector<PoleEvent> poles;
    std::vector<TaylorPiece> pieces;
    Real x_end;  // last point reached (x_target, or the approach point of a pole)

    [[nodiscard]] bool halted() const { return !poles.empty(); }
    /// Dense evaluation; throws PoleHit beyond a detected pole, UsageError outside [x0, x_end].
    [[nodiscard]] Complex y_at(const Real& x) const;
    [[nodiscard]] Complex dy_at(const Real& x) const;
    [[nodiscard]] Complex H_at(const Real& x) const;
    [[nodiscard]] Real seed_error_at(const Real& x) const;
};

Complex hamiltonian(const Real& x, const Complex& y, const Complex& dy);

struct PainleveOptions {
    Real grid_step = Real(1) / 10;
    Real blowup_ceiling = Real(1e8);
};

/// Seeds at p.x0 and integrates along the real axis to x_target with a Taylor
/// method. Stops at the first blow-up and records it as a pole.
PainleveSolution solve_painleve(const PainleveParameters& p, const Real& x_target, const PrecisionContext& ctx,
                                const PainleveOptions& opt = {});

/// max over samples in [a, b] of |H'(x) + y(x)| with H' from a central
/// difference stencil on the dense output.
Real hamiltonian_drift(const PainleveSolution& s, const Real& a, const Real& b, int samples,
                       const PrecisionContext& ctx);

struct PointValue {
    Real x;
    Complex y;
    Complex H;
    Real error;  // propagated seed error
};

/// One solve per parameter set over the hull of xs, cached in memory.
std::vector<PointValue> eval_y_and_H(const PainleveParameters& p, const std::vector<Real>& xs,
                                     const PrecisionContext& ctx);
void clear_painleve_cache();

Json to_json(const PainleveSolution& s);
PainleveSolution painleve_from_json(const Json& j);
std::string painleve_csv(const PainleveSolution& s);

/// Default working precision for Painleve solves.
inline constexpr int kPainleveDigits = 100;

}  // namespace qpl
