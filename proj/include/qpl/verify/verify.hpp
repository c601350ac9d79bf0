#pragma once

#include "qpl/io/json.hpp"
#include "qpl/numerics/complex.hpp"
#include "qpl/numerics/precision.hpp"

#include <string>
#include <vector>

namespace qpl {

struct ScalingConstants {
    Real c1;  // 2^{-9/5} 3^{-6/5}
    Real c2;  // 2^{3/5} 3^{2/5}
    Real c3;  // 2^{1/10} 3^{2/5}
};

/// At the current precision.
ScalingConstants scaling_constants();

/// |c2 - sqrt 2 c3| in units of the working epsilon; the identity is exact, so
/// this is a few ulps at most. Compared as rationals of exponents as well.
bool scaling_constants_consistent();

/// (sqrt(1 + 12t) - 1) / (6t), with the limit 1 at t = 0.
Real regular_limit(const Real& t);

/// t_n = -1/12 - c1 x n^{-4/5}.
Real critical_t(const Real& x, int n);

enum class ExperimentMode { regular, critical };

struct ScalingExperiment {
    ExperimentMode mode = ExperimentMode::critical;
    Real x;  // critical only
    Real t;  // regular only
    Complex alpha;
    Complex beta;
    std::vector<int> n_list;
    int digits = 0;  // 0: default_orthopoly_digits(max n)
    int painleve_digits = 0;  // 0: the Painleve default

    static ScalingExperiment regular(const Real& t, const Complex& alpha, const Complex& beta, std::vector<int> ns);
    static ScalingExperiment critical(const Real& x, const Complex& alpha, const Complex& beta, std::vector<int> ns);
    void validate() const;
    [[nodiscard]] int working_digits() const;
};

struct ScalingRecord {
    int n = 0;
    Real t_n;
    Complex a;
    Complex b;
    Complex prediction_a;
    Complex prediction_b;
    Real residual_a;
    Real residual_b;
    Real scaled_a;  // n |a - L| (regular) or n^{3/5} residual_a (critical)
    Real scaled_b;  // log|b| (regular) or n^{3/5} residual_b (critical)
    int digits = 0;
    Real freud_residual;
    Real lattice_gap = -1;  // max |lattice - Stieltjes| on the overlap (critical, alpha = beta), -1 if not run
};

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
};

/// Least squares y = slope x + intercept. Throws InsufficientData for fewer than 2 points.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// max <= factor * median and min >= median / factor.
bool within_factor_of_median(const std::vector<Real>& v, double factor);

struct VerificationReport {
    ScalingExperiment experiment;
    ScalingConstants constants;
    Real limit;  // regular: L(t)
    Complex y_alpha;  // critical: y_alpha(x), y_beta(x)
    Complex y_beta;
    Real painleve_error;
    int painleve_digits = 0;
    std::vector<ScalingRecord> records;
    std::vector<CriterionResult> criteria;

    [[nodiscard]] bool pass() const;
};

VerificationReport run_regular(const ScalingExperiment& exp);
VerificationReport run_critical(const ScalingExperiment& exp);

struct PowerFit {
    double p = 0;      // residual ~ C n^{-p}
    double log_c = 0;
    double r2 = 0;
};

/// Log-log fit of residuals against n. Throws InsufficientData below 3 points.
PowerFit fit_power(const std::vector<int>& n, const std::vector<Real>& residual);

/// True when the leftover after the n^{-2/5} term decays with fitted exponent >= 1/2.
bool absence_of_n15_term(const std::vector<int>& n, const std::vector<Real>& residual);
bool absence_of_n15_term(const VerificationReport& report);

Json to_json(const VerificationReport& report);
std::string to_text(const VerificationReport& report);

}  // namespace qpl
