#pragma once

#include <stdexcept>
#include <string>

namespace qpl {

/// Broad failure classes; the CLI maps each to a distinct exit code.
enum class ErrorCategory { usage, numerical, existence, pole, domain };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}
    [[nodiscard]] ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct UsageError : Error {
    explicit UsageError(const std::string& what) : Error(ErrorCategory::usage, what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(ErrorCategory::domain, what) {}
};

struct BranchCutError : Error {
    explicit BranchCutError(const std::string& what) : Error(ErrorCategory::domain, what) {}
};

struct PoleOnBoundary : Error {
    explicit PoleOnBoundary(const std::string& what) : Error(ErrorCategory::domain, what) {}
};

/// Quadrature refinement did not settle; carries the last difference seen.
struct NonConvergence : Error {
    NonConvergence(const std::string& what, double achieved_log10)
        : Error(ErrorCategory::numerical, what), achieved_log10(achieved_log10) {}
    double achieved_log10;
};

struct StepUnderflow : Error {
    explicit StepUnderflow(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

struct StallError : Error {
    explicit StallError(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

struct SingularStart : Error {
    explicit SingularStart(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

struct SeedAccuracyError : Error {
    explicit SeedAccuracyError(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

struct LatticeBlowup : Error {
    LatticeBlowup(const std::string& what, int n) : Error(ErrorCategory::numerical, what), n(n) {}
    int n;
};

struct InsufficientData : Error {
    explicit InsufficientData(const std::string& what) : Error(ErrorCategory::usage, what) {}
};

/// The bilinear form has no monic orthogonal polynomial of degree n.
struct DegenerateForm : Error {
    DegenerateForm(const std::string& what, int n) : Error(ErrorCategory::existence, what), n(n) {}
    int n;
};

struct PoleHit : Error {
    PoleHit(const std::string& what, double pole_estimate)
        : Error(ErrorCategory::pole, what), pole_estimate(pole_estimate) {}
    double pole_estimate;
};

}  // namespace qpl
