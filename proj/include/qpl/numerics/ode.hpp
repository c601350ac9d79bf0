#pragma once

#include "qpl/numerics/complex.hpp"
#include "qpl/numerics/precision.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace qpl {

/// dy/dx = rhs(x, y) for a complex state vector.
using OdeRhs = std::function<void(const Real& x, std::span<const Complex> y, std::span<Complex> dy)>;

struct OdeOptions {
    /// Halt with a blowup event when max |y_k| exceeds this.
    double blowup_ceiling = 1e8;
    /// 0 picks a starting step from the tolerance.
    double initial_step = 0;
    std::size_t max_steps = 10'000'000;
    /// Points (between x_start and x_end) where the state is stored exactly.
    std::vector<Real> outputs;
};

struct OdeEvent {
    enum class Kind { blowup } kind;
    Real x;      // last accepted point before the ceiling was crossed
    Real x_bad;  // trial point where the ceiling was crossed
};

/// Accepted steps with states and derivatives; between nodes, interpolate() uses
/// cubic Hermite data, which is adequate for plotting only. Exact values live at
/// the nodes, and every requested output point is a node.
struct OdeTrajectory {
    std::vector<Real> x;
    std::vector<std::vector<Complex>> y;
    std::vector<std::vector<Complex>> dy;
    std::vector<OdeEvent> events;
    std::size_t rejected = 0;

    [[nodiscard]] bool halted() const { return !events.empty(); }
    [[nodiscard]] std::vector<Complex> interpolate(const Real& at) const;
    /// State at a requested output point, if it was reached.
    [[nodiscard]] std::optional<std::vector<Complex>> at_node(const Real& at) const;
};

/// Embedded Runge-Kutta-Fehlberg 7(8) with local extrapolation and step size
/// control on max-norm local error relative to (1 + |y|). Throws StepUnderflow
/// when the step drops below 10^(-digits/2) before any blowup.
OdeTrajectory ode_solve(const OdeRhs& rhs, const Real& x_start, const Real& x_end, std::vector<Complex> y_start,
                        const PrecisionContext& ctx, const OdeOptions& options = {});

/// Classical fixed-step RK4; used as an independent check in tests.
std::vector<Complex> rk4_fixed(const OdeRhs& rhs, const Real& x_start, const Real& x_end,
                               std::vector<Complex> y_start, long steps);

}  // namespace qpl
