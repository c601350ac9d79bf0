#pragma once

#include "qpl/numerics/complex.hpp"
#include "qpl/numerics/precision.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qpl {

enum class RuleKind { tanh_sinh, gauss_legendre_composite };

/// Serial sweeps visit nodes in natural order; parallel sweeps split nodes into
/// a fixed set of contiguous blocks (independent of the thread count) and add
/// the block sums in block order, so parallel results are bit-reproducible.
enum class Execution { serial, parallel };

struct QuadratureRule {
    RuleKind kind = RuleKind::tanh_sinh;
    /// tanh-sinh: step 2^-level. Gauss-Legendre: 2^level panels.
    int max_levels = 12;
    int min_levels = 3;
    int gl_nodes = 24;
    /// Cut-off for semi-infinite legs; 0 lets the caller derive it from the weight bound.
    double truncation_radius = 0;
};

/// A point on a leg z(s) = a + (b - a) s. s and s_comp = 1 - s are both
/// accurate to full relative precision, so integrands can resolve endpoint
/// singularities without cancellation.
struct LegPoint {
    Complex z;
    Real s;
    Real s_comp;
};

struct Segment {
    Complex a;
    Complex b;
};

/// A point in [a, b] together with accurate distances to both ends.
struct RealPoint {
    Real x;
    Real from_a;
    Real to_b;
};

template <class T>
struct QuadResult {
    T value;
    Real error;  // last refinement difference, max over components
    int levels = 0;
    std::size_t evaluations = 0;
};

struct VectorQuadResult {
    std::vector<Complex> value;
    std::vector<Real> errors;  // per component
    int levels = 0;
    std::size_t evaluations = 0;
};

using LegIntegrand = std::function<Complex(const LegPoint&)>;
/// Adds factor * f(p) into each component of acc.
using LegAccumulator = std::function<void(const LegPoint& p, const Complex& factor, std::span<Complex> acc)>;
using RealIntegrand = std::function<Real(const RealPoint&)>;

QuadResult<Complex> integrate_leg(const LegIntegrand& f, const Segment& leg, const QuadratureRule& rule,
                                  const PrecisionContext& ctx, Execution exec = Execution::parallel);

/// Integrates `components` functions sharing one node set along the leg. Every
/// component must pass the self-convergence test |Q_L - Q_{L-1}| / (1 + |Q_L|) < quad_tol.
VectorQuadResult integrate_leg_vector(const LegAccumulator& f, std::size_t components, const Segment& leg,
                                      const QuadratureRule& rule, const PrecisionContext& ctx,
                                      Execution exec = Execution::parallel);

QuadResult<Real> integrate_real(const RealIntegrand& f, const Real& a, const Real& b, const QuadratureRule& rule,
                                const PrecisionContext& ctx, Execution exec = Execution::parallel);

/// Cauchy principal value of PV int_a^b g(y) / (x0 - y) dy by symmetric
/// excision of [x0 - rho, x0 + rho], rho = excision_fraction * min(x0 - a, b - x0).
/// g sees distances to the ends of the full interval [a, b].
QuadResult<Real> integrate_pv(const RealIntegrand& g, const Real& a, const Real& b, const Real& x0,
                              const QuadratureRule& rule, const PrecisionContext& ctx,
                              const Real& excision_fraction = Real(0.5));

namespace detail {

/// Quadrature node on [0, 1]; weight already includes the step length.
struct UnitNode {
    Real s;
    Real s_comp;
    Real weight;
};

/// New nodes of tanh-sinh level `level` (nested: level L adds the odd
/// multiples of 2^-L) at the current default precision. Cached per precision.
const std::vector<UnitNode>& tanh_sinh_level(int level);

/// All nodes of the composite Gauss-Legendre rule with 2^level panels.
std::vector<UnitNode> gauss_legendre_composite(int level, int nodes_per_panel);

/// Gauss-Legendre nodes/weights on [0, 1] at the current default precision.
const std::vector<UnitNode>& gauss_legendre_unit(int nodes);

}  // namespace detail

}  // namespace qpl
