#pragma once

#include "qpl/numerics/complex.hpp"
#include "qpl/numerics/precision.hpp"
#include "qpl/numerics/quadrature.hpp"
#include "qpl/potential/potential.hpp"

#include <array>

#include <string>
#include <vector>

namespace qpl {

enum class ContourLabel { gamma0, gamma1, gamma2, gamma3, gamma4, lens_upper, lens_lower, real_line };

std::string to_string(ContourLabel label);

/// One oriented, weighted piece of a contour. Vertices are stored from the
/// inner end outward; orientation -1 means the piece is traversed from the last
/// vertex back to the first. An unbounded piece continues from its last vertex
/// along `direction` to infinity and is cut off at a truncation radius when
/// integrated.
struct ContourPiece {
    ContourLabel label = ContourLabel::gamma1;
    std::vector<Complex> vertices;
    bool unbounded = false;
    Complex direction;  // unit vector, unbounded pieces only
    int orientation = 1;
    Complex weight = Complex(1);

    /// Vertices with the unbounded tail cut at |z| = radius (by extending along direction).
    [[nodiscard]] std::vector<Complex> truncated(const Real& radius) const;
};

struct ContourPath {
    std::vector<ContourPiece> pieces;

    [[nodiscard]] Complex weight_of(ContourLabel label) const;
};

/// Two lines through 0 at angles pi/4 and -pi/4, each parametrised by increasing r.
/// Line 1 carries beta for r < 0 (Gamma3) and alpha for r > 0 (Gamma1); line 2 carries
/// 1 - beta for r < 0 (Gamma2) and 1 - alpha for r > 0 (Gamma4).
ContourPath build_ray_contour(const Complex& alpha, const Complex& beta);

/// The real line with weight 1, for t >= 0 where the rays do not converge.
ContourPath build_real_line_contour();

/// Point at parameter r on line 1 (angle pi/4) or line 2 (angle -pi/4).
Complex ray_point(int line, const Real& r);

/// Smallest R with N|t|R^4/4 - K log R >= (digits + 10) log 10, so that
/// |z^K e^{-N V_t(z)}| is below 10^-(digits+10) beyond R on the rays.
Real ray_truncation_radius(const Real& t, int N, int K, int digits);

/// Same bound along the real line for t >= 0 (Gaussian or quartic decay).
Real real_line_truncation_radius(const Real& t, int N, int K, int digits);

enum class LevelKind { imaginary_part, argument };

/// A curve on which Im phi (or the continued arg phi) is constant.
struct TracedCurve {
    std::vector<Complex> points;
    std::vector<Complex> phi;  // phi at each point, on the branch continued along the curve
    std::vector<Real> s;       // polyline arc length
    LevelKind kind = LevelKind::imaginary_part;
    Real phase_level;
    /// Bound on |Im phi - level| (or |arg phi - level|), including accumulated quadrature error.
    Real quality;
    Complex start;        // branch point or saddle the curve leaves from
    Real departure_angle;  // arg(points[0] - start)
    bool complete = false;  // reached the stop radius within the arc budget
};

struct TraceOptions {
    Real arc_budget = 40;
    Real max_step = Real(1) / 20;
    Real stop_radius = 4;
    /// Distance of the first point from the start; 10^-(digits/5) when unset.
    std::optional<Real> epsilon;
};

/// Default tracer tolerance 10^-(digits/4).
Real trace_tolerance(const PrecisionContext& ctx);

/// Steepest descent curve of Re phi in quadrant j = 1..4 (counted like the
/// sectors, j = 1 upper right). For critical_cr it leaves +-sqrt 8; for the
/// regular phi it leaves the saddle +-d_t. Ends on |z| = stop_radius.
TracedCurve trace_steepest(int quadrant, const PhiFunction& phi, const TraceOptions& opt,
                           const PrecisionContext& ctx);

/// Lens lip near sqrt 8 on which the continued arg phi_cr equals 2 pi side
/// (side = +1 upper, -1 lower); Re phi_cr increases along it.
TracedCurve trace_phase_curve(int side, const TraceOptions& opt, const PrecisionContext& ctx);

/// Gamma0 = [-z0, z0] plus Gamma1..4 from traced curves (indexed by quadrant - 1), each
/// thinned to at most max_vertices, closed onto the sector bisector at its last radius
/// and continued along it. Same weights and orientation as build_ray_contour.
ContourPath build_deformed_contour(const Complex& alpha, const Complex& beta,
                                   const std::array<TracedCurve, 4>& curves, int max_vertices = 12);

struct BoundingBox {
    Real x_min = -6;
    Real x_max = 6;
    Real y_min = -6;
    Real y_max = 6;
};

enum class RegionSign : char { plus = '+', minus = '-', cut = 'c' };

/// Sign of Re phi at the nodes of an nx by ny grid, row j holding y = y_min + j dy.
struct SignRaster {
    BoundingBox box;
    int nx = 0;
    int ny = 0;
    std::vector<RegionSign> cells;

    [[nodiscard]] RegionSign at(int i, int j) const { return cells[static_cast<std::size_t>(j) * nx + i]; }
    [[nodiscard]] Complex node(int i, int j) const;
};

/// Nodes on the real axis left of the branch point are reported as cut.
SignRaster region_sign_map(const PhiFunction& phi, const BoundingBox& box, int nx, int ny,
                           const PrecisionContext& ctx, Execution exec = Execution::parallel);

/// f(z) = [5/4 phi_cr(z)]^{2/5}, positive for small z - sqrt 8 > 0. Uses the local
/// series for |z - sqrt 8| < sqrt 8 and phi_cr itself beyond (BranchCutError on the cut).
Complex conformal_f(const Complex& z, const PrecisionContext& ctx);
/// (4/5)^{1/5} phi_circ(z) / phi_cr(z)^{1/5}, analytic at sqrt 8.
Complex conformal_ucirc(const Complex& z, const PrecisionContext& ctx);
/// u_t = (t + 1/12) u_circ.
Complex conformal_ut(const Real& t, const Complex& z, const PrecisionContext& ctx);

/// The quotients above evaluated straight from phi_cr and phi_circ, no series.
Complex conformal_f_direct(const Complex& z, const PrecisionContext& ctx);
Complex conformal_ucirc_direct(const Complex& z, const PrecisionContext& ctx);

/// Columns s, Re z, Im z, Re phi, Im phi.
std::string curve_csv(const TracedCurve& curve);

struct SvgCurve {
    std::vector<Complex> points;
    std::string stroke = "#000";
    std::string label;
};

/// Raster as two-tone shading (Re phi > 0 shaded) under the curves, in box coordinates.
std::string render_svg(const SignRaster* raster, const std::vector<SvgCurve>& curves, const BoundingBox& box,
                       int width_px = 600);

}  // namespace qpl
