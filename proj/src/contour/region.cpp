#include "qpl/contour/contour.hpp"

#include "qpl/numerics/errors.hpp"

#include <cstdio>
#include <exception>
#include <sstream>

namespace qpl {

Complex SignRaster::node(int i, int j) const {
    const Real dx = (box.x_max - box.x_min) / (nx - 1);
    const Real dy = (box.y_max - box.y_min) / (ny - 1);
    return {box.x_min + dx * i, box.y_min + dy * j};
}

namespace {

RegionSign classify(const PhiFunction& phi, const Complex& z, const PrecisionContext& ctx) {
    if (z.im == 0 && z.re <= phi.endpoint()) return RegionSign::cut;
    return eval_phi(phi, z, ctx).re > 0 ? RegionSign::plus : RegionSign::minus;
}

}  // namespace

SignRaster region_sign_map(const PhiFunction& phi, const BoundingBox& box, int nx, int ny, const PrecisionContext& ctx,
                           Execution exec) {
    if (nx < 16 || ny < 16) throw UsageError("the raster needs at least 16 nodes per axis");
    if (!(box.x_max > box.x_min) || !(box.y_max > box.y_min)) throw UsageError("empty bounding box");
    PrecisionGuard guard(ctx);
    SignRaster r;
    r.box = box;
    r.nx = nx;
    r.ny = ny;
    const std::size_t total = static_cast<std::size_t>(nx) * ny;
    r.cells.assign(total, RegionSign::minus);
    std::vector<Complex> nodes(total);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            Complex z = r.node(i, j);
            // snap round-off onto the axis so axis nodes are classified as such
            if (abs(z.im) < pow10(-ctx.digits / 2) * (box.y_max - box.y_min)) z.im = 0;
            nodes[static_cast<std::size_t>(j) * nx + i] = z;
        }
    }
    if (exec == Execution::serial) {
        for (std::size_t k = 0; k < total; ++k) r.cells[k] = classify(phi, nodes[k], ctx);
        return r;
    }
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t k = 0; k < total; ++k) {
        try {
            r.cells[k] = classify(phi, nodes[k], ctx);
        } catch (...) {
#pragma omp critical(qpl_raster_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return r;
}

std::string curve_csv(const TracedCurve& curve) {
    std::ostringstream os;
    os << "s,re_z,im_z,re_phi,im_phi\n";
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
        os << to_string(curve.s[k]) << ',' << to_string(curve.points[k].re) << ',' << to_string(curve.points[k].im)
           << ',' << to_string(curve.phi[k].re) << ',' << to_string(curve.phi[k].im) << '\n';
    }
    return os.str();
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_svg(const SignRaster* raster, const std::vector<SvgCurve>& curves, const BoundingBox& box,
                       int width_px) {
    const double x0 = box.x_min.convert_to<double>();
    const double x1 = box.x_max.convert_to<double>();
    const double y0 = box.y_min.convert_to<double>();
    const double y1 = box.y_max.convert_to<double>();
    const double scale = width_px / (x1 - x0);
    const double height = (y1 - y0) * scale;
    auto px = [&](double x) { return (x - x0) * scale; };
    auto py = [&](double y) { return (y1 - y) * scale; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_px << "\" height=\"" << fmt(height)
       << "\" viewBox=\"0 0 " << width_px << ' ' << fmt(height) << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width_px << "\" height=\"" << fmt(height) << "\" fill=\"#fff\"/>\n";
    if (raster) {
        const double cw = (raster->box.x_max - raster->box.x_min).convert_to<double>() / (raster->nx - 1) * scale;
        const double ch = (raster->box.y_max - raster->box.y_min).convert_to<double>() / (raster->ny - 1) * scale;
        os << "<g id=\"sign\" stroke=\"none\">\n";
        for (int j = 0; j < raster->ny; ++j) {
            for (int i = 0; i < raster->nx; ++i) {
                const RegionSign s = raster->at(i, j);
                if (s == RegionSign::minus) continue;
                const Complex z = raster->node(i, j);
                os << "<rect x=\"" << fmt(px(z.re.convert_to<double>()) - cw / 2) << "\" y=\""
                   << fmt(py(z.im.convert_to<double>()) - ch / 2) << "\" width=\"" << fmt(cw) << "\" height=\""
                   << fmt(ch) << "\" fill=\"" << (s == RegionSign::plus ? "#c8d3e0" : "#555") << "\"/>\n";
            }
        }
        os << "</g>\n";
    }
    os << "<line x1=\"0\" y1=\"" << fmt(py(0)) << "\" x2=\"" << width_px << "\" y2=\"" << fmt(py(0))
       << "\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
    os << "<line x1=\"" << fmt(px(0)) << "\" y1=\"0\" x2=\"" << fmt(px(0)) << "\" y2=\"" << fmt(height)
       << "\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
    for (const auto& c : curves) {
        os << "<polyline";
        if (!c.label.empty()) os << " id=\"" << c.label << "\"";
        os << " fill=\"none\" stroke=\"" << c.stroke << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < c.points.size(); ++k) {
            if (k) os << ' ';
            os << fmt(px(c.points[k].re.convert_to<double>())) << ',' << fmt(py(c.points[k].im.convert_to<double>()));
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace qpl
