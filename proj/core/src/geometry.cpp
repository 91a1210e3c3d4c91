#include "starflow/geometry.hpp"

#include <cmath>
#include <numbers>

#include "starflow/errors.hpp"

namespace starflow {

namespace {

std::vector<Vec2> stencil_d1(const std::vector<Vec2>& v, double h, StencilOrder order) {
    const std::size_t n = v.size();
    std::vector<Vec2> out(n);
    if (order == StencilOrder::second) {
        for (std::size_t j = 0; j < n; ++j) {
            const Vec2 p = v[(j + 1) % n];
            const Vec2 m = v[(j + n - 1) % n];
            out[j] = (p - m) / (2.0 * h);
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            const Vec2 p1 = v[(j + 1) % n];
            const Vec2 p2 = v[(j + 2) % n];
            const Vec2 m1 = v[(j + n - 1) % n];
            const Vec2 m2 = v[(j + n - 2) % n];
            out[j] = (-1.0 * p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
        }
    }
    return out;
}

} // namespace

CurveGeometry derivatives(const ClosedCurve& curve, StencilOrder order, bool with_psi) {
    const std::size_t n = curve.size();
    const double h = curve.dx();

    CurveGeometry g;
    g.dx = h;
    g.node = curve.nodes();
    g.d1 = stencil_d1(g.node, h, order);
    g.d2 = stencil_d1(g.d1, h, order);

    g.speed.resize(n);
    g.tangent.resize(n);
    g.normal.resize(n);
    g.curvature.resize(n);
    g.ds.resize(n);

    double length_scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) length_scale += norm(g.d1[j]) * h;

    for (std::size_t j = 0; j < n; ++j) {
        const double s = norm(g.d1[j]);
        if (s * h < 1e-12 * length_scale) {
            throw DegenerateCurveError("node speed collapsed at node " + std::to_string(j));
        }
        g.speed[j] = s;
        g.tangent[j] = g.d1[j] / s;
        g.normal[j] = Vec2{g.d1[j].y, -g.d1[j].x} / s;
        g.curvature[j] = (-g.d2[j].x * g.d1[j].y + g.d1[j].x * g.d2[j].y) / (s * s * s);
        g.ds[j] = s * h;
    }

    if (with_psi) {
        g.radius.resize(n);
        g.cos_psi.resize(n);
        g.psi.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double r = norm(g.node[j]);
            if (r < 1e-12) {
                throw OriginCrossingError("node " + std::to_string(j) +
                                          " sits on the origin; psi is undefined");
            }
            g.radius[j] = r;
            const double c = std::clamp(dot(g.node[j], g.normal[j]) / r, -1.0, 1.0);
            g.cos_psi[j] = c;
            g.psi[j] = std::acos(c);
        }
    }
    return g;
}

bool is_star_shaped(const CurveGeometry& geom, double margin) {
    for (double c : geom.cos_psi) {
        if (!(c >= margin)) return false;
    }
    return !geom.cos_psi.empty();
}

void require_star_shaped(const CurveGeometry& geom, double margin) {
    if (geom.cos_psi.empty()) {
        throw ValidationError("geometry was built without the radial fields");
    }
    std::size_t worst = 0;
    double worst_c = geom.cos_psi[0];
    for (std::size_t j = 1; j < geom.cos_psi.size(); ++j) {
        if (geom.cos_psi[j] < worst_c) {
            worst_c = geom.cos_psi[j];
            worst = j;
        }
    }
    if (!(worst_c >= margin)) throw NotStarShapedError(worst, worst_c, margin);
}

} // namespace starflow
