#ifndef STARFLOW_GEOMETRY_HPP
#define STARFLOW_GEOMETRY_HPP

#include <vector>

#include "starflow/curve.hpp"
#include "starflow/vec2.hpp"

namespace starflow {

enum class StencilOrder { second = 2, fourth = 4 };

/// Per-node derived data of a closed curve. All fields are plain values;
/// instances are immutable after construction and safe to share.
///
/// Sign conventions (CCW curve): outer normal n = (v2', -v1')/s, curvature
/// kappa = (-v1''*v2' + v1'*v2'')/s^3 so that a circle of radius r has
/// kappa = 1/r. psi is the angle between the position vector and the outer
/// normal, stored unsigned in [0, pi); only cos(psi) enters any formula.
struct CurveGeometry {
    std::vector<Vec2> d1;        ///< v'  (parameter derivative)
    std::vector<Vec2> d2;        ///< v'' (first-derivative stencil applied twice)
    std::vector<Vec2> tangent;   ///< v'/s
    std::vector<Vec2> normal;    ///< outer normal (v2', -v1')/s
    std::vector<double> speed;   ///< s = |v'| > 0
    std::vector<double> curvature;
    std::vector<double> radius;   ///< |v| (populated when with_psi)
    std::vector<double> cos_psi;  ///< <v, n>/|v| (populated when with_psi)
    std::vector<double> psi;      ///< arccos(cos_psi), in [0, pi)
    std::vector<double> ds;       ///< arclength weight s * 2pi/N
    std::vector<Vec2> node;       ///< curve nodes (copied for self-contained use)
    double dx = 0.0;

    std::size_t size() const { return node.size(); }
};

/// Populates CurveGeometry with periodic central differences of the given
/// order. v'' is the first-derivative stencil applied twice, which makes
/// kappa exact (to roundoff) on uniformly sampled single-frequency curves:
/// circles of any winding and ellipses.
///
/// Throws DegenerateCurveError when adjacent nodes are closer than
/// 1e-12 x curve length, and OriginCrossingError when a node radius falls
/// below 1e-12 while the radial fields are requested.
CurveGeometry derivatives(const ClosedCurve& curve, StencilOrder order,
                          bool with_psi = true);

/// True iff cos(psi) >= margin at every node.
bool is_star_shaped(const CurveGeometry& geom, double margin);

/// Throws NotStarShapedError (naming the worst node) unless
/// cos(psi) >= margin everywhere.
void require_star_shaped(const CurveGeometry& geom, double margin);

} // namespace starflow

#endif
