#ifndef STARFLOW_CURVE_HPP
#define STARFLOW_CURVE_HPP

#include <functional>
#include <vector>

#include "starflow/vec2.hpp"

namespace starflow {

/// Closed planar curve sampled uniformly in the parameter x in [0, 2pi).
/// Node j sits at x_j = 2*pi*j/N. Construction enforces N >= 16, positive
/// node spacing, and counterclockwise orientation (the node order is
/// reversed when the signed area is negative).
class ClosedCurve {
public:
    explicit ClosedCurve(std::vector<Vec2> nodes);

    const std::vector<Vec2>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    const Vec2& operator[](std::size_t j) const { return nodes_[j]; }

    /// Parameter spacing 2*pi/N.
    double dx() const;

private:
    std::vector<Vec2> nodes_;
};

ClosedCurve make_circle(double radius, Vec2 center, std::size_t n);
ClosedCurve make_ellipse(double a, double b, std::size_t n);
/// Polar graph r(theta) sampled at theta_j = 2*pi*j/N; radius must stay positive.
ClosedCurve make_polar(const std::function<double(double)>& radius, std::size_t n);

/// Signed-area quadrature (shoelace integrand with trapezoid-exact
/// differentiation); spectrally accurate for smooth node data.
double enclosed_area(const ClosedCurve& curve);
/// Arclength quadrature, spectrally accurate for smooth node data.
double total_length(const ClosedCurve& curve);

/// Reparametrizes to uniform arclength spacing along the periodic cubic
/// spline through the nodes. The geometric trace is preserved up to the
/// spline interpolation error; a uniformly sampled circle is a fixed point.
ClosedCurve resample_uniform_arclength(const ClosedCurve& curve);

} // namespace starflow

#endif
