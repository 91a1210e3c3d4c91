#ifndef STARFLOW_FUNCTIONALS_HPP
#define STARFLOW_FUNCTIONALS_HPP

#include <string>

#include "starflow/anisotropy.hpp"
#include "starflow/flow.hpp"
#include "starflow/geometry.hpp"
#include "starflow/vec2.hpp"

namespace starflow {

/// Density families entering the monotonicity identities. The three star
/// densities share the weight rho = |eta|^2 / <xi, eta_nu> and differ by a
/// gauge term a(|xi|)|eta|cos(psi) linear in eta:
///
///   star_raw       a = 0
///   star_gauged    a(r) =  r/4 + log(r)/r   (closed-form circle values)
///   star_repaired  a(r) = -r/4 + log(r)/r   (the dissipation identity closes)
///
/// The gauged and repaired functionals differ pointwise by |eta||xi|cos(psi)/2,
/// whose integral over the curve is exactly the enclosed area; along the
/// rescaled flow the gauged value therefore drifts by d(area)/dtau = A - 2pi
/// while the repaired value dissipates exactly.
enum class DensityKind { huisken, star_raw, star_gauged, star_repaired };

std::string to_string(DensityKind kind);

/// e^{-|xi|^2/4} |eta|; order-1 homogeneous in eta.
double huisken_density(Vec2 xi, Vec2 eta);

/// Pointwise F density of the chosen kind. Star kinds require xi != 0 and
/// <xi, eta_nu> > 0 (eta_nu = eta rotated 90 degrees clockwise); violations
/// throw ConeViolationError.
double big_F(Vec2 xi, Vec2 eta, DensityKind kind);

/// Pointwise monotonicity weight rho: the Huisken density itself, or
/// |eta|^2 / <xi, eta_nu> for every star kind.
double rho(Vec2 xi, Vec2 eta, DensityKind kind);

/// Default star-shape margin for the functional evaluations: keeps the
/// 1/cos(psi) weight bounded by 20.
inline constexpr double kStarMargin = 0.05;

/// Trapezoid integral of e^{-|v|^2/4} |v'| over the parameter circle.
double huisken_value(const CurveGeometry& geom);

/// Star functional with the gauged density: integral of
/// sqrt(s^2/|v|^2) [ f(psi) + (log(|v|^2)/2 + |v|^2/4) cos psi ].
/// Equals pi(1 + log 2) on the circle of radius sqrt(2).
double star_value(const CurveGeometry& geom);

/// Star functional with the repaired density: integral of
/// sqrt(s^2/|v|^2) [ f(psi) + (log(|v|^2)/2 - |v|^2/4) cos psi ].
/// Nonincreasing along star-shaped rescaled flows.
double star_value_repaired(const CurveGeometry& geom);

/// Gauge-free part: integral of sqrt(s^2/|v|^2) f(psi).
double star_value_raw(const CurveGeometry& geom);

/// Huisken dissipation: integral of |normal velocity|^2 e^{-|v|^2/4} s.
double huisken_dissipation(const CurveGeometry& geom, const AnisotropySpec& g);

/// Star dissipation: integral of |normal velocity|^2 sqrt(s^2/|v|^2)/cos psi,
/// with the normal velocity <v,n>/2 - g kappa taken from the spatial
/// right-hand side (independent of tangential drift).
double star_dissipation(const CurveGeometry& geom, const AnisotropySpec& g);

/// Coupling integral of the raw identity:
///   extra = -integral of (v2' dtau_v1 - v1' dtau_v2)(1/2 - 1/|v|^2) dx,
/// where (v2' dtau_v1 - v1' dtau_v2) = s * (normal velocity). With this term
/// the raw residual d/dtau(raw value) + dissipation + extra vanishes.
double star_extra_term(const CurveGeometry& geom, const AnisotropySpec& g);

/// One evaluation of a monotonicity identity at a trajectory sample.
/// residual = d(value)/dtau + dissipation + extra_term, with d/dtau by
/// three-point differencing across the adjacent samples.
struct FunctionalReport {
    double tau = 0.0;
    DensityKind kind = DensityKind::huisken;
    double value = 0.0;
    double dissipation = 0.0;
    double extra_term = 0.0;
    double residual = 0.0;
};

FunctionalReport huisken_identity(const TrajectorySample& before,
                                  const TrajectorySample& at,
                                  const TrajectorySample& after,
                                  const AnisotropySpec& g,
                                  StencilOrder order = StencilOrder::second);

/// Identity for the gauge-free density; reports the nonzero coupling term.
FunctionalReport raw_star_identity(const TrajectorySample& before,
                                   const TrajectorySample& at,
                                   const TrajectorySample& after,
                                   const AnisotropySpec& g,
                                   StencilOrder order = StencilOrder::second);

/// Identity for the repaired density; residual = d(value)/dtau + dissipation.
FunctionalReport repaired_star_identity(const TrajectorySample& before,
                                        const TrajectorySample& at,
                                        const TrajectorySample& after,
                                        const AnisotropySpec& g,
                                        StencilOrder order = StencilOrder::second);

} // namespace starflow

#endif
