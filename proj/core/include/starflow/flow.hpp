#ifndef STARFLOW_FLOW_HPP
#define STARFLOW_FLOW_HPP

#include <optional>
#include <utility>
#include <vector>

#include "starflow/anisotropy.hpp"
#include "starflow/curve.hpp"
#include "starflow/geometry.hpp"

namespace starflow {

enum class RhsKind { physical, rescaled };
enum class TimeScheme { forward_euler, rk4 };

struct FlowConfig {
    double cfl = 0.25;            ///< in (0, 0.5]; dt = cfl * hmin^2 / max g
    int resample_every = 10;      ///< steps between arclength resamples; 0 = never
    TimeScheme scheme = TimeScheme::rk4;
    StencilOrder order = StencilOrder::second;
};

/// Physical/rescaled clock; tau = -log(T - t).
struct FlowClock {
    double t = 0.0;
    double T = 0.0;
    double tau() const;
};

/// g(v') * (-v1''v2' + v1'v2'')/s^4 * (-v2', v1') per node; the normal
/// component equals -g*kappa against the outer normal, so circles shrink.
std::vector<Vec2> physical_rhs(const ClosedCurve& curve, const AnisotropySpec& g,
                               StencilOrder order = StencilOrder::second);

/// v/2 + physical_rhs; vanishes identically on the circle of radius sqrt(2).
std::vector<Vec2> rescaled_rhs(const ClosedCurve& curve, const AnisotropySpec& g,
                               StencilOrder order = StencilOrder::second);

/// Outward normal velocity of the rescaled flow, <v,n>/2 - g*kappa,
/// computed pointwise from spatial data (parametrization-free).
std::vector<double> rescaled_normal_velocity(const CurveGeometry& geom,
                                             const AnisotropySpec& g);

/// Explicit diffusion-stable step size cfl * (min chord)^2 / max g.
double stable_dt(const ClosedCurve& curve, const AnisotropySpec& g,
                 const FlowConfig& config);

/// One explicit step (ForwardEuler or RK4) of the chosen right-hand side.
/// dt omitted means the stable step size. Throws DegenerateCurveError if a
/// node speed collapses after the update. dt = 0 returns the curve unchanged.
ClosedCurve step(const ClosedCurve& curve, RhsKind kind, const AnisotropySpec& g,
                 const FlowConfig& config, std::optional<double> dt = std::nullopt);

/// T = enclosed area / (2 pi). Only the isotropic area law is shipped as an
/// oracle; g != 1 throws UnsupportedAnisotropyError.
double estimate_blowup_time(const ClosedCurve& curve, const AnisotropySpec& g);

/// Nodes scaled by (T-t)^{-1/2}; returns the rescaled curve and tau.
std::pair<ClosedCurve, double> to_rescaled(const ClosedCurve& curve, double t, double T);

struct TrajectorySample {
    int index = 0;
    double time = 0.0;    ///< t for physical runs, tau for rescaled runs
    ClosedCurve curve;
};

struct Trajectory {
    RhsKind kind = RhsKind::rescaled;
    std::vector<TrajectorySample> samples;
    bool singular = false;   ///< stopped early on degeneracy
};

/// Integrates from `initial` for `horizon` time units, recording a sample
/// every `observer_stride` time units (stride 0 records every step). Steps
/// are clipped to land exactly on sample times so repeated runs produce
/// identical grids. Resampling to uniform arclength is applied every
/// config.resample_every accepted steps.
Trajectory run(const ClosedCurve& initial, RhsKind kind, const AnisotropySpec& g,
               const FlowConfig& config, double horizon, double observer_stride);

} // namespace starflow

#endif
