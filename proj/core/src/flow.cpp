#include "starflow/flow.hpp"

#include <cmath>
#include <numbers>

#include "starflow/errors.hpp"

namespace starflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Vec2> rhs_of(const std::vector<Vec2>& nodes, double h, RhsKind kind,
                         const AnisotropySpec& g, StencilOrder order) {
    // Local stencils, duplicated from the geometry module to keep the hot
    // loop allocation-light and free of the radial fields.
    const std::size_t n = nodes.size();
    auto d1 = [&](const std::vector<Vec2>& v) {
        std::vector<Vec2> out(n);
        if (order == StencilOrder::second) {
            for (std::size_t j = 0; j < n; ++j) {
                out[j] = (v[(j + 1) % n] - v[(j + n - 1) % n]) / (2.0 * h);
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                out[j] = (-1.0 * v[(j + 2) % n] + 8.0 * v[(j + 1) % n] -
                          8.0 * v[(j + n - 1) % n] + v[(j + n - 2) % n]) / (12.0 * h);
            }
        }
        return out;
    };
    const std::vector<Vec2> vp = d1(nodes);
    const std::vector<Vec2> vpp = d1(vp);

    std::vector<Vec2> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s2 = norm2(vp[j]);
        if (!(s2 > 0.0)) throw DegenerateCurveError("zero node speed in rhs");
        const double numer = -vpp[j].x * vp[j].y + vp[j].x * vpp[j].y;
        const double coef = g(vp[j]) * numer / (s2 * s2);
        out[j] = coef * Vec2{-vp[j].y, vp[j].x};
        if (kind == RhsKind::rescaled) out[j] += 0.5 * nodes[j];
    }
    return out;
}

double min_chord(const std::vector<Vec2>& nodes) {
    const std::size_t n = nodes.size();
    double m = norm(nodes[1] - nodes[0]);
    for (std::size_t j = 1; j < n; ++j) {
        m = std::min(m, norm(nodes[(j + 1) % n] - nodes[j]));
    }
    return m;
}

std::vector<Vec2> advance(const std::vector<Vec2>& nodes, double h, double dt,
                          RhsKind kind, const AnisotropySpec& g, const FlowConfig& cfg) {
    auto axpy = [](const std::vector<Vec2>& v, double a, const std::vector<Vec2>& w) {
        std::vector<Vec2> out(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[j] + a * w[j];
        return out;
    };
    if (cfg.scheme == TimeScheme::forward_euler) {
        return axpy(nodes, dt, rhs_of(nodes, h, kind, g, cfg.order));
    }
    const auto k1 = rhs_of(nodes, h, kind, g, cfg.order);
    const auto k2 = rhs_of(axpy(nodes, 0.5 * dt, k1), h, kind, g, cfg.order);
    const auto k3 = rhs_of(axpy(nodes, 0.5 * dt, k2), h, kind, g, cfg.order);
    const auto k4 = rhs_of(axpy(nodes, dt, k3), h, kind, g, cfg.order);
    std::vector<Vec2> out(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        out[j] = nodes[j] + (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    return out;
}

void check_speeds(const std::vector<Vec2>& nodes, double reference_perimeter) {
    const std::size_t n = nodes.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (norm(nodes[(j + 1) % n] - nodes[j]) < 1e-12 * reference_perimeter) {
            throw DegenerateCurveError("step rejected: node spacing collapsed at node " +
                                       std::to_string(j));
        }
    }
}

} // namespace

double FlowClock::tau() const {
    if (!(t < T)) throw ValidationError("FlowClock requires t < T");
    return -std::log(T - t);
}

std::vector<Vec2> physical_rhs(const ClosedCurve& curve, const AnisotropySpec& g,
                               StencilOrder order) {
    return rhs_of(curve.nodes(), curve.dx(), RhsKind::physical, g, order);
}

std::vector<Vec2> rescaled_rhs(const ClosedCurve& curve, const AnisotropySpec& g,
                               StencilOrder order) {
    return rhs_of(curve.nodes(), curve.dx(), RhsKind::rescaled, g, order);
}

std::vector<double> rescaled_normal_velocity(const CurveGeometry& geom,
                                             const AnisotropySpec& g) {
    std::vector<double> out(geom.size());
    for (std::size_t j = 0; j < geom.size(); ++j) {
        out[j] = 0.5 * dot(geom.node[j], geom.normal[j]) - g(geom.d1[j]) * geom.curvature[j];
    }
    return out;
}

double stable_dt(const ClosedCurve& curve, const AnisotropySpec& g,
                 const FlowConfig& config) {
    if (!(config.cfl > 0.0) || !(config.cfl <= 0.5)) {
        throw ValidationError("cfl must lie in (0, 0.5]");
    }
    const double hmin = min_chord(curve.nodes());
    return config.cfl * hmin * hmin / g.max_on_circle();
}

ClosedCurve step(const ClosedCurve& curve, RhsKind kind, const AnisotropySpec& g,
                 const FlowConfig& config, std::optional<double> dt) {
    const double step_dt = dt.value_or(stable_dt(curve, g, config));
    if (step_dt == 0.0) return curve;
    if (!(step_dt > 0.0)) throw ValidationError("dt must be nonnegative");
    double perimeter = 0.0;
    const std::size_t n = curve.size();
    for (std::size_t j = 0; j < n; ++j) perimeter += norm(curve[(j + 1) % n] - curve[j]);
    auto nodes = advance(curve.nodes(), curve.dx(), step_dt, kind, g, config);
    check_speeds(nodes, perimeter);
    return ClosedCurve(std::move(nodes));
}

double estimate_blowup_time(const ClosedCurve& curve, const AnisotropySpec& g) {
    if (!g.is_isotropic()) {
        throw UnsupportedAnisotropyError(
            "blow-up time estimate relies on the isotropic area law; g != 1 is unsupported");
    }
    return enclosed_area(curve) / kTwoPi;
}

std::pair<ClosedCurve, double> to_rescaled(const ClosedCurve& curve, double t, double T) {
    if (!(t < T)) throw ValidationError("to_rescaled requires t < T");
    const double scale = 1.0 / std::sqrt(T - t);
    std::vector<Vec2> nodes = curve.nodes();
    for (Vec2& p : nodes) p *= scale;
    return {ClosedCurve(std::move(nodes)), -std::log(T - t)};
}

Trajectory run(const ClosedCurve& initial, RhsKind kind, const AnisotropySpec& g,
               const FlowConfig& config, double horizon, double observer_stride) {
    if (!(horizon > 0.0)) throw ValidationError("run horizon must be positive");
    if (observer_stride < 0.0) throw ValidationError("observer stride must be >= 0");

    Trajectory traj;
    traj.kind = kind;
    traj.samples.push_back({0, 0.0, initial});

    ClosedCurve current = initial;
    double time = 0.0;
    int stride_count = 1;
    int sample_index = 1;
    long step_count = 0;
    // Steps are clipped to land exactly on stride multiples (and on the
    // horizon), so repeated runs share the sample grid bit for bit.
    while (time < horizon) {
        const double next_stride = (observer_stride > 0.0)
                                       ? observer_stride * stride_count
                                       : horizon;
        const double target = std::min(next_stride, horizon);
        double dt = stable_dt(current, g, config);
        const bool lands = time + dt >= target;
        if (lands) dt = target - time;
        try {
            current = step(current, kind, g, config, dt);
        } catch (const NumericalError&) {
            traj.singular = true;
            break;
        }
        time = lands ? target : time + dt;
        ++step_count;
        if (config.resample_every > 0 && step_count % config.resample_every == 0) {
            current = resample_uniform_arclength(current);
        }
        const bool record = (observer_stride > 0.0) ? lands : true;
        if (record) {
            traj.samples.push_back({sample_index++, time, current});
            if (time >= next_stride) ++stride_count;
        }
    }
    return traj;
}

} // namespace starflow
