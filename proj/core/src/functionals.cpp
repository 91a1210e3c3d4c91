#include "starflow/functionals.hpp"

#include <cmath>

#include "starflow/errors.hpp"
#include "starflow/profile.hpp"

namespace starflow {

namespace {

struct ConePoint {
    double r;        // |xi|
    double ne;       // |eta|
    double w;        // <xi, eta_nu> > 0
    double cospsi;   // w / (r * ne)
    double psi;
};

ConePoint cone_point(Vec2 xi, Vec2 eta, DensityKind kind) {
    ConePoint p;
    p.r = norm(xi);
    p.ne = norm(eta);
    if (!(p.ne > 0.0)) throw ValidationError("eta must be nonzero");
    if (kind == DensityKind::huisken) return p;
    if (!(p.r > 0.0)) throw ConeViolationError("xi must be nonzero for star densities");
    p.w = dot(xi, rotate_cw(eta));
    if (!(p.w > 0.0)) {
        throw ConeViolationError("<xi, eta_nu> = " + std::to_string(p.w) +
                                 " <= 0: outside the star-shaped cone");
    }
    p.cospsi = std::min(p.w / (p.r * p.ne), 1.0);
    p.psi = std::acos(p.cospsi);
    return p;
}

double gauge(DensityKind kind, double r) {
    switch (kind) {
        case DensityKind::star_gauged:   return 0.25 * r + std::log(r) / r;
        case DensityKind::star_repaired: return -0.25 * r + std::log(r) / r;
        default:                         return 0.0;
    }
}

/// Curve integral of the chosen star density; requires the star margin.
double star_integral(const CurveGeometry& geom, DensityKind kind) {
    require_star_shaped(geom, kStarMargin);
    double acc = 0.0;
    for (std::size_t j = 0; j < geom.size(); ++j) {
        const double r = geom.radius[j];
        const double weight = geom.speed[j] / r;
        double density = f_profile(geom.psi[j]);
        if (kind != DensityKind::star_raw) {
            density += gauge(kind, r) * r * geom.cos_psi[j];
        }
        acc += weight * density * geom.dx;
    }
    return acc;
}

/// Three-point first derivative at t1 for possibly nonuniform spacing.
double deriv3(double t0, double f0, double t1, double f1, double t2, double f2) {
    const double dm = t1 - t0;
    const double dp = t2 - t1;
    return (dm * dm * f2 - dp * dp * f0 + (dp * dp - dm * dm) * f1) /
           (dp * dm * (dp + dm));
}

FunctionalReport identity_report(DensityKind kind,
                                 const TrajectorySample& before,
                                 const TrajectorySample& at,
                                 const TrajectorySample& after,
                                 const AnisotropySpec& g, StencilOrder order) {
    auto value_of = [&](const ClosedCurve& c) {
        const CurveGeometry geom = derivatives(c, order);
        switch (kind) {
            case DensityKind::huisken:       return huisken_value(geom);
            case DensityKind::star_raw:      return star_value_raw(geom);
            case DensityKind::star_gauged:   return star_value(geom);
            case DensityKind::star_repaired: return star_value_repaired(geom);
        }
        return 0.0;
    };

    FunctionalReport rep;
    rep.tau = at.time;
    rep.kind = kind;
    const double f0 = value_of(before.curve);
    rep.value = value_of(at.curve);
    const double f2 = value_of(after.curve);

    const CurveGeometry mid = derivatives(at.curve, order);
    rep.dissipation = (kind == DensityKind::huisken) ? huisken_dissipation(mid, g)
                                                     : star_dissipation(mid, g);
    rep.extra_term = (kind == DensityKind::star_raw) ? star_extra_term(mid, g) : 0.0;

    const double dvalue = deriv3(before.time, f0, at.time, rep.value, after.time, f2);
    rep.residual = dvalue + rep.dissipation + rep.extra_term;
    return rep;
}

} // namespace

std::string to_string(DensityKind kind) {
    switch (kind) {
        case DensityKind::huisken:       return "huisken";
        case DensityKind::star_raw:      return "raw";
        case DensityKind::star_gauged:   return "gauged";
        case DensityKind::star_repaired: return "repaired";
    }
    return "unknown";
}

double huisken_density(Vec2 xi, Vec2 eta) {
    return std::exp(-0.25 * norm2(xi)) * norm(eta);
}

double big_F(Vec2 xi, Vec2 eta, DensityKind kind) {
    const ConePoint p = cone_point(xi, eta, kind);
    if (kind == DensityKind::huisken) return std::exp(-0.25 * p.r * p.r) * p.ne;
    double f = (p.ne / p.r) * f_profile(p.psi);
    if (kind != DensityKind::star_raw) f += gauge(kind, p.r) * p.ne * p.cospsi;
    return f;
}

double rho(Vec2 xi, Vec2 eta, DensityKind kind) {
    const ConePoint p = cone_point(xi, eta, kind);
    if (kind == DensityKind::huisken) return std::exp(-0.25 * p.r * p.r) * p.ne;
    return p.ne * p.ne / p.w;
}

double huisken_value(const CurveGeometry& geom) {
    double acc = 0.0;
    for (std::size_t j = 0; j < geom.size(); ++j) {
        acc += std::exp(-0.25 * norm2(geom.node[j])) * geom.speed[j] * geom.dx;
    }
    return acc;
}

double star_value(const CurveGeometry& geom) {
    return star_integral(geom, DensityKind::star_gauged);
}

double star_value_repaired(const CurveGeometry& geom) {
    return star_integral(geom, DensityKind::star_repaired);
}

double star_value_raw(const CurveGeometry& geom) {
    return star_integral(geom, DensityKind::star_raw);
}

double huisken_dissipation(const CurveGeometry& geom, const AnisotropySpec& g) {
    const std::vector<double> vel = rescaled_normal_velocity(geom, g);
    double acc = 0.0;
    for (std::size_t j = 0; j < geom.size(); ++j) {
        acc += vel[j] * vel[j] * std::exp(-0.25 * norm2(geom.node[j])) *
               geom.speed[j] * geom.dx;
    }
    return acc;
}

double star_dissipation(const CurveGeometry& geom, const AnisotropySpec& g) {
    require_star_shaped(geom, kStarMargin);
    const std::vector<double> vel = rescaled_normal_velocity(geom, g);
    double acc = 0.0;
    for (std::size_t j = 0; j < geom.size(); ++j) {
        const double weight = geom.speed[j] / (geom.radius[j] * geom.cos_psi[j]);
        acc += vel[j] * vel[j] * weight * geom.dx;
    }
    return acc;
}

double star_extra_term(const CurveGeometry& geom, const AnisotropySpec& g) {
    require_star_shaped(geom, kStarMargin);
    const std::vector<double> vel = rescaled_normal_velocity(geom, g);
    double acc = 0.0;
    for (std::size_t j = 0; j < geom.size(); ++j) {
        const double r2 = geom.radius[j] * geom.radius[j];
        acc += geom.speed[j] * vel[j] * (0.5 - 1.0 / r2) * geom.dx;
    }
    return -acc;
}

FunctionalReport huisken_identity(const TrajectorySample& before,
                                  const TrajectorySample& at,
                                  const TrajectorySample& after,
                                  const AnisotropySpec& g, StencilOrder order) {
    return identity_report(DensityKind::huisken, before, at, after, g, order);
}

FunctionalReport raw_star_identity(const TrajectorySample& before,
                                   const TrajectorySample& at,
                                   const TrajectorySample& after,
                                   const AnisotropySpec& g, StencilOrder order) {
    return identity_report(DensityKind::star_raw, before, at, after, g, order);
}

FunctionalReport repaired_star_identity(const TrajectorySample& before,
                                        const TrajectorySample& at,
                                        const TrajectorySample& after,
                                        const AnisotropySpec& g, StencilOrder order) {
    return identity_report(DensityKind::star_repaired, before, at, after, g, order);
}

} // namespace starflow
