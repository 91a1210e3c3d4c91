#include "starflow/zelenjak.hpp"

#include <cmath>

#include "starflow/errors.hpp"

namespace starflow {

namespace {

double fd_step(double scale) { return 1e-5 * std::max(std::abs(scale), 1.0); }

} // namespace

TildeCoords to_tilde(const EvalPoint& point) {
    const double ne = norm(point.eta);
    if (!(ne > 0.0)) throw ValidationError("to_tilde requires eta != 0");
    const double c = point.eta.x / ne;
    const double s = point.eta.y / ne;
    TildeCoords t;
    t.xi1 = point.xi.x * c + point.xi.y * s;
    t.xi2 = point.xi.x * s - point.xi.y * c;
    t.phi = std::atan2(point.eta.y, point.eta.x);
    return t;
}

std::array<double, 3> ScalarField3::gradient(const TildeCoords& p) const {
    if (gradient_) return (*gradient_)(p.xi1, p.xi2, p.phi);
    constexpr double h = 1e-5;
    std::array<double, 3> g{};
    g[0] = (value_(p.xi1 + h, p.xi2, p.phi) - value_(p.xi1 - h, p.xi2, p.phi)) / (2 * h);
    g[1] = (value_(p.xi1, p.xi2 + h, p.phi) - value_(p.xi1, p.xi2 - h, p.phi)) / (2 * h);
    g[2] = (value_(p.xi1, p.xi2, p.phi + h) - value_(p.xi1, p.xi2, p.phi - h)) / (2 * h);
    return g;
}

double pde_residual(const ScalarField3& b, const TildeCoords& point,
                    const AnisotropySpec& g) {
    const auto grad = b.gradient(point);
    const double gphi = g.at_angle(point.phi);
    return grad[0] * (2.0 * gphi - point.xi2 * point.xi2) +
           grad[1] * (point.xi1 * point.xi2) +
           grad[2] * point.xi2 + point.xi1;
}

double mainC_residual(const ConeField& c, const EvalPoint& point,
                      const AnisotropySpec& g) {
    const Vec2 xi = point.xi;
    const Vec2 eta = point.eta;
    const double hx = fd_step(norm(xi));
    const double he = fd_step(norm(eta));
    const double dc_x1 = (c({xi.x + hx, xi.y}, eta) - c({xi.x - hx, xi.y}, eta)) / (2 * hx);
    const double dc_x2 = (c({xi.x, xi.y + hx}, eta) - c({xi.x, xi.y - hx}, eta)) / (2 * hx);
    const double dc_e1 = (c(xi, {eta.x + he, eta.y}) - c(xi, {eta.x - he, eta.y})) / (2 * he);
    const double dc_e2 = (c(xi, {eta.x, eta.y + he}) - c(xi, {eta.x, eta.y - he})) / (2 * he);
    const double gval = g(eta);
    return 2.0 * gval * (eta.x * dc_x1 + eta.y * dc_x2) -
           norm2(eta) * (xi.x * dc_e1 + xi.y * dc_e2) +
           c(xi, eta) * dot(xi, eta);
}

std::vector<double> solve_f_ode(const std::function<double(double)>& h,
                                double c1, double c2,
                                std::span<const double> psi_grid) {
    const std::size_t n = psi_grid.size();
    if (n < 16) throw ValidationError("solve_f_ode grid too coarse (< 16 points)");
    const double step = psi_grid[1] - psi_grid[0];
    if (!(step > 0.0)) throw ValidationError("solve_f_ode grid must ascend");
    for (std::size_t j = 1; j < n; ++j) {
        if (std::abs((psi_grid[j] - psi_grid[j - 1]) - step) > 1e-6 * step) {
            throw ValidationError("solve_f_ode grid must be uniform");
        }
    }
    std::size_t i0 = 0;
    double best = std::abs(psi_grid[0]);
    for (std::size_t j = 1; j < n; ++j) {
        if (std::abs(psi_grid[j]) < best) {
            best = std::abs(psi_grid[j]);
            i0 = j;
        }
    }
    if (best > 1e-12) throw ValidationError("solve_f_ode grid must contain 0");

    std::vector<double> hcos(n), hsin(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double y = h(psi_grid[j]);
        hcos[j] = y * std::cos(psi_grid[j]);
        hsin[j] = y * std::sin(psi_grid[j]);
    }

    // Cumulative composite Simpson from index i0 outwards. Odd offsets use
    // the 3-point Newton-Cotes half-panel (5, 8, -1)/12.
    auto cumulative = [step](std::span<const double> y, std::size_t from, int dir,
                             std::vector<double>& out) {
        const double sgn = static_cast<double>(dir);
        out[from] = 0.0;
        const std::size_t count = (dir > 0) ? y.size() - from : from + 1;
        for (std::size_t k = 1; k < count; ++k) {
            const std::size_t j = from + static_cast<std::size_t>(dir * static_cast<long>(k));
            const std::size_t j1 = from + static_cast<std::size_t>(dir * static_cast<long>(k - 1));
            if (k == 1) {
                const std::size_t j2 = from + static_cast<std::size_t>(dir * 2L);
                out[j] = sgn * step / 12.0 * (5.0 * y[from] + 8.0 * y[j] - y[j2]);
            } else {
                const std::size_t j2 = from + static_cast<std::size_t>(dir * static_cast<long>(k - 2));
                out[j] = out[j2] + sgn * step / 3.0 * (y[j2] + 4.0 * y[j1] + y[j]);
            }
        }
    };

    std::vector<double> icos(n, 0.0), isin(n, 0.0);
    cumulative(hcos, i0, +1, icos);
    cumulative(hsin, i0, +1, isin);
    if (i0 > 0) {
        std::vector<double> tmpc(n, 0.0), tmps(n, 0.0);
        cumulative(hcos, i0, -1, tmpc);
        cumulative(hsin, i0, -1, tmps);
        for (std::size_t j = 0; j < i0; ++j) {
            icos[j] = tmpc[j];
            isin[j] = tmps[j];
        }
    }

    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double cp = std::cos(psi_grid[j]);
        const double sp = std::sin(psi_grid[j]);
        f[j] = c1 * cp + c2 * sp + sp * icos[j] - cp * isin[j];
    }
    return f;
}

double gauge_ode_residual(const std::function<double(double)>& a, double r) {
    if (!(r > 0.0)) throw ValidationError("gauge ODE requires r > 0");
    constexpr double h = 1e-6;
    const double ap = (a(r + h) - a(r - h)) / (2.0 * h);
    return r * ap + a(r) - 0.5 * r - 1.0 / r;
}

double gauge_ode_residual(const std::function<double(double)>& a,
                          const std::function<double(double)>& a_prime, double r) {
    if (!(r > 0.0)) throw ValidationError("gauge ODE requires r > 0");
    return r * a_prime(r) + a(r) - 0.5 * r - 1.0 / r;
}

OrthogonalityResult orthogonality_check(const PhiField& c, const AnisotropySpec& g,
                                        Vec2 xi, int quadrature_n) {
    if (quadrature_n < 8) throw ValidationError("orthogonality quadrature too coarse");
    OrthogonalityResult res;
    res.total = quadrature_n;
    const double h = 2.0 * std::numbers::pi / quadrature_n;
    for (int j = 0; j < quadrature_n; ++j) {
        const double phi = h * j;
        const double val = c(xi, phi);
        if (!std::isfinite(val)) continue;
        ++res.admissible;
        const double weight = val * g.at_angle(phi) * h;
        res.cos_integral += weight * std::cos(phi);
        res.sin_integral += weight * std::sin(phi);
    }
    return res;
}

double hessian_identity_check(DensityKind kind, const EvalPoint& point,
                              const AnisotropySpec& g) {
    const Vec2 xi = point.xi;
    const Vec2 eta = point.eta;
    const double ne = norm(eta);
    const double h = 1e-4 * ne;
    auto F = [&](Vec2 e) { return big_F(xi, e, kind); };

    const double f0 = F(eta);
    double H[2][2];
    H[0][0] = (F({eta.x + h, eta.y}) - 2 * f0 + F({eta.x - h, eta.y})) / (h * h);
    H[1][1] = (F({eta.x, eta.y + h}) - 2 * f0 + F({eta.x, eta.y - h})) / (h * h);
    H[0][1] = (F({eta.x + h, eta.y + h}) - F({eta.x + h, eta.y - h}) -
               F({eta.x - h, eta.y + h}) + F({eta.x - h, eta.y - h})) / (4 * h * h);
    H[1][0] = H[0][1];

    const double rho_val = rho(xi, eta, kind);
    const double gval = g(eta);
    const double ne4 = ne * ne * ne * ne;
    const double M[2][2] = {
        {rho_val * gval * eta.y * eta.y / ne4, -rho_val * gval * eta.x * eta.y / ne4},
        {-rho_val * gval * eta.x * eta.y / ne4, rho_val * gval * eta.x * eta.x / ne4}};

    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(H[i][j] - M[i][j]));
    return worst;
}

Vec2 remains_residual(DensityKind kind, const EvalPoint& point) {
    const Vec2 xi = point.xi;
    const Vec2 eta = point.eta;
    auto F = [&](Vec2 x, Vec2 e) { return big_F(x, e, kind); };

    const double hx = fd_step(norm(xi));
    auto dF_dxi = [&](Vec2 e) {
        return Vec2{(F({xi.x + hx, xi.y}, e) - F({xi.x - hx, xi.y}, e)) / (2 * hx),
                    (F({xi.x, xi.y + hx}, e) - F({xi.x, xi.y - hx}, e)) / (2 * hx)};
    };
    const double he = 1e-4 * norm(eta);
    // Mixed second derivatives d^2F/dxi_i deta_j via nested differences.
    const Vec2 gp1 = dF_dxi({eta.x + he, eta.y});
    const Vec2 gm1 = dF_dxi({eta.x - he, eta.y});
    const Vec2 gp2 = dF_dxi({eta.x, eta.y + he});
    const Vec2 gm2 = dF_dxi({eta.x, eta.y - he});
    const double F_x1e1 = (gp1.x - gm1.x) / (2 * he);
    const double F_x2e1 = (gp1.y - gm1.y) / (2 * he);
    const double F_x1e2 = (gp2.x - gm2.x) / (2 * he);
    const double F_x2e2 = (gp2.y - gm2.y) / (2 * he);
    const Vec2 grad = dF_dxi(eta);

    const double rho_val = rho(xi, eta, kind);
    const double ne2 = norm2(eta);
    const double lhs1 = grad.x - F_x1e1 * eta.x - F_x2e1 * eta.y;
    const double lhs2 = grad.y - F_x1e2 * eta.x - F_x2e2 * eta.y;
    const double rhs1 = rho_val * (-xi.x * eta.y * eta.y + xi.y * eta.x * eta.y) / (2 * ne2);
    const double rhs2 = rho_val * (-xi.y * eta.x * eta.x + xi.x * eta.x * eta.y) / (2 * ne2);
    return {lhs1 - rhs1, lhs2 - rhs2};
}

std::vector<std::pair<double, CharState>> characteristics_integrate(
    const AnisotropySpec& g, const CharState& init, double s_span, double ds) {
    if (!(ds > 0.0)) throw ValidationError("characteristics step must be positive");
    if (!(s_span >= 0.0)) throw ValidationError("characteristics span must be >= 0");

    auto rhs = [&g](const CharState& st) {
        const double gphi = g.at_angle(st.phi);
        return CharState{2.0 * gphi - st.xi2 * st.xi2, st.xi1 * st.xi2, st.xi2, -st.xi1};
    };
    auto add = [](const CharState& a, double w, const CharState& b) {
        return CharState{a.xi1 + w * b.xi1, a.xi2 + w * b.xi2, a.phi + w * b.phi,
                         a.b + w * b.b};
    };

    const long nsteps = (s_span > 0.0)
                            ? static_cast<long>(std::ceil(s_span / ds - 1e-9))
                            : 0;
    std::vector<std::pair<double, CharState>> path;
    path.reserve(static_cast<std::size_t>(nsteps) + 1);
    CharState st = init;
    path.emplace_back(0.0, st);
    for (long k = 1; k <= nsteps; ++k) {
        const double s = (k == nsteps) ? s_span : ds * static_cast<double>(k);
        const double h = s - ds * static_cast<double>(k - 1);
        const CharState k1 = rhs(st);
        const CharState k2 = rhs(add(st, 0.5 * h, k1));
        const CharState k3 = rhs(add(st, 0.5 * h, k2));
        const CharState k4 = rhs(add(st, h, k3));
        CharState next = st;
        next = add(next, h / 6.0, k1);
        next = add(next, h / 3.0, k2);
        next = add(next, h / 3.0, k3);
        next = add(next, h / 6.0, k4);
        const double mag = std::max({std::abs(next.xi1), std::abs(next.xi2),
                                     std::abs(next.phi), std::abs(next.b)});
        if (!(mag < 1e6)) {
            throw NumericalError("characteristic blow-up at s = " + std::to_string(s));
        }
        st = next;
        path.emplace_back(s, st);
    }
    return path;
}

} // namespace starflow
