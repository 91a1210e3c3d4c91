#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "starflow/errors.hpp"
#include "starflow/profile.hpp"
#include "starflow/random.hpp"
#include "starflow/verify.hpp"
#include "starflow/zelenjak.hpp"

using namespace starflow;

namespace {
constexpr double kPi = std::numbers::pi;
const AnisotropySpec kIso = AnisotropySpec::isotropic();

const ScalarField3 huisken_b(
    [](double x1, double x2, double) { return -(x1 * x1 + x2 * x2) / 4.0; },
    ScalarField3::Gradient{[](double x1, double x2, double) {
        return std::array<double, 3>{-x1 / 2.0, -x2 / 2.0, 0.0};
    }});

const ScalarField3 star_b(
    [](double, double x2, double) { return -std::log(std::abs(x2)); },
    ScalarField3::Gradient{[](double, double x2, double) {
        return std::array<double, 3>{0.0, -1.0 / x2, 0.0};
    }});
} // namespace

TEST_CASE("rotated coordinates") {
    const TildeCoords a = to_tilde({{1, 0}, {1, 0}});
    CHECK(a.xi1 == doctest::Approx(1.0));
    CHECK(std::abs(a.xi2) < 1e-15);

    const TildeCoords b = to_tilde({{0, 1}, {1, 0}});
    CHECK(std::abs(b.xi1) < 1e-15);
    CHECK(b.xi2 == doctest::Approx(-1.0));

    DeterministicRng rng(11);
    for (int k = 0; k < 200; ++k) {
        const EvalPoint p{{rng.uniform(-2, 2), rng.uniform(-2, 2)},
                          {rng.uniform(-2, 2) + 2.5, rng.uniform(-2, 2)}};
        const TildeCoords t = to_tilde(p);
        CHECK(std::abs(t.xi1 * t.xi1 + t.xi2 * t.xi2 - norm2(p.xi)) < 1e-12);
    }
    CHECK_THROWS_AS(to_tilde({{1, 0}, {0, 0}}), ValidationError);
}

TEST_CASE("weight PDE residuals") {
    SUBCASE("both known solutions solve it") {
        CHECK(std::abs(pde_residual(huisken_b, {1.3, -0.7, 2.1}, kIso)) < 1e-12);
        CHECK(std::abs(pde_residual(star_b, {0.4, 1.7, -0.3}, kIso)) < 1e-12);
    }
    SUBCASE("differenced gradients stay within 1e-6") {
        const ScalarField3 sampled([](double x1, double x2, double) {
            return -(x1 * x1 + x2 * x2) / 4.0;
        });
        CHECK_FALSE(sampled.has_analytic_gradient());
        CHECK(std::abs(pde_residual(sampled, {1.3, -0.7, 2.1}, kIso)) < 1e-6);
    }
    SUBCASE("a non-solution leaves the advective derivative") {
        const ScalarField3 linear([](double x1, double, double) { return x1; });
        CHECK(pde_residual(linear, {1.0, 1.0, 0.0}, kIso) == doctest::Approx(2.0).epsilon(1e-6));
    }
}

TEST_CASE("compatibility PDE residuals") {
    const ConeField c_huisken = [](Vec2 xi, Vec2) { return std::exp(-norm2(xi) / 4.0); };
    const ConeField c_star = [](Vec2 xi, Vec2 eta) {
        return norm(eta) / std::abs(dot(xi, rotate_cw(eta)));
    };
    const ConeField c_one = [](Vec2, Vec2) { return 1.0; };

    DeterministicRng rng(3);
    for (int k = 0; k < 50; ++k) {
        const EvalPoint p{{rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0)},
                          {rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0)}};
        if (dot(p.xi, rotate_cw(p.eta)) < 0.3) continue;
        CHECK(std::abs(mainC_residual(c_huisken, p, kIso)) < 1e-10);
        CHECK(std::abs(mainC_residual(c_star, p, kIso)) < 1e-6);
    }
    CHECK(std::abs(mainC_residual(c_one, {{1, 0}, {0, 1}}, kIso)) < 1e-12);
    CHECK(mainC_residual(c_one, {{1, 0}, {1, 0}}, kIso) == doctest::Approx(1.0));
}

TEST_CASE("profile ODE solver") {
    SUBCASE("zero load reproduces the cosine") {
        std::vector<double> grid(33);
        for (int j = 0; j < 33; ++j) grid[j] = -1.6 + 0.1 * j;
        const auto f = solve_f_ode([](double) { return 0.0; }, 1.0, 0.0, grid);
        for (int j = 0; j < 33; ++j) CHECK(std::abs(f[j] - std::cos(grid[j])) < 1e-14);
    }
    SUBCASE("the secant load reproduces the profile function") {
        std::vector<double> grid(301);
        for (int j = 0; j < 301; ++j) grid[j] = -1.5 + 0.01 * j;
        const auto f = solve_f_ode([](double s) { return 1.0 / std::cos(s); }, 0.0, 0.0, grid);
        CHECK(std::abs(f[200] - f_profile(0.5)) < 1e-5);
        CHECK(std::abs(f[200] - 0.1251143170309909) < 1e-5);
        for (int j = 0; j < 301; ++j) {
            if (std::abs(grid[j]) <= 1.4) CHECK(std::abs(f[j] - f_profile(grid[j])) < 1e-6);
        }
    }
    SUBCASE("self-consistency for an arbitrary load") {
        // The check differences the solver output, so the grid must resolve
        // the load: residual ~ f'''' h^2/12.
        const int n = 8001;
        std::vector<double> grid(n);
        const double h = 2.0 / (n - 1);
        for (int j = 0; j < n; ++j) grid[j] = -1.0 + h * j;
        auto load = [](double s) { return s * s + std::sin(3.0 * s); };
        const auto f = solve_f_ode(load, 0.3, -0.2, grid);
        for (int j = 1; j + 1 < n; ++j) {
            const double fpp = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / (h * h);
            CHECK(std::abs(fpp + f[j] - load(grid[j])) < 1e-6);
        }
    }
    std::vector<double> tiny{0.0, 0.1, 0.2};
    CHECK_THROWS_AS(solve_f_ode([](double) { return 0.0; }, 0, 0, tiny), ValidationError);
}

TEST_CASE("gauge ODE residuals") {
    const auto display = [](double r) { return r / 4.0 + std::log(r) / r; };
    CHECK(std::abs(gauge_ode_residual(display, 2.0)) < 1e-9);
    const auto shifted = [](double r) { return r / 4.0 + std::log(r) / r + 1.0 / r; };
    CHECK(std::abs(gauge_ode_residual(shifted, 3.0)) < 1e-9);
    const auto zero = [](double) { return 0.0; };
    CHECK(gauge_ode_residual(zero, 1.0) == doctest::Approx(-1.5));
    CHECK_THROWS_AS(gauge_ode_residual(zero, -1.0), ValidationError);

    SUBCASE("analytic derivative variant") {
        const auto dprime = [](double r) { return 0.25 + (1.0 - std::log(r)) / (r * r); };
        CHECK(std::abs(gauge_ode_residual(display, dprime, 2.0)) < 1e-14);
    }
}

TEST_CASE("orthogonality integrals") {
    const PhiField radial = [](Vec2 xi, double) { return std::exp(-norm2(xi) / 4.0); };
    const auto r1 = orthogonality_check(radial, kIso, {0.7, -0.4}, 256);
    CHECK(std::abs(r1.cos_integral) < 1e-12);
    CHECK(std::abs(r1.sin_integral) < 1e-12);
    CHECK(r1.admissible == 256);

    const PhiField lobed = [](Vec2, double phi) { return 1.0 + std::cos(phi); };
    const auto r2 = orthogonality_check(lobed, kIso, {1.0, 0.0}, 512);
    CHECK(std::abs(r2.cos_integral - kPi) < 1e-12);
    CHECK(std::abs(r2.sin_integral) < 1e-12);

    const auto r3 = orthogonality_check(radial, AnisotropySpec::cosine(0.3, 2),
                                        {0.5, 1.1}, 256);
    CHECK(std::abs(r3.cos_integral) < 1e-12);
    CHECK(std::abs(r3.sin_integral) < 1e-12);
}

TEST_CASE("hessian constraint") {
    DeterministicRng rng(17);
    auto cone_point = [&]() {
        for (;;) {
            const EvalPoint p{{rng.uniform(-2, 2), rng.uniform(-2, 2)},
                              {rng.uniform(-2, 2), rng.uniform(-2, 2)}};
            if (norm(p.xi) > 0.4 && norm(p.eta) > 0.4 &&
                dot(p.xi, rotate_cw(p.eta)) > 0.25 * norm(p.xi) * norm(p.eta)) {
                return p;
            }
        }
    };
    for (int k = 0; k < 100; ++k) {
        CHECK(hessian_identity_check(DensityKind::huisken, cone_point(), kIso) < 1e-5);
    }
    CHECK(hessian_identity_check(DensityKind::star_repaired, {{1.2, 0.3}, {-0.3, 1.2}}, kIso)
          < 1e-5);
    CHECK(hessian_identity_check(DensityKind::star_gauged, {{1.2, 0.3}, {-0.3, 1.2}}, kIso)
          < 1e-5);

    SUBCASE("both sides are (-1)-homogeneous in eta") {
        const EvalPoint p{{1.1, -0.2}, {0.4, 1.3}};
        const double lam = 4.0;
        const EvalPoint scaled{p.xi, lam * p.eta};
        // The constraint keeps holding after scaling, and the right-hand
        // side shrinks by exactly 1/lam.
        CHECK(hessian_identity_check(DensityKind::star_raw, scaled, kIso) < 1e-5);
        auto rhs_entry = [](const EvalPoint& q) {
            const double ne = norm(q.eta);
            return rho(q.xi, q.eta, DensityKind::star_raw) * q.eta.y * q.eta.y /
                   (ne * ne * ne * ne);
        };
        CHECK(rhs_entry(p) / rhs_entry(scaled) == doctest::Approx(lam).epsilon(1e-12));
    }
}

TEST_CASE("first-order compatibility conditions") {
    DeterministicRng rng(23);
    auto cone_point = [&]() {
        for (;;) {
            const EvalPoint p{{rng.uniform(-2, 2), rng.uniform(-2, 2)},
                              {rng.uniform(-2, 2), rng.uniform(-2, 2)}};
            if (norm(p.xi) > 0.4 && norm(p.eta) > 0.4 &&
                dot(p.xi, rotate_cw(p.eta)) > 0.25 * norm(p.xi) * norm(p.eta)) {
                return p;
            }
        }
    };
    for (int k = 0; k < 50; ++k) {
        const EvalPoint p = cone_point();

        const Vec2 h = remains_residual(DensityKind::huisken, p);
        CHECK(std::abs(h.x) < 1e-5);
        CHECK(std::abs(h.y) < 1e-5);

        const Vec2 rep = remains_residual(DensityKind::star_repaired, p);
        CHECK(std::abs(rep.x) < 1e-5);
        CHECK(std::abs(rep.y) < 1e-5);

        // Raw density: defect (eta2, -eta1)(1/2 - 1/|xi|^2).
        const Vec2 raw = remains_residual(DensityKind::star_raw, p);
        const double beta = 0.5 - 1.0 / norm2(p.xi);
        CHECK(std::abs(raw.x - beta * p.eta.y) < 1e-5);
        CHECK(std::abs(raw.y + beta * p.eta.x) < 1e-5);

        // Gauged density: defect (eta2, -eta1), the area-rate term.
        const Vec2 gau = remains_residual(DensityKind::star_gauged, p);
        CHECK(std::abs(gau.x - p.eta.y) < 1e-5);
        CHECK(std::abs(gau.y + p.eta.x) < 1e-5);
    }
}

TEST_CASE("characteristics of the weight PDE") {
    SUBCASE("the Huisken weight is reproduced along its own characteristics") {
        CharState init{0.7, 0.4, 0.3, -(0.7 * 0.7 + 0.4 * 0.4) / 4.0};
        const auto path = characteristics_integrate(kIso, init, 2.0, 1e-3);
        CHECK(path.size() == 2001);
        double worst = 0.0;
        for (const auto& [s, st] : path) {
            worst = std::max(worst, std::abs(st.b + (st.xi1 * st.xi1 + st.xi2 * st.xi2) / 4.0));
        }
        CHECK(worst < 1e-6);
        CHECK(path.back().first == doctest::Approx(2.0));
    }
    SUBCASE("the xi2~ = 0 plane is invariant with linear drift") {
        CharState init{0.3, 0.0, 1.0, 0.0};
        const auto path = characteristics_integrate(kIso, init, 1.0, 1e-2);
        for (const auto& [s, st] : path) {
            CHECK(st.xi2 == 0.0);
            CHECK(st.phi == 1.0);
            CHECK(std::abs(st.xi1 - (0.3 + 2.0 * s)) < 1e-12);
        }
    }
    SUBCASE("step doubling agrees to 1e-8") {
        CharState init{0.0, 0.9, 0.2, 0.1};
        const auto a = characteristics_integrate(kIso, init, 2.0, 1e-3);
        const auto c = characteristics_integrate(kIso, init, 2.0, 5e-4);
        const CharState& sa = a.back().second;
        const CharState& sc = c.back().second;
        CHECK(std::abs(sa.xi1 - sc.xi1) < 1e-8);
        CHECK(std::abs(sa.xi2 - sc.xi2) < 1e-8);
        CHECK(std::abs(sa.phi - sc.phi) < 1e-8);
        CHECK(std::abs(sa.b - sc.b) < 1e-8);
    }
    SUBCASE("runaway characteristics are rejected") {
        CharState init{0.0, 1e4, 0.0, 0.0};
        CHECK_THROWS_AS(characteristics_integrate(kIso, init, 1.0, 0.5), NumericalError);
    }
}

TEST_CASE("full verification battery") {
    const auto results = verify_identities(200, 7);
    for (const auto& r : results) {
        CAPTURE(r.name);
        CAPTURE(r.max_residual);
        if (!r.informational) CHECK(r.pass);
    }
    CHECK(all_passed(results));

    SUBCASE("identical seeds reproduce the battery bit for bit") {
        const auto again = verify_identities(200, 7);
        REQUIRE(again.size() == results.size());
        for (std::size_t j = 0; j < results.size(); ++j) {
            CHECK(again[j].max_residual == results[j].max_residual);
        }
    }
}
