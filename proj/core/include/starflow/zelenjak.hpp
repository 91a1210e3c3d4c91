#ifndef STARFLOW_ZELENJAK_HPP
#define STARFLOW_ZELENJAK_HPP

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "starflow/anisotropy.hpp"
#include "starflow/functionals.hpp"
#include "starflow/vec2.hpp"

namespace starflow {

/// Abstract evaluation point (xi, eta) with eta != 0; phi is the polar
/// angle of eta.
struct EvalPoint {
    Vec2 xi;
    Vec2 eta;
    double phi() const { return std::atan2(eta.y, eta.x); }
};

/// Rotated coordinates
///   xi1~ = xi1 cos phi + xi2 sin phi = <xi, eta>/|eta|
///   xi2~ = xi1 sin phi - xi2 cos phi = <xi, eta_nu>/|eta|
/// so xi1~^2 + xi2~^2 = |xi|^2, xi2~ = |xi| cos(psi) and |xi1~| = |xi| |sin(psi)|
/// with psi the angle between xi and the outer normal direction eta_nu.
struct TildeCoords {
    double xi1 = 0.0;
    double xi2 = 0.0;
    double phi = 0.0;
};

TildeCoords to_tilde(const EvalPoint& point);

/// Scalar field of (xi1~, xi2~, phi) with an optional analytic gradient;
/// sampled fields fall back to central differences with h = 1e-5.
class ScalarField3 {
public:
    using Value = std::function<double(double, double, double)>;
    using Gradient = std::function<std::array<double, 3>(double, double, double)>;

    explicit ScalarField3(Value value, std::optional<Gradient> gradient = std::nullopt)
        : value_(std::move(value)), gradient_(std::move(gradient)) {}

    double value(const TildeCoords& p) const { return value_(p.xi1, p.xi2, p.phi); }
    std::array<double, 3> gradient(const TildeCoords& p) const;
    bool has_analytic_gradient() const { return gradient_.has_value(); }

private:
    Value value_;
    std::optional<Gradient> gradient_;
};

/// Residual of the first-order weight PDE:
///   grad b . (2 g(phi) - xi2~^2, xi1~ xi2~, xi2~) + xi1~.
/// Vanishes for b = -|xi~|^2/4 (isotropic Huisken weight) and for
/// b = -log|xi2~| (the star weight).
double pde_residual(const ScalarField3& b, const TildeCoords& point,
                    const AnisotropySpec& g);

/// Scalar field of the raw coordinates (xi, eta), differentiated by central
/// differences for the compatibility-PDE check.
using ConeField = std::function<double(Vec2 xi, Vec2 eta)>;

/// Residual of the compatibility PDE for the weight factor c:
///   2 g <eta, D_xi c> - |eta|^2 <xi, D_eta c> + c <xi, eta>.
double mainC_residual(const ConeField& c, const EvalPoint& point,
                      const AnisotropySpec& g);

/// Solves f'' + f = h on the grid through the convolution formula
///   f(psi) = c1 cos psi + c2 sin psi + int_0^psi h(s) sin(psi - s) ds
/// with cumulative composite Simpson quadrature. The grid must be uniform,
/// ascending, contain 0, and have at least 16 points.
std::vector<double> solve_f_ode(const std::function<double(double)>& h,
                                double c1, double c2,
                                std::span<const double> psi_grid);

/// r a'(r) + a(r) - r/2 - 1/r with a' by central difference (h = 1e-6).
double gauge_ode_residual(const std::function<double(double)>& a, double r);
/// Same residual with an analytic derivative.
double gauge_ode_residual(const std::function<double(double)>& a,
                          const std::function<double(double)>& a_prime, double r);

/// Weight factor as a function of the direction angle at fixed xi. May
/// return NaN where undefined (cone charts); those angles are skipped and
/// counted separately.
using PhiField = std::function<double(Vec2 xi, double phi)>;

struct OrthogonalityResult {
    double cos_integral = 0.0;
    double sin_integral = 0.0;
    int admissible = 0;   ///< quadrature nodes where the field was defined
    int total = 0;
};

/// Trapezoid integrals of c(xi, phi) g(phi) cos(phi) and ... sin(phi) over
/// the admissible part of [0, 2pi).
OrthogonalityResult orthogonality_check(const PhiField& c, const AnisotropySpec& g,
                                        Vec2 xi, int quadrature_n);

/// max-norm of D^2_eta F - rho g |eta|^{-1} D^2|eta| with the Hessian by
/// central differences (h = 1e-4 |eta|).
double hessian_identity_check(DensityKind kind, const EvalPoint& point,
                              const AnisotropySpec& g);

/// Left-minus-right of the two first-order compatibility conditions linking
/// D_xi F to rho (isotropic), with xi-derivatives of F by central
/// differences. Zero for the Huisken and repaired kinds; equals
///   (eta2, -eta1) * (1/2 - 1/|xi|^2)      for the raw kind and
///   (eta2, -eta1)                          for the gauged kind,
/// the latter being the area-rate defect of the gauged functional.
Vec2 remains_residual(DensityKind kind, const EvalPoint& point);

/// State along a characteristic of the weight PDE.
struct CharState {
    double xi1 = 0.0;
    double xi2 = 0.0;
    double phi = 0.0;
    double b = 0.0;
};

/// RK4 integration of
///   d(xi1~)/ds = 2 g(phi) - xi2~^2,  d(xi2~)/ds = xi1~ xi2~,
///   d(phi)/ds  = xi2~,               d(b)/ds    = -xi1~
/// over s in [0, s_span]. For g == 1 the quantity b + |xi~|^2/4 is conserved.
/// Throws NumericalError if the state norm exceeds 1e6.
std::vector<std::pair<double, CharState>> characteristics_integrate(
    const AnisotropySpec& g, const CharState& init, double s_span, double ds);

} // namespace starflow

#endif
