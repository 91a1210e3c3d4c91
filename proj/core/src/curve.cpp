#include "starflow/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "starflow/errors.hpp"

namespace starflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double polygon_signed_area(const std::vector<Vec2>& v) {
    double a = 0.0;
    const std::size_t n = v.size();
    for (std::size_t j = 0; j < n; ++j) {
        const Vec2& p = v[j];
        const Vec2& q = v[(j + 1) % n];
        a += cross(p, q);
    }
    return 0.5 * a;
}

double chord_perimeter(const std::vector<Vec2>& v) {
    double len = 0.0;
    const std::size_t n = v.size();
    for (std::size_t j = 0; j < n; ++j) len += norm(v[(j + 1) % n] - v[j]);
    return len;
}

/// Trapezoid-exact (trigonometric) differentiation of periodic samples.
/// O(N^2); used only by the area/length quadratures.
std::vector<double> spectral_derivative(const std::vector<double>& y) {
    const std::size_t n = y.size();
    std::vector<double> coef(n, 0.0);
    if (n % 2 == 0) {
        for (std::size_t k = 1; k < n; ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            coef[k] = 0.5 * sign / std::tan(0.5 * k * kTwoPi / n);
        }
    } else {
        for (std::size_t k = 1; k < n; ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            coef[k] = 0.5 * sign / std::sin(0.5 * k * kTwoPi / n);
        }
    }
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            if (m == j) continue;
            acc += coef[(j + n - m) % n] * y[m];
        }
        out[j] = acc;
    }
    return out;
}

struct SplineCoords {
    std::vector<double> x, y;
};

SplineCoords split(const std::vector<Vec2>& v) {
    SplineCoords c;
    c.x.reserve(v.size());
    c.y.reserve(v.size());
    for (const Vec2& p : v) {
        c.x.push_back(p.x);
        c.y.push_back(p.y);
    }
    return c;
}

/// Periodic cubic spline on uniform knots; stores second derivatives.
class PeriodicSpline {
public:
    PeriodicSpline(std::vector<double> values, double h)
        : y_(std::move(values)), h_(h), m_(solve_second_derivatives(y_, h)) {}

    double eval(std::size_t j, double t) const {
        const std::size_t n = y_.size();
        const std::size_t k = (j + 1) % n;
        const double u = 1.0 - t;
        return y_[j] * u + y_[k] * t +
               (h_ * h_ / 6.0) * ((u * u * u - u) * m_[j] + (t * t * t - t) * m_[k]);
    }

    double deriv(std::size_t j, double t) const {
        const std::size_t n = y_.size();
        const std::size_t k = (j + 1) % n;
        const double u = 1.0 - t;
        return (y_[k] - y_[j]) / h_ +
               (h_ / 6.0) * ((1.0 - 3.0 * u * u) * m_[j] + (3.0 * t * t - 1.0) * m_[k]);
    }

private:
    // Cyclic tridiagonal system M_{j-1} + 4 M_j + M_{j+1} = rhs_j via
    // Sherman-Morrison on the symmetric constant-coefficient matrix.
    static std::vector<double> solve_second_derivatives(const std::vector<double>& y,
                                                        double h) {
        const std::size_t n = y.size();
        std::vector<double> rhs(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double ym = y[(j + n - 1) % n];
            const double yp = y[(j + 1) % n];
            rhs[j] = 6.0 * (yp - 2.0 * y[j] + ym) / (h * h);
        }
        // Modified system per Sherman-Morrison: A = T + gamma*u*u^T
        // with u = (1, 0, ..., 0, alpha), alpha = c/gamma = a/gamma.
        const double a = 1.0, b = 4.0;
        const double gamma = -b;
        std::vector<double> diag(n, b);
        diag[0] = b - gamma;
        diag[n - 1] = b - a * a / gamma;

        auto thomas = [&](std::vector<double> d) {
            std::vector<double> cp(n, 0.0), dp(n, 0.0);
            cp[0] = a / diag[0];
            dp[0] = d[0] / diag[0];
            for (std::size_t i = 1; i < n; ++i) {
                const double m = diag[i] - a * cp[i - 1];
                cp[i] = a / m;
                dp[i] = (d[i] - a * dp[i - 1]) / m;
            }
            std::vector<double> x(n);
            x[n - 1] = dp[n - 1];
            for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
            return x;
        };

        std::vector<double> u(n, 0.0);
        u[0] = gamma;
        u[n - 1] = a;
        const std::vector<double> x1 = thomas(rhs);
        const std::vector<double> x2 = thomas(u);
        const double factor = (x1[0] + x1[n - 1] * a / gamma) /
                              (1.0 + x2[0] + x2[n - 1] * a / gamma);
        std::vector<double> m(n);
        for (std::size_t i = 0; i < n; ++i) m[i] = x1[i] - factor * x2[i];
        return m;
    }

    std::vector<double> y_;
    double h_;
    std::vector<double> m_;
};

constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0,
    0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

} // namespace

ClosedCurve::ClosedCurve(std::vector<Vec2> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 16) {
        throw ValidationError("ClosedCurve requires at least 16 nodes, got " +
                              std::to_string(nodes_.size()));
    }
    const double perimeter = chord_perimeter(nodes_);
    if (!(perimeter > 0.0)) throw DegenerateCurveError("curve has zero perimeter");
    const std::size_t n = nodes_.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double gap = norm(nodes_[(j + 1) % n] - nodes_[j]);
        if (gap < 1e-12 * perimeter) {
            throw DegenerateCurveError("adjacent nodes " + std::to_string(j) + "," +
                                       std::to_string((j + 1) % n) +
                                       " coincide (spacing " + std::to_string(gap) + ")");
        }
    }
    const double area = polygon_signed_area(nodes_);
    if (area == 0.0) throw ValidationError("curve encloses zero signed area");
    if (area < 0.0) {
        // Reverse traversal, keeping node 0 in place, to restore CCW.
        std::reverse(nodes_.begin() + 1, nodes_.end());
    }
}

double ClosedCurve::dx() const { return kTwoPi / static_cast<double>(nodes_.size()); }

ClosedCurve make_circle(double radius, Vec2 center, std::size_t n) {
    if (!(radius > 0.0)) throw ValidationError("circle radius must be positive");
    std::vector<Vec2> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        v[j] = {center.x + radius * std::cos(t), center.y + radius * std::sin(t)};
    }
    return ClosedCurve(std::move(v));
}

ClosedCurve make_ellipse(double a, double b, std::size_t n) {
    if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("ellipse semiaxes must be positive");
    std::vector<Vec2> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        v[j] = {a * std::cos(t), b * std::sin(t)};
    }
    return ClosedCurve(std::move(v));
}

ClosedCurve make_polar(const std::function<double(double)>& radius, std::size_t n) {
    std::vector<Vec2> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        const double r = radius(t);
        if (!(r > 0.0)) {
            throw ValidationError("polar radius must stay positive, r(" +
                                  std::to_string(t) + ") = " + std::to_string(r));
        }
        v[j] = {r * std::cos(t), r * std::sin(t)};
    }
    return ClosedCurve(std::move(v));
}

double enclosed_area(const ClosedCurve& curve) {
    const auto coords = split(curve.nodes());
    const auto dx1 = spectral_derivative(coords.x);
    const auto dy1 = spectral_derivative(coords.y);
    const std::size_t n = curve.size();
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        acc += coords.x[j] * dy1[j] - coords.y[j] * dx1[j];
    }
    return 0.5 * acc * curve.dx();
}

double total_length(const ClosedCurve& curve) {
    const auto coords = split(curve.nodes());
    const auto dx1 = spectral_derivative(coords.x);
    const auto dy1 = spectral_derivative(coords.y);
    const std::size_t n = curve.size();
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += std::hypot(dx1[j], dy1[j]);
    return acc * curve.dx();
}

ClosedCurve resample_uniform_arclength(const ClosedCurve& curve) {
    const std::size_t n = curve.size();
    const double h = curve.dx();
    const auto coords = split(curve.nodes());
    const PeriodicSpline sx(coords.x, h);
    const PeriodicSpline sy(coords.y, h);

    auto speed = [&](std::size_t j, double t) {
        return std::hypot(sx.deriv(j, t), sy.deriv(j, t));
    };
    auto segment_length = [&](std::size_t j, double t0, double t1) {
        const double mid = 0.5 * (t0 + t1);
        const double half = 0.5 * (t1 - t0);
        double acc = 0.0;
        for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
            acc += kGaussWeights[q] * speed(j, mid + half * kGaussNodes[q]);
        }
        return acc * half * h;
    };

    std::vector<double> cumulative(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        cumulative[j + 1] = cumulative[j] + segment_length(j, 0.0, 1.0);
    }
    const double total = cumulative[n];
    if (!(total > 0.0)) throw DegenerateCurveError("resample: zero total arclength");

    std::vector<Vec2> out(n);
    out[0] = curve[0];
    std::size_t seg = 0;
    for (std::size_t k = 1; k < n; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(n);
        while (seg + 1 < n && cumulative[seg + 1] < target) ++seg;
        const double want = target - cumulative[seg];
        // Newton with bisection safeguard for the in-segment arclength.
        double lo = 0.0, hi = 1.0;
        double t = want / (cumulative[seg + 1] - cumulative[seg]);
        for (int it = 0; it < 60; ++it) {
            const double err = segment_length(seg, 0.0, t) - want;
            if (std::abs(err) < 1e-14 * total) break;
            if (err > 0.0) hi = t; else lo = t;
            const double sp = speed(seg, t) * h;
            double next = (sp > 0.0) ? t - err / sp : 0.5 * (lo + hi);
            if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
            t = next;
        }
        out[k] = {sx.eval(seg, t), sy.eval(seg, t)};
    }
    return ClosedCurve(std::move(out));
}

} // namespace starflow
