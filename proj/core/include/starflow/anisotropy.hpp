#ifndef STARFLOW_ANISOTROPY_HPP
#define STARFLOW_ANISOTROPY_HPP

#include <cmath>
#include <functional>
#include <utility>

#include "starflow/errors.hpp"
#include "starflow/vec2.hpp"

namespace starflow {

/// Positive scalar weight g on nonzero directions, homogeneous of order 0.
/// The flow equations evaluate g on the tangent (v1', v2'). Construction
/// spot-checks homogeneity and positivity on the unit circle.
class AnisotropySpec {
public:
    static AnisotropySpec isotropic() {
        AnisotropySpec g;
        g.fn_ = [](Vec2) { return 1.0; };
        g.isotropic_ = true;
        return g;
    }

    static AnisotropySpec from_function(std::function<double(Vec2)> fn) {
        AnisotropySpec g;
        g.fn_ = std::move(fn);
        g.isotropic_ = false;
        g.validate();
        return g;
    }

    /// g(1 + eps*cos(k*angle)); positive for |eps| < 1.
    static AnisotropySpec cosine(double eps, int k) {
        if (!(std::abs(eps) < 1.0)) {
            throw ValidationError("cosine anisotropy needs |eps| < 1");
        }
        return from_function([eps, k](Vec2 w) {
            return 1.0 + eps * std::cos(k * std::atan2(w.y, w.x));
        });
    }

    double operator()(Vec2 direction) const { return fn_(direction); }

    /// Value at the unit direction (cos phi, sin phi).
    double at_angle(double phi) const { return fn_({std::cos(phi), std::sin(phi)}); }

    bool is_isotropic() const { return isotropic_; }

    double max_on_circle(int samples = 256) const {
        double m = 0.0;
        for (int j = 0; j < samples; ++j) {
            const double phi = 2.0 * 3.14159265358979323846 * j / samples;
            m = std::max(m, at_angle(phi));
        }
        return m;
    }

private:
    AnisotropySpec() = default;

    void validate() const {
        constexpr int kSamples = 32;
        for (int j = 0; j < kSamples; ++j) {
            const double phi = 2.0 * 3.14159265358979323846 * j / kSamples;
            const Vec2 w{std::cos(phi), std::sin(phi)};
            const double g1 = fn_(w);
            if (!(g1 > 0.0)) throw ValidationError("anisotropy must be positive on the circle");
            for (double lam : {0.5, 2.0, 17.0}) {
                if (std::abs(fn_(lam * w) - g1) > 1e-12 * std::abs(g1)) {
                    throw ValidationError("anisotropy is not homogeneous of order 0");
                }
            }
        }
    }

    std::function<double(Vec2)> fn_;
    bool isotropic_ = false;
};

} // namespace starflow

#endif
