#ifndef STARFLOW_RANDOM_HPP
#define STARFLOW_RANDOM_HPP

#include <cstdint>
#include <random>

namespace starflow {

/// Seeded generator with a platform-independent uniform double, so seeded
/// runs produce bit-identical outputs everywhere (std::uniform_real_distribution
/// is implementation-defined and is avoided on purpose).
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 engine_;
};

} // namespace starflow

#endif
