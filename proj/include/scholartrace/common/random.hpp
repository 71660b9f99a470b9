#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace scholartrace {

/// Seeded generator whose output sequence is identical on every platform.
/// std::mt19937_64 is fully specified; the standard distributions are not,
/// so the conversions below are done by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    bool bernoulli(double p) { return uniform() < p; }

    double normal(double mean = 0.0, double sd = 1.0) {
        // Box-Muller, one draw per call
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace scholartrace
