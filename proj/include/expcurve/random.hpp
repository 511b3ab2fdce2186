#pragma once

#include <cstdint>
#include <numbers>
#include <complex>
#include <cmath>

namespace expcurve {

/// SplitMix64 (Steele, Lea, Flood 2014). The state advances by the golden
/// gamma 0x9E3779B97F4A7C15 and each output is the standard mix13 finalizer.
/// Uniform doubles take the top 53 bits: (x >> 11) * 2^-53.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<int>(next() % span);
    }

    /// Uniform point in the closed disk |z - center| <= radius.
    std::complex<double> in_disk(std::complex<double> center, double radius) {
        const double r = radius * std::sqrt(uniform());
        const double a = 2.0 * std::numbers::pi * uniform();
        return center + std::polar(r, a);
    }

    /// Independent stream for a sub-task, derived deterministically.
    SplitMix64 fork(std::uint64_t tag) {
        SplitMix64 mixer(state_ ^ (tag * 0xD1B54A32D192ED03ULL));
        return SplitMix64(mixer.next());
    }

private:
    std::uint64_t state_;
};

}  // namespace expcurve
