#pragma once

#include <complex>
#include <cstdint>

namespace ktheta {

// Counter-based generator (SplitMix64 applied to seed ^ index). Draw k is a
// pure function of (seed, k), so independent consumers can share a seed
// without coordinating state.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t index) const {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform(std::uint64_t index) const {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_bits() { return bits(counter_++); }
    double next_uniform() { return uniform(counter_++); }

    std::complex<double> next_unit_circle() {
        const double t = 6.283185307179586476925287 * next_uniform();
        return {std::cos(t), std::sin(t)};
    }

    // Uniform on the disk of the given radius.
    std::complex<double> next_disk(double radius) {
        const double r = radius * std::sqrt(next_uniform());
        const double t = 6.283185307179586476925287 * next_uniform();
        return {r * std::cos(t), r * std::sin(t)};
    }

    // Standard complex gaussian via Box-Muller.
    std::complex<double> next_gaussian() {
        double u = next_uniform();
        if (u < 1e-300) u = 1e-300;
        const double r = std::sqrt(-2.0 * std::log(u));
        const double t = 6.283185307179586476925287 * next_uniform();
        return {r * std::cos(t), r * std::sin(t)};
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace ktheta
