#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace bpb {

/// Deterministic, platform-independent PRNG (splitmix64 core).
///
/// std::mt19937 + <random> distributions are avoided on purpose: the
/// distribution algorithms are implementation-defined, and experiment
/// outputs must be reproducible byte for byte from a seed alone.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform angle in [0, 2*pi).
    double angle() { return uniform() * 2.0 * std::numbers::pi; }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(t);
        have_cached_ = true;
        return r * std::cos(t);
    }

    /// Standard complex Gaussian: isotropic phase, E|z|^2 = 1.
    std::complex<double> complex_gaussian() {
        const double inv_sqrt2 = 0.7071067811865476;
        const double re = normal();
        const double im = normal();
        return {re * inv_sqrt2, im * inv_sqrt2};
    }

    /// Unimodular scalar with uniform phase.
    std::complex<double> unit_phase() {
        const double t = angle();
        return {std::cos(t), std::sin(t)};
    }

    /// Derive an independent stream deterministically from (seed, stream id).
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        Rng mixer(seed ^ (0x510e527fade682d1ULL + stream * 0x9e3779b97f4a7c15ULL));
        mixer.next_u64();
        return Rng(mixer.next_u64());
    }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace bpb
