#pragma once

#include <cstdint>
#include <random>

namespace bns {

/// SplitMix64 state advance; used only to derive decorrelated stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic sub-seed for (seed, stream). Distinct streams of one seed are
/// decorrelated through the SplitMix64 avalanche.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (stream * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL);
    std::uint64_t b = splitmix64(s);
    (void)splitmix64(s);
    return b ^ s;
}

/// Seeded random stream with the samplers the simulator needs. Distribution
/// objects are constructed per call so a draw never leaves hidden state
/// behind; replays are exact for a given libstdc++.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }
    double normal() {
        return std::normal_distribution<double>(0.0, 1.0)(engine_);
    }
    double exponential(double rate) {
        return std::exponential_distribution<double>(rate)(engine_);
    }
    double gamma(double shape, double scale) {
        return std::gamma_distribution<double>(shape, scale)(engine_);
    }
    std::uint64_t poisson(double mean) {
        return std::poisson_distribution<std::uint64_t>(mean)(engine_);
    }

    /// Inverse Gaussian IG(delta, gamma) variate (mean delta/gamma, shape
    /// delta^2) by the Michael-Schucany-Haas chi-square transform.
    double inverse_gaussian(double delta, double gamma) {
        const double mean = delta / gamma;
        const double shape = delta * delta;
        const double z = normal();
        const double y = z * z;
        const double x = mean + mean * mean * y / (2.0 * shape) -
                         (mean / (2.0 * shape)) *
                             std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
        if (uniform() <= mean / (mean + x)) {
            return x;
        }
        return mean * mean / x;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace bns
