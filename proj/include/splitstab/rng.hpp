#pragma once

#include "splitstab/common.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace splitstab
{

/// Name recorded in reports next to the seed.
inline constexpr const char* kRngName = "mt19937_64/splitmix64-streams";

inline std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for an independent stream identified by (seed, a, b). Every random
/// draw in the library goes through a stream keyed by its logical index, so
/// results do not depend on evaluation order or thread count.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
{
    std::uint64_t s = seed;
    std::uint64_t out = splitmix64(s);
    s ^= a * 0xD1B54A32D192ED03ULL;
    out ^= splitmix64(s);
    s ^= b * 0x8CB92BA72F3D8DD7ULL;
    out ^= splitmix64(s);
    return out;
}

/// Portable draws on top of std::mt19937_64 (whose output sequence is fixed
/// by the standard); the distributions are spelled out here because the
/// standard library ones are implementation-defined.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t index(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }

    /// Standard normal by Box-Muller; one value per call.
    double normal()
    {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform in the closed Euclidean unit ball of R^d.
    Vector unit_ball(Eigen::Index d)
    {
        Vector g(d);
        for (Eigen::Index i = 0; i < d; ++i)
        {
            g(i) = normal();
        }
        const double n = g.norm();
        if (n == 0.0)
        {
            return Vector::Zero(d);
        }
        const double radius = std::pow(uniform(), 1.0 / static_cast<double>(d));
        return (radius / n) * g;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace splitstab
