#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "rdcscreen/error.hpp"

namespace rdcscreen {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for an independent stream identified by (seed, replicate, purpose).
[[nodiscard]] constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t replicate,
                                                  std::uint64_t purpose = 0) noexcept
{
    return splitmix64(splitmix64(splitmix64(seed) ^ replicate) ^ purpose);
}

// mt19937_64 output is fixed by the standard; the variates below are
// derived from it by hand instead of through <random> distributions, whose
// algorithms vary between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

    /// Uniform on (0, 1].
    double uniform_positive() { return static_cast<double>((engine_() >> 11) + 1) * 0x1p-53; }

    bool bernoulli(double prob) { return uniform() < prob; }

    /// Standard normal, Marsaglia polar method.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

    /// Gamma(shape, 1), Marsaglia-Tsang.
    double gamma(double shape)
    {
        if (!(shape > 0.0)) {
            throw ParameterError("gamma shape must be positive");
        }
        if (shape < 1.0) {
            return gamma(shape + 1.0) * std::pow(uniform_positive(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double z = 0.0;
            double v = 0.0;
            do {
                z = normal();
                v = 1.0 + c * z;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_positive();
            if (u < 1.0 - 0.0331 * z * z * z * z || std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) {
                return d * v;
            }
        }
    }

    double chi_square(double df) { return 2.0 * gamma(0.5 * df); }

    double student_t(double df) { return normal() / std::sqrt(chi_square(df) / df); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace rdcscreen
