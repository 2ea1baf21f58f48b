#pragma once

// Deterministic random primitives. std::mt19937_64 has a standard-mandated
// output sequence; the real-valued transforms below avoid the
// implementation-defined std::*_distribution classes so that identical seeds
// produce identical bytes on every platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "redlearn/vec.hpp"

namespace redlearn {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Engine for (seed, stream) so parallel trials stay schedule-independent.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

// Uniform in [0, 1).
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

// Standard normal via Marsaglia polar method (no trig, rejection loop is
// driven by the engine so the sequence is reproducible).
inline double gaussian(std::mt19937_64& eng) {
    for (;;) {
        const double u = 2.0 * uniform01(eng) - 1.0;
        const double v = 2.0 * uniform01(eng) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

inline Vec gaussian_vec(std::mt19937_64& eng, std::size_t n) {
    Vec r(n);
    for (auto& x : r) x = gaussian(eng);
    return r;
}

// Uniform point on the unit sphere of R^n (normalized Gaussian).
inline Vec unit_sphere_sample(std::mt19937_64& eng, std::size_t n) {
    for (;;) {
        Vec g = gaussian_vec(eng, n);
        const double d = norm(g);
        if (d > 1e-12) return scaled(g, 1.0 / d);
    }
}

// Gamma(shape, scale=1) via Marsaglia-Tsang; shape >= 1 handled directly,
// shape < 1 by the boosting identity Gamma(a) = Gamma(a+1) * U^{1/a}.
inline double gamma_sample(std::mt19937_64& eng, double shape) {
    if (shape <= 0.0) throw std::invalid_argument("gamma_sample: shape must be positive");
    if (shape < 1.0) {
        const double g = gamma_sample(eng, shape + 1.0);
        return g * std::pow(uniform01(eng), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = gaussian(eng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01(eng);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

inline double chi_square_sample(std::mt19937_64& eng, double dof) {
    return 2.0 * gamma_sample(eng, dof / 2.0);
}

}  // namespace redlearn
