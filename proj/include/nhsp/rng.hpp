// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT

#ifndef NHSP_RNG_HPP
#define NHSP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace nhsp {

// Deterministic random numbers for field corpora.
//
// std::mt19937_64 is fully specified by the standard, but the standard
// *distributions* are not; to keep outputs byte-identical across
// toolchains we map raw engine output to floats ourselves.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Standard normal via Box–Muller (explicit, implementation-pinned).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        // Guard the log: uniform() can return exactly 0.
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace nhsp

#endif // NHSP_RNG_HPP
