// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT
//
// Seeded construction of random band-limited fields: the corpora for the
// inequality lab, test suites, and random initial data.

#ifndef NHSP_FIELDS_HPP
#define NHSP_FIELDS_HPP

#include <cmath>
#include <cstdint>

#include "nhsp/grid.hpp"
#include "nhsp/multipliers.hpp"
#include "nhsp/rng.hpp"

namespace nhsp {

// Random real field with |f̂(k)| ∝ |k|^{−slope} inside the band
// [band_lo, band_hi], uniform random phases, conjugate-symmetric, mean zero.
inline SpectralField random_real_field(const Grid& g, std::uint64_t seed, double slope,
                                       double band_lo, double band_hi) {
    Rng rng(seed);
    SpectralField f(g);
    double k[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double kabs = std::sqrt(g.k_vector(i, k));
        if (kabs < band_lo || kabs > band_hi) continue;
        const double amp = std::pow(kabs, -slope);
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        f.c[i] = amp * complex(std::cos(phase), std::sin(phase));
    }
    symmetrize_real(f);
    set_mean_zero(f);
    return f;
}

inline VectorField random_vector_field(const Grid& g, std::uint64_t seed, double slope,
                                       double band_lo, double band_hi) {
    VectorField w(g);
    for (int j = 0; j < g.dim(); ++j)
        w.comp[j] = random_real_field(g, seed + 1000003u * static_cast<std::uint64_t>(j + 1),
                                      slope, band_lo, band_hi);
    return w;
}

// Divergence-free variant (Leray projection of the random draw).
inline VectorField random_divfree_field(const Grid& g, std::uint64_t seed, double slope,
                                        double band_lo, double band_hi) {
    return leray_project(random_vector_field(g, seed, slope, band_lo, band_hi));
}

// Rescale so the pointwise sup norm equals `target` (no-op on zero fields).
inline void normalize_sup(VectorField& w, double target) {
    double m = 0;
    for (const auto& f : w.comp) {
        std::vector<complex> vals = to_physical_complex(f);
        for (const auto& z : vals) m = std::max(m, std::abs(z));
    }
    if (m > 0.0) scale(w, complex(target / m, 0));
}

} // namespace nhsp

#endif // NHSP_FIELDS_HPP
