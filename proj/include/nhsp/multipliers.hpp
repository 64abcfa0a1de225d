// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT

#ifndef NHSP_MULTIPLIERS_HPP
#define NHSP_MULTIPLIERS_HPP

#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>

#include "nhsp/grid.hpp"

namespace nhsp {

// A Fourier multiplier: coefficients are scaled pointwise by symbol(k).
// The symbol receives the physical wavenumber vector and |k|; it must
// declare its own value at k = 0 (homogeneous symbols return 0 there).
struct MultiplierOp {
    std::string label;
    std::function<complex(const double* k, double kabs)> symbol;
};

inline SpectralField apply_multiplier(const MultiplierOp& op, const SpectralField& f) {
    SpectralField out(f.grid, f.tag);
    double k[3];
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        const double k2 = f.grid.k_vector(i, k);
        out.c[i] = op.symbol(k, std::sqrt(k2)) * f.c[i];
    }
    return out;
}

// ∂_j: symbol i k_j.
inline SpectralField derivative(int j, const SpectralField& f) {
    SpectralField out(f.grid, f.tag);
    double k[3];
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        f.grid.k_vector(i, k);
        out.c[i] = complex(0.0, k[j]) * f.c[i];
    }
    return out;
}

inline VectorField gradient(const SpectralField& f) {
    VectorField g(f.grid, f.tag);
    for (int j = 0; j < f.grid.dim(); ++j) g.comp[j] = derivative(j, f);
    return g;
}

inline SpectralField divergence(const VectorField& w) {
    SpectralField out(w.grid(), w.comp.front().tag);
    for (int j = 0; j < w.dim(); ++j) axpy(out, 1.0, derivative(j, w.comp[j]));
    return out;
}

// Riesz transform R_j = F^{-1} (k_j/|k|) F; the zero mode maps to zero.
// Note the symbol carries no factor of i: on a real field the output is
// purely imaginary. Compositions (R_k R_m, −i D^{-1} R_m, …) supply
// their own factors and return real fields.
inline SpectralField riesz_transform(int j, const SpectralField& f) {
    SpectralField out(f.grid, f.tag);
    double k[3];
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        const double k2 = f.grid.k_vector(i, k);
        out.c[i] = (k2 == 0.0) ? complex(0.0, 0.0) : (k[j] / std::sqrt(k2)) * f.c[i];
    }
    return out;
}

enum class PotentialKind { riesz, bessel };  // D^s = |k|^s,  J^s = (1+|k|²)^{s/2}

inline SpectralField fractional_power(double s, PotentialKind kind, const SpectralField& f) {
    if (kind == PotentialKind::riesz && s < 0.0) {
        const double scale = max_abs_coeff(f);
        if (std::abs(f.c[0]) > 1e-13 * (1.0 + scale))
            throw NegativePowerAtZeroMode("D^" + std::to_string(s) +
                                          " applied to a field with nonzero mean");
    }
    SpectralField out(f.grid, f.tag);
    double k[3];
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        const double k2 = f.grid.k_vector(i, k);
        double m;
        if (kind == PotentialKind::riesz) {
            if (k2 == 0.0)
                m = (s == 0.0) ? 1.0 : 0.0;  // D^0 = Id; |0|^s = 0 for s > 0
            else
                m = std::pow(k2, 0.5 * s);
        } else {
            m = std::pow(1.0 + k2, 0.5 * s);
        }
        out.c[i] = m * f.c[i];
    }
    return out;
}

// Leray projector onto divergence-free fields: ŵ^i ← (δ^{ij} − k^i k^j/|k|²) ŵ^j.
inline VectorField leray_project(const VectorField& w) {
    const Grid& g = w.grid();
    VectorField out = w;
    double k[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double k2 = g.k_vector(i, k);
        if (k2 == 0.0) continue;  // mean modes pass through untouched
        complex kdotw(0.0, 0.0);
        for (int j = 0; j < g.dim(); ++j) kdotw += k[j] * w.comp[j].c[i];
        kdotw /= k2;
        for (int j = 0; j < g.dim(); ++j) out.comp[j].c[i] -= k[j] * kdotw;
    }
    return out;
}

// Sharp Friedrichs mollifier: ρ_ε keeps exactly the modes with |k| ≤ 1/ε.
inline SpectralField mollify(double eps, const SpectralField& f) {
    if (eps <= 0.0) throw Error("mollify: eps must be positive");
    const double cutoff2 = 1.0 / (eps * eps);
    SpectralField out = f;
    double k[3];
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        const double k2 = f.grid.k_vector(i, k);
        if (k2 > cutoff2) out.c[i] = complex(0.0, 0.0);
    }
    return out;
}

inline VectorField mollify(double eps, const VectorField& w) {
    VectorField out = w;
    for (auto& f : out.comp) f = mollify(eps, f);
    return out;
}

// 2/3-rule dealiasing: zero every mode whose integer index exceeds n/3 on
// any axis. Quadratic products of surviving modes are then alias-free.
inline SpectralField dealias(const SpectralField& f) {
    const Grid& g = f.grid;
    const int cut = g.n() / 3;
    SpectralField out = f;
    int idx[3];
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        g.decode(i, idx);
        for (int a = 0; a < g.dim(); ++a) {
            int m = g.k_int(idx[a]);
            if (std::abs(m) > cut) {
                out.c[i] = complex(0.0, 0.0);
                break;
            }
        }
    }
    return out;
}

inline VectorField dealias(const VectorField& w) {
    VectorField out = w;
    for (auto& f : out.comp) f = dealias(f);
    return out;
}

// Pointwise product computed pseudo-spectrally (physical product, forward
// transform). Callers dealias the result when the factors fill the 2/3 band.
inline SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
    if (!f.grid.compatible(g.grid)) throw Error("pointwise_product: grid mismatch");
    std::vector<complex> a = to_physical_complex(f);
    std::vector<complex> b = to_physical_complex(g);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    return from_physical_complex(f.grid, a, f.tag);
}

} // namespace nhsp

#endif // NHSP_MULTIPLIERS_HPP
