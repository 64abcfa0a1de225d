// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT

#ifndef NHSP_LP_HPP
#define NHSP_LP_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nhsp/grid.hpp"
#include "nhsp/multipliers.hpp"

namespace nhsp {

constexpr double p_infinity = std::numeric_limits<double>::infinity();

// ------------------------------------------------------------- dyadic partition

// Smooth dyadic partition of unity on [0,∞):
//   ψ0 = 1 on [0,1], 0 on [2,∞), C^∞ monotone bridge in between
//   (the standard exp(−1/t) glue);
//   φ0(s) = ψ0(s) − ψ0(2s), supported in [1/2, 2];
//   φn(s) = φ0(2^{−n} s).
// Telescoping gives ψ_N + Σ_{n>N} φ_n ≡ 1 exactly.
struct DyadicPartition {
    Grid grid;
    int n_min = 0;  // lowest shell with weight on the lattice
    int n_max = 0;  // highest shell with weight on the lattice

    static double psi0(double s) {
        if (s <= 1.0) return 1.0;
        if (s >= 2.0) return 0.0;
        const double t = s - 1.0;  // t ∈ (0,1)
        const double ha = std::exp(-1.0 / t);
        const double hb = std::exp(-1.0 / (1.0 - t));
        return 1.0 - ha / (ha + hb);
    }
    static double psi_n(int n, double s) { return psi0(std::ldexp(s, -n)); }
    static double phi0(double s) { return psi0(s) - psi0(2.0 * s); }
    static double phi_n(int n, double s) { return phi0(std::ldexp(s, -n)); }
};

inline DyadicPartition build_partition(const Grid& g) {
    DyadicPartition part;
    part.grid = g;
    // Smallest and largest nonzero |k| on the lattice.
    const double kmin = 2.0 * M_PI / g.L();
    const double kmax = kmin * (g.n() / 2) * std::sqrt(static_cast<double>(g.dim()));
    // supp φ_n = [2^{n−1}, 2^{n+1}]: shells intersecting [kmin, kmax].
    part.n_min = static_cast<int>(std::floor(std::log2(kmin))) - 1;
    part.n_max = static_cast<int>(std::ceil(std::log2(kmax))) + 1;
    while (part.n_min < part.n_max &&
           !(kmax > std::ldexp(1.0, part.n_min - 1) && kmin < std::ldexp(1.0, part.n_min + 1)))
        ++part.n_min;
    while (part.n_max > part.n_min &&
           !(kmax > std::ldexp(1.0, part.n_max - 1) && kmin < std::ldexp(1.0, part.n_max + 1)))
        --part.n_max;
    return part;
}

struct DyadicDecomposition {
    // Low-pass remainder ψ_{n_min−1}(D) f (just the mean for mean-zero data
    // on the default lattice) plus one block per shell.
    SpectralField low;
    std::vector<std::pair<int, SpectralField>> blocks;
};

inline SpectralField dyadic_block(const DyadicPartition& part, int n, const SpectralField& f) {
    SpectralField out(f.grid, f.tag);
    double k[3];
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        const double k2 = f.grid.k_vector(i, k);
        const double w = DyadicPartition::phi_n(n, std::sqrt(k2));
        if (w != 0.0) out.c[i] = w * f.c[i];
    }
    return out;
}

inline DyadicDecomposition decompose(const DyadicPartition& part, const SpectralField& f) {
    DyadicDecomposition dec;
    dec.low = SpectralField(f.grid, f.tag);
    double k[3];
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        const double k2 = f.grid.k_vector(i, k);
        dec.low.c[i] = DyadicPartition::psi_n(part.n_min - 1, std::sqrt(k2)) * f.c[i];
    }
    for (int n = part.n_min; n <= part.n_max; ++n)
        dec.blocks.emplace_back(n, dyadic_block(part, n, f));
    return dec;
}

inline DyadicDecomposition decompose(const SpectralField& f) {
    return decompose(build_partition(f.grid), f);
}

// ------------------------------------------------------------------- norms

// Physical L^p by uniform grid quadrature (exact for band-limited fields);
// complex fields use the modulus.
inline double lp_norm(const SpectralField& f, double p) {
    std::vector<complex> vals = to_physical_complex(f);
    if (p == p_infinity) {
        double m = 0;
        for (const auto& z : vals) m = std::max(m, std::abs(z));
        return m;
    }
    double s = 0;
    for (const auto& z : vals) s += std::pow(std::abs(z), p);
    const double vol = std::pow(f.grid.L(), f.grid.dim());
    return std::pow(vol * s / static_cast<double>(vals.size()), 1.0 / p);
}

struct NormRequest {
    enum class Kind { lp, sobolev_h, hom_sobolev, besov, hom_besov, holder_dot, gagliardo };
    Kind kind = Kind::lp;
    double p = 2, q = 2, r = 0, s = 0, theta = 0;

    static NormRequest Lp(double p) { return {Kind::lp, p, 2, 0, 0, 0}; }
    static NormRequest sobolev(double s) { return {Kind::sobolev_h, 2, 2, 0, s, 0}; }
    static NormRequest hom_sobolev(double theta) { return {Kind::hom_sobolev, 2, 2, 0, 0, theta}; }
    static NormRequest besov(double r, double p, double q) { return {Kind::besov, p, q, r, 0, 0}; }
    static NormRequest hom_besov(double r, double p, double q) { return {Kind::hom_besov, p, q, r, 0, 0}; }
    static NormRequest holder_dot(double r) { return {Kind::holder_dot, p_infinity, p_infinity, r, 0, 0}; }
    static NormRequest gagliardo(double r, double p) { return {Kind::gagliardo, p, p, r, 0, 0}; }
};

inline void require_mean_zero(const SpectralField& f, const char* who) {
    if (std::abs(f.c[0]) > 1e-12 * (1.0 + max_abs_coeff(f)))
        throw HomogeneousNormOnNonzeroMean(who);
}

double gagliardo_seminorm(const SpectralField& f, double r, double p, std::size_t cap);

inline double norm(const SpectralField& f, const NormRequest& req) {
    const Grid& g = f.grid;
    const double vol = std::pow(g.L(), g.dim());
    if (req.p < 1.0 || std::isnan(req.p))
        throw InadmissibleParameters("norm: p must lie in [1, inf]");
    if (req.q < 1.0 || std::isnan(req.q))
        throw InadmissibleParameters("norm: q must lie in [1, inf]");
    switch (req.kind) {
    case NormRequest::Kind::lp:
        return lp_norm(f, req.p);
    case NormRequest::Kind::sobolev_h: {
        double s = 0;
        double k[3];
        for (std::size_t i = 0; i < f.c.size(); ++i) {
            const double k2 = g.k_vector(i, k);
            s += std::pow(1.0 + k2, req.s) * std::norm(f.c[i]);
        }
        return std::sqrt(vol * s);
    }
    case NormRequest::Kind::hom_sobolev: {
        require_mean_zero(f, "hom_sobolev norm");
        double s = 0;
        double k[3];
        for (std::size_t i = 0; i < f.c.size(); ++i) {
            const double k2 = g.k_vector(i, k);
            if (k2 == 0.0) continue;
            s += std::pow(k2, req.theta) * std::norm(f.c[i]);
        }
        return std::sqrt(vol * s);
    }
    case NormRequest::Kind::besov:
    case NormRequest::Kind::hom_besov:
    case NormRequest::Kind::holder_dot: {
        const bool homogeneous = req.kind != NormRequest::Kind::besov;
        if (homogeneous) require_mean_zero(f, "homogeneous Besov norm");
        DyadicPartition part = build_partition(g);
        double acc = 0, sup = 0;
        for (int n = part.n_min; n <= part.n_max; ++n) {
            const double bn = std::pow(2.0, req.r * n) *
                              lp_norm(dyadic_block(part, n, f), req.p);
            if (req.q == p_infinity)
                sup = std::max(sup, bn);
            else
                acc += std::pow(bn, req.q);
        }
        double shell_part = (req.q == p_infinity) ? sup : std::pow(acc, 1.0 / req.q);
        if (!homogeneous) {
            // Inhomogeneous variant adds the low-pass block in L^p.
            SpectralField low(g, f.tag);
            double k[3];
            for (std::size_t i = 0; i < f.c.size(); ++i) {
                const double k2 = g.k_vector(i, k);
                low.c[i] = DyadicPartition::psi_n(part.n_min - 1, std::sqrt(k2)) * f.c[i];
            }
            const double lowp = lp_norm(low, req.p);
            shell_part = (req.q == p_infinity) ? std::max(shell_part, lowp)
                                               : std::pow(std::pow(shell_part, req.q) +
                                                          std::pow(lowp, req.q), 1.0 / req.q);
        }
        return shell_part;
    }
    case NormRequest::Kind::gagliardo:
        return gagliardo_seminorm(f, req.r, req.p, 4096);
    }
    throw Error("norm: unknown request kind");
}

// Collections (u_1…u_d, vorticity bundles, V): norm = max over members.
inline double collection_norm(const std::vector<const SpectralField*>& fields,
                              const NormRequest& req) {
    double m = 0;
    for (const auto* f : fields) m = std::max(m, norm(*f, req));
    return m;
}

// Gagliardo double-sum seminorm (Ḃ^r_{p,p} oracle): torus minimum-image
// metric, all grid-point pairs — O(N²), guarded by `cap`.
inline double gagliardo_seminorm(const SpectralField& f, double r, double p,
                                 std::size_t cap = 4096) {
    if (!(r > 0.0 && r < 1.0)) throw InadmissibleParameters("gagliardo needs 0 < r < 1");
    if (p < 1.0 || p == p_infinity) throw InadmissibleParameters("gagliardo needs 1 <= p < inf");
    const Grid& g = f.grid;
    const std::size_t N = g.size();
    if (N > cap)
        throw GridTooLarge("gagliardo_seminorm on " + std::to_string(N) +
                           " points exceeds cap " + std::to_string(cap));
    std::vector<complex> vals = to_physical_complex(f);
    std::vector<double> x(N * g.dim());
    for (std::size_t i = 0; i < N; ++i) g.point(i, &x[i * g.dim()]);
    const double L = g.L();
    const double expnt = r * p + g.dim();
    double s = 0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i + 1; j < N; ++j) {
            double d2 = 0;
            for (int a = 0; a < g.dim(); ++a) {
                double da = std::abs(x[i * g.dim() + a] - x[j * g.dim() + a]);
                da = std::min(da, L - da);
                d2 += da * da;
            }
            const double diff = std::abs(vals[i] - vals[j]);
            s += 2.0 * std::pow(diff, p) / std::pow(std::sqrt(d2), expnt);
        }
    }
    const double cell = std::pow(L, g.dim()) / static_cast<double>(N);
    return std::pow(cell * cell * s, 1.0 / p);
}

// ------------------------------------------------------------------- sup norms

inline double sup_norm(const SpectralField& f) { return lp_norm(f, p_infinity); }

// Convention: collections take the max over components.
inline double sup_norm(const VectorField& w) {
    double m = 0;
    for (const auto& f : w.comp) m = std::max(m, sup_norm(f));
    return m;
}

inline double grad_sup_norm(const VectorField& w) {
    double m = 0;
    for (const auto& f : w.comp)
        for (int j = 0; j < f.grid.dim(); ++j) m = std::max(m, sup_norm(derivative(j, f)));
    return m;
}

struct SupNorms {
    double sup = 0;       // ‖·‖_∞, max over components
    double grad_sup = 0;  // ‖∇·‖_∞, max over components and directions
};

inline SupNorms sup_norms(const VectorField& w) {
    return {sup_norm(w), grad_sup_norm(w)};
}

// Zero-padded spectral refinement onto a `factor`× finer grid (same period);
// used as the refined-grid oracle for sup norms and for plotting.
inline SpectralField spectral_refine(const SpectralField& f, int factor) {
    const Grid& g = f.grid;
    Grid fine = make_grid(g.dim(), g.n() * factor, g.L());
    SpectralField out(fine, f.tag);
    int idx[3], fidx[3];
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        g.decode(i, idx);
        for (int a = 0; a < g.dim(); ++a) {
            int m = g.k_int(idx[a]);
            fidx[a] = (m + fine.n()) % fine.n();
        }
        out.c[fine.encode(fidx)] = f.c[i];
    }
    return out;
}

} // namespace nhsp

#endif // NHSP_LP_HPP
