// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT

#ifndef NHSP_GRID_HPP
#define NHSP_GRID_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <fftw3.h>

#include "nhsp/errors.hpp"

namespace nhsp {

using complex = std::complex<double>;

// Whether a field lives in laboratory (x) or material (ξ) coordinates.
enum class SpaceTag { euler, lagrange };

namespace detail {

// FFTW planner calls are not thread-safe; executions with the new-array
// interface are. One mutex guards all plan creation.
inline std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct GridCore {
    int dim = 0;
    int n = 0;     // points per axis
    double L = 0;  // period; domain is [0, L)^dim
    std::size_t size = 0;
    fftw_plan forward = nullptr;   // physical -> spectral (unnormalized)
    fftw_plan backward = nullptr;  // spectral -> physical

    GridCore(int dim_, int n_, double L_) : dim(dim_), n(n_), L(L_) {
        size = 1;
        for (int a = 0; a < dim; ++a) size *= static_cast<std::size_t>(n);
        std::vector<complex> a(size), b(size);
        int ns[3] = {n, n, n};
        std::lock_guard<std::mutex> lock(fftw_mutex());
        forward = fftw_plan_dft(dim, ns,
                                reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(b.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        backward = fftw_plan_dft(dim, ns,
                                 reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()),
                                 FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }

    ~GridCore() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }

    GridCore(const GridCore&) = delete;
    GridCore& operator=(const GridCore&) = delete;
};

} // namespace detail

// Uniform periodic grid on [0,L)^dim with the standard FFT wavenumber
// lattice k_j ∈ (2π/L)·{−n/2, …, n/2−1}. Cheap to copy; the transform
// plans are shared and immutable.
class Grid {
public:
    Grid() = default;

    int dim() const { return core_->dim; }
    int n() const { return core_->n; }
    double L() const { return core_->L; }
    std::size_t size() const { return core_->size; }
    double dx() const { return core_->L / core_->n; }

    // Integer wavenumber for a per-axis index (FFT storage order).
    int k_int(int index) const {
        return index < core_->n / 2 ? index : index - core_->n;
    }
    // Physical wavenumber component.
    double k_phys(int index) const { return 2.0 * M_PI / core_->L * k_int(index); }

    // Decode a flat (row-major) index into per-axis indices.
    void decode(std::size_t flat, int* idx) const {
        for (int a = core_->dim - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(flat % core_->n);
            flat /= core_->n;
        }
    }
    std::size_t encode(const int* idx) const {
        std::size_t flat = 0;
        for (int a = 0; a < core_->dim; ++a)
            flat = flat * core_->n + static_cast<std::size_t>((idx[a] % core_->n + core_->n) % core_->n);
        return flat;
    }

    // Wavenumber vector (physical units) of a flat index; |k|² returned.
    double k_vector(std::size_t flat, double* k) const {
        int idx[3];
        decode(flat, idx);
        double k2 = 0;
        for (int a = 0; a < core_->dim; ++a) {
            k[a] = k_phys(idx[a]);
            k2 += k[a] * k[a];
        }
        return k2;
    }

    // Flat index of −k (per-axis reflection modulo n).
    std::size_t conjugate_index(std::size_t flat) const {
        int idx[3];
        decode(flat, idx);
        int refl[3];
        for (int a = 0; a < core_->dim; ++a) refl[a] = (core_->n - idx[a]) % core_->n;
        return encode(refl);
    }

    // Physical coordinates of grid point `flat`.
    void point(std::size_t flat, double* x) const {
        int idx[3];
        decode(flat, idx);
        for (int a = 0; a < core_->dim; ++a) x[a] = dx() * idx[a];
    }

    bool same_as(const Grid& other) const { return core_ == other.core_; }
    bool compatible(const Grid& other) const {
        return core_->dim == other.core_->dim && core_->n == other.core_->n &&
               core_->L == other.core_->L;
    }

    friend Grid make_grid(int dim, int n_per_axis, double period);
    const detail::GridCore& core() const { return *core_; }

private:
    explicit Grid(std::shared_ptr<const detail::GridCore> core) : core_(std::move(core)) {}
    std::shared_ptr<const detail::GridCore> core_;
};

inline Grid make_grid(int dim, int n_per_axis, double period) {
    if (dim != 2 && dim != 3)
        throw Error("make_grid: dim must be 2 or 3, got " + std::to_string(dim));
    if (n_per_axis % 2 != 0)
        throw OddResolution("n_per_axis = " + std::to_string(n_per_axis));
    if (n_per_axis < 8)
        throw Error("make_grid: n_per_axis must be >= 8, got " + std::to_string(n_per_axis));
    if (period <= 0)
        throw Error("make_grid: period must be positive");
    double points = std::pow(static_cast<double>(n_per_axis), dim);
    if (points > static_cast<double>(1u << 24))
        throw GridTooLarge("requested " + std::to_string(static_cast<std::size_t>(points)) +
                           " points, cap is 2^24");
    return Grid(std::make_shared<const detail::GridCore>(dim, n_per_axis, period));
}

// ------------------------------------------------------------------ fields

// A scalar field stored by its Fourier coefficients: f(x) = Σ_k f̂(k) e^{ikx}.
struct SpectralField {
    Grid grid;
    SpaceTag tag = SpaceTag::euler;
    std::vector<complex> c;

    SpectralField() = default;
    explicit SpectralField(const Grid& g, SpaceTag t = SpaceTag::euler)
        : grid(g), tag(t), c(g.size(), complex(0.0, 0.0)) {}
};

struct VectorField {
    std::vector<SpectralField> comp;

    VectorField() = default;
    explicit VectorField(const Grid& g, SpaceTag t = SpaceTag::euler) {
        comp.reserve(g.dim());
        for (int i = 0; i < g.dim(); ++i) comp.emplace_back(g, t);
    }
    const Grid& grid() const { return comp.front().grid; }
    int dim() const { return static_cast<int>(comp.size()); }
};

// ------------------------------------------------------------------ transforms

// Spectral -> physical (complex values). Inverse of from_physical_complex.
inline std::vector<complex> to_physical_complex(const SpectralField& f) {
    std::vector<complex> out(f.grid.size());
    std::vector<complex> in(f.c);  // execute out-of-place, matching the plan
    fftw_execute_dft(f.grid.core().backward,
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

// Physical (complex) -> spectral; forward transform divides by n^dim.
inline SpectralField from_physical_complex(const Grid& g, const std::vector<complex>& values,
                                           SpaceTag tag = SpaceTag::euler) {
    if (values.size() != g.size())
        throw Error("from_physical: value array size does not match grid");
    SpectralField f(g, tag);
    std::vector<complex> in(values);
    fftw_execute_dft(g.core().forward,
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(f.c.data()));
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& z : f.c) z *= scale;
    return f;
}

// Spectral -> physical for real-valued fields (real parts returned).
inline std::vector<double> to_physical(const SpectralField& f) {
    std::vector<complex> z = to_physical_complex(f);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
    return out;
}

inline SpectralField from_physical(const Grid& g, const std::vector<double>& values,
                                   SpaceTag tag = SpaceTag::euler) {
    std::vector<complex> z(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) z[i] = complex(values[i], 0.0);
    return from_physical_complex(g, z, tag);
}

// ------------------------------------------------------------------ basics

// ∫ f ḡ dx = L^dim Σ_k f̂(k) conj(ĝ(k))   (Parseval, with our normalization).
inline complex inner_product(const SpectralField& f, const SpectralField& g) {
    if (!f.grid.compatible(g.grid)) throw Error("inner_product: grid mismatch");
    complex s(0.0, 0.0);
    for (std::size_t i = 0; i < f.c.size(); ++i) s += f.c[i] * std::conj(g.c[i]);
    return s * std::pow(f.grid.L(), f.grid.dim());
}

inline double l2_norm(const SpectralField& f) {
    double s = 0;
    for (const auto& z : f.c) s += std::norm(z);
    return std::sqrt(s * std::pow(f.grid.L(), f.grid.dim()));
}

inline double l2_norm(const VectorField& w) {
    double s = 0;
    for (const auto& f : w.comp) {
        double v = l2_norm(f);
        s += v * v;
    }
    return std::sqrt(s);
}

inline complex mean_value(const SpectralField& f) { return f.c[0]; }

inline void set_mean_zero(SpectralField& f) { f.c[0] = complex(0.0, 0.0); }

inline double max_abs_coeff(const SpectralField& f) {
    double m = 0;
    for (const auto& z : f.c) m = std::max(m, std::abs(z));
    return m;
}

inline bool all_finite(const SpectralField& f) {
    for (const auto& z : f.c)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

// Max deviation from conjugate symmetry f̂(−k) = conj(f̂(k)); zero for
// fields representing real-valued functions.
inline double conjugate_symmetry_defect(const SpectralField& f) {
    double worst = 0;
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        std::size_t j = f.grid.conjugate_index(i);
        worst = std::max(worst, std::abs(f.c[i] - std::conj(f.c[j])));
    }
    return worst;
}

// Project onto conjugate-symmetric (real-representing) coefficients.
inline void symmetrize_real(SpectralField& f) {
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        std::size_t j = f.grid.conjugate_index(i);
        if (j < i) continue;
        complex a = f.c[i], b = f.c[j];
        complex half = 0.5 * (a + std::conj(b));
        f.c[i] = half;
        f.c[j] = std::conj(half);
    }
}

// Arithmetic helpers used throughout the evolution code.
inline void axpy(SpectralField& y, double a, const SpectralField& x) {
    for (std::size_t i = 0; i < y.c.size(); ++i) y.c[i] += a * x.c[i];
}
inline void axpy(VectorField& y, double a, const VectorField& x) {
    for (std::size_t i = 0; i < y.comp.size(); ++i) axpy(y.comp[i], a, x.comp[i]);
}
inline void scale(SpectralField& f, complex a) {
    for (auto& z : f.c) z *= a;
}
inline void scale(VectorField& w, complex a) {
    for (auto& f : w.comp) scale(f, a);
}

} // namespace nhsp

#endif // NHSP_GRID_HPP
