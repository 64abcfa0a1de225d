// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT
//
// Empirical inequality laboratory. Each check evaluates both sides of a
// quantitative estimate over a configurable corpus of fields (or along a
// stored trajectory) and reports the observed ratios. Implicit constants are
// never asserted against fixed numbers: acceptance is finiteness, exact
// exponent homogeneity, and stability under grid refinement or horizon
// doubling. Reports serialize to JSON for downstream tooling.

#ifndef NHSP_LAB_HPP
#define NHSP_LAB_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "nhsp/dynamics.hpp"
#include "nhsp/errors.hpp"
#include "nhsp/fields.hpp"
#include "nhsp/grid.hpp"
#include "nhsp/lp.hpp"
#include "nhsp/multipliers.hpp"
#include "nhsp/vorticity.hpp"

namespace nhsp {

// ⟨x⟩ = max(1, x): collapses small-data factors so powers of the bracket
// combine monotonically in chain estimates.
inline double tropical(double x) { return std::max(1.0, x); }

// -------------------------------------------------------------- parameters

// Exponent bookkeeping shared by the interpolation, dispersive, and chain
// estimates. All derived quantities follow from (d, r, p); quantities whose
// admissibility window fails are set to NaN rather than invented.
struct DerivedParams {
    int d = 2;
    double r = 0.25;
    double p = p_infinity;

    double theta = 0;          // r + (d+1)(p-2)/(4p)
    double s = 0;              // 1 + theta
    double h = 0;              // d = 3 only: r - 3/p (NaN for d = 2)
    double q_time = 0;         // dispersive time exponent 4p/((d-1)(p-2))
    double vort_exponent = 0;  // chain: power on ⟨vorticity seminorm⟩ in time
    double vort_outer = 0;     // chain: outer power of that time integral
    double grad_exponent = 0;  // chain: power on the sup-norm time integral
    double gamma1 = 0;         // sup-interpolation exponent (NaN off-window)
    double gamma2 = 0;
    double s0 = 0, s1 = 0, kappa = 0;  // regularity thresholds by dimension
};

namespace detail {

inline double p_ratio(double p) {  // (p-2)/p with the p = inf limit
    return std::isinf(p) ? 1.0 : (p - 2.0) / p;
}

inline double d_over_p(int d, double p) { return std::isinf(p) ? 0.0 : d / p; }

} // namespace detail

inline DerivedParams param_check(int d, double r, double p) {
    if (d != 2 && d != 3)
        throw InadmissibleParameters("param_check: d must be 2 or 3, got " + std::to_string(d));
    if (!(p >= 2.0))
        throw InadmissibleParameters("param_check: p must satisfy p >= 2");
    if (!(r > 0.0 && r < 1.0))
        throw InadmissibleParameters("param_check: r must satisfy 0 < r < 1");
    if (d == 3 && std::isinf(p))
        throw InadmissibleParameters(
            "param_check: d >= 3 requires p < 2(d-1)/(d-3) (finite p when d = 3)");
    if (d == 3 && !(r > 3.0 / p))
        throw InadmissibleParameters("param_check: d = 3 requires r > 3/p");

    DerivedParams dp;
    dp.d = d;
    dp.r = r;
    dp.p = p;
    dp.theta = r + 0.25 * (d + 1) * detail::p_ratio(p);
    if (d == 2 && dp.theta > 1.0 + 1e-12)
        throw InadmissibleParameters("param_check: d = 2 requires theta = r + 3/4 <= 1");
    dp.s = 1.0 + dp.theta;
    dp.h = (d == 3) ? r - 3.0 / p : std::numeric_limits<double>::quiet_NaN();
    dp.q_time = std::isinf(p) ? 4.0 / (d - 1) : 4.0 * p / ((d - 1) * (p - 2.0));

    if (d == 2) {
        dp.vort_exponent = 8.0 / (r + 2.0);
        dp.vort_outer = 0.25;
        dp.grad_exponent = 4.0;
    } else {
        dp.vort_exponent = 2.0 * p / (p - 2.0);
        dp.vort_outer = (p - 2.0) / (2.0 * p);
        dp.grad_exponent = (2.0 * p / (p - 2.0)) * ((2.5 + r - 3.0 / p) / 2.5);
    }

    const double denom = r + 1.0 + d * 0.5 * detail::p_ratio(p);
    const double dop = detail::d_over_p(d, p);
    dp.gamma1 = (r > dop) ? (r - dop) / denom : std::numeric_limits<double>::quiet_NaN();
    dp.gamma2 =
        (r + 1.0 > dop) ? (r + 1.0 - dop) / denom : std::numeric_limits<double>::quiet_NaN();

    if (d == 2) {
        dp.kappa = (std::sqrt(65.0) - 7.0) / 8.0;
        dp.s0 = 7.0 / 4.0;
        dp.s1 = dp.s0 + dp.kappa;
    } else {
        dp.kappa = std::sqrt(1.5) - 1.0;
        dp.s0 = 2.0;
        dp.s1 = 1.0 + std::sqrt(1.5);
    }
    return dp;
}

// -------------------------------------------------------------- corpora

struct CorpusSpec {
    enum class Kind { random, single_mode, shear, bump };
    Kind kind = Kind::random;
    int n = 64;
    int samples = 20;
    std::uint64_t seed = 1;
    double slope = 2.5;
    double band_lo = 0.5;
    double band_hi = 8.0;
    double amplitude = 1.0;
    double period = 2.0 * M_PI;
};

struct InequalityCase {
    std::string id = "case";
    int d = 2;
    double r = 0.25;
    double p = p_infinity;
    double theta = 1.0;  // used by the Sobolev-flavored variants and commutator
    // 1: gradient/vorticity sup bound, 2: velocity sup from the Besov-type
    // seminorm, 3: velocity sup from the homogeneous Sobolev seminorm
    int form = 1;
    CorpusSpec corpus;
    std::vector<double> horizons = {1.0, 2.0, 4.0};  // dispersive time sweep
    int samples_per_unit_time = 25;
    double forcing_amplitude = 0.0;  // dispersive: constant-in-time forcing
};

struct RatioSample {
    std::uint64_t seed = 0;
    double lhs = 0;
    double rhs = 0;
    double ratio = 0;
    double param = 0;  // horizon T (dispersive) or grid n (refinement rows)
};

struct RatioReport {
    std::string id;
    int d = 2;
    double r = 0, p = 0, theta = 0;
    std::vector<RatioSample> samples;
    double max_ratio = 0;
    double refinement_slope = 0;

    bool finite() const {
        if (!std::isfinite(max_ratio) || !std::isfinite(refinement_slope)) return false;
        for (const auto& s : samples)
            if (!std::isfinite(s.lhs) || !std::isfinite(s.rhs) || !std::isfinite(s.ratio))
                return false;
        return true;
    }

    std::string to_json() const {
        nlohmann::json j;
        j["id"] = id;
        j["params"]["d"] = d;
        j["params"]["r"] = r;
        j["params"]["p"] = std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p);
        j["params"]["theta"] = theta;
        j["samples"] = nlohmann::json::array();
        for (const auto& s : samples)
            j["samples"].push_back({{"seed", s.seed},
                                    {"lhs", s.lhs},
                                    {"rhs", s.rhs},
                                    {"ratio", s.ratio},
                                    {"param", s.param}});
        j["max_ratio"] = max_ratio;
        j["refinement_slope"] = refinement_slope;
        return j.dump(2);
    }
};

namespace detail {

inline int lab_thread_count() {
    const char* env = std::getenv("NHSP_THREADS");
    if (!env) return 1;
    const int k = std::atoi(env);
    return std::clamp(k, 1, 64);
}

// Index-parallel map with deterministic output placement. FFTW plan reuse is
// safe here: plans are created under a mutex and executed on per-call arrays.
template <class Body>
inline void parallel_for(int count, const Body& body) {
    const int threads = std::min(lab_thread_count(), count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// splitmix64 finalizer: stateless per-mode hashing.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Resolution-stable random field: each integer mode's phase is a hash of
// (seed, mode), so one seed names one band-limited function independently of
// the grid that samples it. Refinement comparisons are then per-sample
// deterministic instead of fresh draws.
inline SpectralField stable_random_field(const Grid& g, std::uint64_t seed, double slope,
                                         double band_lo, double band_hi) {
    SpectralField f(g);
    double k[3];
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double kabs = std::sqrt(g.k_vector(i, k));
        if (kabs < band_lo || kabs > band_hi) continue;
        g.decode(i, idx);
        std::uint64_t h = mix64(seed);
        for (int a = 0; a < g.dim(); ++a)
            h = mix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(g.k_int(idx[a]))));
        const double phase =
            2.0 * M_PI * (static_cast<double>(h >> 11) * 0x1.0p-53);
        f.c[i] = std::pow(kabs, -slope) * complex(std::cos(phase), std::sin(phase));
    }
    symmetrize_real(f);
    set_mean_zero(f);
    return f;
}

inline VectorField stable_divfree_field(const Grid& g, std::uint64_t seed, double slope,
                                        double band_lo, double band_hi) {
    VectorField w(g);
    for (int j = 0; j < g.dim(); ++j)
        w.comp[j] = stable_random_field(g, seed + 1000003u * static_cast<std::uint64_t>(j + 1),
                                        slope, band_lo, band_hi);
    return leray_project(w);
}

// Divergence-free corpus sample.
inline VectorField corpus_velocity(const Grid& g, const CorpusSpec& c, std::uint64_t seed) {
    const int d = g.dim();
    VectorField v(g);
    switch (c.kind) {
    case CorpusSpec::Kind::random:
        v = stable_divfree_field(g, seed, c.slope, c.band_lo, c.band_hi);
        break;
    case CorpusSpec::Kind::single_mode: {
        // one divergence-free mode k = (2, 1, (1)) with a seed-fixed phase
        int idx[3] = {2, 1, d == 3 ? 1 : 0};
        const std::size_t q = g.encode(idx);
        double k[3];
        g.k_vector(q, k);
        // amplitude vector orthogonal to k
        double a[3] = {k[1], -k[0], 0.0};
        const complex phase = std::polar(1.0, 0.37 * static_cast<double>(seed % 17));
        for (int i = 0; i < d; ++i) v.comp[i].c[q] = a[i] * phase;
        for (int i = 0; i < d; ++i) symmetrize_real(v.comp[i]);
        break;
    }
    case CorpusSpec::Kind::shear: {
        std::vector<double> vals(g.size());
        double x[3];
        for (std::size_t q = 0; q < g.size(); ++q) {
            g.point(q, x);
            vals[q] = std::cos(x[d - 1] + 0.1 * static_cast<double>(seed % 7));
        }
        v.comp[0] = from_physical(g, vals, SpaceTag::euler);
        break;
    }
    case CorpusSpec::Kind::bump: {
        // stream-function construction from a spectral Gaussian profile
        SpectralField psi(g);
        const double sigma = std::max(1.0, 0.5 * c.band_hi);
        double k[3];
        for (std::size_t q = 1; q < g.size(); ++q) {
            const double k2 = g.k_vector(q, k);
            psi.c[q] = complex(std::exp(-k2 / (2.0 * sigma * sigma)), 0.0);
        }
        symmetrize_real(psi);
        if (d == 2) {
            v.comp[0] = derivative(1, psi);
            v.comp[1] = derivative(0, psi);
            scale(v.comp[1], complex(-1.0, 0.0));
        } else {
            v.comp[1] = derivative(2, psi);
            v.comp[2] = derivative(1, psi);
            scale(v.comp[2], complex(-1.0, 0.0));
        }
        break;
    }
    }
    for (int i = 0; i < d; ++i) set_mean_zero(v.comp[i]);
    normalize_sup(v, c.amplitude);
    return v;
}

// Scalar corpus sample (independent stream from the velocity seeds).
//
// Kind::bump produces a coherent wave packet: banded amplitudes with phases
// aligned at a seed-dependent center. Coherence matters for the dispersive
// sweep — random-phase data is statistically stationary under the half-wave
// flow (a measure-preserving phase rotation), so only phase-aligned packets
// actually spread and decay.
inline SpectralField corpus_scalar(const Grid& g, const CorpusSpec& c, std::uint64_t seed) {
    SpectralField f;
    if (c.kind == CorpusSpec::Kind::single_mode) {
        f = SpectralField(g);
        int idx[3] = {2, 1, g.dim() == 3 ? 1 : 0};
        const std::size_t q = g.encode(idx);
        f.c[q] = std::polar(1.0, 0.41 * static_cast<double>(seed % 13));
        symmetrize_real(f);
    } else if (c.kind == CorpusSpec::Kind::bump) {
        f = SpectralField(g);
        double x0[3] = {0, 0, 0};
        for (int a = 0; a < g.dim(); ++a)
            x0[a] = g.L() * (static_cast<double>(mix64(seed + 31u * a) >> 11) * 0x1.0p-53);
        double k[3];
        for (std::size_t q = 0; q < g.size(); ++q) {
            const double kabs = std::sqrt(g.k_vector(q, k));
            if (kabs < c.band_lo || kabs > c.band_hi) continue;
            double kx = 0;
            for (int a = 0; a < g.dim(); ++a) kx += k[a] * x0[a];
            f.c[q] = std::pow(kabs, -c.slope) * std::polar(1.0, -kx);
        }
        symmetrize_real(f);
    } else {
        f = stable_random_field(g, seed ^ 0x5851f42d4c957f2dull, c.slope, c.band_lo, c.band_hi);
    }
    set_mean_zero(f);
    const double s = sup_norm(f);
    if (s > 0) scale(f, complex(c.amplitude / s, 0.0));
    return f;
}

// All curl pairs of a velocity field, as owned scalars.
inline std::vector<SpectralField> curl_pairs(const VectorField& v) {
    const int d = v.dim();
    std::vector<SpectralField> pairs;
    pairs.reserve(static_cast<std::size_t>(pair_count(d)));
    for (int m = 0; m < d; ++m)
        for (int n = m + 1; n < d; ++n) {
            SpectralField w = derivative(m, v.comp[n]);
            axpy(w, -1.0, derivative(n, v.comp[m]));
            pairs.push_back(std::move(w));
        }
    return pairs;
}

inline std::vector<const SpectralField*> field_ptrs(const std::vector<SpectralField>& fs) {
    std::vector<const SpectralField*> p;
    p.reserve(fs.size());
    for (const auto& f : fs) p.push_back(&f);
    return p;
}

} // namespace detail

// ------------------------------------------------- complex-valued norms

// Conjugate-symmetric (real-part) projection of a complex field.
inline SpectralField real_part(const SpectralField& w) {
    SpectralField out(w.grid, w.tag);
    for (std::size_t i = 0; i < w.c.size(); ++i)
        out.c[i] = 0.5 * (w.c[i] + std::conj(w.c[w.grid.conjugate_index(i)]));
    return out;
}

inline SpectralField imag_part(const SpectralField& w) {
    SpectralField out(w.grid, w.tag);
    for (std::size_t i = 0; i < w.c.size(); ++i)
        out.c[i] = complex(0.0, -0.5) * (w.c[i] - std::conj(w.c[w.grid.conjugate_index(i)]));
    return out;
}

// Norm of a complex field through its real/imaginary parts (equivalent to the
// modulus-based norm up to a fixed factor, which the implicit constants absorb).
inline double complex_norm(const SpectralField& w, const NormRequest& req) {
    return std::hypot(norm(real_part(w), req), norm(imag_part(w), req));
}

// ------------------------------------------------- scaling bookkeeping

// Reinterpret f's coefficients on a torus of period L/lambda: this is exactly
// the dilation x -> lambda x in the whole-space sense, so every homogeneous
// norm scales by its exact exponent.
inline SpectralField dilate_reinterpret(const SpectralField& f, int lambda) {
    if (lambda < 1) throw InadmissibleParameters("dilate_reinterpret: lambda >= 1");
    const Grid g2 = make_grid(f.grid.dim(), f.grid.n(), f.grid.L() / lambda);
    SpectralField out(g2, f.tag);
    out.c = f.c;
    return out;
}

inline VectorField dilate_reinterpret(const VectorField& w, int lambda) {
    VectorField out;
    out.comp.reserve(w.comp.size());
    for (const auto& c : w.comp) out.comp.push_back(dilate_reinterpret(c, lambda));
    return out;
}

// Scaling dimensions of both sides of the interpolation inequalities under
// v -> v(lambda x): equality is an arithmetic identity in the exponents.
struct ScalingDims {
    double lhs = 0;
    double rhs = 0;
};

inline ScalingDims riesz_scaling_dims(int d, double r, double p, double theta, int form) {
    const double dim_v2 = -0.5 * d;                                // ||v||_2
    const double dim_besov = 1.0 + r - detail::d_over_p(d, p);     // seminorm of curl
    const double dim_sobolev = 1.0 + theta - 0.5 * d;              // [curl]_theta
    ScalingDims out;
    if (d == 2) {
        switch (form) {
        case 1:
            out.lhs = 1.0;
            out.rhs = dim_v2 * (r / (r + 2.0)) + dim_besov * (2.0 / (r + 2.0));
            return out;
        case 2:
            out.lhs = 0.0;
            out.rhs = dim_v2 * ((r + 1.0) / (r + 2.0)) + dim_besov * (1.0 / (r + 2.0));
            return out;
        case 3:
            out.lhs = 0.0;
            out.rhs = dim_v2 * (theta / (theta + 1.0)) + dim_sobolev * (1.0 / (theta + 1.0));
            return out;
        }
    } else {
        const double h = r - 3.0 / p;
        switch (form) {
        case 1:
            out.lhs = 1.0;
            out.rhs = dim_v2 * (h / (h + 2.5)) + dim_besov * (2.5 / (h + 2.5));
            return out;
        case 2:
            out.lhs = 0.0;
            out.rhs = dim_v2 * ((h + 1.0) / (h + 2.5)) + dim_besov * (1.5 / (h + 2.5));
            return out;
        case 3:
            out.lhs = 0.0;
            out.rhs = dim_v2 * ((theta - 0.5) / (theta + 1.0)) +
                      dim_sobolev * (1.5 / (theta + 1.0));
            return out;
        }
    }
    throw InadmissibleParameters("riesz_scaling_dims: form must be 1, 2, or 3");
}

// ------------------------------------------------- interpolation estimates

namespace detail {

struct RieszSides {
    double lhs = 0;
    double rhs = 0;
};

inline RieszSides riesz_sides(const VectorField& v, const InequalityCase& c) {
    const int d = v.dim();
    std::vector<SpectralField> pairs = curl_pairs(v);
    const auto ptrs = field_ptrs(pairs);
    const double v2 = l2_norm(v);
    RieszSides out;
    if (c.form == 3) {
        const double sob = collection_norm(ptrs, NormRequest::hom_sobolev(c.theta));
        if (d == 2) {
            out.lhs = sup_norm(v);
            out.rhs = std::pow(v2, c.theta / (c.theta + 1.0)) *
                      std::pow(sob, 1.0 / (c.theta + 1.0));
        } else {
            out.lhs = sup_norm(v);
            out.rhs = std::pow(v2, (c.theta - 0.5) / (c.theta + 1.0)) *
                      std::pow(sob, 1.5 / (c.theta + 1.0));
        }
        return out;
    }
    const NormRequest seminorm = (d == 2) ? NormRequest::holder_dot(c.r)
                                          : NormRequest::hom_besov(c.r, c.p, c.p);
    const double bes = collection_norm(ptrs, seminorm);
    if (d == 2) {
        if (c.form == 1) {
            double curl_sup = 0;
            for (const auto& w : pairs) curl_sup = std::max(curl_sup, sup_norm(w));
            out.lhs = std::max(grad_sup_norm(v), curl_sup);
            out.rhs = std::pow(v2, c.r / (c.r + 2.0)) * std::pow(bes, 2.0 / (c.r + 2.0));
        } else {
            out.lhs = sup_norm(v);
            out.rhs = std::pow(v2, (c.r + 1.0) / (c.r + 2.0)) *
                      std::pow(bes, 1.0 / (c.r + 2.0));
        }
    } else {
        const double h = c.r - 3.0 / c.p;
        if (c.form == 1) {
            double curl_sup = 0;
            for (const auto& w : pairs) curl_sup = std::max(curl_sup, sup_norm(w));
            out.lhs = std::max(grad_sup_norm(v), curl_sup);
            out.rhs = std::pow(v2, h / (h + 2.5)) * std::pow(bes, 2.5 / (h + 2.5));
        } else {
            out.lhs = sup_norm(v);
            out.rhs = std::pow(v2, (h + 1.0) / (h + 2.5)) * std::pow(bes, 1.5 / (h + 2.5));
        }
    }
    return out;
}

inline void validate_riesz_case(const InequalityCase& c) {
    if (c.d != 2 && c.d != 3)
        throw InadmissibleParameters("interpolation check: d must be 2 or 3");
    if (c.form < 1 || c.form > 3)
        throw InadmissibleParameters("interpolation check: form must be 1, 2, or 3");
    if (c.form == 3) {
        if (c.d == 2 && !(c.theta >= 0.0 && c.theta <= 1.0))
            throw InadmissibleParameters("interpolation check: d = 2 requires 0 <= theta <= 1");
        if (c.d == 3 && !(c.theta > 0.5))
            throw InadmissibleParameters("interpolation check: d = 3 requires theta > 1/2");
        return;
    }
    if (!(c.r > 0.0 && c.r < 1.0))
        throw InadmissibleParameters("interpolation check: 0 < r < 1");
    if (c.d == 3) {
        if (std::isinf(c.p))
            throw InadmissibleParameters("interpolation check: d = 3 requires finite p");
        if (!(c.r > 3.0 / c.p))
            throw InadmissibleParameters("interpolation check: d = 3 requires r > 3/p");
    }
}

// Runs one corpus at resolution n and returns (samples, max ratio).
template <class Eval>
inline std::pair<std::vector<RatioSample>, double> run_corpus(const InequalityCase& c, int n,
                                                              const Eval& eval) {
    const Grid g = make_grid(c.d, n, c.corpus.period);
    std::vector<RatioSample> rows(static_cast<std::size_t>(c.corpus.samples));
    parallel_for(c.corpus.samples, [&](int i) {
        const std::uint64_t seed = c.corpus.seed + static_cast<std::uint64_t>(i);
        RatioSample row;
        row.seed = seed;
        row.param = n;
        const auto sides = eval(g, seed);
        row.lhs = sides.first;
        row.rhs = sides.second;
        row.ratio = (sides.second > 0) ? sides.first / sides.second : 0.0;
        rows[static_cast<std::size_t>(i)] = row;
    });
    double worst = 0;
    for (const auto& row : rows) worst = std::max(worst, row.ratio);
    return {std::move(rows), worst};
}

} // namespace detail

// Corpus check of the sup-norm interpolation bounds (velocity/vorticity sup
// in terms of the energy norm and a vorticity seminorm). The report's
// refinement slope is log2(max ratio at 2n / max ratio at n).
inline RatioReport check_riesz_interpolation(const InequalityCase& c) {
    detail::validate_riesz_case(c);
    auto eval = [&c](const Grid& g, std::uint64_t seed) {
        const VectorField v = detail::corpus_velocity(g, c.corpus, seed);
        const auto sides = detail::riesz_sides(v, c);
        return std::make_pair(sides.lhs, sides.rhs);
    };
    RatioReport rep;
    rep.id = c.id;
    rep.d = c.d;
    rep.r = c.r;
    rep.p = c.p;
    rep.theta = c.theta;
    auto coarse = detail::run_corpus(c, c.corpus.n, eval);
    auto fine = detail::run_corpus(c, 2 * c.corpus.n, eval);
    rep.samples = std::move(coarse.first);
    rep.max_ratio = std::max(coarse.second, fine.second);
    rep.refinement_slope =
        (coarse.second > 0 && fine.second > 0) ? std::log2(fine.second / coarse.second) : 0.0;
    return rep;
}

// ------------------------------------------------- commutator estimate

// ‖D^θ(v·∇g) − v·∇D^θ g‖₂ against ‖∇v‖_∞‖D^θ g‖₂ + ‖D^{θ+1} v‖₂‖g‖_∞,
// with the transport products formed pseudo-spectrally (dealiased).
inline RatioReport check_kato_ponce(const InequalityCase& c) {
    if (c.d != 2 && c.d != 3)
        throw InadmissibleParameters("commutator check: d must be 2 or 3");
    if (!(c.theta > 0.0))
        throw InadmissibleParameters("commutator check: theta must be positive");

    auto eval = [&c](const Grid& g, std::uint64_t seed) {
        const VectorField v = detail::corpus_velocity(g, c.corpus, seed);
        const SpectralField f = detail::corpus_scalar(g, c.corpus, seed);
        const int d = g.dim();

        auto transport = [&](const SpectralField& scalar) {
            std::vector<double> acc(g.size(), 0.0);
            for (int k = 0; k < d; ++k) {
                const std::vector<double> pv = to_physical(v.comp[k]);
                const std::vector<double> pd = to_physical(derivative(k, scalar));
                for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += pv[q] * pd[q];
            }
            return dealias(from_physical(g, acc, scalar.tag));
        };

        const SpectralField Dg = fractional_power(c.theta, PotentialKind::riesz, f);
        SpectralField comm = fractional_power(c.theta, PotentialKind::riesz, transport(f));
        axpy(comm, -1.0, transport(Dg));

        VectorField Dv(g);
        for (int i = 0; i < d; ++i)
            Dv.comp[i] = fractional_power(c.theta + 1.0, PotentialKind::riesz, v.comp[i]);

        const double lhs = l2_norm(comm);
        const double rhs = grad_sup_norm(v) * l2_norm(Dg) + l2_norm(Dv) * sup_norm(f);
        return std::make_pair(lhs, rhs);
    };

    RatioReport rep;
    rep.id = c.id;
    rep.d = c.d;
    rep.r = c.r;
    rep.p = c.p;
    rep.theta = c.theta;
    auto coarse = detail::run_corpus(c, c.corpus.n, eval);
    auto fine = detail::run_corpus(c, 2 * c.corpus.n, eval);
    rep.samples = std::move(coarse.first);
    rep.max_ratio = std::max(coarse.second, fine.second);
    rep.refinement_slope =
        (coarse.second > 0 && fine.second > 0) ? std::log2(fine.second / coarse.second) : 0.0;
    return rep;
}

// ------------------------------------------------- dispersive estimate

// Space-time seminorm of half-wave evolutions against the Sobolev size of the
// data. One sample row per (seed, horizon); the report's slope field holds
// the median log-log slope of ratio vs horizon (flat means the implicit
// constant is horizon-independent).
inline RatioReport check_strichartz(const InequalityCase& c) {
    if (c.d != 2 && c.d != 3)
        throw InadmissibleParameters("dispersive check: d must be 2 or 3");
    if (!(c.p >= 2.0))
        throw InadmissibleParameters("dispersive check: p >= 2");
    if (c.d == 3 && std::isinf(c.p))
        throw InadmissibleParameters(
            "dispersive check: d >= 3 requires p < 2(d-1)/(d-3) (finite p when d = 3)");
    if (c.horizons.empty())
        throw InadmissibleParameters("dispersive check: at least one horizon");
    if (c.samples_per_unit_time < 2)
        throw InadmissibleParameters("dispersive check: at least 2 samples per unit time");

    const double theta = c.r + 0.25 * (c.d + 1) * detail::p_ratio(c.p);
    const double q_time =
        std::isinf(c.p) ? 4.0 / (c.d - 1) : 4.0 * c.p / ((c.d - 1) * (c.p - 2.0));
    const NormRequest seminorm = (c.d == 2) ? NormRequest::holder_dot(c.r)
                                            : NormRequest::hom_besov(c.r, c.p, c.p);
    const NormRequest data_norm = NormRequest::hom_sobolev(theta);
    const Grid g = make_grid(c.d, c.corpus.n, c.corpus.period);

    struct Row {
        std::vector<RatioSample> per_T;
        double slope = 0;
    };
    std::vector<Row> rows(static_cast<std::size_t>(c.corpus.samples));

    detail::parallel_for(c.corpus.samples, [&](int i) {
        const std::uint64_t seed = c.corpus.seed + static_cast<std::uint64_t>(i);
        // complex data: independent real and imaginary streams
        const SpectralField re = detail::corpus_scalar(g, c.corpus, seed * 2 + 1);
        const SpectralField im = detail::corpus_scalar(g, c.corpus, seed * 2 + 2);
        SpectralField w0(g);
        for (std::size_t q = 0; q < w0.c.size(); ++q)
            w0.c[q] = re.c[q] + complex(0.0, 1.0) * im.c[q];

        SpectralField f0(g);
        const bool forced = c.forcing_amplitude > 0.0;
        if (forced) {
            CorpusSpec fc = c.corpus;
            fc.amplitude = c.forcing_amplitude;
            const SpectralField fr = detail::corpus_scalar(g, fc, seed * 2 + 101);
            const SpectralField fi = detail::corpus_scalar(g, fc, seed * 2 + 102);
            for (std::size_t q = 0; q < f0.c.size(); ++q)
                f0.c[q] = fr.c[q] + complex(0.0, 1.0) * fi.c[q];
        }

        const double rhs_data = complex_norm(w0, data_norm);
        const double rhs_forcing = forced ? complex_norm(f0, data_norm) : 0.0;

        Row& row = rows[static_cast<std::size_t>(i)];
        for (double T : c.horizons) {
            const int S = std::max(2, static_cast<int>(std::lround(T * c.samples_per_unit_time)));
            const double dt = T / S;
            std::vector<double> integrand(static_cast<std::size_t>(S) + 1);
            for (int j = 0; j <= S; ++j) {
                const double t = dt * j;
                SpectralField wt(g);
                if (forced) {
                    const std::vector<SpectralField> fs(static_cast<std::size_t>(j) + 1, f0);
                    wt = (j == 0) ? w0 : half_wave_evolve(w0, fs, +1, t);
                } else {
                    wt = w0;
                    double k[3];
                    for (std::size_t q = 0; q < wt.c.size(); ++q) {
                        const double k2 = g.k_vector(q, k);
                        wt.c[q] *= std::polar(1.0, std::sqrt(k2) * t);
                    }
                }
                integrand[static_cast<std::size_t>(j)] =
                    std::pow(complex_norm(wt, seminorm), q_time);
            }
            double acc = 0;
            for (int j = 0; j < S; ++j)
                acc += 0.5 * dt * (integrand[static_cast<std::size_t>(j)] +
                                   integrand[static_cast<std::size_t>(j) + 1]);
            RatioSample sample;
            sample.seed = seed;
            sample.param = T;
            sample.lhs = std::pow(acc, 1.0 / q_time);
            sample.rhs = rhs_data + T * rhs_forcing;
            sample.ratio = (sample.rhs > 0) ? sample.lhs / sample.rhs : 0.0;
            row.per_T.push_back(sample);
        }
        // least-squares slope of log ratio against log horizon
        if (row.per_T.size() >= 2) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (const auto& s : row.per_T) {
                const double x = std::log(s.param), y = std::log(std::max(s.ratio, 1e-300));
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
            const double m = static_cast<double>(row.per_T.size());
            row.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        }
    });

    RatioReport rep;
    rep.id = c.id;
    rep.d = c.d;
    rep.r = c.r;
    rep.p = c.p;
    rep.theta = theta;
    std::vector<double> slopes;
    for (const auto& row : rows) {
        for (const auto& s : row.per_T) {
            rep.samples.push_back(s);
            rep.max_ratio = std::max(rep.max_ratio, s.ratio);
        }
        slopes.push_back(row.slope);
    }
    std::sort(slopes.begin(), slopes.end());
    rep.refinement_slope = slopes.empty() ? 0.0 : slopes[slopes.size() / 2];
    return rep;
}

// ------------------------------------------------- a-priori chain monitor

// Norm snapshot of one trajectory instant, prereduced for the chain
// integrals: sup of the full state gradient, vorticity sup, the Besov-type
// vorticity seminorm, and the Sobolev vorticity seminorm.
struct TrajectorySample {
    double t = 0;
    double grad_sup_V = 0;
    double sup_Omega = 0;
    double vort_seminorm = 0;  // {Omega}_r (d=2) or {Omega}_{r,p} (d=3)
    double sobolev_Omega = 0;  // [Omega]_theta
};

inline TrajectorySample chain_sample(const StateBundle& s, const DerivedParams& dp) {
    TrajectorySample out;
    out.t = s.t;
    out.grad_sup_V = grad_sup_norm(s.v);
    for (const auto& ua : s.u) out.grad_sup_V = std::max(out.grad_sup_V, grad_sup_norm(ua));
    const VorticityBundle W = curl(s);
    out.sup_Omega = bundle_sup(W);

    std::vector<const SpectralField*> ptrs;
    for (const auto& f : W.omega) ptrs.push_back(&f);
    for (const auto& wa : W.omega_a)
        for (const auto& f : wa) ptrs.push_back(&f);
    const NormRequest seminorm = (dp.d == 2) ? NormRequest::holder_dot(dp.r)
                                             : NormRequest::hom_besov(dp.r, dp.p, dp.p);
    out.vort_seminorm = collection_norm(ptrs, seminorm);
    out.sobolev_Omega = collection_norm(ptrs, NormRequest::hom_sobolev(dp.theta));
    return out;
}

struct ChainReport {
    double y_final = 0;        // tropical vorticity-seminorm time integral
    double vort_integral = 0;  // same integral without the tropical bracket
    double grad_integral = 0;  // ∫ (‖∇V‖_∞^e + ‖Ω‖_∞^e) dt
    double z_final = 0;        // sup_t ⟨[Ω]_θ⟩
    bool finite = false;
};

inline ChainReport check_apriori_chain(const std::vector<TrajectorySample>& hist,
                                       const DerivedParams& dp) {
    if (hist.size() < 2)
        throw InadmissibleParameters("chain check: need at least two trajectory samples");
    for (std::size_t i = 1; i < hist.size(); ++i)
        if (!(hist[i].t > hist[i - 1].t))
            throw InadmissibleParameters("chain check: samples must be time-ordered");

    ChainReport rep;
    double acc_trop = 0, acc_raw = 0, acc_grad = 0;
    rep.z_final = tropical(hist.front().sobolev_Omega);
    for (std::size_t i = 1; i < hist.size(); ++i) {
        const auto& a = hist[i - 1];
        const auto& b = hist[i];
        const double dt = b.t - a.t;
        auto trap = [dt](double fa, double fb) { return 0.5 * dt * (fa + fb); };
        acc_trop += trap(std::pow(tropical(a.vort_seminorm), dp.vort_exponent),
                         std::pow(tropical(b.vort_seminorm), dp.vort_exponent));
        acc_raw += trap(std::pow(a.vort_seminorm, dp.vort_exponent),
                        std::pow(b.vort_seminorm, dp.vort_exponent));
        acc_grad += trap(std::pow(a.grad_sup_V, dp.grad_exponent) +
                             std::pow(a.sup_Omega, dp.grad_exponent),
                         std::pow(b.grad_sup_V, dp.grad_exponent) +
                             std::pow(b.sup_Omega, dp.grad_exponent));
        rep.z_final = std::max(rep.z_final, tropical(b.sobolev_Omega));
    }
    rep.y_final = std::pow(acc_trop, dp.vort_outer);
    rep.vort_integral = std::pow(acc_raw, dp.vort_outer);
    rep.grad_integral = acc_grad;
    rep.finite = std::isfinite(rep.y_final) && std::isfinite(rep.vort_integral) &&
                 std::isfinite(rep.grad_integral) && std::isfinite(rep.z_final);
    return rep;
}

} // namespace nhsp

#endif // NHSP_LAB_HPP
