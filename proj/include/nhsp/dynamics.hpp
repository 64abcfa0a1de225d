// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT
//
// Incompressible neo-Hookean elastodynamics in Eulerian form: the mollified,
// dealiased pseudo-spectral right-hand side, RK4 time stepping, initial-data
// construction, pressure recovery, and conservation monitors.
//
// Unknowns: a divergence-free velocity v and d divergence-free deformation
// columns u_a, with the full deformation gradient v_a = A + u_a for a fixed
// special-linear matrix A.  The evolution is
//
//   ∂_t v   = −P ρ_ε[ v·∇v − u_b·∇u_b − A^k_b ∂_k u_b ]
//   ∂_t u_a = −  ρ_ε[ v·∇u_a − u_a·∇v − A^k_a ∂_k v ]
//
// with P the Leray projection and ρ_ε the sharp Fourier cutoff.  Quadratic
// terms are formed in physical space and dealiased by the 2/3 rule, which
// keeps the semi-discrete energy identity exact.

#ifndef NHSP_DYNAMICS_HPP
#define NHSP_DYNAMICS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nhsp/errors.hpp"
#include "nhsp/fields.hpp"
#include "nhsp/grid.hpp"
#include "nhsp/lp.hpp"
#include "nhsp/multipliers.hpp"

namespace nhsp {

// ---------------------------------------------------------------- state

inline double mat_det(const std::vector<double>& A, int d) {
    if (d == 2) return A[0] * A[3] - A[1] * A[2];
    return A[0] * (A[4] * A[8] - A[5] * A[7]) - A[1] * (A[3] * A[8] - A[5] * A[6]) +
           A[2] * (A[3] * A[7] - A[4] * A[6]);
}

inline std::vector<double> identity_matrix(int d) {
    std::vector<double> A(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) A[static_cast<std::size_t>(i) * d + i] = 1.0;
    return A;
}

// Velocity v, deformation columns u_a, and the constant part A of the
// deformation gradient (A[i*d + a] = A^i_a, det A = 1).
struct StateBundle {
    VectorField v;
    std::vector<VectorField> u;
    std::vector<double> A;
    double t = 0;

    const Grid& grid() const { return v.grid(); }
    int dim() const { return v.dim(); }
};

inline StateBundle make_state(const Grid& g) {
    StateBundle s;
    s.v = VectorField(g);
    s.u.assign(g.dim(), VectorField(g));
    s.A = identity_matrix(g.dim());
    return s;
}

struct StateDeriv {
    VectorField dv;
    std::vector<VectorField> du;
};

inline void state_axpy(StateBundle& y, double a, const StateDeriv& x) {
    axpy(y.v, a, x.dv);
    for (std::size_t b = 0; b < y.u.size(); ++b) axpy(y.u[b], a, x.du[b]);
}

// ---------------------------------------------------------------- config

struct EvolutionConfig {
    double eps = 0.125;          // mollifier parameter (cutoff |k| ≤ 1/ε)
    double dt = 1e-3;            // fixed RK4 step
    double t_end = 1.0;
    bool dealias_products = true;
    int diagnostics_every = 100; // steps between diagnostics records
    double c_cfl = 1.0;          // advisory CFL constant
    double sup_abort = 1e6;      // blow-up abort threshold on ‖V‖_∞
    bool linear_only = false;    // drop quadratic terms (oscillator regime)
    bool check_invariants = false; // spectral div check after every step
};

// ---------------------------------------------------------------- rhs

namespace detail {

// Physical samples of every component and every spatial derivative of a
// vector field; the workhorse buffers for pseudo-spectral products.
struct PhysBundle {
    std::vector<std::vector<complex>> comp;  // [i] -> values of w^i
    std::vector<std::vector<complex>> deriv; // [j*d + i] -> values of ∂_j w^i
};

inline PhysBundle phys_bundle(const VectorField& w, bool with_derivs) {
    const int d = w.dim();
    PhysBundle out;
    out.comp.resize(d);
    for (int i = 0; i < d; ++i) out.comp[i] = to_physical_complex(w.comp[i]);
    if (with_derivs) {
        out.deriv.resize(static_cast<std::size_t>(d) * d);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i)
                out.deriv[static_cast<std::size_t>(j) * d + i] =
                    to_physical_complex(derivative(j, w.comp[i]));
    }
    return out;
}

// acc += sign · Σ_j adv[j] · tgt[j*d+i], accumulated pointwise.
inline void accumulate_advection(std::vector<complex>& acc, int i, double sign,
                                 const PhysBundle& adv, const PhysBundle& tgt) {
    const int d = static_cast<int>(adv.comp.size());
    for (int j = 0; j < d; ++j) {
        const auto& a = adv.comp[j];
        const auto& t = tgt.deriv[static_cast<std::size_t>(j) * d + i];
        for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += sign * a[q] * t[q];
    }
}

} // namespace detail

// Time derivative of the truncated system at the given state.
inline StateDeriv rhs(const StateBundle& s, const EvolutionConfig& cfg) {
    const Grid& g = s.grid();
    const int d = g.dim();
    StateDeriv out;
    out.dv = VectorField(g);
    out.du.assign(d, VectorField(g));

    std::vector<detail::PhysBundle> pu(d);
    detail::PhysBundle pv;
    if (!cfg.linear_only) {
        pv = detail::phys_bundle(s.v, true);
        for (int a = 0; a < d; ++a) pu[a] = detail::phys_bundle(s.u[a], true);
    }

    double k[3];

    // velocity equation
    for (int i = 0; i < d; ++i) {
        SpectralField bracket(g);
        if (!cfg.linear_only) {
            std::vector<complex> acc(g.size(), complex(0, 0));
            detail::accumulate_advection(acc, i, +1.0, pv, pv);
            for (int b = 0; b < d; ++b) detail::accumulate_advection(acc, i, -1.0, pu[b], pu[b]);
            bracket = from_physical_complex(g, acc, s.v.comp[i].tag);
            if (cfg.dealias_products) bracket = dealias(bracket);
        }
        // linear stress term −A^k_b ∂_k u_b^i inside the bracket
        for (int b = 0; b < d; ++b) {
            const SpectralField& ub = s.u[b].comp[i];
            for (std::size_t q = 0; q < g.size(); ++q) {
                g.k_vector(q, k);
                complex ik_dot(0, 0);
                for (int kk = 0; kk < d; ++kk)
                    ik_dot += complex(0, k[kk]) * s.A[static_cast<std::size_t>(kk) * d + b];
                bracket.c[q] -= ik_dot * ub.c[q];
            }
        }
        out.dv.comp[i] = mollify(cfg.eps, bracket);
        scale(out.dv.comp[i], complex(-1, 0));
    }
    out.dv = leray_project(out.dv);

    // deformation-column equations
    for (int a = 0; a < d; ++a) {
        for (int i = 0; i < d; ++i) {
            SpectralField bracket(g);
            if (!cfg.linear_only) {
                std::vector<complex> acc(g.size(), complex(0, 0));
                detail::accumulate_advection(acc, i, +1.0, pv, pu[a]);
                detail::accumulate_advection(acc, i, -1.0, pu[a], pv);
                bracket = from_physical_complex(g, acc, s.u[a].comp[i].tag);
                if (cfg.dealias_products) bracket = dealias(bracket);
            }
            // linear term −A^k_a ∂_k v^i
            const SpectralField& vi = s.v.comp[i];
            for (std::size_t q = 0; q < g.size(); ++q) {
                g.k_vector(q, k);
                complex ik_dot(0, 0);
                for (int kk = 0; kk < d; ++kk)
                    ik_dot += complex(0, k[kk]) * s.A[static_cast<std::size_t>(kk) * d + a];
                bracket.c[q] -= ik_dot * vi.c[q];
            }
            out.du[a].comp[i] = mollify(cfg.eps, bracket);
            scale(out.du[a].comp[i], complex(-1, 0));
        }
    }
    return out;
}

// ---------------------------------------------------------------- stepping

struct StepInfo {
    bool cfl_ok = true;
    double cfl_limit = 0;
    double sup_V = 0;
};

// Spectral divergence residual, max over coefficients of |k·ŵ(k)|.
inline double sup_norm_div_residual(const VectorField& w) {
    return max_abs_coeff(divergence(w));
}

inline double state_sup(const StateBundle& s) {
    double m = sup_norm(s.v);
    for (const auto& ua : s.u) m = std::max(m, sup_norm(ua));
    return m;
}

inline double matrix_frobenius(const std::vector<double>& A) {
    double s = 0;
    for (double a : A) s += a * a;
    return std::sqrt(s);
}

// One classical RK4 step.  CFL violations are advisory (reported through
// `info`), finite-ness failures abort.
inline StateBundle step(const StateBundle& s, const EvolutionConfig& cfg,
                        StepInfo* info = nullptr) {
    const Grid& g = s.grid();
    if (info) {
        const double kmax =
            (2.0 * M_PI / g.L()) * (g.n() / 2) * std::sqrt(static_cast<double>(g.dim()));
        const double speed = state_sup(s) + matrix_frobenius(s.A);
        info->cfl_limit =
            (speed > 0) ? cfg.c_cfl / (kmax * speed) : std::numeric_limits<double>::infinity();
        info->cfl_ok = cfg.dt <= info->cfl_limit;
    }

    const StateDeriv k1 = rhs(s, cfg);
    StateBundle s2 = s;
    state_axpy(s2, cfg.dt / 2, k1);
    const StateDeriv k2 = rhs(s2, cfg);
    StateBundle s3 = s;
    state_axpy(s3, cfg.dt / 2, k2);
    const StateDeriv k3 = rhs(s3, cfg);
    StateBundle s4 = s;
    state_axpy(s4, cfg.dt, k3);
    const StateDeriv k4 = rhs(s4, cfg);

    StateBundle out = s;
    state_axpy(out, cfg.dt / 6, k1);
    state_axpy(out, cfg.dt / 3, k2);
    state_axpy(out, cfg.dt / 3, k3);
    state_axpy(out, cfg.dt / 6, k4);
    out.t = s.t + cfg.dt;

    bool finite = true;
    for (const auto& f : out.v.comp) finite = finite && all_finite(f);
    for (const auto& ua : out.u)
        for (const auto& f : ua.comp) finite = finite && all_finite(f);
    if (!finite) throw NonFinite("state at t = " + std::to_string(out.t));
    const double sup = state_sup(out);
    if (info) info->sup_V = sup;
    if (sup > cfg.sup_abort)
        throw NonFinite("blow-up guard: sup |V| = " + std::to_string(sup) + " at t = " +
                        std::to_string(out.t));
    if (cfg.check_invariants) {
        double res = sup_norm_div_residual(out.v);
        for (const auto& ua : out.u) res = std::max(res, sup_norm_div_residual(ua));
        if (res > 1e-10 * (1.0 + sup))
            throw Error("divergence invariant violated: residual " + std::to_string(res));
    }
    return out;
}

// ---------------------------------------------------------------- initial data

struct InitialDataSpec {
    enum class Kind { zero, taylor_green, random, shear };
    Kind kind = Kind::zero;
    std::uint64_t seed = 1;
    double slope = 2.5;
    double band_lo = 0.5, band_hi = 8.0;
    double amplitude_v = 1.0; // target ‖v(0)‖_∞ (random kind; extra v for shear)
    double amplitude_u = 1.0; // target max_a ‖u_a(0)‖_∞ (random kind)
    double shear_amp = 0.1;   // x = (ξ¹ + c sin ξ², ξ²)
    std::vector<double> A;    // empty → identity; must satisfy det A = 1
    double eps = 0;           // > 0 → mollify the constructed data
};

inline StateBundle make_initial_data(const Grid& g, const InitialDataSpec& spec) {
    const int d = g.dim();
    StateBundle s = make_state(g);
    if (!spec.A.empty()) {
        if (spec.A.size() != static_cast<std::size_t>(d) * d)
            throw InadmissibleParameters("initial data: A must be d×d");
        if (std::abs(mat_det(spec.A, d) - 1.0) > 1e-12)
            throw DeterminantNotOne("initial data: det A = " +
                                    std::to_string(mat_det(spec.A, d)));
        s.A = spec.A;
    }

    switch (spec.kind) {
    case InitialDataSpec::Kind::zero:
        break;
    case InitialDataSpec::Kind::taylor_green: {
        if (d != 2) throw InadmissibleParameters("taylor_green initial data needs d = 2");
        // v = (sin x¹ cos x², −cos x¹ sin x²), a single-cell stationary vortex
        std::vector<double> v0(g.size()), v1(g.size());
        double x[3];
        for (std::size_t i = 0; i < g.size(); ++i) {
            g.point(i, x);
            v0[i] = std::sin(x[0]) * std::cos(x[1]);
            v1[i] = -std::cos(x[0]) * std::sin(x[1]);
        }
        s.v.comp[0] = from_physical(g, v0, SpaceTag::euler);
        s.v.comp[1] = from_physical(g, v1, SpaceTag::euler);
        break;
    }
    case InitialDataSpec::Kind::random: {
        s.v = random_divfree_field(g, spec.seed, spec.slope, spec.band_lo, spec.band_hi);
        normalize_sup(s.v, spec.amplitude_v);
        double sup_u = 0;
        for (int a = 0; a < d; ++a) {
            s.u[a] = random_divfree_field(g, spec.seed + 7919u * static_cast<std::uint64_t>(a + 1),
                                          spec.slope, spec.band_lo, spec.band_hi);
            sup_u = std::max(sup_u, sup_norm(s.u[a]));
        }
        if (sup_u > 0)
            for (int a = 0; a < d; ++a) scale(s.u[a], complex(spec.amplitude_u / sup_u, 0));
        break;
    }
    case InitialDataSpec::Kind::shear: {
        if (d != 2) throw InadmissibleParameters("shear initial data needs d = 2");
        // area-preserving shear x = (ξ¹ + c sin ξ², ξ²): the deformation
        // gradient is I + u with u column 2 = (c cos x², 0), column 1 = 0
        std::vector<double> g1(g.size());
        double x[3];
        for (std::size_t i = 0; i < g.size(); ++i) {
            g.point(i, x);
            g1[i] = spec.shear_amp * std::cos(x[1]);
        }
        s.u[1].comp[0] = from_physical(g, g1, SpaceTag::euler);
        if (spec.amplitude_v > 0) {
            s.v = random_divfree_field(g, spec.seed, spec.slope, spec.band_lo, spec.band_hi);
            normalize_sup(s.v, spec.amplitude_v);
        }
        // deformation-based data must satisfy det(A + u) = 1 pointwise
        double max_dev = 0;
        std::vector<std::vector<complex>> phys(static_cast<std::size_t>(d) * d);
        for (int a = 0; a < d; ++a)
            for (int i = 0; i < d; ++i)
                phys[static_cast<std::size_t>(i) * d + a] = to_physical_complex(s.u[a].comp[i]);
        for (std::size_t q = 0; q < g.size(); ++q) {
            std::vector<double> F(static_cast<std::size_t>(d) * d);
            for (int i = 0; i < d; ++i)
                for (int a = 0; a < d; ++a)
                    F[static_cast<std::size_t>(i) * d + a] =
                        s.A[static_cast<std::size_t>(i) * d + a] +
                        phys[static_cast<std::size_t>(i) * d + a][q].real();
            max_dev = std::max(max_dev, std::abs(mat_det(F, d) - 1.0));
        }
        if (max_dev > 1e-6)
            throw DeterminantNotOne("shear data: max |det(A + u) − 1| = " +
                                    std::to_string(max_dev));
        break;
    }
    }

    // common post-processing: project, mollify, dealias, re-center
    s.v = leray_project(dealias(s.v));
    for (auto& ua : s.u) ua = leray_project(dealias(ua));
    if (spec.eps > 0) {
        s.v = mollify(spec.eps, s.v);
        for (auto& ua : s.u) ua = mollify(spec.eps, ua);
    }
    for (auto& f : s.v.comp) set_mean_zero(f);
    for (auto& ua : s.u)
        for (auto& f : ua.comp) set_mean_zero(f);
    return s;
}

// ---------------------------------------------------------------- pressure

// p from the Poisson identity −Δp = ∂_k v^i ∂_i v^k − ∂_k u_a^i ∂_i u_a^k,
// i.e. p̂ = −(k_i k_k / |k|²) T̂^{ik} with T = v⊗v − u_a⊗u_a (dealiased).
inline SpectralField recover_pressure(const StateBundle& s) {
    const Grid& g = s.grid();
    const int d = g.dim();
    SpectralField p(g);
    double k[3];
    for (int i = 0; i < d; ++i) {
        for (int kk = 0; kk < d; ++kk) {
            SpectralField T = pointwise_product(s.v.comp[i], s.v.comp[kk]);
            for (int a = 0; a < d; ++a) {
                SpectralField ua2 = pointwise_product(s.u[a].comp[i], s.u[a].comp[kk]);
                axpy(T, -1.0, ua2);
            }
            T = dealias(T);
            for (std::size_t q = 0; q < g.size(); ++q) {
                const double k2 = g.k_vector(q, k);
                if (k2 == 0.0) continue;
                p.c[q] -= (k[i] * k[kk] / k2) * T.c[q];
            }
        }
    }
    return p;
}

// ---------------------------------------------------------------- monitors

struct CompatibilityReport {
    std::vector<double> q_norms; // ‖q_ab‖_{L²} per ordered pair a < b
    double q_max = 0;
    double div_residual = 0;     // max over fields of sup_k |k·ŵ(k)|
    double energy = 0;           // ∫ (|v|² + Σ_a |u_a|²)/2
};

struct DiagnosticsRecord {
    double t = 0;
    CompatibilityReport compat;
    double sup_V = 0;
    double grad_sup_V = 0;
    std::vector<double> hs; // ‖V‖_{H^s} (max over components) per requested s
};

// Lagrangian-derivative commutativity defect q_ab = v_a·∇ v_b − v_b·∇ v_a
// with v_a = A_a + u_a (per ordered pair a < b, L² norm of the vector).
inline std::vector<double> compatibility_norms(const StateBundle& s) {
    const Grid& g = s.grid();
    const int d = g.dim();
    std::vector<double> out;
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            double norm2 = 0;
            for (int i = 0; i < d; ++i) {
                // u_a·∇u_b^i − u_b·∇u_a^i (quadratic, dealiased)
                SpectralField q(g);
                for (int kk = 0; kk < d; ++kk) {
                    SpectralField t1 = pointwise_product(s.u[a].comp[kk],
                                                         derivative(kk, s.u[b].comp[i]));
                    SpectralField t2 = pointwise_product(s.u[b].comp[kk],
                                                         derivative(kk, s.u[a].comp[i]));
                    axpy(q, 1.0, t1);
                    axpy(q, -1.0, t2);
                }
                q = dealias(q);
                // A_a·∇u_b^i − A_b·∇u_a^i (linear)
                for (int kk = 0; kk < d; ++kk) {
                    SpectralField da = derivative(kk, s.u[b].comp[i]);
                    axpy(q, s.A[static_cast<std::size_t>(kk) * d + a], da);
                    SpectralField db = derivative(kk, s.u[a].comp[i]);
                    axpy(q, -s.A[static_cast<std::size_t>(kk) * d + b], db);
                }
                const double nq = l2_norm(q);
                norm2 += nq * nq;
            }
            out.push_back(std::sqrt(norm2));
        }
    }
    return out;
}

inline double total_energy(const StateBundle& s) {
    double e = l2_norm(s.v);
    e = e * e;
    for (const auto& ua : s.u) {
        const double n = l2_norm(ua);
        e += n * n;
    }
    return e / 2.0;
}

inline DiagnosticsRecord monitor(const StateBundle& s, const std::vector<double>& svals = {}) {
    DiagnosticsRecord rec;
    rec.t = s.t;
    rec.compat.energy = total_energy(s);
    rec.compat.q_norms = compatibility_norms(s);
    for (double q : rec.compat.q_norms) rec.compat.q_max = std::max(rec.compat.q_max, q);
    rec.compat.div_residual = sup_norm_div_residual(s.v);
    for (const auto& ua : s.u)
        rec.compat.div_residual = std::max(rec.compat.div_residual, sup_norm_div_residual(ua));
    rec.sup_V = state_sup(s);
    rec.grad_sup_V = grad_sup_norm(s.v);
    for (const auto& ua : s.u) rec.grad_sup_V = std::max(rec.grad_sup_V, grad_sup_norm(ua));
    for (double sv : svals) {
        const NormRequest req = NormRequest::sobolev(sv);
        double m = 0;
        for (int i = 0; i < s.dim(); ++i) m = std::max(m, norm(s.v.comp[i], req));
        for (const auto& ua : s.u)
            for (int i = 0; i < s.dim(); ++i) m = std::max(m, norm(ua.comp[i], req));
        rec.hs.push_back(m);
    }
    return rec;
}

} // namespace nhsp

#endif // NHSP_DYNAMICS_HPP
