// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT
//
// Vorticity two-forms of the velocity and of each deformation column, their
// spectral inversion back to the fields, the quadratic source terms of the
// vorticity transport equations, the wave/transport splitting that
// diagonalizes the linearized system per Fourier mode, and the half-wave
// Duhamel propagator used to verify that splitting on real trajectories.

#ifndef NHSP_VORTICITY_HPP
#define NHSP_VORTICITY_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "nhsp/dynamics.hpp"
#include "nhsp/errors.hpp"
#include "nhsp/grid.hpp"
#include "nhsp/lp.hpp"
#include "nhsp/multipliers.hpp"

namespace nhsp {

// ------------------------------------------------------------- pair indexing

// Antisymmetric index pairs (m, n) with m < n, ordered lexicographically:
// d=2: (0,1);  d=3: (0,1), (0,2), (1,2).
inline int pair_count(int d) { return d * (d - 1) / 2; }

inline int pair_index(int m, int n, int d) {
    return m * d - m * (m + 1) / 2 + (n - m - 1);
}

inline std::pair<int, int> pair_members(int p, int d) {
    for (int m = 0; m < d; ++m)
        for (int n = m + 1; n < d; ++n)
            if (pair_index(m, n, d) == p) return {m, n};
    throw Error("pair_members: index out of range");
}

// Signed lookup of an antisymmetric array stored as m<n pairs.
inline complex pair_value(const std::vector<SpectralField>& w, int m, int n, int d,
                          std::size_t q) {
    if (m == n) return complex(0, 0);
    if (m < n) return w[pair_index(m, n, d)].c[q];
    return -w[pair_index(n, m, d)].c[q];
}

// ------------------------------------------------------------- bundle types

// omega[p] holds the velocity two-form component for pair p; omega_a[a][p]
// the two-form of deformation column a. Antisymmetry is exact by storage.
struct VorticityBundle {
    std::vector<SpectralField> omega;
    std::vector<std::vector<SpectralField>> omega_a;
    double t = 0;

    const Grid& grid() const { return omega.front().grid; }
    int dim() const { return omega.front().grid.dim(); }
    SpaceTag tag() const { return omega.front().tag; }
};

inline VorticityBundle make_vorticity_bundle(const Grid& g, SpaceTag tag = SpaceTag::euler) {
    VorticityBundle W;
    const int P = pair_count(g.dim());
    W.omega.assign(P, SpectralField(g, tag));
    W.omega_a.assign(g.dim(), std::vector<SpectralField>(P, SpectralField(g, tag)));
    return W;
}

inline void retag(VorticityBundle& W, SpaceTag tag) {
    for (auto& f : W.omega) f.tag = tag;
    for (auto& col : W.omega_a)
        for (auto& f : col) f.tag = tag;
}

// Wave/transport representation per pair: two half-wave scalars and the
// transported combinations (indexed [ab pair][mn pair]; redundant for d = 3).
struct PiBundle {
    std::vector<SpectralField> pi_plus;
    std::vector<SpectralField> pi_minus;
    std::vector<std::vector<SpectralField>> pi_ab;
    double t = 0;

    const Grid& grid() const { return pi_plus.front().grid; }
    int dim() const { return pi_plus.front().grid.dim(); }
};

// ------------------------------------------------------------- curl

// Two-forms of the state: omega^{mn} = d_m v^n - d_n v^m and likewise per
// deformation column (the constant part A drops out).
inline VorticityBundle curl(const StateBundle& s) {
    const Grid& g = s.grid();
    const int d = g.dim();
    VorticityBundle W = make_vorticity_bundle(g, s.v.comp[0].tag);
    W.t = s.t;
    double k[3];
    for (int m = 0; m < d; ++m) {
        for (int n = m + 1; n < d; ++n) {
            const int p = pair_index(m, n, d);
            for (std::size_t q = 0; q < g.size(); ++q) {
                g.k_vector(q, k);
                W.omega[p].c[q] = complex(0, k[m]) * s.v.comp[n].c[q] -
                                  complex(0, k[n]) * s.v.comp[m].c[q];
                for (int a = 0; a < d; ++a)
                    W.omega_a[a][p].c[q] = complex(0, k[m]) * s.u[a].comp[n].c[q] -
                                           complex(0, k[n]) * s.u[a].comp[m].c[q];
            }
        }
    }
    return W;
}

// ------------------------------------------------------------- inversion

namespace detail {

// max |omega_hat^{mn} - (khat_m khat_j omega_hat^{jn} - khat_n khat_j omega_hat^{jm})|,
// the defect of the bundle against arising from a divergence-free field.
inline double consistency_residual(const std::vector<SpectralField>& w, const Grid& g) {
    const int d = g.dim();
    double worst = 0;
    double k[3];
    for (int m = 0; m < d; ++m) {
        for (int n = m + 1; n < d; ++n) {
            for (std::size_t q = 0; q < g.size(); ++q) {
                const double k2 = g.k_vector(q, k);
                if (k2 == 0.0) {
                    worst = std::max(worst, std::abs(pair_value(w, m, n, d, q)));
                    continue;
                }
                complex reproj(0, 0);
                for (int j = 0; j < d; ++j)
                    reproj += (k[m] * k[j] * pair_value(w, j, n, d, q) -
                               k[n] * k[j] * pair_value(w, j, m, d, q)) /
                              k2;
                worst = std::max(worst, std::abs(pair_value(w, m, n, d, q) - reproj));
            }
        }
    }
    return worst;
}

inline void invert_pairs(const std::vector<SpectralField>& w, VectorField& out, const Grid& g) {
    const int d = g.dim();
    double k[3];
    for (int n = 0; n < d; ++n) {
        for (std::size_t q = 0; q < g.size(); ++q) {
            const double k2 = g.k_vector(q, k);
            if (k2 == 0.0) {
                out.comp[n].c[q] = complex(0, 0); // the mean is not encoded
                continue;
            }
            complex acc(0, 0);
            for (int m = 0; m < d; ++m)
                acc += complex(0, -k[m] / k2) * pair_value(w, m, n, d, q);
            out.comp[n].c[q] = acc;
        }
    }
}

inline double bundle_scale(const VorticityBundle& W) {
    double s = 0;
    for (const auto& f : W.omega) s = std::max(s, max_abs_coeff(f));
    for (const auto& col : W.omega_a)
        for (const auto& f : col) s = std::max(s, max_abs_coeff(f));
    return s;
}

} // namespace detail

// Recover the mean-zero divergence-free fields whose two-forms are given:
// v_hat^n = -i k_m omega_hat^{mn} / |k|^2. Throws when the bundle could not
// have arisen from divergence-free fields.
inline StateBundle biot_savart(const VorticityBundle& W) {
    const Grid& g = W.grid();
    const int d = g.dim();
    const double scale = std::max(detail::bundle_scale(W), 1e-300);
    double worst = detail::consistency_residual(W.omega, g);
    for (int a = 0; a < d; ++a)
        worst = std::max(worst, detail::consistency_residual(W.omega_a[a], g));
    if (worst > 1e-8 * scale)
        throw InconsistentVorticity("biot_savart: consistency residual " +
                                    std::to_string(worst) + " at scale " +
                                    std::to_string(scale));
    StateBundle s = make_state(g);
    s.t = W.t;
    detail::invert_pairs(W.omega, s.v, g);
    for (int a = 0; a < d; ++a) detail::invert_pairs(W.omega_a[a], s.u[a], g);
    const SpaceTag tag = W.tag();
    for (auto& f : s.v.comp) f.tag = tag;
    for (auto& ua : s.u)
        for (auto& f : ua.comp) f.tag = tag;
    return s;
}

// ------------------------------------------------------------- sources

// Quadratic sources of the vorticity transport equations,
//   f^{mn}   = -(omega^{mj} d_j v^n - omega^{nj} d_j v^m)
//              + sum_b (omega_b^{mj} d_j u_b^n - omega_b^{nj} d_j u_b^m)
//   f_a^{mn} = -(d_m v^j d_j u_a^n - d_n v^j d_j u_a^m)
//              + (d_m u_a^j d_j v^n - d_n u_a^j d_j v^m),
// assembled pointwise in physical space (so the d = 2 cancellation of f
// happens at each grid point) and dealiased.
struct VorticitySources {
    std::vector<SpectralField> f;
    std::vector<std::vector<SpectralField>> f_a;
};

namespace detail {

struct PhysVorticity {
    // physical samples: grad[j*d+i] = d_j w^i for a vector field w
    std::vector<std::vector<complex>> grad_v;               // d*d
    std::vector<std::vector<std::vector<complex>>> grad_u;  // [a][j*d+i]
    std::vector<std::vector<complex>> omega;                // [pair]
    std::vector<std::vector<std::vector<complex>>> omega_a; // [a][pair]

    // antisymmetric physical lookup
    static complex pack(const std::vector<std::vector<complex>>& w, int m, int n, int d,
                        std::size_t q) {
        if (m == n) return complex(0, 0);
        if (m < n) return w[pair_index(m, n, d)][q];
        return -w[pair_index(n, m, d)][q];
    }
};

inline PhysVorticity phys_vorticity(const StateBundle& s, const VorticityBundle& W) {
    const Grid& g = s.grid();
    const int d = g.dim();
    const int P = pair_count(d);
    PhysVorticity out;
    out.grad_v.resize(static_cast<std::size_t>(d) * d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            out.grad_v[static_cast<std::size_t>(j) * d + i] =
                to_physical_complex(derivative(j, s.v.comp[i]));
    out.grad_u.resize(d);
    for (int a = 0; a < d; ++a) {
        out.grad_u[a].resize(static_cast<std::size_t>(d) * d);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i)
                out.grad_u[a][static_cast<std::size_t>(j) * d + i] =
                    to_physical_complex(derivative(j, s.u[a].comp[i]));
    }
    out.omega.resize(P);
    for (int p = 0; p < P; ++p) out.omega[p] = to_physical_complex(W.omega[p]);
    out.omega_a.resize(d);
    for (int a = 0; a < d; ++a) {
        out.omega_a[a].resize(P);
        for (int p = 0; p < P; ++p) out.omega_a[a][p] = to_physical_complex(W.omega_a[a][p]);
    }
    return out;
}

} // namespace detail

inline VorticitySources vorticity_sources(const StateBundle& s) {
    const Grid& g = s.grid();
    const int d = g.dim();
    const int P = pair_count(d);
    const VorticityBundle W = curl(s);
    const detail::PhysVorticity ph = detail::phys_vorticity(s, W);
    const SpaceTag tag = s.v.comp[0].tag;

    VorticitySources out;
    out.f.reserve(P);
    out.f_a.assign(d, {});
    auto gv = [&](int j, int i, std::size_t q) {
        return ph.grad_v[static_cast<std::size_t>(j) * d + i][q];
    };
    auto gu = [&](int a, int j, int i, std::size_t q) {
        return ph.grad_u[a][static_cast<std::size_t>(j) * d + i][q];
    };

    for (int p = 0; p < P; ++p) {
        const auto [m, n] = pair_members(p, d);
        std::vector<complex> acc(g.size(), complex(0, 0));
        for (std::size_t q = 0; q < g.size(); ++q) {
            complex val(0, 0);
            for (int j = 0; j < d; ++j) {
                val -= detail::PhysVorticity::pack(ph.omega, m, j, d, q) * gv(j, n, q) -
                       detail::PhysVorticity::pack(ph.omega, n, j, d, q) * gv(j, m, q);
                for (int b = 0; b < d; ++b)
                    val += detail::PhysVorticity::pack(ph.omega_a[b], m, j, d, q) *
                               gu(b, j, n, q) -
                           detail::PhysVorticity::pack(ph.omega_a[b], n, j, d, q) *
                               gu(b, j, m, q);
            }
            acc[q] = val;
        }
        out.f.push_back(dealias(from_physical_complex(g, acc, tag)));
    }

    for (int a = 0; a < d; ++a) {
        out.f_a[a].reserve(P);
        for (int p = 0; p < P; ++p) {
            const auto [m, n] = pair_members(p, d);
            std::vector<complex> acc(g.size(), complex(0, 0));
            for (std::size_t q = 0; q < g.size(); ++q) {
                complex val(0, 0);
                for (int j = 0; j < d; ++j) {
                    val -= gv(m, j, q) * gu(a, j, n, q) - gv(n, j, q) * gu(a, j, m, q);
                    val += gu(a, m, j, q) * gv(j, n, q) - gu(a, n, j, q) * gv(j, m, q);
                }
                acc[q] = val;
            }
            out.f_a[a].push_back(dealias(from_physical_complex(g, acc, tag)));
        }
    }
    return out;
}

// ------------------------------------------------------------- transport rhs

// Tendency of the truncated vorticity system,
//   dt omega   = -rho_eps[ dealias( v.grad omega - sum_b u_b.grad omega_b - f )
//                          - sum_b A_b.grad omega_b ]
//   dt omega_a = -rho_eps[ dealias( v.grad omega_a - u_a.grad omega - f_a )
//                          - A_a.grad omega ]
// This equals the curl of the state tendency exactly for band-limited states.
inline VorticityBundle vorticity_rhs(const StateBundle& s, const EvolutionConfig& cfg) {
    const Grid& g = s.grid();
    const int d = g.dim();
    const int P = pair_count(d);
    const VorticityBundle W = curl(s);
    VorticityBundle out = make_vorticity_bundle(g, W.tag());
    out.t = s.t;
    double k[3];

    std::vector<std::vector<complex>> pv(d);
    std::vector<std::vector<std::vector<complex>>> pu(d);
    std::vector<std::vector<std::vector<complex>>> dom(P), dom_a;
    VorticitySources src;
    if (!cfg.linear_only) {
        for (int j = 0; j < d; ++j) pv[j] = to_physical_complex(s.v.comp[j]);
        for (int a = 0; a < d; ++a) {
            pu[a].resize(d);
            for (int j = 0; j < d; ++j) pu[a][j] = to_physical_complex(s.u[a].comp[j]);
        }
        for (int p = 0; p < P; ++p) {
            dom[p].resize(d);
            for (int j = 0; j < d; ++j)
                dom[p][j] = to_physical_complex(derivative(j, W.omega[p]));
        }
        dom_a.resize(static_cast<std::size_t>(d) * P);
        for (int a = 0; a < d; ++a)
            for (int p = 0; p < P; ++p) {
                auto& slot = dom_a[static_cast<std::size_t>(a) * P + p];
                slot.resize(d);
                for (int j = 0; j < d; ++j)
                    slot[j] = to_physical_complex(derivative(j, W.omega_a[a][p]));
            }
        src = vorticity_sources(s);
    }

    for (int p = 0; p < P; ++p) {
        SpectralField bracket(g, W.tag());
        if (!cfg.linear_only) {
            std::vector<complex> acc(g.size(), complex(0, 0));
            for (std::size_t q = 0; q < g.size(); ++q) {
                complex val(0, 0);
                for (int j = 0; j < d; ++j) {
                    val += pv[j][q] * dom[p][j][q];
                    for (int b = 0; b < d; ++b)
                        val -= pu[b][j][q] * dom_a[static_cast<std::size_t>(b) * P + p][j][q];
                }
                acc[q] = val;
            }
            bracket = from_physical_complex(g, acc, W.tag());
            if (cfg.dealias_products) bracket = dealias(bracket);
            axpy(bracket, -1.0, src.f[p]);
        }
        for (std::size_t q = 0; q < g.size(); ++q) {
            g.k_vector(q, k);
            for (int b = 0; b < d; ++b) {
                complex ikA(0, 0);
                for (int kk = 0; kk < d; ++kk)
                    ikA += complex(0, k[kk]) * s.A[static_cast<std::size_t>(kk) * d + b];
                bracket.c[q] -= ikA * W.omega_a[b][p].c[q];
            }
        }
        out.omega[p] = mollify(cfg.eps, bracket);
        scale(out.omega[p], complex(-1, 0));
    }

    for (int a = 0; a < d; ++a) {
        for (int p = 0; p < P; ++p) {
            SpectralField bracket(g, W.tag());
            if (!cfg.linear_only) {
                std::vector<complex> acc(g.size(), complex(0, 0));
                for (std::size_t q = 0; q < g.size(); ++q) {
                    complex val(0, 0);
                    for (int j = 0; j < d; ++j) {
                        val += pv[j][q] * dom_a[static_cast<std::size_t>(a) * P + p][j][q];
                        val -= pu[a][j][q] * dom[p][j][q];
                    }
                    acc[q] = val;
                }
                bracket = from_physical_complex(g, acc, W.tag());
                if (cfg.dealias_products) bracket = dealias(bracket);
                axpy(bracket, -1.0, src.f_a[a][p]);
            }
            for (std::size_t q = 0; q < g.size(); ++q) {
                g.k_vector(q, k);
                complex ikA(0, 0);
                for (int kk = 0; kk < d; ++kk)
                    ikA += complex(0, k[kk]) * s.A[static_cast<std::size_t>(kk) * d + a];
                bracket.c[q] -= ikA * W.omega[p].c[q];
            }
            out.omega_a[a][p] = mollify(cfg.eps, bracket);
            scale(out.omega_a[a][p], complex(-1, 0));
        }
    }
    return out;
}

// Max-over-fields L2 residual of the transport equations against a centered
// time difference of three consecutive solver states. O(dt^2) for smooth runs.
inline double vorticity_transport_residual(const StateBundle& prev, const StateBundle& cur,
                                           const StateBundle& next, double dt,
                                           const EvolutionConfig& cfg) {
    const VorticityBundle Wp = curl(prev);
    const VorticityBundle Wn = curl(next);
    const VorticityBundle R = vorticity_rhs(cur, cfg);
    const int d = cur.dim();
    const int P = pair_count(d);
    double worst = 0;
    auto measure = [&](const SpectralField& wn, const SpectralField& wp,
                       const SpectralField& r) {
        SpectralField diff = wn;
        axpy(diff, -1.0, wp);
        scale(diff, complex(1.0 / (2.0 * dt), 0));
        axpy(diff, -1.0, r);
        worst = std::max(worst, l2_norm(diff));
    };
    for (int p = 0; p < P; ++p) measure(Wn.omega[p], Wp.omega[p], R.omega[p]);
    for (int a = 0; a < d; ++a)
        for (int p = 0; p < P; ++p)
            measure(Wn.omega_a[a][p], Wp.omega_a[a][p], R.omega_a[a][p]);
    return worst;
}

// ------------------------------------------------------------- pi splitting

// Per mode k (khat = k/|k|) and per pair:
//   pi_plus  = omega + khat^a omega_a
//   pi_minus = omega - khat^a omega_a
//   pi_{ab}  = khat^a omega_b - khat^b omega_a       (a < b)
// which diagonalizes the linearized system: pi_{+-} are half waves with
// frequencies +-|k|, pi_{ab} are transported (zero symbol). At k = 0 the
// splitting degenerates; by convention pi_{+-}(0) = omega(0), pi_ab(0) = 0.
inline PiBundle pi_split(const VorticityBundle& W) {
    if (W.tag() != SpaceTag::lagrange)
        throw InadmissibleParameters("pi_split: bundle must carry Lagrangian coordinates");
    const Grid& g = W.grid();
    const int d = g.dim();
    const int P = pair_count(d);
    PiBundle out;
    out.t = W.t;
    out.pi_plus.assign(P, SpectralField(g, SpaceTag::lagrange));
    out.pi_minus.assign(P, SpectralField(g, SpaceTag::lagrange));
    out.pi_ab.assign(P, std::vector<SpectralField>(P, SpectralField(g, SpaceTag::lagrange)));
    double k[3];
    for (int p = 0; p < P; ++p) {
        for (std::size_t q = 0; q < g.size(); ++q) {
            const double k2 = g.k_vector(q, k);
            const double klen = std::sqrt(k2);
            if (klen == 0.0) {
                out.pi_plus[p].c[q] = W.omega[p].c[q];
                out.pi_minus[p].c[q] = W.omega[p].c[q];
                continue;
            }
            complex s(0, 0);
            for (int a = 0; a < d; ++a) s += (k[a] / klen) * W.omega_a[a][p].c[q];
            out.pi_plus[p].c[q] = W.omega[p].c[q] + s;
            out.pi_minus[p].c[q] = W.omega[p].c[q] - s;
            for (int a = 0; a < d; ++a)
                for (int b = a + 1; b < d; ++b)
                    out.pi_ab[pair_index(a, b, d)][p].c[q] =
                        (k[a] / klen) * W.omega_a[b][p].c[q] -
                        (k[b] / klen) * W.omega_a[a][p].c[q];
        }
    }
    return out;
}

// omega = (pi_plus + pi_minus)/2,
// omega_a = khat_a (pi_plus - pi_minus)/2 + khat_b pi_{ba}.
inline VorticityBundle pi_merge(const PiBundle& Pi) {
    const Grid& g = Pi.grid();
    const int d = g.dim();
    const int P = pair_count(d);
    VorticityBundle out = make_vorticity_bundle(g, SpaceTag::lagrange);
    out.t = Pi.t;
    double k[3];
    for (int p = 0; p < P; ++p) {
        for (std::size_t q = 0; q < g.size(); ++q) {
            const double k2 = g.k_vector(q, k);
            const double klen = std::sqrt(k2);
            out.omega[p].c[q] = 0.5 * (Pi.pi_plus[p].c[q] + Pi.pi_minus[p].c[q]);
            if (klen == 0.0) {
                for (int a = 0; a < d; ++a) out.omega_a[a][p].c[q] = complex(0, 0);
                continue;
            }
            const complex s = 0.5 * (Pi.pi_plus[p].c[q] - Pi.pi_minus[p].c[q]);
            for (int a = 0; a < d; ++a) {
                complex val = (k[a] / klen) * s;
                for (int b = 0; b < d; ++b) {
                    if (b == a) continue;
                    // khat_b pi_{ba}: signed lookup in the a<b storage
                    const complex pba = (b < a) ? Pi.pi_ab[pair_index(b, a, d)][p].c[q]
                                                : -Pi.pi_ab[pair_index(a, b, d)][p].c[q];
                    val += (k[b] / klen) * pba;
                }
                out.omega_a[a][p].c[q] = val;
            }
        }
    }
    return out;
}

// Symbol matrix of the linearized system per mode, acting on (omega, omega_a)
// as a (d+1)-vector: M[0][1+a] = M[1+a][0] = k_a, zero otherwise. The
// eigenvalues are +-|k| (eigenvectors [1, +-khat]) and 0 (d-1 fold).
inline std::vector<double> dispersion_matrix(int d, const double* k) {
    std::vector<double> M(static_cast<std::size_t>(d + 1) * (d + 1), 0.0);
    for (int a = 0; a < d; ++a) {
        M[static_cast<std::size_t>(0) * (d + 1) + (1 + a)] = k[a];
        M[static_cast<std::size_t>(1 + a) * (d + 1) + 0] = k[a];
    }
    return M;
}

// ------------------------------------------------------------- half waves

// w_hat(t,k) = e^{i sign |k| t} w0_hat(k)
//            + integral_0^t e^{i sign |k| (t-tau)} F_hat(tau,k) dtau,
// with the forcing sampled uniformly on [0, t] and integrated by composite
// Simpson (a 3/8 block absorbs an odd interval count). sign 0 selects the
// transported components: a plain time integral of the forcing.
inline SpectralField half_wave_evolve(const SpectralField& w0,
                                      const std::vector<SpectralField>& forcing, int sign,
                                      double t) {
    if (sign != 1 && sign != -1 && sign != 0)
        throw InadmissibleParameters("half_wave_evolve: sign must be +1, -1, or 0");
    if (forcing.size() == 1)
        throw InadmissibleParameters("half_wave_evolve: need 0 or >= 2 forcing samples");
    const Grid& g = w0.grid;
    const std::size_t S = forcing.size();

    std::vector<double> wgt(S, 0.0);
    if (S >= 2) {
        const std::size_t m = S - 1; // intervals
        const double h = t / static_cast<double>(m);
        if (m == 1) {
            wgt[0] = wgt[1] = h / 2.0;
        } else {
            std::size_t simpson_end = (m % 2 == 0) ? m : m - 3;
            for (std::size_t j = 0; j + 2 <= simpson_end; j += 2) {
                wgt[j] += h / 3.0;
                wgt[j + 1] += 4.0 * h / 3.0;
                wgt[j + 2] += h / 3.0;
            }
            if (m % 2 == 1) {
                const std::size_t j = simpson_end;
                wgt[j] += 3.0 * h / 8.0;
                wgt[j + 1] += 9.0 * h / 8.0;
                wgt[j + 2] += 9.0 * h / 8.0;
                wgt[j + 3] += 3.0 * h / 8.0;
            }
        }
    }

    SpectralField out(g, w0.tag);
    double k[3];
    const double h = (S >= 2) ? t / static_cast<double>(S - 1) : 0.0;
    for (std::size_t q = 0; q < g.size(); ++q) {
        const double klen = std::sqrt(g.k_vector(q, k));
        const double omega = sign * klen;
        const complex phase_t = std::polar(1.0, omega * t);
        complex acc = phase_t * w0.c[q];
        if (S >= 2) {
            // e^{i omega (t - j h)}: start at j=0 and step down by e^{-i omega h}
            const complex step = std::polar(1.0, -omega * h);
            complex ph = phase_t;
            for (std::size_t j = 0; j < S; ++j) {
                acc += wgt[j] * ph * forcing[j].c[q];
                ph *= step;
            }
        }
        out.c[q] = acc;
    }
    return out;
}

// ------------------------------------------------------------- growth report

// Empirical constant of the Hoelder-seminorm growth bound
//   log [Omega(t)]_theta - log [Omega(0)]_theta <= C int_0^t (|grad V|_inf + |Omega|_inf)
// over a sampled trajectory.
struct VorticityGrowthReport {
    double theta = 0;
    double log_ratio = 0;   // left-hand side
    double integral = 0;    // right-hand side without C
    double empirical_c = 0; // log_ratio / integral (0 when both vanish)
};

inline double bundle_sup(const VorticityBundle& W) {
    double m = 0;
    for (const auto& f : W.omega) m = std::max(m, sup_norm(f));
    for (const auto& col : W.omega_a)
        for (const auto& f : col) m = std::max(m, sup_norm(f));
    return m;
}

inline double bundle_holder(const VorticityBundle& W, double theta) {
    std::vector<const SpectralField*> fields;
    for (const auto& f : W.omega) fields.push_back(&f);
    for (const auto& col : W.omega_a)
        for (const auto& f : col) fields.push_back(&f);
    return collection_norm(fields, NormRequest::holder_dot(theta));
}

inline VorticityGrowthReport vorticity_hs_monitor(const std::vector<StateBundle>& history,
                                                  double sample_dt, double theta) {
    if (history.size() < 2)
        throw InadmissibleParameters("vorticity_hs_monitor: need at least two samples");
    VorticityGrowthReport rep;
    rep.theta = theta;

    std::vector<double> integrand;
    integrand.reserve(history.size());
    double h0 = 0, h1 = 0;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const StateBundle& s = history[i];
        const VorticityBundle W = curl(s);
        double gs = grad_sup_norm(s.v);
        for (const auto& ua : s.u) gs = std::max(gs, grad_sup_norm(ua));
        integrand.push_back(gs + bundle_sup(W));
        if (i == 0) h0 = bundle_holder(W, theta);
        if (i + 1 == history.size()) h1 = bundle_holder(W, theta);
    }
    for (std::size_t i = 0; i + 1 < integrand.size(); ++i)
        rep.integral += 0.5 * sample_dt * (integrand[i] + integrand[i + 1]);
    if (h0 == 0.0 && h1 == 0.0) {
        rep.log_ratio = 0;
        rep.empirical_c = 0;
        return rep;
    }
    rep.log_ratio = std::log(h1) - std::log(h0);
    rep.empirical_c = (rep.integral > 0) ? rep.log_ratio / rep.integral : 0.0;
    return rep;
}

} // namespace nhsp

#endif // NHSP_VORTICITY_HPP
