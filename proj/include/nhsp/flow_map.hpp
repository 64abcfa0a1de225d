// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT
//
// The Lagrangian picture: particle trajectories x(t, xi) = A xi + phi(t, xi),
// the deformation gradient F = dx/dxi transported along them, volume
// preservation, field transfer between the two coordinate systems, and
// empirical checks of the norm-comparison inequalities between Eulerian and
// Lagrangian representations of the same function.
//
// The xi-grid coincides with the x-grid; only the periodic displacement phi
// is stored. Off-grid values come from Keys cubic convolution (a = -1/2), or
// from exact trigonometric summation behind a flag for small oracle grids.

#ifndef NHSP_FLOW_MAP_HPP
#define NHSP_FLOW_MAP_HPP

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nhsp/dynamics.hpp"
#include "nhsp/errors.hpp"
#include "nhsp/grid.hpp"
#include "nhsp/lp.hpp"
#include "nhsp/multipliers.hpp"

namespace nhsp {

// ---------------------------------------------------------------- small mats

namespace detail {

inline void mat_invert(const double* M, double* inv, int d) {
    if (d == 2) {
        const double det = M[0] * M[3] - M[1] * M[2];
        inv[0] = M[3] / det;
        inv[1] = -M[1] / det;
        inv[2] = -M[2] / det;
        inv[3] = M[0] / det;
        return;
    }
    const double det = M[0] * (M[4] * M[8] - M[5] * M[7]) - M[1] * (M[3] * M[8] - M[5] * M[6]) +
                       M[2] * (M[3] * M[7] - M[4] * M[6]);
    inv[0] = (M[4] * M[8] - M[5] * M[7]) / det;
    inv[1] = (M[2] * M[7] - M[1] * M[8]) / det;
    inv[2] = (M[1] * M[5] - M[2] * M[4]) / det;
    inv[3] = (M[5] * M[6] - M[3] * M[8]) / det;
    inv[4] = (M[0] * M[8] - M[2] * M[6]) / det;
    inv[5] = (M[2] * M[3] - M[0] * M[5]) / det;
    inv[6] = (M[3] * M[7] - M[4] * M[6]) / det;
    inv[7] = (M[1] * M[6] - M[0] * M[7]) / det;
    inv[8] = (M[0] * M[4] - M[1] * M[3]) / det;
}

// ------------------------------------------------------------ interpolation

// Keys cubic convolution kernel with a = -1/2 (reproduces cubics, C^1).
inline double keys_kernel(double s) {
    s = std::abs(s);
    if (s <= 1.0) return (1.5 * s - 2.5) * s * s + 1.0;
    if (s < 2.0) return ((-0.5 * s + 2.5) * s - 4.0) * s + 2.0;
    return 0.0;
}

// Periodic tensor-product cubic interpolant of real physical samples.
class CubicInterpolant {
public:
    CubicInterpolant() = default;
    CubicInterpolant(const Grid& g, std::vector<double> samples)
        : g_(g), samples_(std::move(samples)) {}

    double operator()(const double* x) const {
        const int d = g_.dim();
        const int n = g_.n();
        const double h = g_.dx();
        int base[3];
        double wgt[3][4];
        for (int a = 0; a < d; ++a) {
            const double s = x[a] / h;
            const double fl = std::floor(s);
            base[a] = static_cast<int>(fl);
            const double frac = s - fl;
            for (int m = -1; m <= 2; ++m) wgt[a][m + 1] = keys_kernel(frac - m);
        }
        double acc = 0;
        int idx[3] = {0, 0, 0};
        if (d == 2) {
            for (int i = -1; i <= 2; ++i) {
                idx[0] = wrap(base[0] + i, n);
                for (int j = -1; j <= 2; ++j) {
                    idx[1] = wrap(base[1] + j, n);
                    acc += wgt[0][i + 1] * wgt[1][j + 1] * samples_[g_.encode(idx)];
                }
            }
            return acc;
        }
        for (int i = -1; i <= 2; ++i) {
            idx[0] = wrap(base[0] + i, n);
            for (int j = -1; j <= 2; ++j) {
                idx[1] = wrap(base[1] + j, n);
                const double wij = wgt[0][i + 1] * wgt[1][j + 1];
                for (int k = -1; k <= 2; ++k) {
                    idx[2] = wrap(base[2] + k, n);
                    acc += wij * wgt[2][k + 1] * samples_[g_.encode(idx)];
                }
            }
        }
        return acc;
    }

private:
    static int wrap(int i, int n) {
        i %= n;
        return i < 0 ? i + n : i;
    }
    Grid g_;
    std::vector<double> samples_;
};

// Exact evaluation of the band-limited interpolant: Re sum_k c_k e^{i k.x}.
// O(grid size) per point; guarded to small oracle grids.
class FourierInterpolant {
public:
    FourierInterpolant() = default;
    explicit FourierInterpolant(const SpectralField& f) : g_(f.grid), c_(f.c) {
        if (g_.n() > 32)
            throw GridTooLarge("exact interpolation is restricted to n <= 32 oracle grids");
    }

    double operator()(const double* x) const {
        double k[3];
        double acc = 0;
        for (std::size_t q = 0; q < c_.size(); ++q) {
            g_.k_vector(q, k);
            double phase = 0;
            for (int a = 0; a < g_.dim(); ++a) phase += k[a] * x[a];
            acc += c_[q].real() * std::cos(phase) - c_[q].imag() * std::sin(phase);
        }
        return acc;
    }

private:
    Grid g_;
    std::vector<complex> c_;
};

// Either of the two, chosen at construction.
class FieldInterpolant {
public:
    enum class Mode { cubic, exact_fourier };

    FieldInterpolant() = default;
    FieldInterpolant(const SpectralField& f, Mode mode) : mode_(mode) {
        if (mode == Mode::cubic)
            cubic_ = CubicInterpolant(f.grid, to_physical(f));
        else
            fourier_ = FourierInterpolant(f);
    }
    double operator()(const double* x) const {
        return mode_ == Mode::cubic ? cubic_(x) : fourier_(x);
    }

private:
    Mode mode_ = Mode::cubic;
    CubicInterpolant cubic_;
    FourierInterpolant fourier_;
};

} // namespace detail

// ---------------------------------------------------------------- sampling

using InterpolationMode = detail::FieldInterpolant::Mode;

// Off-grid evaluation of one velocity snapshot and its gradient.
class VelocitySampler {
public:
    explicit VelocitySampler(const VectorField& v,
                             InterpolationMode mode = InterpolationMode::cubic)
        : g_(v.grid()) {
        const int d = g_.dim();
        v_.reserve(d);
        grad_.reserve(static_cast<std::size_t>(d) * d);
        for (int i = 0; i < d; ++i) v_.emplace_back(v.comp[i], mode);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i)
                grad_.emplace_back(derivative(j, v.comp[i]), mode);
    }

    const Grid& grid() const { return g_; }
    int dim() const { return g_.dim(); }

    void velocity(const double* x, double* out) const {
        for (int i = 0; i < dim(); ++i) out[i] = v_[i](x);
    }
    // out[j*d+i] = d_j v^i
    void gradient(const double* x, double* out) const {
        const int d = dim();
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i)
                out[static_cast<std::size_t>(j) * d + i] =
                    grad_[static_cast<std::size_t>(j) * d + i](x);
    }

private:
    Grid g_;
    std::vector<detail::FieldInterpolant> v_;
    std::vector<detail::FieldInterpolant> grad_;
};

// Time-dependent velocity for the characteristic ODE. `periodic` marks
// torus-sampled fields, for which large displacements make the periodic
// interpretation of trajectories ambiguous (guarded in advect).
struct VelocityProvider {
    std::function<void(double t, const double* x, double* v)> velocity;
    std::function<void(double t, const double* x, double* grad)> gradient;
    bool periodic = true;
};

// ---------------------------------------------------------------- flow map

// x(t, xi) = A xi + phi(t, xi) with periodic displacement phi, and the
// deformation gradient F[i*d+a] = dx^i/dxi_a transported by dF/dt = grad v . F.
struct FlowMap {
    VectorField displacement;      // phi, Lagrange tag
    std::vector<SpectralField> F;  // row-major i*d+a
    std::vector<double> A;
    double t = 0;

    const Grid& grid() const { return displacement.grid(); }
    int dim() const { return displacement.dim(); }
};

inline FlowMap make_flow_map(const Grid& g, const std::vector<double>& A) {
    const int d = g.dim();
    if (A.size() != static_cast<std::size_t>(d) * d)
        throw InadmissibleParameters("make_flow_map: A must be d x d");
    if (std::abs(mat_det(A, d) - 1.0) > 1e-12)
        throw DeterminantNotOne("make_flow_map: det A = " + std::to_string(mat_det(A, d)));
    FlowMap m;
    m.displacement = VectorField(g, SpaceTag::lagrange);
    m.F.assign(static_cast<std::size_t>(d) * d, SpectralField(g, SpaceTag::lagrange));
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a)
            m.F[static_cast<std::size_t>(i) * d + a].c[0] =
                complex(A[static_cast<std::size_t>(i) * d + a], 0.0);
    m.A = A;
    return m;
}

// Initial map x(0, xi) = A xi + phi0(xi); F(0) = A + grad_xi phi0.
inline FlowMap make_flow_map(const Grid& g, const std::vector<double>& A,
                             const VectorField& phi0) {
    FlowMap m = make_flow_map(g, A);
    for (int i = 0; i < g.dim(); ++i) {
        m.displacement.comp[i].c = phi0.comp[i].c;
        for (int a = 0; a < g.dim(); ++a) {
            SpectralField dphi = derivative(a, phi0.comp[i]);
            axpy(m.F[static_cast<std::size_t>(i) * g.dim() + a], 1.0, dphi);
        }
    }
    return m;
}

// One RK4 step of the coupled system (dx/dt = v(t,x), dF/dt = grad v(x) F).
inline FlowMap advect(const FlowMap& map, const VelocityProvider& vel, double dt) {
    const Grid& g = map.grid();
    const int d = g.dim();
    const std::size_t N = g.size();

    std::vector<std::vector<double>> phi(d), F(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i) phi[i] = to_physical(map.displacement.comp[i]);
    for (int ia = 0; ia < d * d; ++ia) F[ia] = to_physical(map.F[ia]);

    const double stage_t[3] = {map.t, map.t + dt / 2.0, map.t + dt};
    double xi[3];

    for (std::size_t q = 0; q < N; ++q) {
        g.point(q, xi);
        double x0[3], F0[9];
        for (int i = 0; i < d; ++i) {
            x0[i] = phi[i][q];
            for (int a = 0; a < d; ++a) x0[i] += map.A[static_cast<std::size_t>(i) * d + a] * xi[a];
        }
        for (int ia = 0; ia < d * d; ++ia) F0[ia] = F[ia][q];

        double kx[4][3], kF[4][9];
        double xs[3], Fs[9], grad[9];
        for (int stage = 0; stage < 4; ++stage) {
            const double c = (stage == 0) ? 0.0 : (stage == 3 ? 1.0 : 0.5);
            const double tau = stage_t[stage == 0 ? 0 : (stage == 3 ? 2 : 1)];
            for (int i = 0; i < d; ++i)
                xs[i] = x0[i] + ((stage == 0) ? 0.0 : c * dt * kx[stage - 1][i]);
            for (int ia = 0; ia < d * d; ++ia)
                Fs[ia] = F0[ia] + ((stage == 0) ? 0.0 : c * dt * kF[stage - 1][ia]);
            vel.velocity(tau, xs, kx[stage]);
            vel.gradient(tau, xs, grad);
            for (int i = 0; i < d; ++i)
                for (int a = 0; a < d; ++a) {
                    double acc = 0;
                    for (int j = 0; j < d; ++j)
                        acc += grad[static_cast<std::size_t>(j) * d + i] *
                               Fs[static_cast<std::size_t>(j) * d + a];
                    kF[stage][static_cast<std::size_t>(i) * d + a] = acc;
                }
        }
        for (int i = 0; i < d; ++i) {
            const double dx =
                dt / 6.0 * (kx[0][i] + 2 * kx[1][i] + 2 * kx[2][i] + kx[3][i]);
            phi[i][q] = x0[i] + dx;
            for (int a = 0; a < d; ++a)
                phi[i][q] -= map.A[static_cast<std::size_t>(i) * d + a] * xi[a];
        }
        for (int ia = 0; ia < d * d; ++ia)
            F[ia][q] = F0[ia] + dt / 6.0 * (kF[0][ia] + 2 * kF[1][ia] + 2 * kF[2][ia] + kF[3][ia]);
    }

    FlowMap out = map;
    out.t = map.t + dt;
    double worst = 0;
    for (int i = 0; i < d; ++i) {
        for (double v : phi[i]) worst = std::max(worst, std::abs(v));
        out.displacement.comp[i] = from_physical(g, phi[i], SpaceTag::lagrange);
    }
    for (int ia = 0; ia < d * d; ++ia) out.F[ia] = from_physical(g, F[ia], SpaceTag::lagrange);
    if (vel.periodic && worst > g.L() / 4.0)
        throw MapLeftDomainProxy("advect: displacement " + std::to_string(worst) +
                                 " exceeds L/4; periodic trajectory interpretation ambiguous");
    return out;
}

// RK4 step from three velocity snapshots (t, t + dt/2, t + dt).
inline FlowMap advect(const FlowMap& map, const VelocitySampler& at_t,
                      const VelocitySampler& at_half, const VelocitySampler& at_next,
                      double dt) {
    const double t0 = map.t;
    auto pick = [&, dt, t0](double tau) -> const VelocitySampler& {
        if (std::abs(tau - t0) < 0.25 * dt) return at_t;
        if (std::abs(tau - (t0 + dt)) < 0.25 * dt) return at_next;
        return at_half;
    };
    VelocityProvider vel;
    vel.velocity = [pick](double tau, const double* x, double* out) {
        pick(tau).velocity(x, out);
    };
    vel.gradient = [pick](double tau, const double* x, double* out) {
        pick(tau).gradient(x, out);
    };
    vel.periodic = true;
    return advect(map, vel, dt);
}

// ---------------------------------------------------------------- residuals

// max_xi |det F - 1|: discrete volume preservation defect.
inline double volume_residual(const FlowMap& map) {
    const Grid& g = map.grid();
    const int d = g.dim();
    std::vector<std::vector<double>> F(static_cast<std::size_t>(d) * d);
    for (int ia = 0; ia < d * d; ++ia) F[ia] = to_physical(map.F[ia]);
    double worst = 0;
    std::vector<double> M(static_cast<std::size_t>(d) * d);
    for (std::size_t q = 0; q < g.size(); ++q) {
        for (int ia = 0; ia < d * d; ++ia) M[ia] = F[ia][q];
        worst = std::max(worst, std::abs(mat_det(M, d) - 1.0));
    }
    return worst;
}

// F column a minus A column a, as Lagrangian fields: the deformation columns
// as seen by the flow map (equal to u_a at x(xi) for consistent evolutions).
inline std::vector<VectorField> deformation_columns(const FlowMap& map) {
    const Grid& g = map.grid();
    const int d = g.dim();
    std::vector<VectorField> cols(d);
    for (int a = 0; a < d; ++a) {
        cols[a] = VectorField(g, SpaceTag::lagrange);
        for (int i = 0; i < d; ++i) {
            cols[a].comp[i] = map.F[static_cast<std::size_t>(i) * d + a];
            cols[a].comp[i].c[0] -=
                complex(map.A[static_cast<std::size_t>(i) * d + a], 0.0);
        }
    }
    return cols;
}

// Bi-Lipschitz diagnostic: pointwise Frobenius norms of F and F^{-1}.
struct BiLipschitzReport {
    double sup_forward = 0; // max |F|
    double sup_inverse = 0; // max |F^{-1}|
    double det_residual = 0;
};

inline BiLipschitzReport bi_lipschitz(const FlowMap& map) {
    const Grid& g = map.grid();
    const int d = g.dim();
    std::vector<std::vector<double>> F(static_cast<std::size_t>(d) * d);
    for (int ia = 0; ia < d * d; ++ia) F[ia] = to_physical(map.F[ia]);
    BiLipschitzReport rep;
    std::vector<double> M(static_cast<std::size_t>(d) * d), Minv(static_cast<std::size_t>(d) * d);
    for (std::size_t q = 0; q < g.size(); ++q) {
        for (int ia = 0; ia < d * d; ++ia) M[ia] = F[ia][q];
        rep.det_residual = std::max(rep.det_residual, std::abs(mat_det(M, d) - 1.0));
        detail::mat_invert(M.data(), Minv.data(), d);
        double nf = 0, ni = 0;
        for (int ia = 0; ia < d * d; ++ia) {
            nf += M[ia] * M[ia];
            ni += Minv[ia] * Minv[ia];
        }
        rep.sup_forward = std::max(rep.sup_forward, std::sqrt(nf));
        rep.sup_inverse = std::max(rep.sup_inverse, std::sqrt(ni));
    }
    return rep;
}

// ---------------------------------------------------------------- transfer

// f^L(xi) = f^E(x(xi)): composition with the map, sampled on the xi-grid.
inline SpectralField pull_back(const SpectralField& f_euler, const FlowMap& map,
                               InterpolationMode mode = InterpolationMode::cubic) {
    const Grid& g = map.grid();
    if (!g.compatible(f_euler.grid)) throw Error("pull_back: grid mismatch");
    const int d = g.dim();
    detail::FieldInterpolant interp(f_euler, mode);
    std::vector<std::vector<double>> phi(d);
    for (int i = 0; i < d; ++i) phi[i] = to_physical(map.displacement.comp[i]);
    std::vector<double> vals(g.size());
    double xi[3], x[3];
    for (std::size_t q = 0; q < g.size(); ++q) {
        g.point(q, xi);
        for (int i = 0; i < d; ++i) {
            x[i] = phi[i][q];
            for (int a = 0; a < d; ++a) x[i] += map.A[static_cast<std::size_t>(i) * d + a] * xi[a];
        }
        vals[q] = interp(x);
    }
    return from_physical(g, vals, SpaceTag::lagrange);
}

namespace detail {

// Damped Newton solve of A xi + phi(xi) = x_target, started at A^{-1} x.
inline void invert_map(const FlowMap& map,
                       const std::vector<FieldInterpolant>& phi_interp,
                       const std::vector<FieldInterpolant>& F_interp, const double* x_target,
                       double* xi_out) {
    const int d = map.dim();
    const double L = map.grid().L();
    double Ainv[9];
    mat_invert(map.A.data(), Ainv, d);

    double xi[3];
    for (int i = 0; i < d; ++i) {
        xi[i] = 0;
        for (int j = 0; j < d; ++j) xi[i] += Ainv[static_cast<std::size_t>(i) * d + j] * x_target[j];
    }

    auto residual = [&](const double* z, double* r) {
        double nr = 0;
        for (int i = 0; i < d; ++i) {
            r[i] = -x_target[i] + phi_interp[i](z);
            for (int a = 0; a < d; ++a) r[i] += map.A[static_cast<std::size_t>(i) * d + a] * z[a];
            nr += r[i] * r[i];
        }
        return std::sqrt(nr);
    };

    double r[3];
    double rn = residual(xi, r);
    const double tol = 1e-10 * L;
    for (int iter = 0; iter < 20; ++iter) {
        if (rn < tol) {
            for (int i = 0; i < d; ++i) xi_out[i] = xi[i];
            return;
        }
        double J[9], Jinv[9];
        for (int i = 0; i < d; ++i)
            for (int a = 0; a < d; ++a)
                J[static_cast<std::size_t>(i) * d + a] =
                    F_interp[static_cast<std::size_t>(i) * d + a](xi);
        mat_invert(J, Jinv, d);
        double p[3];
        for (int a = 0; a < d; ++a) {
            p[a] = 0;
            for (int i = 0; i < d; ++i) p[a] -= Jinv[static_cast<std::size_t>(a) * d + i] * r[i];
        }
        double lambda = 1.0;
        double trial[3], rt[3];
        double rtn = 0;
        for (int back = 0; back < 6; ++back) {
            for (int a = 0; a < d; ++a) trial[a] = xi[a] + lambda * p[a];
            rtn = residual(trial, rt);
            if (rtn < rn) break;
            lambda *= 0.5;
        }
        if (rtn >= rn && rn >= tol) {
            // no progress possible; fall through to the iteration bound
        }
        for (int a = 0; a < d; ++a) xi[a] = trial[a];
        for (int i = 0; i < d; ++i) r[i] = rt[i];
        rn = rtn;
    }
    if (rn >= tol)
        throw InversionDiverged("push_forward: Newton residual " + std::to_string(rn) +
                                " after 20 iterations");
    for (int i = 0; i < d; ++i) xi_out[i] = xi[i];
}

} // namespace detail

// f^E(x) = f^L(xi(x)): inverts the map per grid point by damped Newton.
inline SpectralField push_forward(const SpectralField& f_lagrange, const FlowMap& map,
                                  InterpolationMode mode = InterpolationMode::cubic) {
    const Grid& g = map.grid();
    if (!g.compatible(f_lagrange.grid)) throw Error("push_forward: grid mismatch");
    const int d = g.dim();
    detail::FieldInterpolant interp(f_lagrange, mode);
    std::vector<detail::FieldInterpolant> phi_interp(d), F_interp(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        phi_interp[i] = detail::FieldInterpolant(map.displacement.comp[i], mode);
    for (int ia = 0; ia < d * d; ++ia)
        F_interp[ia] = detail::FieldInterpolant(map.F[ia], mode);

    std::vector<double> vals(g.size());
    double x[3], xi[3];
    for (std::size_t q = 0; q < g.size(); ++q) {
        g.point(q, x);
        detail::invert_map(map, phi_interp, F_interp, x, xi);
        vals[q] = interp(xi);
    }
    return from_physical(g, vals, SpaceTag::euler);
}

// ---------------------------------------------------------------- norm checks

// Coordinate-comparison inequalities for a function seen in both systems.
// The comparison constants are powers of the sup of the full deformation
// columns v_a = A_a + u_a; the 1 < theta < 2 case additionally involves
// |u_a|_inf and the L^d norm of grad u_a.
enum class TransferKind {
    gagliardo,         // 0 < r < 1, 2 <= p <= inf
    hom_sobolev_low,   // 0 <= theta <= 1
    hom_sobolev_high,  // 1 < theta < 2 (forward direction only)
};

struct NormTransferReport {
    double lagrange_norm = 0;
    double euler_norm = 0;
    double sup_va = 0;           // max_a sup |A_a + u_a|
    double forward_factor = 1;   // lagrange <= C * factor * euler
    double backward_factor = 1;  // euler <= C * factor * lagrange
    double forward_ratio = 0;    // lagrange / (factor * euler)
    double backward_ratio = 0;   // euler / (factor * lagrange)
};

namespace detail {

inline double sup_deformation_columns(const StateBundle& s) {
    const int d = s.dim();
    double worst = 0;
    for (int a = 0; a < d; ++a) {
        std::vector<std::vector<double>> comp(d);
        for (int i = 0; i < d; ++i) comp[i] = to_physical(s.u[a].comp[i]);
        for (std::size_t q = 0; q < comp[0].size(); ++q) {
            double nrm = 0;
            for (int i = 0; i < d; ++i) {
                const double v = comp[i][q] + s.A[static_cast<std::size_t>(i) * d + a];
                nrm += v * v;
            }
            worst = std::max(worst, std::sqrt(nrm));
        }
    }
    return worst;
}

inline double sup_u_columns(const StateBundle& s) {
    double worst = 0;
    for (const auto& ua : s.u) worst = std::max(worst, sup_norm(ua));
    return worst;
}

// max_a || |grad u_a| ||_{L^d}
inline double grad_u_ld(const StateBundle& s) {
    const Grid& g = s.grid();
    const int d = g.dim();
    double worst = 0;
    for (int a = 0; a < d; ++a) {
        std::vector<std::vector<double>> parts;
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i)
                parts.push_back(to_physical(derivative(j, s.u[a].comp[i])));
        std::vector<double> mag(g.size());
        for (std::size_t q = 0; q < g.size(); ++q) {
            double acc = 0;
            for (const auto& p : parts) acc += p[q] * p[q];
            mag[q] = std::sqrt(acc);
        }
        SpectralField m = from_physical(g, mag, SpaceTag::euler);
        worst = std::max(worst, lp_norm(m, static_cast<double>(d)));
    }
    return worst;
}

} // namespace detail

inline NormTransferReport norm_transfer_check(const SpectralField& f_euler, const FlowMap& map,
                                              const StateBundle& state, TransferKind kind,
                                              double exponent, double p = 2.0,
                                              InterpolationMode mode = InterpolationMode::cubic) {
    const int d = map.dim();
    NormTransferReport rep;
    rep.sup_va = detail::sup_deformation_columns(state);

    SpectralField fL = pull_back(f_euler, map, mode);
    SpectralField fE = f_euler;
    set_mean_zero(fL);
    set_mean_zero(fE);

    switch (kind) {
    case TransferKind::gagliardo: {
        if (!(exponent > 0.0 && exponent < 1.0))
            throw InadmissibleParameters("norm_transfer_check: need 0 < r < 1");
        if (p < 2.0)
            throw InadmissibleParameters("norm_transfer_check: need p >= 2");
        const NormRequest req = NormRequest::gagliardo(exponent, p);
        rep.lagrange_norm = norm(fL, req);
        rep.euler_norm = norm(fE, req);
        rep.forward_factor = std::pow(rep.sup_va, exponent);
        rep.backward_factor = std::pow(rep.sup_va, (d - 1) * exponent);
        break;
    }
    case TransferKind::hom_sobolev_low: {
        if (!(exponent >= 0.0 && exponent <= 1.0))
            throw InadmissibleParameters("norm_transfer_check: need 0 <= theta <= 1");
        const NormRequest req = NormRequest::hom_sobolev(exponent);
        rep.lagrange_norm = norm(fL, req);
        rep.euler_norm = norm(fE, req);
        rep.forward_factor = std::pow(rep.sup_va, exponent);
        rep.backward_factor = std::pow(rep.sup_va, (d - 1) * exponent);
        break;
    }
    case TransferKind::hom_sobolev_high: {
        if (!(exponent > 1.0 && exponent < 2.0))
            throw InadmissibleParameters("norm_transfer_check: need 1 < theta < 2");
        const NormRequest req = NormRequest::hom_sobolev(exponent);
        rep.lagrange_norm = norm(fL, req);
        rep.euler_norm = norm(fE, req);
        const double supu = detail::sup_u_columns(state);
        const double gld = detail::grad_u_ld(state);
        rep.forward_factor =
            std::pow(rep.sup_va, exponent - 1.0) *
            (rep.sup_va + std::pow(supu, 2.0 - exponent) * std::pow(gld, exponent - 1.0));
        rep.backward_factor = 0; // not provided in this regime
        break;
    }
    }
    rep.forward_ratio = (rep.euler_norm > 0 && rep.forward_factor > 0)
                            ? rep.lagrange_norm / (rep.forward_factor * rep.euler_norm)
                            : 0.0;
    rep.backward_ratio = (rep.lagrange_norm > 0 && rep.backward_factor > 0)
                             ? rep.euler_norm / (rep.backward_factor * rep.lagrange_norm)
                             : 0.0;
    return rep;
}

} // namespace nhsp

#endif // NHSP_FLOW_MAP_HPP
