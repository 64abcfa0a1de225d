// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT
//
// Inequality-lab tests: parameter bookkeeping against closed forms, exact
// scaling/homogeneity structure of the interpolation ratios, a two-mode
// commutator oracle, dispersive horizon sweeps (including the concentrated
// single-mode growth that broadband data avoids), chain-monitor quadrature
// against hand integrals, and report serialization.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "nhsp/lab.hpp"

#include "helpers.hpp"

using nhsp::ChainReport;
using nhsp::complex;
using nhsp::CorpusSpec;
using nhsp::DerivedParams;
using nhsp::Grid;
using nhsp::InadmissibleParameters;
using nhsp::InequalityCase;
using nhsp::make_grid;
using nhsp::NormRequest;
using nhsp::p_infinity;
using nhsp::param_check;
using nhsp::RatioReport;
using nhsp::SpectralField;
using nhsp::TrajectorySample;
using nhsp::VectorField;

namespace {

InequalityCase small_case_2d(int form) {
    InequalityCase c;
    c.id = "small-2d";
    c.d = 2;
    c.r = 0.25;
    c.p = p_infinity;
    c.theta = 1.0;
    c.form = form;
    c.corpus.n = 32;
    c.corpus.samples = 6;
    c.corpus.slope = 3.0;
    c.corpus.band_lo = 0.5;
    c.corpus.band_hi = 8.0;
    return c;
}

InequalityCase small_case_3d(int form) {
    InequalityCase c;
    c.id = "small-3d";
    c.d = 3;
    c.r = 0.9;
    c.p = 4.0;
    c.theta = 1.4;
    c.form = form;
    c.corpus.n = 16;
    c.corpus.samples = 4;
    c.corpus.slope = 3.0;
    c.corpus.band_lo = 0.5;
    c.corpus.band_hi = 5.0;
    return c;
}

} // namespace

TEST_CASE("derived parameters match closed forms", "[lab][params]") {
    SECTION("d = 2 at the sup endpoint") {
        const DerivedParams dp = param_check(2, 0.25, p_infinity);
        CHECK(dp.theta == Catch::Approx(1.0).epsilon(1e-14));
        CHECK(dp.s == Catch::Approx(2.0).epsilon(1e-14));
        CHECK(dp.q_time == Catch::Approx(4.0).epsilon(1e-14));
        CHECK(std::isnan(dp.h));
        CHECK(dp.vort_exponent == Catch::Approx(32.0 / 9.0).epsilon(1e-14));
        CHECK(dp.vort_outer == Catch::Approx(0.25).epsilon(1e-14));
        CHECK(dp.grad_exponent == Catch::Approx(4.0).epsilon(1e-14));
        CHECK(dp.gamma1 == Catch::Approx(1.0 / 9.0).epsilon(1e-13));
        CHECK(dp.gamma2 == Catch::Approx(5.0 / 9.0).epsilon(1e-13));
        CHECK(dp.s0 == Catch::Approx(1.75).epsilon(1e-14));
        CHECK(dp.kappa == Catch::Approx((std::sqrt(65.0) - 7.0) / 8.0).epsilon(1e-14));
        CHECK(dp.s1 == Catch::Approx(1.75 + (std::sqrt(65.0) - 7.0) / 8.0).epsilon(1e-14));
        // the larger threshold solves kappa^2 + (7/4) kappa - 1/4 = 0
        CHECK(dp.kappa * dp.kappa + 1.75 * dp.kappa - 0.25 ==
              Catch::Approx(0.0).margin(1e-14));
    }

    SECTION("d = 3 at p = 4") {
        const DerivedParams dp = param_check(3, 0.9, 4.0);
        CHECK(dp.theta == Catch::Approx(1.4).epsilon(1e-14));
        CHECK(dp.s == Catch::Approx(2.4).epsilon(1e-14));
        CHECK(dp.h == Catch::Approx(0.15).epsilon(1e-13));
        CHECK(dp.q_time == Catch::Approx(4.0).epsilon(1e-14));
        CHECK(dp.vort_exponent == Catch::Approx(4.0).epsilon(1e-14));
        CHECK(dp.vort_outer == Catch::Approx(0.25).epsilon(1e-14));
        CHECK(dp.grad_exponent == Catch::Approx(4.24).epsilon(1e-13));
        CHECK(dp.gamma1 == Catch::Approx(0.15 / 2.65).epsilon(1e-13));
        CHECK(dp.gamma2 == Catch::Approx(1.15 / 2.65).epsilon(1e-13));
        CHECK(dp.s0 == Catch::Approx(2.0).epsilon(1e-14));
        CHECK(dp.kappa == Catch::Approx(std::sqrt(1.5) - 1.0).epsilon(1e-14));
        CHECK(dp.s1 == Catch::Approx(1.0 + std::sqrt(1.5)).epsilon(1e-14));
        CHECK(dp.s1 == Catch::Approx(dp.s0 + dp.kappa).epsilon(1e-14));
        // the threshold solves kappa^2 + 2 kappa - 1/2 = 0
        CHECK(dp.kappa * dp.kappa + 2.0 * dp.kappa - 0.5 ==
              Catch::Approx(0.0).margin(1e-14));
    }

    SECTION("p = 2 endpoint degenerates gracefully") {
        const DerivedParams dp = param_check(2, 0.5, 2.0);
        CHECK(dp.theta == Catch::Approx(0.5).epsilon(1e-14));
        CHECK(std::isinf(dp.q_time));  // sup-in-time endpoint
        CHECK(std::isnan(dp.gamma1));  // r <= d/p: no sup interpolation window
        CHECK(dp.gamma2 == Catch::Approx(0.5 / 1.5).epsilon(1e-13));
    }

    SECTION("inadmissible combinations are refused by name") {
        CHECK_THROWS_AS(param_check(1, 0.25, p_infinity), InadmissibleParameters);
        CHECK_THROWS_AS(param_check(4, 0.25, p_infinity), InadmissibleParameters);
        CHECK_THROWS_AS(param_check(2, 0.25, 1.5), InadmissibleParameters);
        CHECK_THROWS_AS(param_check(2, 0.0, p_infinity), InadmissibleParameters);
        CHECK_THROWS_AS(param_check(2, 1.0, p_infinity), InadmissibleParameters);
        CHECK_THROWS_AS(param_check(3, 0.9, p_infinity), InadmissibleParameters);
        CHECK_THROWS_AS(param_check(3, 0.7, 4.0), InadmissibleParameters);  // r <= 3/p
        CHECK_THROWS_AS(param_check(2, 0.3, p_infinity), InadmissibleParameters);  // theta > 1
    }
}

TEST_CASE("scaling dimensions agree on both sides", "[lab][scaling]") {
    // Under v -> v(lambda x) both sides of each interpolation estimate must
    // carry the same power of lambda; the exponent identity is arithmetic.
    for (double r : {0.1, 0.25}) {
        for (int form : {1, 2}) {
            const auto dims = nhsp::riesz_scaling_dims(2, r, p_infinity, r + 0.75, form);
            CHECK(dims.lhs == Catch::Approx(dims.rhs).margin(1e-12));
        }
    }
    for (double theta : {0.5, 1.0}) {
        const auto dims = nhsp::riesz_scaling_dims(2, 0.25, p_infinity, theta, 3);
        CHECK(dims.lhs == Catch::Approx(dims.rhs).margin(1e-12));
    }
    for (double p : {4.0, 8.0}) {
        for (double r : {0.8, 0.9}) {
            for (int form : {1, 2}) {
                const auto dims = nhsp::riesz_scaling_dims(3, r, p, 1.4, form);
                CHECK(dims.lhs == Catch::Approx(dims.rhs).margin(1e-12));
            }
        }
    }
    for (double theta : {0.8, 1.4}) {
        const auto dims = nhsp::riesz_scaling_dims(3, 0.9, 4.0, theta, 3);
        CHECK(dims.lhs == Catch::Approx(dims.rhs).margin(1e-12));
    }
    CHECK_THROWS_AS(nhsp::riesz_scaling_dims(2, 0.25, p_infinity, 1.0, 0),
                    InadmissibleParameters);
}

TEST_CASE("complex projections split coefficient-wise sums", "[lab][complex]") {
    const Grid g = make_grid(2, 16, 2.0 * M_PI);
    const SpectralField f = nhsp_tests::random_real_field(g, 11, 2.0, 0.5, 6.0);
    const SpectralField h = nhsp_tests::random_real_field(g, 12, 2.0, 0.5, 6.0);
    SpectralField w(g);
    for (std::size_t q = 0; q < w.c.size(); ++q) w.c[q] = f.c[q] + complex(0.0, 1.0) * h.c[q];

    SpectralField re = nhsp::real_part(w);
    SpectralField im = nhsp::imag_part(w);
    nhsp::axpy(re, -1.0, f);
    nhsp::axpy(im, -1.0, h);
    const double scale = std::max(nhsp::max_abs_coeff(f), nhsp::max_abs_coeff(h));
    CHECK(nhsp::max_abs_coeff(re) < 1e-14 * scale);
    CHECK(nhsp::max_abs_coeff(im) < 1e-14 * scale);

    const double combined = nhsp::complex_norm(w, NormRequest::Lp(2.0));
    const double expected = std::hypot(nhsp::l2_norm(f), nhsp::l2_norm(h));
    CHECK(combined == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("dilation by period reinterpretation scales norms exactly", "[lab][scaling]") {
    const Grid g = make_grid(2, 32, 2.0 * M_PI);
    SpectralField f = nhsp::detail::stable_random_field(g, 5, 2.5, 0.5, 8.0);
    const SpectralField f2 = nhsp::dilate_reinterpret(f, 2);

    CHECK(f2.grid.L() == Catch::Approx(M_PI).epsilon(1e-15));
    // samples are unchanged; only the measure and wavenumbers rescale
    CHECK(nhsp::sup_norm(f2) == Catch::Approx(nhsp::sup_norm(f)).epsilon(1e-13));
    CHECK(nhsp::lp_norm(f2, 2.0) ==
          Catch::Approx(0.5 * nhsp::lp_norm(f, 2.0)).epsilon(1e-12));
    CHECK(nhsp::lp_norm(f2, 4.0) ==
          Catch::Approx(std::pow(2.0, -0.5) * nhsp::lp_norm(f, 4.0)).epsilon(1e-12));
    CHECK(nhsp::norm(f2, NormRequest::hom_sobolev(0.8)) ==
          Catch::Approx(std::pow(2.0, 0.8 - 1.0) *
                        nhsp::norm(f, NormRequest::hom_sobolev(0.8))).epsilon(1e-12));
    CHECK(nhsp::norm(f2, NormRequest::holder_dot(0.25)) ==
          Catch::Approx(std::pow(2.0, 0.25) *
                        nhsp::norm(f, NormRequest::holder_dot(0.25))).epsilon(1e-12));
    CHECK(nhsp::norm(f2, NormRequest::hom_besov(0.25, 4.0, 4.0)) ==
          Catch::Approx(std::pow(2.0, 0.25 - 0.5) *
                        nhsp::norm(f, NormRequest::hom_besov(0.25, 4.0, 4.0))).epsilon(1e-12));

    const SpectralField df = nhsp::derivative(0, f);
    const SpectralField df2 = nhsp::derivative(0, f2);
    CHECK(nhsp::sup_norm(df2) == Catch::Approx(2.0 * nhsp::sup_norm(df)).epsilon(1e-12));

    CHECK_THROWS_AS(nhsp::dilate_reinterpret(f, 0), InadmissibleParameters);
}

TEST_CASE("interpolation ratios are amplitude- and dilation-invariant", "[lab][riesz]") {
    const Grid g = make_grid(2, 32, 2.0 * M_PI);
    const InequalityCase c = small_case_2d(1);
    VectorField v = nhsp::detail::corpus_velocity(g, c.corpus, 3);

    const auto base = nhsp::detail::riesz_sides(v, c);
    REQUIRE(base.rhs > 0);

    SECTION("amplitude homogeneity is exact") {
        VectorField v2 = v;
        nhsp::scale(v2, complex(2.0, 0.0));
        const auto doubled = nhsp::detail::riesz_sides(v2, c);
        CHECK(doubled.lhs / doubled.rhs ==
              Catch::Approx(base.lhs / base.rhs).epsilon(1e-12));
    }

    SECTION("dilation invariance holds to rounding") {
        const VectorField vd = nhsp::dilate_reinterpret(v, 2);
        const auto dilated = nhsp::detail::riesz_sides(vd, c);
        CHECK(dilated.lhs / dilated.rhs ==
              Catch::Approx(base.lhs / base.rhs).epsilon(1e-9));
    }

    SECTION("the sup-form ratio is dilation-invariant too") {
        const InequalityCase c2 = small_case_2d(2);
        const auto b2 = nhsp::detail::riesz_sides(v, c2);
        const auto d2 = nhsp::detail::riesz_sides(nhsp::dilate_reinterpret(v, 2), c2);
        CHECK(d2.lhs / d2.rhs == Catch::Approx(b2.lhs / b2.rhs).epsilon(1e-9));
    }

    SECTION("the Sobolev-form ratio is dilation-invariant too") {
        const InequalityCase c3 = small_case_2d(3);
        const auto b3 = nhsp::detail::riesz_sides(v, c3);
        const auto d3 = nhsp::detail::riesz_sides(nhsp::dilate_reinterpret(v, 2), c3);
        CHECK(d3.lhs / d3.rhs == Catch::Approx(b3.lhs / b3.rhs).epsilon(1e-9));
    }
}

TEST_CASE("interpolation corpus reports are finite and refinement-stable", "[lab][riesz]") {
    SECTION("d = 2, all three forms") {
        for (int form : {1, 2, 3}) {
            const RatioReport rep = nhsp::check_riesz_interpolation(small_case_2d(form));
            INFO("form " << form << " max ratio " << rep.max_ratio << " slope "
                         << rep.refinement_slope);
            CHECK(rep.finite());
            CHECK(rep.samples.size() == 6);
            CHECK(rep.max_ratio > 1e-3);
            CHECK(rep.max_ratio < 50.0);
            CHECK(std::abs(rep.refinement_slope) < 0.3);
            for (const auto& s : rep.samples) {
                CHECK(s.ratio > 0);
                CHECK(s.lhs <= 50.0 * s.rhs);
            }
        }
    }

    SECTION("d = 3, gradient and sup forms") {
        for (int form : {1, 2}) {
            const RatioReport rep = nhsp::check_riesz_interpolation(small_case_3d(form));
            INFO("form " << form << " max ratio " << rep.max_ratio << " slope "
                         << rep.refinement_slope);
            CHECK(rep.finite());
            CHECK(rep.max_ratio > 1e-3);
            CHECK(rep.max_ratio < 50.0);
            CHECK(std::abs(rep.refinement_slope) < 0.4);
        }
    }

    SECTION("structured corpora run through the same pipeline") {
        InequalityCase c = small_case_2d(1);
        c.corpus.kind = CorpusSpec::Kind::shear;
        c.corpus.samples = 2;
        CHECK(nhsp::check_riesz_interpolation(c).finite());
        c.corpus.kind = CorpusSpec::Kind::bump;
        CHECK(nhsp::check_riesz_interpolation(c).finite());
        c.corpus.kind = CorpusSpec::Kind::single_mode;
        CHECK(nhsp::check_riesz_interpolation(c).finite());
    }

    SECTION("parameter guards") {
        InequalityCase c = small_case_2d(1);
        c.form = 0;
        CHECK_THROWS_AS(nhsp::check_riesz_interpolation(c), InadmissibleParameters);
        c = small_case_3d(1);
        c.p = p_infinity;
        CHECK_THROWS_AS(nhsp::check_riesz_interpolation(c), InadmissibleParameters);
        c = small_case_3d(1);
        c.r = 0.5;  // below 3/p
        CHECK_THROWS_AS(nhsp::check_riesz_interpolation(c), InadmissibleParameters);
        c = small_case_2d(3);
        c.theta = 1.2;
        CHECK_THROWS_AS(nhsp::check_riesz_interpolation(c), InadmissibleParameters);
        c = small_case_3d(3);
        c.theta = 0.4;
        CHECK_THROWS_AS(nhsp::check_riesz_interpolation(c), InadmissibleParameters);
    }
}

TEST_CASE("commutator vanishes for constant transport velocity", "[lab][commutator]") {
    const Grid g = make_grid(2, 32, 2.0 * M_PI);
    const double theta = 0.8;
    VectorField v(g);
    v.comp[0].c[0] = complex(1.2, 0.0);
    v.comp[1].c[0] = complex(-0.7, 0.0);
    const SpectralField f = nhsp_tests::random_real_field(g, 21, 2.5, 0.5, 8.0);

    auto transport = [&](const SpectralField& scalar) {
        std::vector<double> acc(g.size(), 0.0);
        for (int k = 0; k < 2; ++k) {
            const std::vector<double> pv = nhsp::to_physical(v.comp[k]);
            const std::vector<double> pd = nhsp::to_physical(nhsp::derivative(k, scalar));
            for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += pv[q] * pd[q];
        }
        return nhsp::dealias(nhsp::from_physical(g, acc, scalar.tag));
    };

    const SpectralField Df = nhsp::fractional_power(theta, nhsp::PotentialKind::riesz, f);
    SpectralField comm = nhsp::fractional_power(theta, nhsp::PotentialKind::riesz, transport(f));
    nhsp::axpy(comm, -1.0, transport(Df));
    CHECK(nhsp::max_abs_coeff(comm) < 1e-12 * nhsp::max_abs_coeff(Df));
}

TEST_CASE("commutator matches the two-mode closed form", "[lab][commutator]") {
    // v = (cos x2, 0) and g = 2 cos x1 put the transport product entirely on
    // the |k| = sqrt(2) shell while D^theta g = g, so the commutator is
    // exactly (2^{theta/2} - 1) times the product.
    const Grid g = make_grid(2, 16, 2.0 * M_PI);
    VectorField v(g);
    {
        int up[2] = {0, 1}, dn[2] = {0, g.n() - 1};
        v.comp[0].c[g.encode(up)] = complex(0.5, 0.0);
        v.comp[0].c[g.encode(dn)] = complex(0.5, 0.0);
    }
    SpectralField f(g);
    {
        int up[2] = {1, 0}, dn[2] = {g.n() - 1, 0};
        f.c[g.encode(up)] = complex(1.0, 0.0);
        f.c[g.encode(dn)] = complex(1.0, 0.0);
    }

    auto transport = [&](const SpectralField& scalar) {
        std::vector<double> acc(g.size(), 0.0);
        for (int k = 0; k < 2; ++k) {
            const std::vector<double> pv = nhsp::to_physical(v.comp[k]);
            const std::vector<double> pd = nhsp::to_physical(nhsp::derivative(k, scalar));
            for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += pv[q] * pd[q];
        }
        return nhsp::dealias(nhsp::from_physical(g, acc, scalar.tag));
    };

    for (double theta : {0.6, 1.0}) {
        const SpectralField product = transport(f);
        const SpectralField Df = nhsp::fractional_power(theta, nhsp::PotentialKind::riesz, f);
        SpectralField comm =
            nhsp::fractional_power(theta, nhsp::PotentialKind::riesz, product);
        nhsp::axpy(comm, -1.0, transport(Df));
        const double expected =
            (std::pow(2.0, 0.5 * theta) - 1.0) * nhsp::l2_norm(product);
        CHECK(nhsp::l2_norm(comm) == Catch::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("commutator corpus report stays bounded under refinement", "[lab][commutator]") {
    InequalityCase c = small_case_2d(1);
    c.id = "commutator-2d";
    c.theta = 1.0;
    const RatioReport rep = nhsp::check_kato_ponce(c);
    INFO("max ratio " << rep.max_ratio << " slope " << rep.refinement_slope);
    CHECK(rep.finite());
    CHECK(rep.max_ratio > 1e-4);
    CHECK(rep.max_ratio < 10.0);
    CHECK(std::abs(rep.refinement_slope) < 0.5);

    InequalityCase bad = c;
    bad.theta = 0.0;
    CHECK_THROWS_AS(nhsp::check_kato_ponce(bad), InadmissibleParameters);
}

TEST_CASE("dispersive sweep: broadband data is horizon-stable, concentrated data is not",
          "[lab][dispersive]") {
    SECTION("single-mode data grows like T^{1/q}") {
        InequalityCase c = small_case_2d(1);
        c.id = "dispersive-mode-2d";
        c.corpus.kind = CorpusSpec::Kind::single_mode;
        c.corpus.samples = 2;
        c.samples_per_unit_time = 20;
        const RatioReport rep = nhsp::check_strichartz(c);
        INFO("single-mode horizon slope " << rep.refinement_slope);
        CHECK(rep.finite());
        // a single shell has no dispersive spreading: the space-time norm
        // accumulates at the full T^{1/4} rate (q = 4 here)
        CHECK(rep.refinement_slope > 0.12);
    }

    SECTION("random phases are statistically stationary, hence grow") {
        InequalityCase c = small_case_2d(1);
        c.id = "dispersive-random-2d";
        c.corpus.samples = 4;
        c.corpus.band_hi = 10.0;
        c.samples_per_unit_time = 20;
        const RatioReport rep = nhsp::check_strichartz(c);
        INFO("random-phase horizon slope " << rep.refinement_slope);
        CHECK(rep.finite());
        // phase rotation preserves the random-phase distribution: the
        // integrand is statistically constant, so the ratio accumulates at
        // nearly the full T^{1/4} rate just like a single mode
        CHECK(rep.refinement_slope > 0.12);
    }

    SECTION("coherent packets d = 2") {
        InequalityCase c = small_case_2d(1);
        c.id = "dispersive-2d";
        c.corpus.kind = CorpusSpec::Kind::bump;
        c.corpus.samples = 6;
        c.corpus.band_lo = 2.0;
        c.corpus.band_hi = 10.0;
        c.corpus.slope = 1.0;
        c.samples_per_unit_time = 20;
        const RatioReport rep = nhsp::check_strichartz(c);
        INFO("coherent horizon slope " << rep.refinement_slope << " max ratio "
                                       << rep.max_ratio);
        CHECK(rep.finite());
        CHECK(rep.max_ratio > 0);
        CHECK(rep.samples.size() == 6 * 3);
        CHECK(std::abs(rep.refinement_slope) < 0.15);
    }

    SECTION("coherent packets d = 3") {
        InequalityCase c = small_case_3d(1);
        c.id = "dispersive-3d";
        c.corpus.kind = CorpusSpec::Kind::bump;
        c.corpus.samples = 3;
        c.corpus.band_lo = 2.0;
        c.corpus.band_hi = 5.0;
        c.corpus.slope = 1.0;
        c.samples_per_unit_time = 16;
        const RatioReport rep = nhsp::check_strichartz(c);
        INFO("3d horizon slope " << rep.refinement_slope << " max ratio " << rep.max_ratio);
        CHECK(rep.finite());
        CHECK(std::abs(rep.refinement_slope) < 0.15);
    }

    SECTION("forced evolution stays bounded against the Duhamel budget") {
        InequalityCase c = small_case_2d(1);
        c.id = "dispersive-forced-2d";
        c.corpus.samples = 2;
        c.forcing_amplitude = 0.5;
        c.samples_per_unit_time = 12;
        c.horizons = {1.0, 2.0};
        const RatioReport rep = nhsp::check_strichartz(c);
        INFO("forced horizon slope " << rep.refinement_slope << " max ratio "
                                     << rep.max_ratio);
        CHECK(rep.finite());
        CHECK(rep.max_ratio < 10.0);
        CHECK(rep.refinement_slope < 0.15);
    }

    SECTION("parameter guards") {
        InequalityCase c = small_case_2d(1);
        c.horizons = {};
        CHECK_THROWS_AS(nhsp::check_strichartz(c), InadmissibleParameters);
        c = small_case_2d(1);
        c.samples_per_unit_time = 1;
        CHECK_THROWS_AS(nhsp::check_strichartz(c), InadmissibleParameters);
        c = small_case_3d(1);
        c.p = p_infinity;
        CHECK_THROWS_AS(nhsp::check_strichartz(c), InadmissibleParameters);
    }
}

TEST_CASE("chain monitor quadrature matches hand integrals", "[lab][chain]") {
    const DerivedParams dp = param_check(2, 0.25, p_infinity);

    SECTION("guards") {
        CHECK_THROWS_AS(nhsp::check_apriori_chain({TrajectorySample{}}, dp),
                        InadmissibleParameters);
        std::vector<TrajectorySample> bad(2);
        bad[0].t = 1.0;
        bad[1].t = 0.5;
        CHECK_THROWS_AS(nhsp::check_apriori_chain(bad, dp), InadmissibleParameters);
    }

    SECTION("identically zero norms floor at the tropical bracket") {
        std::vector<TrajectorySample> hist(2);
        hist[0].t = 0.0;
        hist[1].t = 1.0;
        const ChainReport rep = nhsp::check_apriori_chain(hist, dp);
        CHECK(rep.finite);
        CHECK(rep.y_final == Catch::Approx(1.0).epsilon(1e-14));
        CHECK(rep.vort_integral == 0.0);
        CHECK(rep.grad_integral == 0.0);
        CHECK(rep.z_final == Catch::Approx(1.0).epsilon(1e-14));
    }

    SECTION("constant trajectory closed form") {
        std::vector<TrajectorySample> hist(3);
        for (int i = 0; i < 3; ++i) {
            hist[i].t = 0.5 * i;
            hist[i].vort_seminorm = 2.0;
            hist[i].grad_sup_V = 1.0;
            hist[i].sup_Omega = 1.0;
            hist[i].sobolev_Omega = 3.0;
        }
        const ChainReport rep = nhsp::check_apriori_chain(hist, dp);
        CHECK(rep.y_final == Catch::Approx(std::pow(2.0, 8.0 / 9.0)).epsilon(1e-13));
        CHECK(rep.vort_integral == Catch::Approx(std::pow(2.0, 8.0 / 9.0)).epsilon(1e-13));
        CHECK(rep.grad_integral == Catch::Approx(2.0).epsilon(1e-13));
        CHECK(rep.z_final == Catch::Approx(3.0).epsilon(1e-14));
    }

    SECTION("linear ramp against the exact power integral") {
        const int m = 400;
        std::vector<TrajectorySample> hist(m + 1);
        for (int i = 0; i <= m; ++i) {
            hist[i].t = static_cast<double>(i) / m;
            hist[i].vort_seminorm = hist[i].t;
        }
        const ChainReport rep = nhsp::check_apriori_chain(hist, dp);
        const double e = dp.vort_exponent;  // 32/9
        CHECK(rep.vort_integral ==
              Catch::Approx(std::pow(1.0 / (e + 1.0), 0.25)).epsilon(1e-3));
        // the bracket floors the ramp at 1 on [0, 1], so the tropical
        // variant integrates the constant 1 exactly
        CHECK(rep.y_final == Catch::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("chain monitor tracks a short evolved trajectory", "[lab][chain]") {
    const DerivedParams dp = param_check(2, 0.25, p_infinity);
    const Grid g = make_grid(2, 32, 2.0 * M_PI);
    nhsp::InitialDataSpec spec;
    spec.kind = nhsp::InitialDataSpec::Kind::random;
    spec.seed = 4;
    spec.band_hi = 6.0;
    spec.amplitude_v = 0.5;
    spec.amplitude_u = 0.5;
    nhsp::StateBundle state = nhsp::make_initial_data(g, spec);

    nhsp::EvolutionConfig cfg;
    cfg.eps = 0.1;
    cfg.dt = 1e-3;

    std::vector<TrajectorySample> hist;
    hist.push_back(nhsp::chain_sample(state, dp));
    for (int i = 0; i < 5; ++i) {
        state = nhsp::step(state, cfg);
        hist.push_back(nhsp::chain_sample(state, dp));
    }
    REQUIRE(hist.size() == 6);
    CHECK(hist.back().t == Catch::Approx(5e-3).epsilon(1e-12));
    for (const auto& s : hist) {
        CHECK(std::isfinite(s.grad_sup_V));
        CHECK(s.vort_seminorm > 0);
        CHECK(s.sobolev_Omega > 0);
    }

    const ChainReport rep = nhsp::check_apriori_chain(hist, dp);
    CHECK(rep.finite);
    CHECK(rep.y_final > 0);
    CHECK(rep.grad_integral > 0);
    CHECK(rep.z_final >= 1.0);
}

TEST_CASE("ratio reports serialize to parseable JSON", "[lab][report]") {
    InequalityCase c = small_case_2d(2);
    c.id = "json-roundtrip";
    c.corpus.samples = 3;
    const RatioReport rep = nhsp::check_riesz_interpolation(c);
    const nlohmann::json j = nlohmann::json::parse(rep.to_json());
    CHECK(j["id"] == "json-roundtrip");
    CHECK(j["params"]["d"] == 2);
    CHECK(j["params"]["p"] == "inf");
    CHECK(j["samples"].size() == 3);
    CHECK(j["max_ratio"].get<double>() == Catch::Approx(rep.max_ratio));
    CHECK(j["refinement_slope"].get<double>() == Catch::Approx(rep.refinement_slope));
    for (const auto& s : j["samples"]) {
        CHECK(s.contains("seed"));
        CHECK(s["ratio"].get<double>() > 0.0);
    }

    InequalityCase c3 = small_case_3d(2);
    c3.corpus.samples = 2;
    const nlohmann::json j3 =
        nlohmann::json::parse(nhsp::check_riesz_interpolation(c3).to_json());
    CHECK(j3["params"]["p"].get<double>() == Catch::Approx(4.0));
}

TEST_CASE("worker count does not change lab results", "[lab][threads]") {
    InequalityCase c = small_case_2d(1);
    c.corpus.samples = 4;

    setenv("NHSP_THREADS", "1", 1);
    const RatioReport serial = nhsp::check_riesz_interpolation(c);
    setenv("NHSP_THREADS", "4", 1);
    const RatioReport parallel = nhsp::check_riesz_interpolation(c);
    unsetenv("NHSP_THREADS");

    REQUIRE(serial.samples.size() == parallel.samples.size());
    for (std::size_t i = 0; i < serial.samples.size(); ++i) {
        CHECK(serial.samples[i].seed == parallel.samples[i].seed);
        CHECK(serial.samples[i].lhs == parallel.samples[i].lhs);
        CHECK(serial.samples[i].rhs == parallel.samples[i].rhs);
    }
    CHECK(serial.max_ratio == parallel.max_ratio);
}
