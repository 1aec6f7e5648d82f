// Concrete covers: exact volumes, regime tables, boundary continuity,
// scale-nestedness, and the validator battery (including the deliberately
// broken fixture that must fail).

#include <cmath>

#include "doctest.h"

#include "ecov/cover.hpp"
#include "ecov/error.hpp"
#include "ecov/rng.hpp"
#include "ecov/validators.hpp"

using namespace ecov;

TEST_SUITE("cover") {

TEST_CASE("isotropic cover: exact volume and unit shape constants") {
    Cover c = isotropic_cover(3);
    SeededRng rng(0x150u, 0);
    for (int i = 0; i < 200; ++i) {
        Vec x = rng.in_box(Vec(3, -4.0), Vec(3, 4.0));
        double t = rng.uniform(-6.0, 20.0);
        CHECK(volume(c.eval(x, t)) ==
              doctest::Approx(std::exp2(-t)).epsilon(1e-12));
    }
    CHECK(c.params.a1 == doctest::Approx(1.0));
    CHECK(c.params.a2 == doctest::Approx(1.0));
    CHECK(c.params.a4 == doctest::Approx(1.0 / 3.0));
    CHECK(c.params.a6 == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("diagonal cover: anisotropic scaling with exact volume") {
    Cover c = diagonal_cover(Vec{0.75, 0.25});
    Ellipsoid e = c.eval(Vec{1.0, 2.0}, 4.0);
    CHECK(volume(e) == doctest::Approx(M_PI * std::exp2(-4.0)).epsilon(1e-12));
    DiagReduction r = diag_reduce(e.M);
    CHECK(r.D(0, 0) == doctest::Approx(std::exp2(-1.0)).epsilon(1e-12)); // e=0.25
    CHECK(r.D(1, 1) == doctest::Approx(std::exp2(-3.0)).epsilon(1e-12)); // e=0.75
    CHECK_THROWS_AS(diagonal_cover(Vec{0.5, -0.5}), contract_error);
    CHECK_THROWS_AS(diagonal_cover(Vec{0.3, 0.3}), contract_error);
}

TEST_CASE("pointwise-variable cover: area is exactly pi*2^-t in every regime") {
    Cover c = theta0_cover();
    struct Probe {
        double x2, t;
        Theta0Regime want;
    };
    // Transition band at scale t is (2^{-t/2}, 2^{-t/3}]: at t=3 that is
    // (0.3536, 0.7937], at t=5 it is (0.1768, 0.3150].
    const Probe probes[] = {
        {0.7, -2.0, Theta0Regime::large_scale},
        {2.5, 3.0, Theta0Regime::far_field},
        {0.45, 3.0, Theta0Regime::transition},
        {0.0, 5.0, Theta0Regime::near_axis},
        {0.15, 5.0, Theta0Regime::near_axis},
        {0.2, 5.0, Theta0Regime::transition},
    };
    for (const Probe& p : probes) {
        CHECK(theta0_regime(p.x2, p.t) == p.want);
        Ellipsoid e = c.eval(Vec{0.0, p.x2}, p.t);
        CHECK(volume(e) == doctest::Approx(M_PI * std::exp2(-p.t)).epsilon(1e-12));
    }

    // And across a wide random sweep.
    SeededRng rng(0x7717u, 1);
    for (int i = 0; i < 2000; ++i) {
        Vec x = rng.in_box(Vec(2, -4.0), Vec(2, 4.0));
        double t = rng.uniform(-8.0, 24.0);
        CHECK(volume(c.eval(x, t)) ==
              doctest::Approx(M_PI * std::exp2(-t)).epsilon(1e-12));
    }
}

TEST_CASE("pointwise-variable cover: regime classification at the seams") {
    const double t = 6.0;
    const double inner = std::exp2(-t / 2.0); // near-axis | transition seam
    const double outer = std::exp2(-t / 3.0); // transition | far-field seam
    CHECK(theta0_regime(inner, t) == Theta0Regime::near_axis);
    CHECK(theta0_regime(inner * (1 + 1e-9), t) == Theta0Regime::transition);
    CHECK(theta0_regime(outer, t) == Theta0Regime::transition);
    CHECK(theta0_regime(outer * (1 + 1e-9), t) == Theta0Regime::far_field);
    CHECK(theta0_regime(1.0, 0.0) == Theta0Regime::large_scale);
    CHECK(theta0_regime(1.0, 1e-12) == Theta0Regime::far_field);
    // Sign of the ordinate is irrelevant.
    CHECK(theta0_regime(-inner, t) == Theta0Regime::near_axis);
}

TEST_CASE("pointwise-variable cover: semi-axes continuous across both seams") {
    for (double t : {0.5, 2.0, 6.0, 13.0}) {
        for (double seam : {std::exp2(-t / 2.0), std::exp2(-t / 3.0)}) {
            double below1, below2, at1, at2, above1, above2;
            theta0_semi_axes(seam * (1.0 - 1e-13), t, &below1, &below2);
            theta0_semi_axes(seam, t, &at1, &at2);
            theta0_semi_axes(seam * (1.0 + 1e-13), t, &above1, &above2);
            CHECK(std::fabs(below1 - at1) <= 1e-12 * at1);
            CHECK(std::fabs(below2 - at2) <= 1e-12 * at2);
            CHECK(std::fabs(above1 - at1) <= 1e-12 * at1);
            CHECK(std::fabs(above2 - at2) <= 1e-12 * at2);
        }
    }
    // And across t = 0 (large-scale seam) at any ordinate.
    for (double x2 : {0.0, 0.3, 2.0}) {
        double a1, a2, b1, b2;
        theta0_semi_axes(x2, 0.0, &a1, &a2);
        theta0_semi_axes(x2, 1e-13, &b1, &b2);
        CHECK(std::fabs(a1 - b1) <= 1e-12 * a1);
        CHECK(std::fabs(a2 - b2) <= 1e-12 * a2);
    }
}

TEST_CASE("pointwise-variable cover: ellipsoids shrink with t (nested)") {
    Cover c = theta0_cover();
    SeededRng rng(0x2e57u, 2);
    int violations = 0;
    for (int i = 0; i < 2000; ++i) {
        Vec x = rng.in_box(Vec(2, -4.0), Vec(2, 4.0));
        double t = rng.uniform(-6.0, 18.0);
        double dt = rng.exp2_uniform(-10.0, 3.0);
        if (!contains_ellipsoid(c.eval(x, t + dt), c.eval(x, t), 1e-10)) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("flag-type cover: delta branches agree with the area constraint") {
    for (int k : {0, 1, 2}) {
        Cover c = nsw_cover(k);
        SeededRng rng(0xf1a6u, k);
        for (int i = 0; i < 400; ++i) {
            double x1 = rng.uniform(-3.0, 3.0);
            double t = rng.uniform(-4.0, 18.0);
            NswDelta nd = nsw_delta(k, x1, t);
            CHECK(nd.delta > 0.0);
            double area = M_PI * nd.delta *
                          std::max(std::pow(nd.delta, k + 1),
                                   std::pow(std::fabs(x1), k) * nd.delta);
            CHECK(area == doctest::Approx(std::exp2(-t)).epsilon(1e-9));
            Ellipsoid e = c.eval(Vec{x1, 0.0}, t);
            CHECK(volume(e) == doctest::Approx(std::exp2(-t)).epsilon(1e-9));
        }
    }
    // k = 0 degenerates to round balls.
    Cover c0 = nsw_cover(0);
    Ellipsoid e = c0.eval(Vec{1.3, -0.4}, 2.0);
    DiagReduction r = diag_reduce(e.M);
    CHECK(r.D(0, 0) == doctest::Approx(r.D(1, 1)).epsilon(1e-12));
}

TEST_CASE("volume validator passes the honest covers") {
    CoverSampleOptions opt;
    opt.seed = 99;
    opt.samples = 2000;
    for (const Cover& c : {theta0_cover(), isotropic_cover(2), nsw_cover(1)}) {
        CertReport rep = validate_volume(c, opt);
        INFO(c.name);
        CHECK(rep.pass);
        CHECK(rep.at("violations") == 0.0);
    }
}

TEST_CASE("volume validator fails the corrupted fixture with a witness") {
    CoverSampleOptions opt;
    opt.seed = 7;
    opt.samples = 2000;
    CertReport rep = validate_volume(corrupted_theta0_cover(), opt);
    CHECK(!rep.pass);
    CHECK(rep.at("violations") > 0.0);
    CHECK(!rep.witnesses.empty());
}

TEST_CASE("shape validators pass the pointwise-variable cover") {
    CoverSampleOptions opt;
    opt.seed = 3;
    opt.samples = 1200;
    Cover c = theta0_cover();
    CertReport norm = validate_shape_norm(c, opt);
    CHECK(norm.pass);
    CHECK(norm.at("violations") == 0.0);
    CHECK(norm.at("pairs_accepted") > 200.0);
    CertReport geo = validate_shape_geometric(c, opt);
    CHECK(geo.pass);
}

TEST_CASE("declared-parameter validation rejects nonsense") {
    CoverParams p;
    p.a1 = 2.0;
    p.a2 = 1.0; // a1 > a2
    CHECK_THROWS_AS(validate_params(p), contract_error);
    CoverParams q;
    q.a4 = -0.1;
    CHECK_THROWS_AS(validate_params(q), contract_error);
    CoverParams ok;
    CHECK_NOTHROW(validate_params(ok));
}

TEST_CASE("cover_eval checks its inputs") {
    Cover c = isotropic_cover(2);
    CHECK_THROWS_AS(cover_eval(c, Vec{1.0, 2.0, 3.0}, 0.0), contract_error);
    CHECK_THROWS_AS(cover_eval(c, Vec{0.0, 0.0}, std::nan("")), contract_error);
    CHECK_NOTHROW(cover_eval(c, Vec{0.0, 0.0}, 3.0));
}

} // TEST_SUITE("cover")
