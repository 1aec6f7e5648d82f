// Ball-geometry extraction and the constructive pipeline: directional radii,
// inscribed ellipsoids, quasi-convexity, the constant ledger, cover synthesis
// from a bare quasi-distance, and the two-sided equivalence check.

#include <cmath>

#include "doctest.h"

#include "ecov/characterization.hpp"
#include "ecov/cover.hpp"
#include "ecov/error.hpp"
#include "ecov/quasi_distance.hpp"
#include "ecov/rng.hpp"
#include "ecov/validators.hpp"

using namespace ecov;

namespace {

// Strip every geometry hook so the generic (bisection + fit) paths run.
QuasiDistance hookless(QuasiDistance d) {
    d.inscribed_ellipse = nullptr;
    d.exact_ball_volume = nullptr;
    // Keep ball_box: radii searches still need an outer bracket hint, and a
    // box is the kind of crude bound a user metric can always supply.
    return d;
}

} // namespace

TEST_SUITE("characterization") {

TEST_CASE("direction sets: deterministic unit frames of the right size") {
    for (int n : {2, 3, 5}) {
        auto dirs = direction_set(n, 64);
        CHECK(dirs.size() == 64);
        for (const Vec& u : dirs) CHECK(std::fabs(u.norm() - 1.0) < 1e-12);
        auto again = direction_set(n, 64);
        for (size_t i = 0; i < dirs.size(); ++i)
            CHECK((dirs[i] - again[i]).norm() == 0.0);
    }
}

TEST_CASE("directional radius: euclidean and sup-norm closed forms") {
    QuasiDistance eu = euclidean_metric(2);
    QuasiDistance sup = supnorm_metric(2);
    Vec x{0.3, -0.7};
    for (double r : {0.01, 1.0, 17.0}) {
        CHECK(directional_radius(eu, x, r, Vec{1.0, 0.0}) ==
              doctest::Approx(r).epsilon(1e-9));
        Vec diag{std::sqrt(0.5), std::sqrt(0.5)};
        CHECK(directional_radius(sup, x, r, diag) ==
              doctest::Approx(r * std::sqrt(2.0)).epsilon(1e-9));
        CHECK(directional_radius(sup, x, r, Vec{0.0, 1.0}) ==
              doctest::Approx(r).epsilon(1e-9));
    }
}

TEST_CASE("inscribed ellipsoid of a square ball approximates its incircle") {
    // Generic fit, no hooks: the max-volume centered ellipse inscribed in the
    // square [-r, r]^2 is the disk of radius r. The fit certifies containment
    // at its sampled directions; between samples a flat side admits a sagitta
    // of order (pi / directions)^2, which bounds the attainable accuracy.
    QuasiDistance sup = hookless(supnorm_metric(2));
    const double r = 0.8;
    Ellipsoid e = inscribed_centered_ellipsoid(sup, Vec{0.1, 0.2}, r);
    CHECK(volume(e) == doctest::Approx(M_PI * r * r).epsilon(5e-3));
    DiagReduction dr = diag_reduce(e.M);
    CHECK(dr.D(0, 0) == doctest::Approx(r).epsilon(2e-2));
    CHECK(dr.D(1, 1) == doctest::Approx(r).epsilon(2e-2));
    // Containment where the fit promises it: its own direction grid.
    for (const Vec& u : direction_set(2, 64)) {
        double r_e = 1.0 / (inverse(e.M) * u).norm();
        double r_true = directional_radius(sup, Vec{0.1, 0.2}, r, u);
        CHECK(r_e <= r_true * (1.0 + 1e-6));
    }
    // Between samples the protrusion stays within the sagitta budget.
    for (const Vec& u : direction_set(2, 1024)) {
        Vec p = e.c + e.M * u;
        CHECK(sup.eval(Vec{0.1, 0.2}, p) <= r * (1.0 + 3e-3));
    }
}

TEST_CASE("inscribed ellipsoid tracks anisotropy of a stretched ball") {
    // Scale the sup norm per axis: ball = rectangle [-2r, 2r] x [-r/2, r/2].
    QuasiDistance d;
    d.name = "aniso-box";
    d.dim = 2;
    d.eval = [](const Vec& x, const Vec& y) {
        return std::max(std::fabs(x[0] - y[0]) / 2.0, 2.0 * std::fabs(x[1] - y[1]));
    };
    d.ball_box = [](const Vec&, double r) { return Vec{2.0 * r, r / 2.0}; };
    const double r = 1.3;
    Ellipsoid e = inscribed_centered_ellipsoid(d, Vec{0.0, 0.0}, r);
    DiagReduction dr = diag_reduce(e.M);
    CHECK(dr.D(0, 0) == doctest::Approx(2.0 * r).epsilon(2e-3));
    CHECK(dr.D(1, 1) == doctest::Approx(r / 2.0).epsilon(2e-3));
}

TEST_CASE("quasi-convexity certificate: square balls give ~sqrt(2)") {
    // Generic-fit path. The corner search lands on sqrt(2) up to the fit's
    // flat-side error, and errs on the conservative (larger) side when the
    // fitted ellipse protrudes slightly between sample directions.
    QuasiDistance sup = hookless(supnorm_metric(2));
    CheckOptions opt;
    opt.seed = 31;
    opt.samples = 40;
    QuasiConvexityCert cert = quasi_convexity_certify(sup, opt);
    CHECK(cert.report.pass);
    CHECK(cert.Q_hat >= std::sqrt(2.0) * (1.0 - 1e-3));
    CHECK(cert.Q_hat <= std::sqrt(2.0) * (1.0 + 2e-2));
    CHECK(cert.samples.size() == 40);
    for (const XiSample& s : cert.samples) {
        CHECK(s.worst_ratio <= cert.Q_hat * (1.0 + 1e-12));
        CHECK(s.xi.dim() == 2);
    }
}

TEST_CASE("quasi-convexity certificate: round balls give 1") {
    CheckOptions opt;
    opt.seed = 37;
    opt.samples = 30;
    QuasiConvexityCert cert = quasi_convexity_certify(euclidean_metric(3), opt);
    CHECK(cert.report.pass);
    CHECK(cert.Q_hat == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("constant ledger: frozen chain and monotonicity") {
    ConstantLedger led = derive_constants(1.0, 1.0, 1.0, 2, 1.0);
    CHECK(led.c3 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(led.c == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(led.d == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(led.epsilon == doctest::Approx(0.4150374992788438).epsilon(1e-14));
    CHECK(led.a == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(led.b == doctest::Approx(led.epsilon).epsilon(1e-15));

    // Worse geometry (bigger kappa or Q) blows up the engulfing constant and
    // must shrink the inner exponent; the scale coefficient a = 1/d tends to
    // 1 from below as d -> 1+.
    ConstantLedger worse = derive_constants(1.5, 1.2, 2.0, 2, 1.0);
    CHECK(worse.c > led.c);
    CHECK(worse.d < led.d);
    CHECK(worse.d > 1.0);
    CHECK(worse.epsilon < led.epsilon);
    CHECK(worse.b < led.b);
    CHECK(worse.a > 0.0);
    CHECK(worse.a < 1.0);
    CHECK(worse.b > 0.0);

    CHECK_THROWS_AS(derive_constants(0.5, 1.0, 1.0, 2), contract_error);
    CHECK_THROWS_AS(derive_constants(1.0, 1.0, 1.0, 0), contract_error);
    CHECK_THROWS_AS(derive_constants(1.0, 1.0, 1.0, 2, -1.0), contract_error);
}

TEST_CASE("inner containment holds for balls of a norm with a = b = 1") {
    InnerOptions opt;
    opt.seed = 41;
    opt.samples = 400;
    CertReport rep = inner_property_check(euclidean_metric(2), 1.0, 1.0, opt);
    CHECK(rep.pass);
    CHECK(rep.at("violations") == 0.0);
}

TEST_CASE("inner containment detects an over-greedy scale factor") {
    // a > 1 claims B(x, r) scaled points stay inside dilated balls more
    // aggressively than the true geometry: must be caught.
    InnerOptions opt;
    opt.seed = 43;
    opt.samples = 400;
    CertReport rep = inner_property_check(euclidean_metric(2), 1.3, 1.0, opt);
    CHECK(!rep.pass);
    CHECK(rep.at("violations") > 0.0);
    CHECK(!rep.witnesses.empty());
}

TEST_CASE("cover synthesis from the isotropic distance round-trips tightly") {
    QuasiDistance d = isotropic_induced_metric(2);

    XiCoverInputs in;
    in.Q_hat = 1.0;
    in.c1_hat = 1.0;
    in.kappa_hat = 1.0;
    in.calibration_samples = 300;
    Cover xi = build_xi_cover(d, in);
    CHECK(xi.dim == 2);
    validate_params(xi.params);

    CoverSampleOptions vopt;
    vopt.seed = 47;
    vopt.samples = 500;
    vopt.t_lo = -4.0;
    vopt.t_hi = 16.0;
    vopt.s_max = 8.0;
    CHECK(validate_volume(xi, vopt).pass);
    CHECK(validate_shape_norm(xi, vopt).pass);

    RoundTripOptions ropt;
    ropt.seed = 53;
    ropt.pairs = 60;
    ropt.Q_hat = in.Q_hat;
    ropt.c1_hat = in.c1_hat;
    ropt.kappa_hat = in.kappa_hat;
    CertReport rt = roundtrip_equivalence(d, xi, ropt);
    CHECK(rt.pass);
    // Round balls reproduce themselves: the ratio interval is a point at 1.
    CHECK(rt.at("ratio_min") == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rt.at("ratio_max") == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rt.at("degenerate_pairs") == 0.0);
}

TEST_CASE("round-trip contracts: dimension mismatch bounces") {
    QuasiDistance d = isotropic_induced_metric(2);
    Cover wrong = isotropic_cover(3);
    RoundTripOptions opt;
    opt.pairs = 4;
    CHECK_THROWS_AS(roundtrip_equivalence(d, wrong, opt), contract_error);
}

TEST_CASE("directional radius input contracts") {
    QuasiDistance eu = euclidean_metric(2);
    CHECK_THROWS_AS(directional_radius(eu, Vec{0.0, 0.0}, -1.0, Vec{1.0, 0.0}),
                    contract_error);
    CHECK_THROWS_AS(directional_radius(eu, Vec{0.0, 0.0}, 1.0, Vec{0.0, 0.0}),
                    contract_error);
}

} // TEST_SUITE("characterization")
