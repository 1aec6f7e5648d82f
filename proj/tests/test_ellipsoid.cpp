// Ellipsoid bodies: volumes, containment, dilation, diagonal reduction, and
// the reverse-inclusion factor. Containment is cross-checked against a
// boundary-sampling oracle that knows nothing about the analytic predicate.

#include <cmath>

#include "doctest.h"

#include "ecov/ellipsoid.hpp"
#include "ecov/error.hpp"
#include "ecov/rng.hpp"

using namespace ecov;

namespace {

// Densely sample the boundary of `inner` and test every point against
// `outer`. Slow and dumb on purpose.
bool contained_by_sampling(const Ellipsoid& inner, const Ellipsoid& outer,
                           SeededRng& rng, int points, double tol) {
    for (int i = 0; i < points; ++i) {
        Vec p = inner.c + inner.M * rng.unit_vec(inner.dim());
        if (!contains_point(outer, p, tol)) return false;
    }
    return true;
}

} // namespace

TEST_SUITE("ellipsoid") {

TEST_CASE("unit ball volumes match the closed forms") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(unit_ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-14));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
    CHECK(unit_ball_volume(4) == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-14));
}

TEST_CASE("volume scales like |det M| and dilation like f^n") {
    SeededRng rng(0xe11u, 0);
    for (int n : {2, 3, 5}) {
        Ellipsoid e = random_ellipsoid(rng, n, -2.0, 2.0, Vec(n, -1.0), Vec(n, 1.0));
        double v = volume(e);
        CHECK(v == doctest::Approx(std::fabs(det(e.M)) * unit_ball_volume(n))
                       .epsilon(1e-12));
        for (double f : {0.25, 2.0, 7.5}) {
            Ellipsoid d = dilate(e, f);
            CHECK((d.c - e.c).norm() == 0.0);
            CHECK(volume(d) == doctest::Approx(std::pow(f, n) * v).epsilon(1e-12));
        }
    }
    Ellipsoid bad = make_ellipsoid(Mat::identity(2), Vec{0.0, 0.0});
    CHECK_THROWS_AS(dilate(bad, -1.0), contract_error);
}

TEST_CASE("point containment on an axis-aligned ellipse is exact") {
    Vec axes{2.0, 0.5};
    Ellipsoid e = make_ellipsoid(Mat::diag(axes), Vec{1.0, -1.0});
    CHECK(contains_point(e, Vec{3.0, -1.0}));        // right vertex
    CHECK(contains_point(e, Vec{1.0, -0.5}));        // top vertex
    CHECK(!contains_point(e, Vec{3.0 + 1e-6, -1.0}));
    CHECK(!contains_point(e, Vec{1.0, -0.5 + 1e-6}));
    CHECK(contains_point(e, Vec{1.0, -1.0}));
}

TEST_CASE("ellipsoid containment agrees with boundary sampling") {
    SeededRng rng(0xc0ffeeu, 1);
    int agreements = 0, checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng.next_u64() % 2);
        Ellipsoid outer =
            random_ellipsoid(rng, n, -1.5, 1.5, Vec(n, -2.0), Vec(n, 2.0));
        Ellipsoid inner =
            random_ellipsoid(rng, n, -2.5, 0.5, outer.c - Vec(n, 0.5), outer.c + Vec(n, 0.5));

        bool pred = contains_ellipsoid(inner, outer);
        bool sampled = contained_by_sampling(inner, outer, rng, 4000, 1e-7);
        // Sampling with a loose tol can only disagree very near the boundary;
        // away from it the two must match.
        if (pred == sampled) ++agreements;
        ++checked;
    }
    // Ties at the boundary are rare for random pairs: demand near-total
    // agreement rather than bit-exactness.
    CHECK(agreements >= checked - 2);
}

TEST_CASE("containment detects thin-direction escape") {
    // A long sliver rotated slightly inside a round ellipse: the analytic
    // predicate has to catch the protruding tips.
    Ellipsoid outer = make_ellipsoid(Mat::diag(Vec{1.0, 1.0}), Vec{0.0, 0.0});
    Mat m(2);
    double ang = 0.07;
    m(0, 0) = std::cos(ang) * 1.02;
    m(1, 0) = std::sin(ang) * 1.02;
    m(0, 1) = -std::sin(ang) * 1e-3;
    m(1, 1) = std::cos(ang) * 1e-3;
    Ellipsoid sliver = make_ellipsoid(m, Vec{0.0, 0.0});
    CHECK(!contains_ellipsoid(sliver, outer));
    CHECK(contains_ellipsoid(dilate(sliver, 0.97), outer));
}

TEST_CASE("diag_reduce produces orthogonal U and the singular values") {
    SeededRng rng(0xdecafu, 2);
    for (int n : {2, 3, 4}) {
        Ellipsoid e = random_ellipsoid(rng, n, -2.0, 2.0, Vec(n), Vec(n));
        DiagReduction r = diag_reduce(e.M);
        Mat utu = r.U.transpose() * r.U;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::fabs(utu(i, j) - (i == j ? 1.0 : 0.0)) < 1e-11);
        for (int i = 0; i + 1 < n; ++i) CHECK(r.D(i, i) >= r.D(i + 1, i + 1));
        // U M and D carve out the same body: same volume, mutual containment.
        Ellipsoid rotated = make_ellipsoid(r.U * e.M, Vec(n));
        Ellipsoid boxed = make_ellipsoid(r.D, Vec(n));
        CHECK(contains_ellipsoid(rotated, dilate(boxed, 1.0 + 1e-9)));
        CHECK(contains_ellipsoid(boxed, dilate(rotated, 1.0 + 1e-9)));
    }
}

TEST_CASE("reverse inclusion: hand-built nested pair") {
    // eta: small off-center disk inside xi: big ellipse.
    Ellipsoid xi = make_ellipsoid(Mat::diag(Vec{4.0, 2.0}), Vec{0.0, 0.0});
    Ellipsoid eta = make_ellipsoid(Mat::diag(Vec{0.5, 0.5}), Vec{1.0, 0.5});
    ReverseInclusion r = check_reverse_inclusion(eta, xi);
    CHECK(r.pass);
    CHECK(!r.same_center);
    CHECK(r.volume_ratio == doctest::Approx(32.0).epsilon(1e-12));
    CHECK(r.factor_bound == doctest::Approx(64.0).epsilon(1e-12));
    CHECK(r.tightest <= r.factor_bound);
    CHECK(r.tightest > 1.0);
}

TEST_CASE("reverse inclusion: same-center pair needs only the volume ratio") {
    Ellipsoid xi = make_ellipsoid(Mat::diag(Vec{3.0, 1.0}), Vec{2.0, -1.0});
    Ellipsoid eta = make_ellipsoid(Mat::diag(Vec{0.75, 0.25}), Vec{2.0, -1.0});
    ReverseInclusion r = check_reverse_inclusion(eta, xi);
    CHECK(r.same_center);
    CHECK(r.factor_bound == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(r.pass);
    // Here the bound is far from tight: the true factor is 4 (axis ratio).
    CHECK(r.tightest == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("reverse inclusion rejects a non-nested precondition") {
    Ellipsoid a = make_ellipsoid(Mat::identity(2), Vec{0.0, 0.0});
    Ellipsoid b = make_ellipsoid(Mat::identity(2), Vec{5.0, 0.0});
    CHECK_THROWS_AS(check_reverse_inclusion(a, b), contract_error);
}

TEST_CASE("random ellipsoids respect their declared ranges") {
    SeededRng rng(0x9a17u, 3);
    for (int trial = 0; trial < 50; ++trial) {
        Ellipsoid e = random_ellipsoid(rng, 3, -1.0, 1.0, Vec(3, -2.0), Vec(3, 2.0));
        DiagReduction r = diag_reduce(e.M);
        for (int i = 0; i < 3; ++i) {
            CHECK(r.D(i, i) >= 0.5 * (1.0 - 1e-12));
            CHECK(r.D(i, i) <= 2.0 * (1.0 + 1e-12));
            CHECK(std::fabs(e.c[i]) <= 2.0);
        }
    }
}

} // TEST_SUITE("ellipsoid")
