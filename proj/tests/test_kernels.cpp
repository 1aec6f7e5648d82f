// Root solvers, directional norm extrema, and the dense linear algebra bricks.
// Oracles here are independent of the implementation: closed forms where they
// exist, dense directional sweeps and planted spectra where they don't.

#include <cmath>
#include <vector>

#include "doctest.h"

#include "ecov/eig.hpp"
#include "ecov/ellipsoid.hpp"
#include "ecov/error.hpp"
#include "ecov/kernels.hpp"
#include "ecov/mat.hpp"
#include "ecov/rng.hpp"

using namespace ecov;

TEST_SUITE("kernels") {

TEST_CASE("bisect_monotone pins the root of a cubic to xtol") {
    auto f = [](double x) { return x * x * x - 2.0; };
    double r = bisect_monotone(f, 0.0, 2.0, 1e-13);
    CHECK(std::fabs(r - std::cbrt(2.0)) < 1e-12);
}

TEST_CASE("bisect_monotone rejects a bracket without a sign change") {
    auto f = [](double x) { return x * x + 1.0; };
    CHECK_THROWS_AS(bisect_monotone(f, -1.0, 1.0, 1e-9), contract_error);
}

TEST_CASE("power-sum root: x + x^2 = 1 gives the golden-ratio conjugate") {
    double x = solve_power_sum({1.0, 1.0}, {1.0, 2.0});
    double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(std::fabs(x - golden) < 1e-12);
    CHECK(std::fabs(x - 0.6180339887498949) < 1e-12);
}

TEST_CASE("power-sum root: residual and strict bracket on random instances") {
    SeededRng rng(0x7e57u, 1);
    for (int trial = 0; trial < 2000; ++trial) {
        int d = 2 + static_cast<int>(rng.next_u64() % 3);
        std::vector<double> a(d), b(d);
        for (int i = 0; i < d; ++i) {
            a[i] = std::exp2(rng.uniform(-6.0, 6.0));
            b[i] = rng.uniform(0.2, 6.0);
        }
        double x = solve_power_sum(a, b);
        double res = -1.0;
        for (int i = 0; i < d; ++i) res += a[i] * std::pow(x, b[i]);
        CHECK(std::fabs(res) <= 1e-12);

        PowerSumBracket br = power_sum_bracket(a, b);
        CHECK(br.lower < x);
        CHECK(x < br.upper);
    }
}

TEST_CASE("power-sum root: input validation") {
    CHECK_THROWS_AS(solve_power_sum({}, {}), contract_error);
    CHECK_THROWS_AS(solve_power_sum({1.0, -1.0}, {1.0, 2.0}), contract_error);
    CHECK_THROWS_AS(solve_power_sum({1.0, 1.0}, {1.0, 0.0}), contract_error);
    CHECK_THROWS_AS(solve_power_sum({1.0}, {1.0, 2.0}), contract_error);
}

TEST_CASE("norm extrema on the ball agree with a dense 2D angular sweep") {
    SeededRng rng(0xa11ce5u, 2);
    for (int trial = 0; trial < 25; ++trial) {
        Mat a(2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a(i, j) = rng.normal();
        Vec d{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};

        NormExtrema ex = norm_extrema_on_ball(a, d);

        // Boundary sweep bounds hi from below and (on the boundary) lo too.
        double sweep_hi = 0.0, sweep_lo_boundary = 1e300;
        const int steps = 200000;
        for (int s = 0; s < steps; ++s) {
            double ang = 2.0 * M_PI * s / steps;
            Vec u{std::cos(ang), std::sin(ang)};
            double v = (a * u + d).norm();
            sweep_hi = std::max(sweep_hi, v);
            sweep_lo_boundary = std::min(sweep_lo_boundary, v);
        }
        CHECK(ex.hi >= sweep_hi - 1e-9);
        CHECK(ex.hi <= sweep_hi + 1e-5 * (1.0 + sweep_hi));

        // lo is over the closed ball: 0 iff -d lies inside a(B).
        bool covers_origin = false;
        if (std::fabs(Lu(a).det()) > 1e-12)
            covers_origin = Lu(a).solve(-1.0 * d).norm() <= 1.0 + 1e-12;
        if (covers_origin) {
            CHECK(ex.lo <= 1e-9);
        } else {
            CHECK(ex.lo <= sweep_lo_boundary + 1e-9);
            CHECK(ex.lo >= sweep_lo_boundary - 1e-5 * (1.0 + sweep_lo_boundary));
        }

        // The reported argmax/argmin must reproduce the reported values.
        CHECK(std::fabs((a * ex.arg_hi + d).norm() - ex.hi) <= 1e-10 * (1.0 + ex.hi));
        CHECK(ex.arg_hi.norm() <= 1.0 + 1e-10);
        CHECK(std::fabs((a * ex.arg_lo + d).norm() - ex.lo) <= 1e-10 * (1.0 + ex.lo));
        CHECK(ex.arg_lo.norm() <= 1.0 + 1e-10);
    }
}

TEST_CASE("norm extrema handle the degenerate cases") {
    Mat z(3); // zero map: |0*u + d| is constant
    Vec d{3.0, 0.0, 4.0};
    NormExtrema ex = norm_extrema_on_ball(z, d);
    CHECK(ex.lo == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(ex.hi == doctest::Approx(5.0).epsilon(1e-12));

    // Singular A, offset outside the segment image: lo > 0.
    Mat rank1(2);
    rank1(0, 0) = 1.0;
    NormExtrema ex2 = norm_extrema_on_ball(rank1, Vec{0.0, 2.0});
    CHECK(ex2.lo == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(ex2.hi == doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));
}

TEST_CASE("sym_eig recovers a planted spectrum") {
    SeededRng rng(0x51bea7u, 3);
    for (int n : {2, 3, 5, 8}) {
        Mat q = random_orthogonal(rng, n);
        Vec planted(n);
        for (int i = 0; i < n; ++i) planted[i] = std::exp2(rng.uniform(-4.0, 4.0));
        // Sort descending to compare directly with the output order.
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (planted[j] > planted[i]) std::swap(planted[i], planted[j]);
        Mat s = q * Mat::diag(planted) * q.transpose();

        SymEig eig = sym_eig(s);
        for (int i = 0; i < n; ++i)
            CHECK(eig.values[i] == doctest::Approx(planted[i]).epsilon(1e-11));

        Mat vtv = eig.vectors.transpose() * eig.vectors;
        Mat recon = eig.vectors * Mat::diag(eig.values) * eig.vectors.transpose();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                CHECK(std::fabs(vtv(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
                CHECK(std::fabs(recon(i, j) - s(i, j)) < 1e-10 * (1.0 + s.max_abs()));
            }
    }
    Mat asym(2);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS(sym_eig(asym), contract_error);
}

TEST_CASE("spectral norm equals the largest planted singular value") {
    SeededRng rng(0x5bec7au, 4);
    for (int n : {2, 4, 6}) {
        Mat u = random_orthogonal(rng, n);
        Mat v = random_orthogonal(rng, n);
        Vec sv(n);
        double top = 0.0;
        for (int i = 0; i < n; ++i) {
            sv[i] = std::exp2(rng.uniform(-3.0, 3.0));
            top = std::max(top, sv[i]);
        }
        Mat a = u * Mat::diag(sv) * v.transpose();
        CHECK(spectral_norm(a) == doctest::Approx(top).epsilon(1e-10));
    }
}

TEST_CASE("lu solves, dets, and flags singularity") {
    SeededRng rng(0x1badu, 5);
    for (int n : {2, 3, 5}) {
        Mat a(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
            a(i, i) += static_cast<double>(n); // diagonally dominant
        }
        Vec x = rng.normal_vec(n);
        Vec recovered = Lu(a).solve(a * x);
        CHECK((recovered - x).norm() < 1e-10 * (1.0 + x.norm()));

        Vec diag_entries(n);
        for (int i = 0; i < n; ++i) diag_entries[i] = i + 1.0;
        double expect = 1.0;
        for (int i = 0; i < n; ++i) expect *= diag_entries[i];
        CHECK(det(Mat::diag(diag_entries)) == doctest::Approx(expect).epsilon(1e-14));
    }

    Mat sing(2);
    sing(0, 0) = 1.0;
    sing(0, 1) = 2.0;
    sing(1, 0) = 2.0;
    sing(1, 1) = 4.0;
    Lu f(sing);
    CHECK(f.singular());
    CHECK_THROWS_AS(f.solve(Vec{1.0, 0.0}), numeric_error);
    // inverse() treats near-singularity as a precondition violation.
    CHECK_THROWS_AS(inverse(sing), contract_error);
}

TEST_CASE("seeded rng: deterministic, stream-separated, in-range") {
    SeededRng a(42, 7), b(42, 7), c(42, 8);
    bool streams_differ = false;
    for (int i = 0; i < 16; ++i) {
        auto va = a.next_u64();
        CHECK(va == b.next_u64());
        if (va != c.next_u64()) streams_differ = true;
    }
    CHECK(streams_differ);

    SeededRng r(0xfeedu, 0);
    for (int i = 0; i < 1000; ++i) {
        double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (int n : {2, 3, 8}) {
        Vec u = r.unit_vec(n);
        CHECK(std::fabs(u.norm() - 1.0) < 1e-12);
        CHECK(r.ball_vec(n).norm() <= 1.0 + 1e-12);
    }
    double mean = 0.0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) mean += r.normal();
    mean /= draws;
    CHECK(std::fabs(mean) < 0.05);
}

} // TEST_SUITE("kernels")
