#include "ecov/quasi_distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "ecov/error.hpp"
#include "ecov/kernels.hpp"
#include "ecov/parallel.hpp"
#include "ecov/rng.hpp"

namespace ecov {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kScaleLo = -60.0;
constexpr double kScaleHi = 80.0;
constexpr double kZ99 = 2.5758293035489004; // two-sided 99% normal quantile

void check_metric_point(const QuasiDistance& d, const Vec& x) {
    if (x.size() != d.dim) throw contract_error("metric: point dimension mismatch");
    if (!x.finite()) throw contract_error("metric: point must be finite");
}

std::vector<double> flatten(const Vec& v) {
    std::vector<double> out(v.size());
    for (int i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

} // namespace

double rho_one_sided(const Cover& cover, const Vec& x, const Vec& y,
                     double t_tol) {
    if (!cover.nested_in_t)
        throw contract_error("rho_one_sided: cover must be nested in t");
    if (x.size() != cover.dim || y.size() != cover.dim)
        throw contract_error("rho_one_sided: dimension mismatch");
    if (!x.finite() || !y.finite())
        throw contract_error("rho_one_sided: points must be finite");
    if (!(t_tol > 0.0) || !std::isfinite(t_tol))
        throw contract_error("rho_one_sided: scale tolerance must be positive");
    if (x == y) return 0.0; // infimum over all scales; volumes -> 0

    const double dist = (x - y).norm();
    const double t0 = std::clamp(-cover.dim * std::log2(dist), kScaleLo, kScaleHi);
    auto member = [&](double t) { return contains_point(cover.eval(x, t), y); };

    double t_in, t_out;
    if (member(t0)) {
        t_in = t0;
        double step = 1.0;
        for (;;) {
            const double t = t_in + step;
            if (t > kScaleHi) {
                if (member(kScaleHi))
                    throw numeric_error("rho_one_sided: exit scale beyond range");
                t_out = kScaleHi;
                break;
            }
            if (!member(t)) {
                t_out = t;
                break;
            }
            t_in = t;
            step *= 2.0;
        }
    } else {
        t_out = t0;
        double step = 1.0;
        for (;;) {
            const double t = t_out - step;
            if (t < kScaleLo) {
                if (!member(kScaleLo))
                    throw numeric_error("rho_one_sided: entry scale beyond range");
                t_in = kScaleLo;
                break;
            }
            if (member(t)) {
                t_in = t;
                break;
            }
            t_out = t;
            step *= 2.0;
        }
    }
    // Absolute tolerance on t; the volume is exponential in t, so resolving
    // the crossing to t_tol keeps the returned value within ~0.7 * t_tol
    // relative of it.
    while (t_out - t_in > t_tol) {
        const double mid = 0.5 * (t_in + t_out);
        (member(mid) ? t_in : t_out) = mid;
    }
    return volume(cover.eval(x, t_in));
}

double rho_induced(const Cover& cover, const Vec& x, const Vec& y, double t_tol) {
    return std::min(rho_one_sided(cover, x, y, t_tol),
                    rho_one_sided(cover, y, x, t_tol));
}

QuasiDistance induced_metric(const Cover& cover) {
    QuasiDistance d;
    d.name = cover.name + "-induced";
    d.dim = cover.dim;
    d.symmetry = Symmetry::exact;
    d.eval = [cover](const Vec& x, const Vec& y) { return rho_induced(cover, x, y); };
    if (cover.max_extent) {
        // rho(x, y) < r puts both points in some cover ellipsoid of volume
        // < r * a2/a1, so its extent bounds the ball in every direction.
        const double blow = cover.params.a2 / cover.params.a1;
        const auto extent = cover.max_extent;
        const int n = cover.dim;
        d.ball_box = [extent, blow, n](const Vec&, double r) {
            return Vec(n, extent(blow * r) * (1.0 + 1e-9));
        };
    }
    return d;
}

QuasiDistance isotropic_induced_metric(int n) {
    QuasiDistance d = induced_metric(isotropic_cover(n));
    const double omega = unit_ball_volume(n);
    // The smallest x-centered cover ball containing y has radius |x-y|, so
    // the induced distance is omega_n |x-y|^n exactly and the induced ball of
    // radius r is the Euclidean ball of volume exactly r.
    d.eval = [n, omega](const Vec& x, const Vec& y) {
        return omega * std::pow((x - y).norm(), n);
    };
    d.exact_ball_volume = [](const Vec&, double r) { return r; };
    d.inscribed_ellipse = [n, omega](const Vec& x, double r) {
        const double s = std::pow(r / omega, 1.0 / n);
        return make_ellipsoid(Mat::diag(Vec(n, s)), x);
    };
    d.ball_box = [n, omega](const Vec&, double r) {
        return Vec(n, std::pow(r / omega, 1.0 / n) * (1.0 + 1e-12));
    };
    return d;
}

Theta0RhoDetail rho_theta0_detail(const Vec& x, const Vec& y) {
    if (x.size() != 2 || y.size() != 2)
        throw contract_error("rho_theta0: points must be planar");
    if (!x.finite() || !y.finite())
        throw contract_error("rho_theta0: points must be finite");

    Theta0RhoDetail out;
    const double d1 = y[0] - x[0];
    const double d2 = y[1] - x[1];
    const double dist = std::hypot(d1, d2);
    if (dist == 0.0) return out; // case 0: coincident points, distance 0

    const double ax2 = std::abs(x[1]);
    // Ties at the case boundaries resolve to the earlier-listed case.
    if (dist >= 1.0 || ax2 >= std::pow(dist, 2.0 / 3.0)) {
        out.case_id = 1;
        out.value = kPi * dist * dist;
        return out;
    }
    const double phi =
        std::exp2(-0.75) *
        std::pow(d1 * d1 + std::sqrt(d1 * d1 * d1 * d1 + 4.0 * d2 * d2), 0.75);
    if (ax2 <= phi) {
        out.case_id = 2;
        out.phi = phi;
        out.value = kPi * phi * phi;
        return out;
    }
    // Case 3: the critical scale satisfies a z^5 + b z = 1 for z = 2^{t/3}.
    const double a = d1 * d1 * x[1] * x[1];
    const double b = d2 * d2 / (x[1] * x[1]);
    double z;
    if (a == 0.0)
        z = 1.0 / b;
    else if (b == 0.0)
        z = std::pow(1.0 / a, 0.2);
    else
        z = solve_power_sum({a, b}, {5.0, 1.0});
    out.case_id = 3;
    out.z = z;
    out.value = kPi / (z * z * z);
    out.max_form = std::max(std::pow(std::abs(d1) * ax2, 1.2),
                            std::pow(d2, 6.0) / std::pow(ax2, 6.0));
    return out;
}

double rho_theta0(const Vec& x, const Vec& y) { return rho_theta0_detail(x, y).value; }

double rho_nsw(int k, const Vec& x, const Vec& y) {
    if (k < 0 || k > 6) throw contract_error("rho_nsw: k must be in [0, 6]");
    if (x.size() != 2 || y.size() != 2)
        throw contract_error("rho_nsw: points must be planar");
    const double d1 = std::abs(y[0] - x[0]);
    const double d2 = std::abs(y[1] - x[1]);
    if (k == 0) return std::max(d1, d2);
    const double ax1 = std::abs(x[0]);
    const double by_depth = std::pow(d2, 1.0 / (k + 1));
    const double second =
        ax1 == 0.0 ? by_depth : std::min(by_depth, d2 / std::pow(ax1, k));
    return std::max(d1, second);
}

QuasiDistance theta0_metric() {
    QuasiDistance d;
    d.name = "theta0";
    d.dim = 2;
    // One-sided formula: the first argument's ordinate picks the case, so the
    // two orders differ by at most the case-equivalence factors.
    d.symmetry = Symmetry::quasi;
    d.quasi_symmetry_bound = 64.0;
    d.eval = [](const Vec& x, const Vec& y) { return rho_theta0(x, y); };
    d.ball_box = [](const Vec&, double r) {
        // Envelope algebra on the three cases of the closed form: a point
        // with rho(x, y) < r satisfies |d1| < max(sqrt(R), 1.42 R^{1/3}) and
        // |d2| < max(4 sqrt(R), 1.83 R^{7/18}) with R = r/pi.
        const double R = r / kPi;
        const double w1 = std::max(std::sqrt(R), 1.42 * std::cbrt(R));
        const double w2 =
            std::max(4.0 * std::sqrt(R), 1.83 * std::pow(R, 7.0 / 18.0));
        return Vec{w1, w2};
    };
    return d;
}

QuasiDistance nsw_metric(int k) {
    if (k < 0 || k > 6) throw contract_error("nsw_metric: k must be in [0, 6]");
    QuasiDistance d;
    d.name = "nsw-k" + std::to_string(k);
    d.dim = 2;
    d.symmetry = k == 0 ? Symmetry::exact : Symmetry::quasi;
    // Ratio bound on the axiom sampling region |x1|, |y1| in [0.1, 4].
    d.quasi_symmetry_bound = std::pow(40.0, k);
    d.eval = [k](const Vec& x, const Vec& y) { return rho_nsw(k, x, y); };
    auto half_height = [k](const Vec& x, double r) {
        return std::max(std::pow(r, k + 1), std::pow(std::abs(x[0]), k) * r);
    };
    d.ball_box = [half_height](const Vec& x, double r) {
        return Vec{r, half_height(x, r)};
    };
    d.inscribed_ellipse = [half_height](const Vec& x, double r) {
        return make_ellipsoid(Mat::diag(Vec{r, half_height(x, r)}), x);
    };
    d.exact_ball_volume = [half_height](const Vec& x, double r) {
        return 4.0 * r * half_height(x, r);
    };
    return d;
}

QuasiDistance supnorm_metric(int n) {
    Vec::check_dim(n);
    QuasiDistance d;
    d.name = "supnorm";
    d.dim = n;
    d.eval = [](const Vec& x, const Vec& y) { return (x - y).norm_inf(); };
    d.ball_box = [n](const Vec&, double r) { return Vec(n, r); };
    d.inscribed_ellipse = [n](const Vec& x, double r) {
        return make_ellipsoid(Mat::diag(Vec(n, r)), x);
    };
    d.exact_ball_volume = [n](const Vec&, double r) {
        return std::pow(2.0 * r, n);
    };
    return d;
}

QuasiDistance euclidean_metric(int n) {
    Vec::check_dim(n);
    QuasiDistance d;
    d.name = "euclidean";
    d.dim = n;
    d.eval = [](const Vec& x, const Vec& y) { return (x - y).norm(); };
    d.ball_box = [n](const Vec&, double r) { return Vec(n, r); };
    d.inscribed_ellipse = [n](const Vec& x, double r) {
        return make_ellipsoid(Mat::diag(Vec(n, r)), x);
    };
    const double omega = unit_ball_volume(n);
    d.exact_ball_volume = [n, omega](const Vec&, double r) {
        return omega * std::pow(r, n);
    };
    return d;
}

BallVolumeEstimate ball_volume_mc(const QuasiDistance& d, const Vec& x, double r,
                                  const BallVolumeOptions& opt) {
    check_metric_point(d, x);
    if (!(r > 0.0) || !std::isfinite(r))
        throw contract_error("ball_volume_mc: radius must be positive and finite");
    Vec half;
    if (opt.box_half_widths) {
        half = *opt.box_half_widths;
        if (half.size() != d.dim)
            throw contract_error("ball_volume_mc: box dimension mismatch");
    } else if (d.ball_box) {
        half = d.ball_box(x, r);
    } else {
        throw contract_error("ball_volume_mc: no bounding box for this metric");
    }
    double box_vol = 1.0;
    for (int i = 0; i < half.size(); ++i) {
        if (!(half[i] > 0.0) || !std::isfinite(half[i]))
            throw contract_error("ball_volume_mc: degenerate bounding box");
        box_vol *= 2.0 * half[i];
    }

    constexpr std::size_t kPointsPerChunk = 4096;
    const std::size_t chunks = chunk_count(opt.points, kPointsPerChunk);
    auto counts = run_chunked<std::uint64_t>(chunks, opt.workers, [&](std::size_t ci) {
        SeededRng rng(opt.seed, ci);
        const std::size_t begin = ci * kPointsPerChunk;
        const std::size_t end = std::min<std::size_t>(opt.points, begin + kPointsPerChunk);
        const Vec lo = x - half;
        const Vec hi = x + half;
        std::uint64_t c = 0;
        for (std::size_t i = begin; i < end; ++i)
            if (d.eval(x, rng.in_box(lo, hi)) < r) ++c;
        return c;
    });

    BallVolumeEstimate est;
    est.points = opt.points;
    est.box_volume = box_vol;
    for (auto c : counts) est.hits += c;
    const double n = static_cast<double>(opt.points);
    const double p = static_cast<double>(est.hits) / n;
    est.volume = box_vol * p;
    est.ci_half_width = box_vol * (kZ99 * std::sqrt(p * (1.0 - p) / n) + 0.5 / n);
    return est;
}

double ball_volume(const QuasiDistance& d, const Vec& x, double r,
                   const BallVolumeOptions& opt) {
    if (d.exact_ball_volume) return d.exact_ball_volume(x, r);
    return ball_volume_mc(d, x, r, opt).volume;
}

CertReport triangle_constant(const QuasiDistance& d, const TripleSampleOptions& opt) {
    struct Chunk {
        double kappa = 0.0;
        Witness argmax;
        std::uint64_t degenerate = 0;
    };
    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = chunk_count(opt.samples, kChunk);
    auto results = run_chunked<Chunk>(chunks, opt.workers, [&](std::size_t ci) {
        SeededRng rng(opt.seed, ci);
        Chunk r;
        const std::size_t begin = ci * kChunk;
        const std::size_t end = std::min<std::size_t>(opt.samples, begin + kChunk);
        const Vec lo(d.dim, -opt.box_half), hi(d.dim, opt.box_half);
        for (std::size_t i = begin; i < end; ++i) {
            const Vec x = rng.in_box(lo, hi);
            const Vec y = rng.in_box(lo, hi);
            Vec z(d.dim);
            if (i % 16 == 0) {
                z = (x + y) * 0.5; // exact midpoints are extremal for the
                                   // volume-type metrics; pin them in
            } else {
                const double u = rng.uniform01();
                const double v = rng.uniform01();
                if (u < 0.25)
                    z = rng.in_box(lo, hi);
                else if (u < 0.60)
                    z = x + (y - x) * v;
                else if (u < 0.80)
                    z = x + (y - x) * (0.2 * v);
                else
                    z = y - (y - x) * (0.2 * v);
            }
            const double denom = d.eval(x, z) + d.eval(z, y);
            const double num = d.eval(x, y);
            if (denom <= 0.0) {
                if (num > 0.0) r.degenerate++; // cannot happen for a metric
                continue;
            }
            const double ratio = num / denom;
            if (ratio > r.kappa) {
                r.kappa = ratio;
                auto data = flatten(x);
                auto yd = flatten(y);
                auto zd = flatten(z);
                data.insert(data.end(), yd.begin(), yd.end());
                data.insert(data.end(), zd.begin(), zd.end());
                data.push_back(ratio);
                r.argmax = Witness{"triangle_worst_triple", std::move(data)};
            }
        }
        return r;
    });

    CertReport rep;
    rep.check = "triangle_constant";
    rep.subject = d.name;
    rep.seed = opt.seed;
    rep.samples = opt.samples;
    rep.workers = opt.workers;
    double kappa = 0.0;
    std::uint64_t degenerate = 0;
    Witness argmax;
    for (const auto& r : results) {
        if (r.kappa > kappa) {
            kappa = r.kappa;
            argmax = r.argmax;
        }
        degenerate += r.degenerate;
    }
    if (!argmax.label.empty()) rep.witnesses.push_back(argmax);
    rep.set("kappa_hat", kappa);
    rep.set("degenerate", static_cast<double>(degenerate));
    rep.pass = degenerate == 0 && kappa > 0.0;
    return rep;
}

CertReport metric_axioms(const QuasiDistance& d, const TripleSampleOptions& opt) {
    struct Chunk {
        std::uint64_t violations = 0;
        double worst_asym = 0.0;
        std::vector<Witness> ws;
    };
    const bool quasi = d.symmetry == Symmetry::quasi;
    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = chunk_count(opt.samples, kChunk);
    auto results = run_chunked<Chunk>(chunks, opt.workers, [&](std::size_t ci) {
        SeededRng rng(opt.seed, ci);
        Chunk r;
        const std::size_t begin = ci * kChunk;
        const std::size_t end = std::min<std::size_t>(opt.samples, begin + kChunk);
        const Vec lo(d.dim, -opt.box_half), hi(d.dim, opt.box_half);
        for (std::size_t i = begin; i < end; ++i) {
            Vec x = rng.in_box(lo, hi);
            Vec y = rng.in_box(lo, hi);
            if (quasi) {
                // keep clear of the degenerate first-coordinate locus
                auto off_axis = [&](double v) {
                    const double m = std::max(0.1, std::min(std::abs(v), opt.box_half));
                    return std::copysign(m, v);
                };
                x[0] = off_axis(x[0]);
                y[0] = off_axis(y[0]);
            }
            bool bad = false;
            std::string label;
            const double fwd = d.eval(x, y);
            const double rev = d.eval(y, x);
            if (d.eval(x, x) > 1e-12 || d.eval(y, y) > 1e-12) {
                bad = true;
                label = "self_distance_nonzero";
            } else if (!(x == y) && !(fwd > 0.0 && rev > 0.0)) {
                bad = true;
                label = "distinct_points_at_distance_zero";
            } else if (!quasi) {
                if (std::abs(fwd - rev) > 1e-12 * std::max(fwd, rev)) {
                    bad = true;
                    label = "symmetry_violated";
                }
            } else if (fwd > 0.0 && rev > 0.0) {
                const double ratio = std::max(fwd / rev, rev / fwd);
                r.worst_asym = std::max(r.worst_asym, ratio);
                if (ratio > d.quasi_symmetry_bound * (1.0 + 1e-9)) {
                    bad = true;
                    label = "quasi_symmetry_bound_exceeded";
                }
            }
            if (bad) {
                ++r.violations;
                if (r.ws.size() < 8) {
                    auto data = flatten(x);
                    auto yd = flatten(y);
                    data.insert(data.end(), yd.begin(), yd.end());
                    data.push_back(fwd);
                    data.push_back(rev);
                    r.ws.push_back(Witness{label, std::move(data)});
                }
            }
        }
        return r;
    });

    CertReport rep;
    rep.check = "metric_axioms";
    rep.subject = d.name;
    rep.seed = opt.seed;
    rep.samples = opt.samples;
    rep.workers = opt.workers;
    std::uint64_t violations = 0;
    double worst = 0.0;
    for (const auto& r : results) {
        violations += r.violations;
        worst = std::max(worst, r.worst_asym);
        for (const auto& w : r.ws)
            if (rep.witnesses.size() < 8) rep.witnesses.push_back(w);
    }
    rep.set("symmetry_mode", quasi ? 1.0 : 0.0);
    rep.set("declared_quasi_symmetry_bound", d.quasi_symmetry_bound);
    rep.set("worst_symmetry_ratio", worst);
    rep.set("violations", static_cast<double>(violations));
    rep.pass = violations == 0;
    return rep;
}

CertReport ahlfors_certify(const QuasiDistance& d, const AhlforsOptions& opt) {
    if (opt.radii < 2) throw contract_error("ahlfors_certify: need at least 2 radii");
    struct Row {
        double c1 = 1.0;
        double slope = 0.0;
        double ratio_lo = std::numeric_limits<double>::infinity();
        double ratio_hi = 0.0;
        Vec center;
        bool diverges = false;
    };
    const std::size_t total_centers = opt.centers + 1; // index 0 is the origin
    auto rows = run_chunked<Row>(total_centers, opt.workers, [&](std::size_t ci) {
        Row row;
        if (ci == 0) {
            row.center = Vec(d.dim, 0.0);
        } else {
            SeededRng rng(opt.seed, ci);
            row.center = rng.in_box(Vec(d.dim, -opt.box_half), Vec(d.dim, opt.box_half));
        }
        SeededRng seeder(opt.seed, 0x4000 + ci);
        const double dl = (opt.r_log2_hi - opt.r_log2_lo) / (opt.radii - 1);
        std::vector<double> lr(opt.radii), lratio(opt.radii);
        for (int j = 0; j < opt.radii; ++j) {
            const double r = std::exp2(opt.r_log2_lo + j * dl);
            BallVolumeOptions bopt;
            bopt.seed = seeder.next_u64();
            bopt.points = opt.mc_points;
            bopt.workers = 1; // parallelism lives at the center level
            const double vol = ball_volume(d, row.center, r, bopt);
            const double ratio = vol / r;
            lr[j] = std::log2(r);
            lratio[j] = std::log2(std::max(ratio, 1e-300));
            row.ratio_lo = std::min(row.ratio_lo, ratio);
            row.ratio_hi = std::max(row.ratio_hi, ratio);
            row.c1 = std::max({row.c1, ratio, ratio > 0.0 ? 1.0 / ratio
                                                          : std::numeric_limits<double>::infinity()});
        }
        double mr = 0.0, mq = 0.0;
        for (int j = 0; j < opt.radii; ++j) {
            mr += lr[j];
            mq += lratio[j];
        }
        mr /= opt.radii;
        mq /= opt.radii;
        double num = 0.0, den = 0.0;
        for (int j = 0; j < opt.radii; ++j) {
            num += (lr[j] - mr) * (lratio[j] - mq);
            den += (lr[j] - mr) * (lr[j] - mr);
        }
        row.slope = num / den;
        row.diverges = std::abs(row.slope) > opt.slope_tol;
        return row;
    });

    CertReport rep;
    rep.check = "ahlfors_certify";
    rep.subject = d.name;
    rep.seed = opt.seed;
    rep.samples = total_centers * static_cast<std::uint64_t>(opt.radii);
    rep.workers = opt.workers;
    double c1 = 1.0, worst_slope = 0.0;
    double ratio_lo = std::numeric_limits<double>::infinity(), ratio_hi = 0.0;
    std::uint64_t diverging = 0;
    for (const auto& row : rows) {
        c1 = std::max(c1, row.c1);
        ratio_lo = std::min(ratio_lo, row.ratio_lo);
        ratio_hi = std::max(ratio_hi, row.ratio_hi);
        if (std::abs(row.slope) > std::abs(worst_slope)) worst_slope = row.slope;
        if (row.diverges) {
            ++diverging;
            if (rep.witnesses.size() < 8) {
                auto data = flatten(row.center);
                data.push_back(row.slope);
                data.push_back(row.ratio_lo);
                data.push_back(row.ratio_hi);
                rep.witnesses.push_back(Witness{"ball_ratio_diverges_in_r", std::move(data)});
            }
        }
    }
    rep.set("c1_hat", c1);
    rep.set("worst_slope", worst_slope);
    rep.set("ratio_lo", ratio_lo);
    rep.set("ratio_hi", ratio_hi);
    rep.set("diverging_centers", static_cast<double>(diverging));
    rep.pass = diverging == 0;
    return rep;
}

} // namespace ecov
