#pragma once

#include <cmath>
#include <cstdint>

#include "ecov/vec.hpp"

namespace ecov {

/// Counter-based generator keyed by (seed, stream). Output i is a pure
/// function of (seed, stream, i), so parallel validators hand each sample
/// chunk its own stream id and results are independent of worker count.
/// Mixing is the SplitMix64 finalizer over a Weyl sequence.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(mix(seed + kGamma) ^ (stream * 0xD2B74407B1CE6E93ULL + 0x8BB84B93962EACC9ULL))) {}

    /// Derives the generator for a sub-stream of this key (chunk ids, retries).
    SeededRng substream(std::uint64_t s) const { return SeededRng(key_, s + 1); }

    std::uint64_t next_u64() { return mix(key_ + (++ctr_) * kGamma); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// 2^U[lo2, hi2]; handy for scale-free sampling of radii and aspect ratios.
    double exp2_uniform(double lo2, double hi2) { return std::exp2(uniform(lo2, hi2)); }

    /// Standard normal via Box-Muller (cosine branch). Consumes exactly two
    /// uniforms per call; no rejection, so draw counts stay deterministic.
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(2.0 * kPi * u2);
    }

    Vec normal_vec(int n) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    Vec unit_vec(int n) {
        for (;;) {
            Vec v = normal_vec(n);
            double nr = v.norm();
            if (nr > 1e-12) return v * (1.0 / nr);
        }
    }

    /// Uniform in the closed unit ball: direction times radius^(1/n).
    Vec ball_vec(int n) {
        Vec u = unit_vec(n);
        return u * std::pow(uniform01(), 1.0 / n);
    }

    Vec in_box(const Vec& lo, const Vec& hi) {
        Vec p(lo.size());
        for (int i = 0; i < lo.size(); ++i) p[i] = uniform(lo[i], hi[i]);
        return p;
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    static constexpr double kPi = 3.14159265358979323846;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

} // namespace ecov
