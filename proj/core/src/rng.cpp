#include "dyncluster/rng.hpp"

#include <cmath>

#include "dyncluster/error.hpp"

namespace dyncluster {

std::uint64_t Rng::uniform_u64(std::uint64_t n) {
    if (n == 0) fail(ErrorCode::InvalidArgument, "uniform_u64(0)");
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = gen_();
    } while (x >= limit);
    return x % n;
}

double Rng::uniform_real() {
    // 53 random mantissa bits.
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_gauss_) {
        have_spare_gauss_ = false;
        return spare_gauss_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform_real() - 1.0;
        v = 2.0 * uniform_real() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_gauss_ = v * m;
    have_spare_gauss_ = true;
    return u * m;
}

std::uint64_t Rng::poisson(double lambda) {
    if (!(lambda > 0.0)) fail(ErrorCode::InvalidDistributionParam, "poisson lambda must be > 0");
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform_real();
    } while (p > limit);
    return k - 1;
}

std::uint64_t Rng::zipf(double s, std::uint64_t k_max) {
    if (!(s > 0.0) || k_max == 0)
        fail(ErrorCode::InvalidDistributionParam, "zipf needs s > 0 and k_max >= 1");
    double total = 0.0;
    for (std::uint64_t k = 1; k <= k_max; ++k) total += std::pow(static_cast<double>(k), -s);
    double target = uniform_real() * total;
    double acc = 0.0;
    for (std::uint64_t k = 1; k <= k_max; ++k) {
        acc += std::pow(static_cast<double>(k), -s);
        if (target < acc) return k;
    }
    return k_max;
}

std::size_t Rng::weighted_index(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) fail(ErrorCode::InvalidArgument, "negative weight");
        total += w;
    }
    if (!(total > 0.0)) fail(ErrorCode::InvalidArgument, "all weights zero");
    double target = uniform_real() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (target < acc) return i;
    }
    // Floating-point tail: last positive weight.
    for (std::size_t i = weights.size(); i > 0; --i)
        if (weights[i - 1] > 0.0) return i - 1;
    return weights.size() - 1;
}

Rng Rng::fork(std::uint64_t salt) const {
    // SplitMix64 finalizer over (seed, salt).
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
}

}  // namespace dyncluster
