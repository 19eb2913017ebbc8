#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dyncluster {

// Seeded RNG with hand-rolled samplers. std::random distributions are
// implementation-defined, so every draw here goes through our own code to
// keep outputs identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_u64(std::uint64_t n);

    // Uniform double in [0, 1).
    double uniform_real();

    // Uniform double in [lo, hi).
    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

    // Standard normal via Box-Muller.
    double gaussian();

    // Poisson via Knuth's product method (fine for small lambda).
    std::uint64_t poisson(double lambda);

    // Zipf on {1..k_max} with exponent s, by inverse CDF over the truncated pmf.
    std::uint64_t zipf(double s, std::uint64_t k_max);

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_u64(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Index draw proportional to non-negative weights (at least one positive).
    std::size_t weighted_index(const std::vector<double>& weights);

    // Independent child stream; a stable function of (seed, salt).
    Rng fork(std::uint64_t salt) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    bool have_spare_gauss_ = false;
    double spare_gauss_ = 0.0;
};

}  // namespace dyncluster
