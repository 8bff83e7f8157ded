#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace statdec {

// Deterministic random source. All draws go through explicit conversions of
// raw mt19937_64 output, never through std::*_distribution, so the stream is
// bit-identical across platforms and standard libraries for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the spare value is cached.
    double normal();

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n);

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    // Independent child stream, seeded from this one.
    Rng fork() { return Rng(next_u64()); }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace statdec
