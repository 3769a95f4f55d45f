#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace netseir {

// splitmix64 finalizer; used only for seed derivation, never as a stream.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stable per-index stream seeds: derive_seed(master, i) depends only on
// (master, i), so adding replicates never perturbs earlier ones.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(master, a), b);
}

// Seedable random stream with a fully portable draw sequence.
//
// The engine is std::mt19937_64, whose output is pinned by the standard.
// All derived draws (uniform doubles, bounded ints, shuffles, Bernoulli)
// are implemented here rather than via <random> distributions, because
// distribution output is implementation-defined and would break
// cross-platform reproducibility of seeded runs.
class Rng {
public:
    Rng() : engine_(0) {}

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [0, bound); unbiased (Lemire's multiply-with-rejection).
    std::uint32_t below(std::uint32_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
        std::uint64_t x = next_u64() >> 32;
        std::uint64_t m = x * bound;
        auto low = static_cast<std::uint32_t>(m);
        if (low < bound) {
            std::uint32_t threshold = (0u - bound) % bound;
            while (low < threshold) {
                x = next_u64() >> 32;
                m = x * bound;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    bool bernoulli(double p) { return next_double() < p; }

    // Fisher-Yates; std::shuffle is implementation-defined, this is not.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[below(static_cast<std::uint32_t>(i))]);
        }
    }

    // Partial Fisher-Yates: after the call, values[0..k) is a uniform
    // sample without replacement.
    template <typename T>
    void partial_shuffle(std::vector<T>& values, std::size_t k) {
        if (k > values.size()) throw std::invalid_argument("Rng::partial_shuffle: k exceeds size");
        const std::size_t n = values.size();
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + below(static_cast<std::uint32_t>(n - i));
            std::swap(values[i], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace netseir
