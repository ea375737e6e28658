#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace tsadam {

// Deterministic random source with a fully documented pipeline so that
// runs reproduce across platforms and reimplementations:
//   * engine: std::mt19937_64 (bit-exact per the C++ standard)
//   * uniform doubles: top 53 bits, u = (x >> 11) * 2^-53, in [0, 1)
//   * gaussians: Box-Muller on (0,1] x [0,1) uniforms, spare cached
//   * shuffles and index draws: Fisher-Yates with modulo rejection
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; one transform yields two deviates.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so log(u1) is finite.
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Uniform integer in [0, n), rejection sampling to avoid modulo bias.
    std::uint64_t uniform_index(std::uint64_t n);

    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::uint64_t i = items.size(); i > 1; --i) {
            const std::uint64_t j = uniform_index(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    // k distinct indices from [0, n), order unspecified but deterministic.
    std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t k);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Splitmix64 finalizer; used to derive independent sub-seeds
// (per-replicate, per-seed-run) from one base seed. The rule is
// sub_seed(base, index) = mix(base + (index + 1) * golden_gamma).
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

} // namespace tsadam
