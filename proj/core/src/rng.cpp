#include "tsadam/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tsadam {

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

std::vector<std::uint64_t> Rng::sample_without_replacement(std::uint64_t n, std::uint64_t k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k exceeds n");
    // Partial Fisher-Yates over an index pool.
    std::vector<std::uint64_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::uint64_t> out;
    out.reserve(k);
    for (std::uint64_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + uniform_index(n - i);
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    return out;
}

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return mix_seed(base + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

} // namespace tsadam
