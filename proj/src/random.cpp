#include "fairkit/random.hpp"

#include <stdexcept>
#include <unordered_set>

namespace fairkit {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t a,
                          std::uint64_t b) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char ch : tag) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    return mix64(mix64(mix64(seed ^ h) + a) + b);
}

double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    const std::uint64_t range = n;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % range);
}

std::size_t sample_proportional(Rng& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) return uniform_index(rng, weights.size());
    const double target = uniform01(rng) * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        last_positive = i;
        if (target < acc) return i;
    }
    return last_positive;
}

std::vector<std::uint64_t> sample_without_replacement(Rng& rng, std::uint64_t universe,
                                                      std::size_t count) {
    if (count > universe) throw std::invalid_argument("sample_without_replacement: count > universe");
    std::vector<std::uint64_t> out;
    out.reserve(count);
    std::unordered_set<std::uint64_t> taken;
    taken.reserve(count * 2);
    for (std::uint64_t j = universe - count; j < universe; ++j) {
        // unbiased draw from [0, j]
        const std::uint64_t range = j + 1;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
        std::uint64_t x = rng();
        while (x >= limit) x = rng();
        const std::uint64_t t = x % range;
        if (taken.insert(t).second) {
            out.push_back(t);
        } else {
            taken.insert(j);
            out.push_back(j);
        }
    }
    return out;
}

}  // namespace fairkit
