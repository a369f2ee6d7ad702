#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace fairkit {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent per-stage / per-cell seeds.
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed from a parent seed and a tag plus optional indices.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                          std::uint64_t a = 0, std::uint64_t b = 0);

// The standard distributions are implementation-defined; these are not, so a
// seed reproduces the same stream on every toolchain.
double uniform01(Rng& rng);
std::size_t uniform_index(Rng& rng, std::size_t n);

/// Draws an index with probability proportional to `weights[i]`.
/// Falls back to uniform when every weight is zero.
std::size_t sample_proportional(Rng& rng, const std::vector<double>& weights);

/// `count` distinct values from [0, universe), in draw order (Floyd's algorithm).
std::vector<std::uint64_t> sample_without_replacement(Rng& rng, std::uint64_t universe,
                                                      std::size_t count);

}  // namespace fairkit
