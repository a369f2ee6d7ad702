#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fairkit/core.hpp"
#include "fairkit/random.hpp"
#include "fairkit/seeding.hpp"

namespace fairkit {

enum class Regime { metric, euclidean };

struct CoresetConfig {
    double c_med = 4.0;
    double c_mean = 4.0;
    double nu = 32.0;
    double beta_factor = 2.0;
    int repetitions = 3;
    Regime regime = Regime::metric;
    bool strict_kmeans_rescale = false;
    std::size_t forced_s = 0;  // nonzero overrides the formula
};

struct SamplingPlan {
    std::size_t s = 1;
    Objective objective = Objective::median;
    Regime regime = Regime::metric;
    double c_med = 4.0;
    double c_mean = 4.0;
};

/// s = ceil(c * k * L / eps^3) for median, eps^5 for means, with L = ln n in
/// the metric regime and ln n + d ln(1/eps) in the Euclidean one.
SamplingPlan sample_size(std::int64_t n, std::size_t k, double epsilon, Objective obj,
                         Regime regime, std::size_t dim, const CoresetConfig& cfg = {});

struct RingCell {
    std::size_t center = 0;  // position in the bicriteria center list
    int ring = 0;
    bool operator==(const RingCell&) const = default;
};

struct RingDecomposition {
    BicriteriaSolution bicriteria;
    double mu = 0.0;  // distance units
    int max_ring = 0;  // N
    std::vector<RingCell> ring_of;  // per item
};

/// Ring index for nearest-center distance r: 0 when r <= mu, else the j with
/// 2^(j-1) mu < r <= 2^j mu.
int ring_index(double r, double mu);

/// mu = Pi / (nu n) for median; sqrt(Pi / (nu n)) for means so that it is a
/// distance. n is the total item weight.
RingDecomposition ring_decompose(const WeightedSet& items, const BicriteriaSolution& bic,
                                 Objective obj);

/// All items when total weight <= s; otherwise s distinct weight units drawn
/// uniformly, mapped back to items, with integer weights summing to the total.
WeightedSet sample_ring_class(const WeightedSet& pts, std::size_t s, Rng& rng);

struct Coreset {
    WeightedSet items;
    std::vector<RingCell> cells;  // per output item
    RingDecomposition rings;
    SamplingPlan plan;
};

/// Coreset of a weighted input (weights are multiplicities).
Coreset build_coreset(const MetricSpace& space, const WeightedSet& input, std::size_t num_classes,
                      std::size_t k, double epsilon, Objective obj, std::uint64_t seed,
                      const CoresetConfig& cfg = {});

WeightedSet build_universal_coreset(const Dataset& ds, std::size_t k, double epsilon, Objective obj,
                                    std::uint64_t seed, const CoresetConfig& cfg = {});

}  // namespace fairkit
