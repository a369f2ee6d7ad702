#pragma once

#include <cstdint>
#include <vector>

#include "fairkit/core.hpp"

namespace fairkit {

struct BicriteriaSolution {
    std::vector<std::size_t> centers;  // space indices
    double cost = 0.0;                 // Pi, in objective units
    double nu = 32.0;
    std::vector<std::size_t> nearest;       // per item, position in `centers`
    std::vector<double> nearest_dist;       // per item, plain distance
};

/// D^power sampling of ceil(beta_factor * k) centers among the items (power 1
/// for median, 2 for means), best of `repetitions` runs. Item weights act as
/// multiplicities.
BicriteriaSolution bicriteria_seed(const MetricSpace& space, const WeightedSet& items, std::size_t k,
                                   Objective obj, double beta_factor, std::uint64_t seed,
                                   int repetitions = 3, double nu = 32.0);

BicriteriaSolution bicriteria_seed(const Dataset& ds, std::size_t k, Objective obj,
                                   double beta_factor, std::uint64_t seed);

/// Farthest-first traversal over the data points starting at point 0.
std::vector<std::size_t> gonzalez_kcenter(const Dataset& ds, std::size_t k, Objective obj);

/// Largest point-to-nearest-center distance.
double kcenter_radius(const Dataset& ds, const std::vector<std::size_t>& centers);

struct CandidateList {
    std::vector<std::vector<Center>> sets;
    int trials = 0;
    bool truncated = false;
};

struct CandidateOptions {
    int trials = 32;
    double c_pool = 2.0;
    std::size_t max_candidates = 20'000;
};

/// Grows partial center sets over k rounds. Each round draws a pool of
/// ceil(c_pool / epsilon) points by D^power sampling and extends by every
/// pooled point and, for means, by the centroid of every pooled subset of size
/// ceil(1 / epsilon). Euclidean only.
CandidateList candidate_centers(const MetricSpace& space, const WeightedSet& points, std::size_t k,
                                double epsilon, Objective obj, std::uint64_t seed,
                                const CandidateOptions& opts = {});

/// Total order on centers (index first, then coordinates).
bool center_less(const Center& a, const Center& b);
bool centers_less(const std::vector<Center>& a, const std::vector<Center>& b);

}  // namespace fairkit
