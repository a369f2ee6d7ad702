#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairkit/core.hpp"
#include "fairkit/coreset.hpp"
#include "fairkit/milp.hpp"

namespace fairkit {

/// Assignment constraint handled by the clustering frameworks.
struct Constraint {
    enum class Kind { fair, lower, capacity, diversity, chromatic };
    Kind kind = Kind::fair;
    std::int64_t param = 0;  // L, U or l
    FairnessSpec spec;       // used by fair

    static Constraint fair(FairnessSpec s) { return {Kind::fair, 0, std::move(s)}; }
    static Constraint lower(std::int64_t l) { return {Kind::lower, l, {}}; }
    static Constraint capacity(std::int64_t u) { return {Kind::capacity, u, {}}; }
    static Constraint diversity(std::int64_t ell) { return {Kind::diversity, ell, {}}; }
    static Constraint chromatic() { return {Kind::chromatic, 0, {}}; }

    /// "fair", "lower:L", "cap:U", "div:l", "chromatic"
    static Constraint parse(const std::string& text);
    std::string to_string() const;

    /// The fairness spec this constraint implies for a dataset with l groups
    /// (fair and diversity only).
    FairnessSpec fairness_for(std::size_t num_groups) const;
};

/// Exact predicate check of a complete assignment.
bool satisfies(const Constraint& c, const Assignment& asg, const Dataset& ds);

struct SolutionMeta {
    std::string algorithm;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    bool guess_space_exhaustive = true;
    double guess_space_size = 0.0;  // |W|^k * |grid|^k, or the candidate count
    std::size_t guesses_evaluated = 0;
    std::size_t grid_size = 0;
    std::size_t coreset_size = 0;
    double upper_bound = 0.0;
    double elapsed_ms = 0.0;
};

struct Solution {
    std::vector<Center> centers;
    Assignment assignment;
    double cost = 0.0;
    SolutionMeta meta;
};

struct ApproxOptions {
    std::uint64_t guess_budget = 1'000'000;
    int threads = 1;
    int trials = 32;        // candidate trials (Euclidean)
    double alpha_c = 0.01;  // aspect-ratio shift constant
    CoresetConfig coreset;
};

/// Clip at D_max = 2 n^10 D, then add D_min = alpha_c D / n^3 to every pair of
/// distinct indices. D is a cost; for means its square root is used so the
/// bounds are distances. D = 0 leaves the metric unchanged.
MetricSpace reduce_aspect_ratio(const MetricSpace& space, double D, std::size_t n, Objective obj,
                                double alpha_c = 0.01);

/// k-center seeding, constant-error coreset, constrained assignment on it.
double cost_upper_bound(const Dataset& ds, std::size_t k, const Constraint& c, Objective obj,
                        std::uint64_t seed, const CoresetConfig& cfg = {});
double cost_upper_bound(const Dataset& ds, std::size_t k, const FairnessSpec& spec, Objective obj,
                        std::uint64_t seed);

/// Final assignment of P to fixed centers under a constraint. Fairness uses
/// the coreset-and-restore path with error epsilon / 8; the flow variants are
/// solved exactly.
Solution assign_centers(const Dataset& ds, const std::vector<Center>& centers, const Constraint& c,
                        double epsilon, Objective obj, std::uint64_t seed,
                        const CoresetConfig& cfg = {});

/// Leader/radius guessing over the candidate centers of ds.
Solution fair_cluster_metric(const Dataset& ds, std::size_t k, const FairnessSpec& spec,
                             double epsilon, Objective obj, std::uint64_t seed,
                             const ApproxOptions& opts = {});

/// Candidate center lists on a reduced instance.
Solution fair_cluster_euclidean(const Dataset& ds, std::size_t k, const FairnessSpec& spec,
                                double epsilon, Objective obj, std::uint64_t seed,
                                const ApproxOptions& opts = {});

Solution constrained_cluster(const Dataset& ds, std::size_t k, double epsilon, Objective obj,
                             const Constraint& c, Regime regime, std::uint64_t seed,
                             const ApproxOptions& opts = {});

struct ReducedInstance {
    WeightedSet W;
    double epsilon0 = 0.0;
};

/// Coreset with error eps0, (1 + 3 eps0)(1 + eps0) = 1 + epsilon.
ReducedInstance reduce_instance(const Dataset& ds, std::size_t k, double epsilon, Objective obj,
                                std::uint64_t seed, const CoresetConfig& cfg = {});

/// Pulls a solution of the reduced instance (its constraint matrix) back to P.
Assignment lift_reduced(const Dataset& ds, const ReducedInstance& red, const ConstraintMatrix& g,
                        const std::vector<Center>& centers, Objective obj);

}  // namespace fairkit
