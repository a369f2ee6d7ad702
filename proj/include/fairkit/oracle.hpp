#pragma once

#include <cstdint>
#include <vector>

#include "fairkit/approx.hpp"
#include "fairkit/core.hpp"

namespace fairkit {

/// Exceeding any bound raises BudgetError.
struct OracleBudget {
    std::size_t max_points = 8;
    std::size_t max_k = 3;
    std::size_t max_candidates = 64;
    std::uint64_t max_assignments = 50'000'000;
};

struct OracleSolution {
    bool feasible = false;
    std::vector<Center> centers;
    Assignment assignment;
    double cost = std::numeric_limits<double>::infinity();
};

/// Min cost with class t sending exactly M(j, t) units to center j; infinity
/// when the column sums do not match. Solved per class by flow.
double exact_constrained_cost(const MetricSpace& space, const WeightedSet& W, const ConstraintMatrix& M,
                              const std::vector<Center>& centers, Objective obj);

/// Same quantity by enumerating every integral assignment.
double exact_constrained_cost_enum(const MetricSpace& space, const WeightedSet& W,
                                   const ConstraintMatrix& M, const std::vector<Center>& centers,
                                   Objective obj, const OracleBudget& budget = {});

/// Best fair integral assignment to fixed centers, by enumeration. Items with
/// weight w are split over the centers in every possible way.
OracleSolution exact_fair_assignment(const Dataset& ds, const WeightedSet& W,
                                     const std::vector<Center>& centers, const FairnessSpec& spec,
                                     Objective obj, const OracleBudget& budget = {});

/// Minimum over all k-subsets of the pool (default: the candidate centers).
OracleSolution exact_fair_optimum(const Dataset& ds, std::size_t k, const FairnessSpec& spec,
                                  Objective obj, std::vector<std::size_t> pool = {},
                                  const OracleBudget& budget = {});

/// Euclidean optimum with unrestricted centers: every fair partition into at
/// most k parts, each part priced at its centroid (means) or its Weiszfeld
/// median, whichever of that and the best member point is cheaper (median).
OracleSolution exact_fair_optimum_free(const Dataset& ds, std::size_t k, const FairnessSpec& spec,
                                       Objective obj, const OracleBudget& budget = {});

/// Best assignment of unit-weight points to fixed centers under a variant
/// constraint, by enumeration.
OracleSolution exact_variant_assignment(const Dataset& ds, const std::vector<Center>& centers,
                                        const Constraint& c, Objective obj,
                                        const OracleBudget& budget = {});

OracleSolution exact_variant_optimum(const Dataset& ds, std::size_t k, const Constraint& c, Objective obj,
                                     std::vector<std::size_t> pool = {}, const OracleBudget& budget = {});

/// Geometric median by Weiszfeld iteration.
std::vector<double> weiszfeld(const std::vector<std::vector<double>>& pts);

}  // namespace fairkit
