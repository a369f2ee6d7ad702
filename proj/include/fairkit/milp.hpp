#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "fairkit/core.hpp"
#include "fairkit/coreset.hpp"

namespace fairkit {

enum class RowSense { le, ge, eq };

struct LpRow {
    std::vector<double> coeffs;  // dense, one per variable
    RowSense sense = RowSense::le;
    double rhs = 0.0;
};

/// minimize c.x subject to rows, x >= 0.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<LpRow> rows;

    void add_row(std::vector<double> coeffs, RowSense sense, double rhs);
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double value = 0.0;
};

/// Dense two-phase primal simplex with Bland's rule.
LpResult simplex_solve(const LinearProgram& lp);

enum class AssignStatus { optimal, infeasible, cutoff };

struct FairAssignResult {
    AssignStatus status = AssignStatus::infeasible;
    ConstraintMatrix g;  // k x Gamma
    Assignment assignment;
    double cost = std::numeric_limits<double>::infinity();
    std::size_t nodes = 0;  // branch-and-bound nodes explored
};

struct MilpOptions {
    /// Stop early (status cutoff) when no assignment can beat this cost.
    double cutoff = std::numeric_limits<double>::infinity();
    std::size_t max_nodes = 2'000'000;
};

/// Optimal fair assignment of the weighted set W to the given centers.
/// Item classes refer to the class structure of `ds`.
FairAssignResult fair_assign_exact(const Dataset& ds, const WeightedSet& W,
                                   const std::vector<Center>& centers, const FairnessSpec& spec,
                                   Objective obj, const MilpOptions& opts = {});

/// Same, over an explicit metric (e.g. a transformed copy of ds.space()).
FairAssignResult fair_assign_exact(const MetricSpace& space, const ClassStructure& classes,
                                   const WeightedSet& W, const std::vector<Center>& centers,
                                   const FairnessSpec& spec, Objective obj,
                                   const MilpOptions& opts = {});

/// Per-class transport of P with the class sums fixed by g. Costs are rounded
/// with eps0 = epsilon / 6 against the per-class budgets (exact transport
/// cost when `budgets` is empty).
Assignment restore_assignment(const Dataset& ds, const ConstraintMatrix& g,
                              const std::vector<Center>& centers, double epsilon, Objective obj,
                              const std::vector<double>& budgets = {});

/// Exact per-class transport cost of P under g, no rounding.
std::vector<double> class_transport_costs(const Dataset& ds, const ConstraintMatrix& g,
                                          const std::vector<Center>& centers, Objective obj);

/// eps0 with (1 + 3 eps0)(1 + eps0) = 1 + epsilon.
double split_epsilon(double epsilon);

/// Coreset of P, exact assignment on it, then restoration to P.
FairAssignResult fair_assign_approx(const Dataset& ds, const std::vector<Center>& centers,
                                    const FairnessSpec& spec, double epsilon, Objective obj,
                                    std::uint64_t seed, const CoresetConfig& cfg = {});

}  // namespace fairkit
