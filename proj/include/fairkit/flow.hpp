#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "fairkit/core.hpp"

namespace fairkit {

inline constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max() / 4;

struct FlowArc {
    std::size_t from = 0;
    std::size_t to = 0;
    std::int64_t capacity = 0;
    double cost = 0.0;
};

class FlowNetwork {
public:
    /// supply > 0 for sources, < 0 for sinks.
    std::size_t add_node(std::int64_t supply = 0);
    std::size_t add_arc(std::size_t from, std::size_t to, std::int64_t capacity, double cost);
    void set_supply(std::size_t node, std::int64_t supply) { supply_.at(node) = supply; }

    std::size_t num_nodes() const { return supply_.size(); }
    const std::vector<std::int64_t>& supplies() const { return supply_; }
    const std::vector<FlowArc>& arcs() const { return arcs_; }

private:
    std::vector<std::int64_t> supply_;
    std::vector<FlowArc> arcs_;
};

struct FlowResult {
    std::vector<std::int64_t> arc_flow;
    double total_cost = 0.0;
    bool feasible = false;
};

/// Successive shortest paths with Dijkstra on reduced costs. Throws InputError
/// when supplies do not sum to zero.
FlowResult min_cost_flow(const FlowNetwork& net);

/// Conservation and capacity check of a computed flow.
bool flow_is_valid(const FlowNetwork& net, const FlowResult& res);

struct RoundingParams {
    double epsilon0 = 0.0;
    double budget = 0.0;       // A_t
    std::int64_t count = 1;    // n, the class weight
};

/// D_max = 2 A, D_min = eps0 A / (2 n); clamps to [D_min, D_max] and rounds up
/// to D_min (1 + eps0)^q in between. Identity when A = 0.
std::vector<double> cost_rounding(const std::vector<double>& costs, const RoundingParams& params);

struct TransportResult {
    std::vector<AssignmentEntry> entries;
    double cost = 0.0;  // true objective cost, not the rounded one
};

/// Min-cost integral transport of one class to the centers, center j taking
/// exactly g_row[j] units.
TransportResult class_transport(const MetricSpace& space, const WeightedSet& class_points,
                                const std::vector<Center>& centers,
                                const std::vector<std::int64_t>& g_row, Objective obj,
                                const std::optional<RoundingParams>& rounding = std::nullopt);

struct VariantResult {
    Assignment assignment;
    double cost = 0.0;
};

/// Every cluster receives at least L units. epsilon > 0 rounds arc costs up
/// to a (1 + epsilon) grid before solving.
VariantResult lower_bounded_assign(const MetricSpace& space, const WeightedSet& pts,
                                   const std::vector<Center>& centers, std::int64_t lower,
                                   double epsilon, Objective obj);

/// Every cluster receives at most U units.
VariantResult capacitated_assign(const MetricSpace& space, const WeightedSet& pts,
                                 const std::vector<Center>& centers, std::int64_t upper,
                                 Objective obj);

/// Each cluster holds at most one point of every color. Colors are the
/// equivalence classes of the dataset; every item needs weight 1.
VariantResult chromatic_assign(const MetricSpace& space, const WeightedSet& pts,
                               const std::vector<Center>& centers, Objective obj);

/// Nearest center for every item, lowest index on ties.
VariantResult nearest_assign(const MetricSpace& space, const WeightedSet& pts,
                             const std::vector<Center>& centers, Objective obj);

}  // namespace fairkit
