#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fairkit {

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

enum class Objective { median, means };

std::string_view to_string(Objective obj);
Objective parse_objective(std::string_view text);

/// d for k-median, d^2 for k-means.
inline double objective_cost(double distance, Objective obj) {
    return obj == Objective::means ? distance * distance : distance;
}

// Error taxonomy. The CLI maps these to exit codes 1 / 2 / 3.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-negative rational used for exact fairness comparisons (alpha = 1/2 must
/// not turn into a float boundary problem).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    /// Best approximation with denominator <= max_den (continued fractions).
    static Rational from_double(double value, std::int64_t max_den = 1'000'000);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// ---------------------------------------------------------------------------
// Metric space

/// A center location: either a point of the metric space (index) or a free
/// coordinate vector (Euclidean only). Euclidean centers that are space points
/// carry both.
struct Center {
    std::size_t index = kNoIndex;
    std::vector<double> coords;

    static Center at(std::size_t idx) { return Center{idx, {}}; }
    static Center point(std::vector<double> xs) { return Center{kNoIndex, std::move(xs)}; }
    bool operator==(const Center&) const = default;
};

enum class MetricKind { euclidean, explicit_matrix };

class MetricSpace {
public:
    /// `coords` is row-major, size() * dim entries.
    static MetricSpace euclidean(std::size_t dim, std::vector<double> coords);
    /// Symmetric non-negative matrix with zero diagonal; triangle inequality is
    /// checked with additive slack 1e-9 unless `check_triangle` is false.
    static MetricSpace explicit_matrix(std::size_t size, std::vector<double> distances,
                                       bool check_triangle = true);

    MetricKind kind() const { return kind_; }
    std::size_t size() const { return size_; }
    std::size_t dim() const { return dim_; }

    double dist(std::size_t a, std::size_t b) const;
    double dist_to(std::size_t a, const Center& c) const;
    std::span<const double> coords(std::size_t a) const;

    /// Candidate center set F (indices into the space). Defaults to the data
    /// points when empty.
    const std::vector<std::size_t>& candidate_centers() const { return candidates_; }
    void set_candidate_centers(std::vector<std::size_t> ids);

    /// Clip-then-shift transform: d' = min(d, clip) + shift for distinct indices.
    MetricSpace with_clip_shift(double clip, double shift) const;
    bool transformed() const { return shift_ > 0.0 || clip_ < std::numeric_limits<double>::infinity(); }
    double clip() const { return clip_; }
    double shift() const { return shift_; }

    /// Coordinates of a center (Euclidean only).
    std::vector<double> center_coords(const Center& c) const;

    const std::vector<double>& raw() const { return data_; }

private:
    double base_dist(std::size_t a, std::size_t b) const;
    double apply(double d, bool same) const;

    MetricKind kind_ = MetricKind::euclidean;
    std::size_t size_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> data_;  // coords (euclidean) or distance matrix
    std::vector<std::size_t> candidates_;
    double clip_ = std::numeric_limits<double>::infinity();
    double shift_ = 0.0;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Groups and equivalence classes

struct ClassStructure {
    std::size_t num_groups = 0;                        // l
    std::vector<std::size_t> class_of;                 // per point, in [0, Gamma)
    std::vector<std::vector<std::size_t>> class_groups;  // I_t, sorted

    std::size_t num_classes() const { return class_groups.size(); }
};

/// Points with identical group-index sets share a class. Class ids follow
/// first appearance. Throws InputError for a point with no group.
ClassStructure build_equivalence_classes(const std::vector<std::vector<std::size_t>>& point_groups,
                                         std::size_t num_groups = 0);

class Dataset {
public:
    Dataset() = default;
    /// The first `point_groups.size()` indices of `space` are the data points;
    /// further indices (if any) are center-only locations.
    Dataset(MetricSpace space, std::vector<std::vector<std::size_t>> point_groups,
            std::size_t num_groups = 0);

    const MetricSpace& space() const { return space_; }
    std::size_t size() const { return groups_.size(); }
    std::size_t num_groups() const { return classes_.num_groups; }
    std::size_t num_classes() const { return classes_.num_classes(); }
    std::size_t class_of(std::size_t p) const { return classes_.class_of[p]; }
    const std::vector<std::size_t>& groups_of(std::size_t p) const { return groups_[p]; }
    const std::vector<std::vector<std::size_t>>& point_groups() const { return groups_; }
    const ClassStructure& classes() const { return classes_; }
    std::vector<std::size_t> class_sizes() const;
    /// Candidate centers F (the data points unless the space says otherwise).
    std::vector<std::size_t> candidate_centers() const;

    /// Same points and groups over a different space (aspect-ratio transform,
    /// sketching).
    Dataset with_space(MetricSpace space) const;

private:
    MetricSpace space_ = MetricSpace::euclidean(0, {});
    std::vector<std::vector<std::size_t>> groups_;
    ClassStructure classes_;
};

// ---------------------------------------------------------------------------
// Fairness and constraint matrices

struct FairnessSpec {
    std::vector<double> alpha;
    std::vector<double> beta;

    /// Checks sizes against l, ranges in [0,1] and beta_i <= alpha_i.
    void validate(std::size_t num_groups) const;
    Rational alpha_rational(std::size_t i) const { return Rational::from_double(alpha[i]); }
    Rational beta_rational(std::size_t i) const { return Rational::from_double(beta[i]); }

    /// alpha = 1, beta = 0 for every group: no constraint at all.
    static FairnessSpec unconstrained(std::size_t num_groups);
    /// l-diversity: alpha_i = 1/l, beta_i = 0.
    static FairnessSpec diversity(std::size_t num_groups, std::size_t ell);
};

/// k x Gamma matrix of non-negative integers, row-major.
class ConstraintMatrix {
public:
    ConstraintMatrix() = default;
    ConstraintMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::int64_t& operator()(std::size_t j, std::size_t t) { return data_[j * cols_ + t]; }
    std::int64_t operator()(std::size_t j, std::size_t t) const { return data_[j * cols_ + t]; }
    std::int64_t column_sum(std::size_t t) const;
    std::int64_t row_sum(std::size_t j) const;
    const std::vector<std::int64_t>& data() const { return data_; }
    bool operator==(const ConstraintMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int64_t> data_;
};

struct WeightedItem {
    std::size_t point = 0;  // dataset row
    std::size_t cls = 0;    // equivalence class id
    std::int64_t weight = 1;
    bool operator==(const WeightedItem&) const = default;
};

using WeightedSet = std::vector<WeightedItem>;

/// Every point with weight 1.
WeightedSet unit_weights(const Dataset& ds);
std::vector<std::int64_t> class_weights(const WeightedSet& set, std::size_t num_classes);
std::int64_t total_weight(const WeightedSet& set);

struct AssignmentEntry {
    std::size_t point = 0;
    std::size_t center = 0;
    std::int64_t weight = 0;
    bool operator==(const AssignmentEntry&) const = default;
    auto operator<=>(const AssignmentEntry&) const = default;
};

/// Sparse integral map (point, center index) -> weight.
struct Assignment {
    std::vector<Center> centers;
    std::vector<AssignmentEntry> entries;  // sorted by (point, center), weights > 0
    Objective objective = Objective::median;

    void add(std::size_t point, std::size_t center, std::int64_t weight);
    /// Sorts and merges duplicate (point, center) pairs, dropping zero weights.
    void normalize();
    std::int64_t point_weight(std::size_t point) const;
    std::vector<std::int64_t> cluster_masses() const;
};

double clustering_cost(const MetricSpace& space, const Assignment& asg);

/// M_{jt}: weight of class t sent to center j.
ConstraintMatrix constraint_matrix_of(const Assignment& asg, const Dataset& ds);

struct FairnessViolation {
    std::size_t center = 0;
    std::size_t group = 0;
    std::int64_t group_mass = 0;
    std::int64_t cluster_mass = 0;
    bool above_alpha = false;  // otherwise below beta
};

/// Group-level check of beta_i * |cluster| <= |cluster cap P_i| <= alpha_i * |cluster|.
/// Empty clusters are vacuously fair.
std::vector<FairnessViolation> fairness_check(const Assignment& asg, const Dataset& ds,
                                              const FairnessSpec& spec);

/// The same predicate evaluated from class sums only.
bool matrix_is_fair(const ConstraintMatrix& m, const ClassStructure& classes,
                    const FairnessSpec& spec);

/// costs[i * k + j] = objective cost between item i and center j.
std::vector<double> cost_table(const MetricSpace& space, const WeightedSet& items,
                               const std::vector<Center>& centers, Objective obj);

}  // namespace fairkit
