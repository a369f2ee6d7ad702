#include "fairkit/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace fairkit {

std::string_view to_string(Objective obj) {
    return obj == Objective::means ? "means" : "median";
}

Objective parse_objective(std::string_view text) {
    if (text == "median") return Objective::median;
    if (text == "means") return Objective::means;
    throw InputError("unknown objective '" + std::string(text) + "' (expected median or means)");
}

Rational Rational::from_double(double value, std::int64_t max_den) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw InputError("rational: value must be finite and >= 0");
    // Continued-fraction convergents; stop at the first one within 1e-12.
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = value;
    for (int iter = 0; iter < 64; ++iter) {
        const double a_real = std::floor(x);
        const auto a = static_cast<std::int64_t>(a_real);
        const std::int64_t p2 = a * p1 + p0;
        const std::int64_t q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        const double frac = x - a_real;
        if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - value) <= 1e-12 || frac < 1e-15) break;
        x = 1.0 / frac;
    }
    if (q1 == 0) return Rational{static_cast<std::int64_t>(std::llround(value)), 1};
    return Rational{p1, q1};
}

// ---------------------------------------------------------------------------

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

MetricSpace MetricSpace::euclidean(std::size_t dim, std::vector<double> coords) {
    if (dim == 0 && !coords.empty()) throw InputError("euclidean space: zero dimension with coordinates");
    if (dim > 0 && coords.size() % dim != 0) throw InputError("euclidean space: ragged coordinate buffer");
    for (double v : coords)
        if (!std::isfinite(v)) throw InputError("euclidean space: non-finite coordinate");
    MetricSpace s;
    s.kind_ = MetricKind::euclidean;
    s.dim_ = dim;
    s.size_ = dim == 0 ? 0 : coords.size() / dim;
    s.data_ = std::move(coords);
    return s;
}

MetricSpace MetricSpace::explicit_matrix(std::size_t size, std::vector<double> distances,
                                         bool check_triangle) {
    if (distances.size() != size * size) throw InputError("distance matrix: expected n*n entries");
    constexpr double kSlack = 1e-9;
    for (std::size_t a = 0; a < size; ++a) {
        if (distances[a * size + a] != 0.0) {
            std::ostringstream os;
            os << "distance matrix: nonzero diagonal at row " << a + 1;
            throw InputError(os.str());
        }
        for (std::size_t b = 0; b < size; ++b) {
            const double d = distances[a * size + b];
            if (!std::isfinite(d) || d < 0.0) {
                std::ostringstream os;
                os << "distance matrix: invalid entry at row " << a + 1 << ", column " << b + 1;
                throw InputError(os.str());
            }
            if (d != distances[b * size + a]) {
                std::ostringstream os;
                os << "distance matrix: asymmetric entry at row " << a + 1 << ", column " << b + 1;
                throw InputError(os.str());
            }
        }
    }
    if (check_triangle) {
        for (std::size_t a = 0; a < size; ++a)
            for (std::size_t b = a + 1; b < size; ++b)
                for (std::size_t c = 0; c < size; ++c)
                    if (distances[a * size + b] >
                        distances[a * size + c] + distances[c * size + b] + kSlack) {
                        std::ostringstream os;
                        os << "distance matrix: triangle inequality violated for rows " << a + 1
                           << ", " << b + 1 << " via " << c + 1;
                        throw InputError(os.str());
                    }
    }
    MetricSpace s;
    s.kind_ = MetricKind::explicit_matrix;
    s.size_ = size;
    s.data_ = std::move(distances);
    return s;
}

double MetricSpace::base_dist(std::size_t a, std::size_t b) const {
    if (kind_ == MetricKind::explicit_matrix) return data_[a * size_ + b];
    return euclidean_distance(coords(a), coords(b));
}

double MetricSpace::apply(double d, bool same) const {
    if (same) return 0.0;
    return std::min(d, clip_) + shift_;
}

double MetricSpace::dist(std::size_t a, std::size_t b) const {
    return apply(base_dist(a, b), a == b);
}

double MetricSpace::dist_to(std::size_t a, const Center& c) const {
    if (c.index != kNoIndex) return dist(a, c.index);
    if (kind_ != MetricKind::euclidean) throw InputError("free-coordinate center in a non-Euclidean space");
    const double d = euclidean_distance(coords(a), c.coords);
    return apply(d, d == 0.0);
}

std::span<const double> MetricSpace::coords(std::size_t a) const {
    if (kind_ != MetricKind::euclidean) throw InputError("coordinates requested from an explicit metric");
    return std::span<const double>(data_).subspan(a * dim_, dim_);
}

std::vector<double> MetricSpace::center_coords(const Center& c) const {
    if (c.index == kNoIndex) return c.coords;
    const auto xs = coords(c.index);
    return {xs.begin(), xs.end()};
}

void MetricSpace::set_candidate_centers(std::vector<std::size_t> ids) {
    for (auto id : ids)
        if (id >= size_) throw InputError("candidate center index out of range");
    candidates_ = std::move(ids);
}

MetricSpace MetricSpace::with_clip_shift(double clip, double shift) const {
    MetricSpace s = *this;
    s.clip_ = clip;
    s.shift_ = shift;
    return s;
}

// ---------------------------------------------------------------------------

ClassStructure build_equivalence_classes(const std::vector<std::vector<std::size_t>>& point_groups,
                                         std::size_t num_groups) {
    ClassStructure cs;
    std::size_t max_group = 0;
    std::map<std::vector<std::size_t>, std::size_t> ids;
    cs.class_of.reserve(point_groups.size());
    for (std::size_t p = 0; p < point_groups.size(); ++p) {
        std::vector<std::size_t> key = point_groups[p];
        std::sort(key.begin(), key.end());
        key.erase(std::unique(key.begin(), key.end()), key.end());
        if (key.empty()) {
            std::ostringstream os;
            os << "point " << p << " belongs to no group";
            throw InputError(os.str());
        }
        max_group = std::max(max_group, key.back() + 1);
        auto [it, inserted] = ids.try_emplace(key, cs.class_groups.size());
        if (inserted) cs.class_groups.push_back(key);
        cs.class_of.push_back(it->second);
    }
    if (num_groups != 0 && max_group > num_groups)
        throw InputError("group id exceeds the declared number of groups");
    cs.num_groups = num_groups != 0 ? num_groups : max_group;
    return cs;
}

Dataset::Dataset(MetricSpace space, std::vector<std::vector<std::size_t>> point_groups,
                 std::size_t num_groups)
    : space_(std::move(space)), groups_(std::move(point_groups)) {
    if (groups_.size() > space_.size()) throw InputError("more group rows than points");
    for (auto& g : groups_) {
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
    }
    classes_ = build_equivalence_classes(groups_, num_groups);
}

std::vector<std::size_t> Dataset::class_sizes() const {
    std::vector<std::size_t> sizes(num_classes(), 0);
    for (auto c : classes_.class_of) ++sizes[c];
    return sizes;
}

std::vector<std::size_t> Dataset::candidate_centers() const {
    if (!space_.candidate_centers().empty()) return space_.candidate_centers();
    std::vector<std::size_t> ids(size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    return ids;
}

Dataset Dataset::with_space(MetricSpace space) const {
    if (space.size() < size()) throw InputError("replacement space is smaller than the dataset");
    Dataset out = *this;
    out.space_ = std::move(space);
    return out;
}

// ---------------------------------------------------------------------------

void FairnessSpec::validate(std::size_t num_groups) const {
    if (alpha.size() != num_groups || beta.size() != num_groups)
        throw InputError("fairness spec: alpha/beta must have one entry per group");
    for (std::size_t i = 0; i < num_groups; ++i) {
        if (!(alpha[i] >= 0.0 && alpha[i] <= 1.0) || !(beta[i] >= 0.0 && beta[i] <= 1.0))
            throw InputError("fairness spec: alpha/beta entries must lie in [0, 1]");
        if (beta[i] > alpha[i]) throw InputError("fairness spec: beta_i must not exceed alpha_i");
    }
}

FairnessSpec FairnessSpec::unconstrained(std::size_t num_groups) {
    return FairnessSpec{std::vector<double>(num_groups, 1.0), std::vector<double>(num_groups, 0.0)};
}

FairnessSpec FairnessSpec::diversity(std::size_t num_groups, std::size_t ell) {
    if (ell == 0) throw InputError("diversity parameter must be >= 1");
    return FairnessSpec{std::vector<double>(num_groups, 1.0 / static_cast<double>(ell)),
                        std::vector<double>(num_groups, 0.0)};
}

std::int64_t ConstraintMatrix::column_sum(std::size_t t) const {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < rows_; ++j) s += (*this)(j, t);
    return s;
}

std::int64_t ConstraintMatrix::row_sum(std::size_t j) const {
    std::int64_t s = 0;
    for (std::size_t t = 0; t < cols_; ++t) s += (*this)(j, t);
    return s;
}

WeightedSet unit_weights(const Dataset& ds) {
    WeightedSet set;
    set.reserve(ds.size());
    for (std::size_t p = 0; p < ds.size(); ++p) set.push_back({p, ds.class_of(p), 1});
    return set;
}

std::vector<std::int64_t> class_weights(const WeightedSet& set, std::size_t num_classes) {
    std::vector<std::int64_t> w(num_classes, 0);
    for (const auto& it : set) w.at(it.cls) += it.weight;
    return w;
}

std::int64_t total_weight(const WeightedSet& set) {
    std::int64_t s = 0;
    for (const auto& it : set) s += it.weight;
    return s;
}

void Assignment::add(std::size_t point, std::size_t center, std::int64_t weight) {
    if (weight < 0) throw std::invalid_argument("assignment: negative weight");
    if (weight > 0) entries.push_back({point, center, weight});
}

void Assignment::normalize() {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return std::tie(a.point, a.center) < std::tie(b.point, b.center);
    });
    std::vector<AssignmentEntry> merged;
    for (const auto& e : entries) {
        if (!merged.empty() && merged.back().point == e.point && merged.back().center == e.center)
            merged.back().weight += e.weight;
        else
            merged.push_back(e);
    }
    std::erase_if(merged, [](const auto& e) { return e.weight == 0; });
    entries = std::move(merged);
}

std::int64_t Assignment::point_weight(std::size_t point) const {
    std::int64_t s = 0;
    for (const auto& e : entries)
        if (e.point == point) s += e.weight;
    return s;
}

std::vector<std::int64_t> Assignment::cluster_masses() const {
    std::vector<std::int64_t> m(centers.size(), 0);
    for (const auto& e : entries) m.at(e.center) += e.weight;
    return m;
}

double clustering_cost(const MetricSpace& space, const Assignment& asg) {
    double total = 0.0;
    for (const auto& e : asg.entries)
        total += static_cast<double>(e.weight) *
                 objective_cost(space.dist_to(e.point, asg.centers.at(e.center)), asg.objective);
    return total;
}

ConstraintMatrix constraint_matrix_of(const Assignment& asg, const Dataset& ds) {
    ConstraintMatrix m(asg.centers.size(), ds.num_classes());
    for (const auto& e : asg.entries) m(e.center, ds.class_of(e.point)) += e.weight;
    return m;
}

namespace {

// beta <= mass/total <= alpha, compared exactly.
bool above(const Rational& alpha, std::int64_t mass, std::int64_t total) {
    return static_cast<__int128>(mass) * alpha.den > static_cast<__int128>(alpha.num) * total;
}
bool below(const Rational& beta, std::int64_t mass, std::int64_t total) {
    return static_cast<__int128>(mass) * beta.den < static_cast<__int128>(beta.num) * total;
}

}  // namespace

std::vector<FairnessViolation> fairness_check(const Assignment& asg, const Dataset& ds,
                                              const FairnessSpec& spec) {
    const std::size_t k = asg.centers.size();
    const std::size_t ell = ds.num_groups();
    spec.validate(ell);
    std::vector<std::int64_t> cluster(k, 0);
    std::vector<std::int64_t> group_mass(k * ell, 0);
    for (const auto& e : asg.entries) {
        cluster.at(e.center) += e.weight;
        for (auto g : ds.groups_of(e.point)) group_mass[e.center * ell + g] += e.weight;
    }
    std::vector<FairnessViolation> out;
    for (std::size_t j = 0; j < k; ++j) {
        if (cluster[j] == 0) continue;
        for (std::size_t q = 0; q < ell; ++q) {
            const auto mass = group_mass[j * ell + q];
            if (above(spec.alpha_rational(q), mass, cluster[j]))
                out.push_back({j, q, mass, cluster[j], true});
            if (below(spec.beta_rational(q), mass, cluster[j]))
                out.push_back({j, q, mass, cluster[j], false});
        }
    }
    return out;
}

bool matrix_is_fair(const ConstraintMatrix& m, const ClassStructure& classes,
                    const FairnessSpec& spec) {
    const std::size_t ell = classes.num_groups;
    for (std::size_t j = 0; j < m.rows(); ++j) {
        const auto total = m.row_sum(j);
        if (total == 0) continue;
        std::vector<std::int64_t> mass(ell, 0);
        for (std::size_t t = 0; t < m.cols(); ++t)
            for (auto q : classes.class_groups[t]) mass[q] += m(j, t);
        for (std::size_t q = 0; q < ell; ++q) {
            if (above(spec.alpha_rational(q), mass[q], total)) return false;
            if (below(spec.beta_rational(q), mass[q], total)) return false;
        }
    }
    return true;
}

std::vector<double> cost_table(const MetricSpace& space, const WeightedSet& items,
                               const std::vector<Center>& centers, Objective obj) {
    const std::size_t k = centers.size();
    std::vector<double> costs(items.size() * k);
    for (std::size_t i = 0; i < items.size(); ++i)
        for (std::size_t j = 0; j < k; ++j)
            costs[i * k + j] = objective_cost(space.dist_to(items[i].point, centers[j]), obj);
    return costs;
}

}  // namespace fairkit
