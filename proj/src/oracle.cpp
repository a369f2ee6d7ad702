#include "fairkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "fairkit/flow.hpp"

namespace fairkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_budget(std::size_t points, std::size_t k, const OracleBudget& budget) {
    if (points > budget.max_points) throw BudgetError("oracle: too many points for enumeration");
    if (k > budget.max_k) throw BudgetError("oracle: k too large for enumeration");
}

long double compositions(std::int64_t w, std::size_t k) {
    // C(w + k - 1, k - 1)
    long double acc = 1;
    for (std::size_t i = 1; i < k; ++i)
        acc = acc * static_cast<long double>(w + static_cast<std::int64_t>(i)) / static_cast<long double>(i);
    return acc;
}

void check_count(const WeightedSet& W, std::size_t k, const OracleBudget& budget) {
    long double total = 1;
    for (const auto& it : W) total *= compositions(it.weight, k);
    if (total > static_cast<long double>(budget.max_assignments))
        throw BudgetError("oracle: assignment space exceeds the budget");
}

// Visits every integral assignment of W to k centers; x[i * k + j] is the
// weight of item i at center j.
void enumerate(const WeightedSet& W, std::size_t k,
               const std::function<void(const std::vector<std::int64_t>&)>& visit) {
    std::vector<std::int64_t> x(W.size() * k, 0);
    std::function<void(std::size_t, std::size_t, std::int64_t)> rec = [&](std::size_t i, std::size_t j,
                                                                          std::int64_t left) {
        if (i == W.size()) {
            visit(x);
            return;
        }
        if (j + 1 == k) {
            x[i * k + j] = left;
            rec(i + 1, 0, i + 1 < W.size() ? W[i + 1].weight : 0);
            x[i * k + j] = 0;
            return;
        }
        for (std::int64_t v = left; v >= 0; --v) {
            x[i * k + j] = v;
            rec(i, j + 1, left - v);
        }
        x[i * k + j] = 0;
    };
    if (W.empty()) {
        visit(x);
        return;
    }
    rec(0, 0, W[0].weight);
}

bool fair_masses(const std::vector<std::int64_t>& x, const WeightedSet& W, std::size_t k,
                 const ClassStructure& cs, const FairnessSpec& spec) {
    const std::size_t ell = cs.num_groups;
    for (std::size_t j = 0; j < k; ++j) {
        std::int64_t total = 0;
        std::vector<std::int64_t> mass(ell, 0);
        for (std::size_t i = 0; i < W.size(); ++i) {
            const auto v = x[i * k + j];
            if (v == 0) continue;
            total += v;
            for (auto q : cs.class_groups[W[i].cls]) mass[q] += v;
        }
        if (total == 0) continue;
        for (std::size_t q = 0; q < ell; ++q) {
            const auto a = spec.alpha_rational(q), b = spec.beta_rational(q);
            if (mass[q] * a.den > a.num * total) return false;
            if (mass[q] * b.den < b.num * total) return false;
        }
    }
    return true;
}

Assignment to_assignment(const std::vector<std::int64_t>& x, const WeightedSet& W,
                         const std::vector<Center>& centers, Objective obj) {
    const std::size_t k = centers.size();
    Assignment asg;
    asg.centers = centers;
    asg.objective = obj;
    for (std::size_t i = 0; i < W.size(); ++i)
        for (std::size_t j = 0; j < k; ++j) asg.add(W[i].point, j, x[i * k + j]);
    asg.normalize();
    return asg;
}

void for_each_subset(std::size_t n, std::size_t r, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    if (r > n) return;
    std::vector<std::size_t> idx(r);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    while (true) {
        fn(idx);
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<std::size_t> default_pool(const Dataset& ds, std::vector<std::size_t> pool) {
    return pool.empty() ? ds.candidate_centers() : pool;
}

bool variant_ok(const Constraint& c, const std::vector<std::size_t>& label, const Dataset& ds,
                std::size_t k) {
    std::vector<std::int64_t> size(k, 0);
    for (auto l : label) ++size[l];
    switch (c.kind) {
        case Constraint::Kind::lower:
            return std::all_of(size.begin(), size.end(), [&](auto s) { return s >= c.param; });
        case Constraint::Kind::capacity:
            return std::all_of(size.begin(), size.end(), [&](auto s) { return s <= c.param; });
        case Constraint::Kind::chromatic: {
            std::map<std::pair<std::size_t, std::size_t>, int> seen;
            for (std::size_t p = 0; p < label.size(); ++p)
                if (++seen[{label[p], ds.class_of(p)}] > 1) return false;
            return true;
        }
        case Constraint::Kind::diversity:
        case Constraint::Kind::fair: {
            const auto spec = c.fairness_for(ds.num_groups());
            for (std::size_t j = 0; j < k; ++j) {
                if (size[j] == 0) continue;
                std::vector<std::int64_t> mass(ds.num_groups(), 0);
                for (std::size_t p = 0; p < label.size(); ++p)
                    if (label[p] == j)
                        for (auto q : ds.groups_of(p)) ++mass[q];
                for (std::size_t q = 0; q < ds.num_groups(); ++q) {
                    const auto a = spec.alpha_rational(q), b = spec.beta_rational(q);
                    if (mass[q] * a.den > a.num * size[j]) return false;
                    if (mass[q] * b.den < b.num * size[j]) return false;
                }
            }
            return true;
        }
    }
    return false;
}

// odometer over labels in [0, k)^n, lexicographic
void for_each_labeling(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> label(n, 0);
    while (true) {
        fn(label);
        std::size_t i = n;
        while (i > 0 && label[i - 1] == k - 1) label[--i] = 0;
        if (i == 0) return;
        ++label[i - 1];
    }
}

}  // namespace

double exact_constrained_cost(const MetricSpace& space, const WeightedSet& W, const ConstraintMatrix& M,
                              const std::vector<Center>& centers, Objective obj) {
    const std::size_t k = centers.size();
    std::map<std::size_t, WeightedSet> per_class;
    for (const auto& it : W) per_class[it.cls].push_back(it);
    for (std::size_t t = 0; t < M.cols(); ++t) {
        const auto have = per_class.count(t) ? total_weight(per_class[t]) : 0;
        if (M.column_sum(t) != have) return kInf;
    }
    for (const auto& [t, pts] : per_class)
        if (t >= M.cols()) return kInf;
    double total = 0.0;
    for (const auto& [t, pts] : per_class) {
        std::vector<std::int64_t> row(k);
        for (std::size_t j = 0; j < k; ++j) row[j] = M(j, t);
        total += class_transport(space, pts, centers, row, obj).cost;
    }
    return total;
}

double exact_constrained_cost_enum(const MetricSpace& space, const WeightedSet& W,
                                   const ConstraintMatrix& M, const std::vector<Center>& centers,
                                   Objective obj, const OracleBudget& budget) {
    const std::size_t k = centers.size();
    check_budget(W.size(), k, budget);
    check_count(W, k, budget);
    const auto costs = cost_table(space, W, centers, obj);
    double best = kInf;
    enumerate(W, k, [&](const std::vector<std::int64_t>& x) {
        ConstraintMatrix got(k, M.cols());
        for (std::size_t i = 0; i < W.size(); ++i) {
            if (W[i].cls >= M.cols()) return;
            for (std::size_t j = 0; j < k; ++j) got(j, W[i].cls) += x[i * k + j];
        }
        if (!(got == M)) return;
        double cost = 0.0;
        for (std::size_t v = 0; v < x.size(); ++v) cost += static_cast<double>(x[v]) * costs[v];
        best = std::min(best, cost);
    });
    return best;
}

OracleSolution exact_fair_assignment(const Dataset& ds, const WeightedSet& W,
                                     const std::vector<Center>& centers, const FairnessSpec& spec,
                                     Objective obj, const OracleBudget& budget) {
    const std::size_t k = centers.size();
    check_budget(W.size(), k, budget);
    check_count(W, k, budget);
    spec.validate(ds.num_groups());
    const auto costs = cost_table(ds.space(), W, centers, obj);
    OracleSolution best;
    std::vector<std::int64_t> best_x;
    enumerate(W, k, [&](const std::vector<std::int64_t>& x) {
        double cost = 0.0;
        for (std::size_t v = 0; v < x.size(); ++v) cost += static_cast<double>(x[v]) * costs[v];
        if (cost >= best.cost) return;
        if (!fair_masses(x, W, k, ds.classes(), spec)) return;
        best.cost = cost;
        best_x = x;
        best.feasible = true;
    });
    if (best.feasible) {
        best.centers = centers;
        best.assignment = to_assignment(best_x, W, centers, obj);
    }
    return best;
}

OracleSolution exact_fair_optimum(const Dataset& ds, std::size_t k, const FairnessSpec& spec,
                                  Objective obj, std::vector<std::size_t> pool, const OracleBudget& budget) {
    pool = default_pool(ds, std::move(pool));
    check_budget(ds.size(), k, budget);
    if (pool.size() > budget.max_candidates) throw BudgetError("oracle: center pool too large");
    const auto W = unit_weights(ds);
    OracleSolution best;
    for_each_subset(pool.size(), std::min(k, pool.size()), [&](const std::vector<std::size_t>& idx) {
        std::vector<Center> C;
        for (auto i : idx) C.push_back(Center::at(pool[i]));
        auto sol = exact_fair_assignment(ds, W, C, spec, obj, budget);
        if (sol.feasible && sol.cost < best.cost) best = std::move(sol);
    });
    return best;
}

std::vector<double> weiszfeld(const std::vector<std::vector<double>>& pts) {
    const std::size_t dim = pts.front().size();
    std::vector<double> y(dim, 0.0);
    for (const auto& p : pts)
        for (std::size_t a = 0; a < dim; ++a) y[a] += p[a] / static_cast<double>(pts.size());
    for (int iter = 0; iter < 10'000; ++iter) {
        std::vector<double> num(dim, 0.0);
        double den = 0.0;
        for (const auto& p : pts) {
            const double d = euclidean_distance(p, y);
            if (d < 1e-14) continue;
            for (std::size_t a = 0; a < dim; ++a) num[a] += p[a] / d;
            den += 1.0 / d;
        }
        if (den == 0.0) break;
        double move = 0.0;
        for (std::size_t a = 0; a < dim; ++a) {
            const double next = num[a] / den;
            move = std::max(move, std::abs(next - y[a]));
            y[a] = next;
        }
        if (move < 1e-13) break;
    }
    return y;
}

OracleSolution exact_fair_optimum_free(const Dataset& ds, std::size_t k, const FairnessSpec& spec,
                                       Objective obj, const OracleBudget& budget) {
    const auto& space = ds.space();
    if (space.kind() != MetricKind::euclidean) throw InputError("free-center oracle needs coordinates");
    const std::size_t n = ds.size();
    check_budget(n, k, budget);
    if (n > 24) throw BudgetError("free-center oracle supports at most 24 points");
    if (std::pow(static_cast<long double>(k), static_cast<long double>(n)) >
        static_cast<long double>(budget.max_assignments))
        throw BudgetError("oracle: labeling space exceeds the budget");
    spec.validate(ds.num_groups());
    const Constraint fair = Constraint::fair(spec);

    std::map<std::uint32_t, std::pair<double, std::vector<double>>> cache;
    auto part = [&](std::uint32_t mask) -> const std::pair<double, std::vector<double>>& {
        auto it = cache.find(mask);
        if (it != cache.end()) return it->second;
        std::vector<std::vector<double>> pts;
        std::vector<std::size_t> ids;
        for (std::size_t p = 0; p < n; ++p)
            if (mask >> p & 1U) {
                const auto xs = space.coords(p);
                pts.emplace_back(xs.begin(), xs.end());
                ids.push_back(p);
            }
        auto price = [&](const std::vector<double>& c) {
            double s = 0.0;
            for (const auto& p : pts) s += objective_cost(euclidean_distance(p, c), obj);
            return s;
        };
        std::vector<double> center;
        if (obj == Objective::means) {
            center.assign(pts.front().size(), 0.0);
            for (const auto& p : pts)
                for (std::size_t a = 0; a < p.size(); ++a) center[a] += p[a] / static_cast<double>(pts.size());
        } else {
            center = weiszfeld(pts);
            for (const auto& p : pts)
                if (price(p) < price(center)) center = p;
        }
        const double c = price(center);
        return cache.emplace(mask, std::make_pair(c, std::move(center))).first->second;
    };

    OracleSolution best;
    std::vector<std::size_t> best_label;
    for_each_labeling(n, k, [&](const std::vector<std::size_t>& label) {
        // canonical labelings only: first use of label j comes after label j-1
        std::size_t next = 0;
        for (auto l : label) {
            if (l > next) return;
            if (l == next) ++next;
        }
        if (!variant_ok(fair, label, ds, k)) return;
        std::vector<std::uint32_t> masks(k, 0);
        for (std::size_t p = 0; p < n; ++p) masks[label[p]] |= 1U << p;
        double cost = 0.0;
        for (auto m : masks)
            if (m) cost += part(m).first;
        if (cost < best.cost) {
            best.cost = cost;
            best.feasible = true;
            best_label = label;
        }
    });
    if (best.feasible) {
        std::vector<std::uint32_t> masks(k, 0);
        for (std::size_t p = 0; p < n; ++p) masks[best_label[p]] |= 1U << p;
        std::vector<std::size_t> slot(k, kNoIndex);
        for (std::size_t j = 0; j < k; ++j)
            if (masks[j]) {
                slot[j] = best.centers.size();
                best.centers.push_back(Center::point(part(masks[j]).second));
            }
        best.assignment.centers = best.centers;
        best.assignment.objective = obj;
        for (std::size_t p = 0; p < n; ++p) best.assignment.add(p, slot[best_label[p]], 1);
        best.assignment.normalize();
    }
    return best;
}

OracleSolution exact_variant_assignment(const Dataset& ds, const std::vector<Center>& centers,
                                        const Constraint& c, Objective obj, const OracleBudget& budget) {
    const std::size_t k = centers.size();
    const std::size_t n = ds.size();
    check_budget(n, k, budget);
    const auto W = unit_weights(ds);
    const auto costs = cost_table(ds.space(), W, centers, obj);
    OracleSolution best;
    std::vector<std::size_t> best_label;
    for_each_labeling(n, k, [&](const std::vector<std::size_t>& label) {
        double cost = 0.0;
        for (std::size_t p = 0; p < n; ++p) cost += costs[p * k + label[p]];
        if (cost >= best.cost) return;
        if (!variant_ok(c, label, ds, k)) return;
        best.cost = cost;
        best.feasible = true;
        best_label = label;
    });
    if (best.feasible) {
        best.centers = centers;
        best.assignment.centers = centers;
        best.assignment.objective = obj;
        for (std::size_t p = 0; p < n; ++p) best.assignment.add(p, best_label[p], 1);
        best.assignment.normalize();
    }
    return best;
}

OracleSolution exact_variant_optimum(const Dataset& ds, std::size_t k, const Constraint& c, Objective obj,
                                     std::vector<std::size_t> pool, const OracleBudget& budget) {
    pool = default_pool(ds, std::move(pool));
    check_budget(ds.size(), k, budget);
    if (pool.size() > budget.max_candidates) throw BudgetError("oracle: center pool too large");
    OracleSolution best;
    for_each_subset(pool.size(), std::min(k, pool.size()), [&](const std::vector<std::size_t>& idx) {
        std::vector<Center> C;
        for (auto i : idx) C.push_back(Center::at(pool[i]));
        auto sol = exact_variant_assignment(ds, C, c, obj, budget);
        if (sol.feasible && sol.cost < best.cost) best = std::move(sol);
    });
    return best;
}

}  // namespace fairkit
