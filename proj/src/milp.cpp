#include "fairkit/milp.hpp"

#include <algorithm>
#include <cmath>

#include "fairkit/flow.hpp"
#include "fairkit/log.hpp"

namespace fairkit {

namespace {

struct Node {
    std::vector<std::int64_t> lo;  // per (t, j), row-major t * k + j
    std::vector<std::int64_t> hi;
};

bool is_unconstrained(const FairnessSpec& spec) {
    for (std::size_t q = 0; q < spec.alpha.size(); ++q) {
        const auto a = spec.alpha_rational(q), b = spec.beta_rational(q);
        if (a.num < a.den || b.num > 0) return false;
    }
    return true;
}

// Fairness rows over the f variables (f index i * k + j). Rows whose
// coefficients are all <= 0 hold for any x >= 0 and are skipped.
std::vector<LpRow> fairness_rows(const ClassStructure& classes, const WeightedSet& W, std::size_t k,
                                 const FairnessSpec& spec) {
    std::vector<LpRow> rows;
    const std::size_t gamma = classes.num_classes();
    const std::size_t nv = W.size() * k;
    std::vector<std::vector<char>> member(gamma, std::vector<char>(classes.num_groups, 0));
    for (std::size_t t = 0; t < gamma; ++t)
        for (auto q : classes.class_groups[t]) member[t][q] = 1;

    for (std::size_t q = 0; q < classes.num_groups; ++q) {
        const auto a = spec.alpha_rational(q), b = spec.beta_rational(q);
        const double sa = static_cast<double>(std::max(a.num, a.den));
        const double sb = static_cast<double>(std::max<std::int64_t>(std::max(b.num, b.den), 1));
        // den_a * mass - num_a * total <= 0 and num_b * total - den_b * mass <= 0
        std::vector<double> ca(gamma), cb(gamma);
        bool need_a = false, need_b = false;
        for (std::size_t t = 0; t < gamma; ++t) {
            ca[t] = (static_cast<double>(a.den) * member[t][q] - static_cast<double>(a.num)) / sa;
            cb[t] = (static_cast<double>(b.num) - static_cast<double>(b.den) * member[t][q]) / sb;
            need_a |= ca[t] > 0.0;
            need_b |= cb[t] > 0.0;
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (need_a) {
                LpRow row{std::vector<double>(nv, 0.0), RowSense::le, 0.0};
                for (std::size_t i = 0; i < W.size(); ++i) row.coeffs[i * k + j] = ca[W[i].cls];
                rows.push_back(std::move(row));
            }
            if (need_b) {
                LpRow row{std::vector<double>(nv, 0.0), RowSense::le, 0.0};
                for (std::size_t i = 0; i < W.size(); ++i) row.coeffs[i * k + j] = cb[W[i].cls];
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

Assignment finish_assignment(const std::vector<Center>& centers, Objective obj,
                             std::vector<AssignmentEntry> entries) {
    Assignment asg;
    asg.centers = centers;
    asg.objective = obj;
    asg.entries = std::move(entries);
    asg.normalize();
    return asg;
}

ConstraintMatrix matrix_from(const WeightedSet& W, const Assignment& asg, std::size_t k,
                             std::size_t gamma) {
    std::vector<std::size_t> cls_of_point;
    for (const auto& it : W) {
        if (it.point >= cls_of_point.size()) cls_of_point.resize(it.point + 1, 0);
        cls_of_point[it.point] = it.cls;
    }
    ConstraintMatrix g(k, gamma);
    for (const auto& e : asg.entries) g(e.center, cls_of_point[e.point]) += e.weight;
    return g;
}

}  // namespace

FairAssignResult fair_assign_exact(const Dataset& ds, const WeightedSet& W,
                                   const std::vector<Center>& centers, const FairnessSpec& spec,
                                   Objective obj, const MilpOptions& opts) {
    return fair_assign_exact(ds.space(), ds.classes(), W, centers, spec, obj, opts);
}

FairAssignResult fair_assign_exact(const MetricSpace& space, const ClassStructure& classes,
                                   const WeightedSet& W, const std::vector<Center>& centers,
                                   const FairnessSpec& spec, Objective obj,
                                   const MilpOptions& opts) {
    const std::size_t k = centers.size();
    const std::size_t gamma = classes.num_classes();
    if (k == 0) throw InputError("fair assignment needs at least one center");
    if (W.empty()) throw InputError("fair assignment of an empty set");
    spec.validate(classes.num_groups);

    FairAssignResult out;
    out.g = ConstraintMatrix(k, gamma);

    const auto costs = cost_table(space, W, centers, obj);
    const auto rows = fairness_rows(classes, W, k, spec);
    if (is_unconstrained(spec) || rows.empty()) {
        auto near = nearest_assign(space, W, centers, obj);
        out.status = near.cost < opts.cutoff ? AssignStatus::optimal : AssignStatus::cutoff;
        out.g = matrix_from(W, near.assignment, k, gamma);
        out.cost = near.cost;
        out.assignment = std::move(near.assignment);
        out.nodes = 1;
        return out;
    }

    std::vector<std::int64_t> class_total(gamma, 0);
    std::vector<std::vector<std::size_t>> members(gamma);
    for (std::size_t i = 0; i < W.size(); ++i) {
        class_total.at(W[i].cls) += W[i].weight;
        members[W[i].cls].push_back(i);
    }

    // objective scaled to O(1) for the simplex tolerances
    double scale = 0.0;
    for (double c : costs) scale = std::max(scale, c);
    if (!(scale > 0.0)) scale = 1.0;

    LinearProgram base;
    base.num_vars = W.size() * k;
    base.objective.resize(base.num_vars);
    for (std::size_t v = 0; v < base.num_vars; ++v) base.objective[v] = costs[v] / scale;
    for (std::size_t i = 0; i < W.size(); ++i) {
        std::vector<double> row(base.num_vars, 0.0);
        for (std::size_t j = 0; j < k; ++j) row[i * k + j] = 1.0;
        base.add_row(std::move(row), RowSense::eq, static_cast<double>(W[i].weight));
    }
    for (const auto& r : rows) base.rows.push_back(r);

    auto class_row = [&](std::size_t t, std::size_t j) {
        std::vector<double> row(base.num_vars, 0.0);
        for (auto i : members[t]) row[i * k + j] = 1.0;
        return row;
    };

    double incumbent = opts.cutoff;
    bool found = false, cut = false;
    std::vector<Node> stack;
    {
        Node root;
        root.lo.assign(gamma * k, 0);
        root.hi.resize(gamma * k);
        for (std::size_t t = 0; t < gamma; ++t)
            for (std::size_t j = 0; j < k; ++j) root.hi[t * k + j] = class_total[t];
        stack.push_back(std::move(root));
    }
    auto prune_limit = [&](double best) { return best - 1e-10 * std::abs(best) - 1e-12; };

    while (!stack.empty()) {
        if (out.nodes >= opts.max_nodes) throw BudgetError("branch-and-bound node budget exhausted");
        Node node = std::move(stack.back());
        stack.pop_back();
        ++out.nodes;

        LinearProgram lp = base;
        for (std::size_t t = 0; t < gamma; ++t)
            for (std::size_t j = 0; j < k; ++j) {
                const auto lo = node.lo[t * k + j], hi = node.hi[t * k + j];
                if (lo == hi) {
                    lp.add_row(class_row(t, j), RowSense::eq, static_cast<double>(lo));
                    continue;
                }
                if (lo > 0) lp.add_row(class_row(t, j), RowSense::ge, static_cast<double>(lo));
                if (hi < class_total[t]) lp.add_row(class_row(t, j), RowSense::le, static_cast<double>(hi));
            }
        const auto res = simplex_solve(lp);
        if (res.status != LpStatus::optimal) continue;
        const double bound = res.value * scale;
        if (bound >= prune_limit(incumbent)) {
            if (!found) cut = true;
            continue;
        }

        // most fractional g, lexicographic (t, j) on ties
        std::size_t branch = kNoIndex;
        double branch_val = 0.0, worst = 1e-6;
        std::vector<double> gval(gamma * k, 0.0);
        for (std::size_t t = 0; t < gamma; ++t)
            for (std::size_t j = 0; j < k; ++j) {
                double v = 0.0;
                for (auto i : members[t]) v += res.x[i * k + j];
                gval[t * k + j] = v;
                const double frac = std::abs(v - std::round(v));
                if (frac > worst + 1e-12) {
                    worst = frac;
                    branch = t * k + j;
                    branch_val = v;
                }
            }

        if (branch == kNoIndex) {
            ConstraintMatrix g(k, gamma);
            for (std::size_t t = 0; t < gamma; ++t)
                for (std::size_t j = 0; j < k; ++j) g(j, t) = std::llround(gval[t * k + j]);
            if (!matrix_is_fair(g, classes, spec)) {
                log()->debug("b&b: integral node fails the exact fairness check, dropped");
                continue;
            }
            std::vector<AssignmentEntry> entries;
            double cost = 0.0;
            for (std::size_t t = 0; t < gamma; ++t) {
                if (members[t].empty()) continue;
                WeightedSet pts;
                for (auto i : members[t]) pts.push_back(W[i]);
                std::vector<std::int64_t> row(k);
                for (std::size_t j = 0; j < k; ++j) row[j] = g(j, t);
                auto tr = class_transport(space, pts, centers, row, obj);
                cost += tr.cost;
                entries.insert(entries.end(), tr.entries.begin(), tr.entries.end());
            }
            if (cost < incumbent) {
                incumbent = cost;
                found = true;
                out.g = g;
                out.cost = cost;
                out.assignment = finish_assignment(centers, obj, std::move(entries));
            }
            continue;
        }

        Node down = node, up = std::move(node);
        down.hi[branch] = static_cast<std::int64_t>(std::floor(branch_val));
        up.lo[branch] = static_cast<std::int64_t>(std::ceil(branch_val));
        stack.push_back(std::move(up));
        stack.push_back(std::move(down));
    }

    if (found) out.status = AssignStatus::optimal;
    else out.status = cut ? AssignStatus::cutoff : AssignStatus::infeasible;
    return out;
}

std::vector<double> class_transport_costs(const Dataset& ds, const ConstraintMatrix& g,
                                          const std::vector<Center>& centers, Objective obj) {
    const std::size_t gamma = ds.num_classes();
    std::vector<WeightedSet> per_class(gamma);
    for (const auto& it : unit_weights(ds)) per_class[it.cls].push_back(it);
    std::vector<double> out(gamma, 0.0);
    for (std::size_t t = 0; t < gamma; ++t) {
        std::vector<std::int64_t> row(centers.size());
        for (std::size_t j = 0; j < centers.size(); ++j) row[j] = g(j, t);
        out[t] = class_transport(ds.space(), per_class[t], centers, row, obj).cost;
    }
    return out;
}

Assignment restore_assignment(const Dataset& ds, const ConstraintMatrix& g,
                              const std::vector<Center>& centers, double epsilon, Objective obj,
                              const std::vector<double>& budgets) {
    const std::size_t k = centers.size();
    const std::size_t gamma = ds.num_classes();
    if (g.rows() != k || g.cols() != gamma) throw InputError("restore: g has the wrong shape");
    const auto sizes = ds.class_sizes();
    for (std::size_t t = 0; t < gamma; ++t)
        if (g.column_sum(t) != static_cast<std::int64_t>(sizes[t]))
            throw InputError("restore: column sums of g differ from the class sizes");
    if (!budgets.empty() && budgets.size() != gamma) throw InputError("restore: one budget per class expected");

    std::vector<WeightedSet> per_class(gamma);
    for (const auto& it : unit_weights(ds)) per_class[it.cls].push_back(it);

    std::vector<AssignmentEntry> entries;
    for (std::size_t t = 0; t < gamma; ++t) {
        std::vector<std::int64_t> row(k);
        for (std::size_t j = 0; j < k; ++j) row[j] = g(j, t);
        std::optional<RoundingParams> rounding;
        if (epsilon > 0.0) {
            const double budget = budgets.empty()
                                      ? class_transport(ds.space(), per_class[t], centers, row, obj).cost
                                      : budgets[t];
            rounding = RoundingParams{epsilon / 6.0, budget, static_cast<std::int64_t>(sizes[t])};
        }
        auto tr = class_transport(ds.space(), per_class[t], centers, row, obj, rounding);
        entries.insert(entries.end(), tr.entries.begin(), tr.entries.end());
    }
    return finish_assignment(centers, obj, std::move(entries));
}

double split_epsilon(double epsilon) {
    return (-4.0 + std::sqrt(16.0 + 12.0 * epsilon)) / 6.0;
}

FairAssignResult fair_assign_approx(const Dataset& ds, const std::vector<Center>& centers,
                                    const FairnessSpec& spec, double epsilon, Objective obj,
                                    std::uint64_t seed, const CoresetConfig& cfg) {
    if (!(epsilon > 0.0)) throw InputError("approximate assignment: epsilon must be > 0");
    const double eps0 = std::min(1.0, split_epsilon(epsilon));
    const auto cs = build_coreset(ds.space(), unit_weights(ds), ds.num_classes(), centers.size(), eps0,
                                  obj, seed, cfg);
    auto res = fair_assign_exact(ds, cs.items, centers, spec, obj);
    if (res.status != AssignStatus::optimal) return res;

    // per-class budgets from the coreset solution
    std::vector<double> budgets(ds.num_classes(), 0.0);
    for (const auto& e : res.assignment.entries)
        budgets[ds.class_of(e.point)] +=
            static_cast<double>(e.weight) *
            objective_cost(ds.space().dist_to(e.point, centers[e.center]), obj);

    FairAssignResult out;
    out.status = AssignStatus::optimal;
    out.g = res.g;
    out.nodes = res.nodes;
    out.assignment = restore_assignment(ds, res.g, centers, 3.0 * eps0, obj, budgets);
    out.cost = clustering_cost(ds.space(), out.assignment);
    return out;
}

}  // namespace fairkit
