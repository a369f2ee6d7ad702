#include <doctest.h>

#include <algorithm>
#include <functional>

#include "fairkit/milp.hpp"
#include "fairkit/oracle.hpp"
#include "support.hpp"

using namespace fktest;

namespace {

// min c.x over the vertices of {rows, x >= 0}: every choice of n tight
// constraints, solved by Gaussian elimination.
double vertex_enumeration(const LinearProgram& lp, bool& feasible) {
    const std::size_t n = lp.num_vars;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (const auto& r : lp.rows) {
        A.push_back(r.coeffs);
        b.push_back(r.rhs);
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        A.push_back(e);
        b.push_back(0.0);
    }
    auto ok = [&](const std::vector<double>& x) {
        for (double v : x)
            if (v < -1e-9) return false;
        for (const auto& r : lp.rows) {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += r.coeffs[i] * x[i];
            if (r.sense == RowSense::le && s > r.rhs + 1e-9) return false;
            if (r.sense == RowSense::ge && s < r.rhs - 1e-9) return false;
            if (r.sense == RowSense::eq && std::abs(s - r.rhs) > 1e-9) return false;
        }
        return true;
    };
    feasible = false;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pick(n);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
        if (pos == n) {
            std::vector<std::vector<double>> M(n, std::vector<double>(n + 1));
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < n; ++c) M[r][c] = A[pick[r]][c];
                M[r][n] = b[pick[r]];
            }
            for (std::size_t c = 0; c < n; ++c) {
                std::size_t piv = c;
                for (std::size_t r = c; r < n; ++r)
                    if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
                if (std::abs(M[piv][c]) < 1e-12) return;
                std::swap(M[c], M[piv]);
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == c) continue;
                    const double f = M[r][c] / M[c][c];
                    for (std::size_t q = c; q <= n; ++q) M[r][q] -= f * M[c][q];
                }
            }
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = M[i][n] / M[i][i];
            if (!ok(x)) return;
            feasible = true;
            double v = 0;
            for (std::size_t i = 0; i < n; ++i) v += lp.objective[i] * x[i];
            best = std::min(best, v);
            return;
        }
        for (std::size_t i = from; i < A.size(); ++i) {
            pick[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
    return best;
}

// Exact fair assignment for k = 2 and two disjoint groups: class t sends m_t
// points to center 0, namely those with the smallest cost difference.
double two_center_fair(const Dataset& ds, const std::vector<Center>& C, const FairnessSpec& spec, Objective obj) {
    std::vector<std::vector<double>> diff(2);
    double base = 0;
    for (std::size_t p = 0; p < ds.size(); ++p) {
        const double c0 = objective_cost(ds.space().dist_to(p, C[0]), obj);
        const double c1 = objective_cost(ds.space().dist_to(p, C[1]), obj);
        base += c1;
        diff[ds.groups_of(p)[0]].push_back(c0 - c1);
    }
    for (auto& d : diff) std::sort(d.begin(), d.end());
    auto fair = [&](std::int64_t a, std::int64_t b) {
        const std::int64_t tot = a + b;
        if (tot == 0) return true;
        const std::int64_t m[2] = {a, b};
        for (int q = 0; q < 2; ++q) {
            const double f = static_cast<double>(m[q]) / static_cast<double>(tot);
            if (f > spec.alpha[q] + 1e-12 || f < spec.beta[q] - 1e-12) return false;
        }
        return true;
    };
    double best = std::numeric_limits<double>::infinity();
    const auto n0 = static_cast<std::int64_t>(diff[0].size()), n1 = static_cast<std::int64_t>(diff[1].size());
    for (std::int64_t a = 0; a <= n0; ++a)
        for (std::int64_t b = 0; b <= n1; ++b) {
            if (!fair(a, b) || !fair(n0 - a, n1 - b)) continue;
            double c = base;
            for (std::int64_t i = 0; i < a; ++i) c += diff[0][i];
            for (std::int64_t i = 0; i < b; ++i) c += diff[1][i];
            best = std::min(best, c);
        }
    return best;
}

}  // namespace

TEST_SUITE("milp") {

TEST_CASE("simplex basics") {
    LinearProgram lp;
    lp.num_vars = 1;
    lp.objective = {1.0};
    lp.add_row({1.0}, RowSense::ge, 3.0);
    const auto r = simplex_solve(lp);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == doctest::Approx(3.0));

    LinearProgram bad;
    bad.num_vars = 1;
    bad.objective = {1.0};
    bad.add_row({1.0}, RowSense::le, 0.0);
    bad.add_row({1.0}, RowSense::ge, 1.0);
    CHECK(simplex_solve(bad).status == LpStatus::infeasible);

    LinearProgram unb;
    unb.num_vars = 1;
    unb.objective = {-1.0};
    CHECK(simplex_solve(unb).status == LpStatus::unbounded);

    CHECK_THROWS_AS(lp.add_row({1.0, 2.0}, RowSense::le, 1.0), InputError);
}

TEST_CASE("five-variable LP against vertex enumeration") {
    LinearProgram lp;
    lp.num_vars = 5;
    lp.objective = {2, 3, 1, 4, 2};
    lp.add_row({1, 1, 1, 0, 0}, RowSense::eq, 4);
    lp.add_row({0, 0, 0, 1, 1}, RowSense::eq, 3);
    lp.add_row({1, 0, 0, 1, 0}, RowSense::ge, 2);
    lp.add_row({0, 1, 0, 0, 1}, RowSense::ge, 2);
    lp.add_row({0, 0, 1, 0, 0}, RowSense::le, 1);
    bool feasible = false;
    const double want = vertex_enumeration(lp, feasible);
    REQUIRE(feasible);
    CHECK(want == doctest::Approx(13.0));  // frozen from the enumeration
    const auto r = simplex_solve(lp);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == doctest::Approx(want));
}

TEST_CASE("random bounded LPs against vertex enumeration") {
    for (std::uint64_t s = 0; s < 150; ++s) {
        Gen g(s);
        LinearProgram lp;
        lp.num_vars = 2 + g.index(4);
        for (std::size_t i = 0; i < lp.num_vars; ++i) lp.objective.push_back(static_cast<double>(g.integer(-5, 5)));
        lp.add_row(std::vector<double>(lp.num_vars, 1.0), RowSense::le, static_cast<double>(g.integer(1, 10)));
        const std::size_t rows = g.index(4);
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<double> c(lp.num_vars);
            for (auto& x : c) x = static_cast<double>(g.integer(-3, 3));
            const auto sense = static_cast<RowSense>(g.index(3));
            lp.add_row(c, sense, static_cast<double>(g.integer(-2, 6)));
        }
        bool feasible = false;
        const double want = vertex_enumeration(lp, feasible);
        const auto got = simplex_solve(lp);
        if (!feasible) {
            CHECK(got.status == LpStatus::infeasible);
        } else {
            REQUIRE(got.status == LpStatus::optimal);
            CHECK(got.value == doctest::Approx(want).epsilon(1e-7));
        }
    }
}

TEST_CASE("unconstrained spec gives the nearest-center cost") {
    Gen g(3);
    const auto ds = random_dataset(g, 9, 1);
    const auto C = centers_at({1, 4, 7});
    const auto r = fair_assign_exact(ds, unit_weights(ds), C, FairnessSpec::unconstrained(1), Objective::means);
    REQUIRE(r.status == AssignStatus::optimal);
    double want = 0;
    for (std::size_t p = 0; p < 9; ++p) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& c : C) m = std::min(m, objective_cost(ds.space().dist_to(p, c), Objective::means));
        want += m;
    }
    CHECK(r.cost == doctest::Approx(want));
}

TEST_CASE("balanced two-color instance") {
    // reds at 0 and 1, blues at 10 and 11
    const Dataset ds(MetricSpace::euclidean(1, {0, 1, 10, 11}), {{0}, {0}, {1}, {1}});
    const FairnessSpec half{{0.5, 0.5}, {0.5, 0.5}};
    const auto r = fair_assign_exact(ds, unit_weights(ds), centers_at({0, 3}), half, Objective::median);
    REQUIRE(r.status == AssignStatus::optimal);
    CHECK(r.cost == doctest::Approx(20.0));  // frozen: 0 + 10 (to 0) and 10 + 0 (to 11)
    CHECK(fairness_check(r.assignment, ds, half).empty());

    const FairnessSpec impossible{{0.4, 0.4}, {0.0, 0.0}};
    CHECK(fair_assign_exact(ds, unit_weights(ds), centers_at({0, 3}), impossible, Objective::median).status ==
          AssignStatus::infeasible);
}

TEST_CASE("cutoff stops early") {
    const Dataset ds(MetricSpace::euclidean(1, {0, 1, 10, 11}), {{0}, {0}, {1}, {1}});
    const FairnessSpec half{{0.5, 0.5}, {0.5, 0.5}};
    MilpOptions opts;
    opts.cutoff = 5.0;
    CHECK(fair_assign_exact(ds, unit_weights(ds), centers_at({0, 3}), half, Objective::median, opts).status ==
          AssignStatus::cutoff);
}

TEST_CASE("exact assignment matches the enumeration oracle") {
    for (std::uint64_t s = 0; s < 150; ++s) {
        Gen g(700 + s);
        const std::size_t n = 3 + g.index(5), k = 1 + g.index(3);
        const auto ds = random_dataset(g, n, 1 + g.index(3));
        const auto spec = random_spec(g, ds.num_groups());
        const auto C = centers_at(g.distinct(n, k));
        const auto got = fair_assign_exact(ds, unit_weights(ds), C, spec, Objective::median);
        const auto want = exact_fair_assignment(ds, unit_weights(ds), C, spec, Objective::median);
        CHECK((got.status == AssignStatus::optimal) == want.feasible);
        if (want.feasible) {
            CHECK(got.cost == doctest::Approx(want.cost).epsilon(1e-9));
            CHECK(constraint_matrix_of(got.assignment, ds) == got.g);
        }
    }
}

TEST_CASE("error split") {
    for (double e : {0.1, 0.5, 1.0, 3.0}) {
        const double e0 = split_epsilon(e);
        if (e0 < 1.0) CHECK((1 + 3 * e0) * (1 + e0) == doctest::Approx(1 + e));
        CHECK(e0 > 0.0);
        CHECK(e0 <= 1.0);
    }
}

TEST_CASE("restoration") {
    Gen g(12);
    const auto ds = random_dataset(g, 10, 2);
    const auto C = centers_at({0, 9});
    ConstraintMatrix M(2, 2);
    const auto sz = ds.class_sizes();
    M(0, 0) = static_cast<std::int64_t>(sz[0]);
    M(1, 1) = static_cast<std::int64_t>(sz[1]);
    const auto a = restore_assignment(ds, M, C, 0.5, Objective::median);
    for (const auto& e : a.entries) CHECK(e.center == (ds.class_of(e.point) == 0 ? 0u : 1u));

    // almost no rounding: the exact per-class transport
    M(0, 0) -= 1;
    M(1, 0) += 1;
    const auto tight = restore_assignment(ds, M, C, 1e-7, Objective::median);
    double exact = 0;
    for (double v : class_transport_costs(ds, M, C, Objective::median)) exact += v;
    CHECK(clustering_cost(ds.space(), tight) == doctest::Approx(exact).epsilon(1e-6));
    CHECK(constraint_matrix_of(tight, ds) == M);

    ConstraintMatrix wrong(2, 2);
    CHECK_THROWS_AS(restore_assignment(ds, wrong, C, 0.5, Objective::median), InputError);
}

TEST_CASE("restored cost is within 1+eps of the exact transports") {
    for (std::uint64_t s = 0; s < 60; ++s) {
        Gen g(s);
        const std::size_t n = 6 + g.index(15), k = 2 + g.index(2);
        const auto ds = random_dataset(g, n, 1 + g.index(3));
        const auto C = centers_at(g.distinct(n, k));
        ConstraintMatrix M(k, ds.num_classes());
        const auto sz = ds.class_sizes();
        for (std::size_t t = 0; t < sz.size(); ++t)
            for (std::size_t u = 0; u < sz[t]; ++u) ++M(g.index(k), t);
        double exact = 0;
        for (double v : class_transport_costs(ds, M, C, Objective::means)) exact += v;
        const auto a = restore_assignment(ds, M, C, 0.5, Objective::means);
        CHECK(clustering_cost(ds.space(), a) <= 1.5 * exact + 1e-9);
    }
}

TEST_CASE("approximate assignment on small inputs is exact") {
    Gen g(21);
    const auto ds = random_dataset(g, 8, 2);
    const FairnessSpec spec{{0.75, 0.75}, {0.25, 0.25}};
    const auto C = centers_at({2, 5});
    const auto exact = fair_assign_exact(ds, unit_weights(ds), C, spec, Objective::median);
    const auto approx = fair_assign_approx(ds, C, spec, 0.5, Objective::median, 1);
    REQUIRE(exact.status == AssignStatus::optimal);
    REQUIRE(approx.status == AssignStatus::optimal);
    CHECK(approx.cost == doctest::Approx(exact.cost));
}

TEST_CASE("approximate assignment without constraints tracks the nearest cost") {
    Gen g(22);
    const auto ds = random_dataset(g, 40, 1, 2, 50);
    const auto C = centers_at({0, 13, 27});
    CoresetConfig cfg;
    cfg.c_med = 0.05;
    const auto r = fair_assign_approx(ds, C, FairnessSpec::unconstrained(1), 0.5, Objective::median, 4, cfg);
    const auto exact = fair_assign_exact(ds, unit_weights(ds), C, FairnessSpec::unconstrained(1), Objective::median);
    REQUIRE(r.status == AssignStatus::optimal);
    CHECK(r.cost <= 1.5 * exact.cost + 1e-9);
}

TEST_CASE("approximate assignment on 60 points stays within 1.5x of the fair optimum") {
    int good = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        Gen g(900 + s);
        std::vector<std::vector<std::size_t>> groups(60);
        for (std::size_t p = 0; p < 60; ++p) groups[p] = {g.coin(0.6) ? std::size_t{0} : std::size_t{1}};
        const Dataset ds(MetricSpace::euclidean(2, grid_points(g, 60, 2, 60)), groups);
        const FairnessSpec spec{{0.7, 0.7}, {0.3, 0.3}};
        const auto C = centers_at(g.distinct(60, 2));
        const double opt = two_center_fair(ds, C, spec, Objective::median);
        CoresetConfig cfg;
        cfg.c_med = 0.05;  // make the coreset smaller than the input
        const auto r = fair_assign_approx(ds, C, spec, 0.5, Objective::median, s, cfg);
        if (std::isinf(opt)) {
            CHECK(r.status == AssignStatus::infeasible);
            ++good;
            continue;
        }
        REQUIRE(r.status == AssignStatus::optimal);
        CHECK(fairness_check(r.assignment, ds, spec).empty());
        good += r.cost <= 1.5 * opt + 1e-9;
    }
    CHECK(good >= 9);
}

}
