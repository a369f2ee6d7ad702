#include <doctest.h>

#include <cmath>

#include "fairkit/approx.hpp"
#include "fairkit/milp.hpp"
#include "fairkit/oracle.hpp"
#include "support.hpp"

using namespace fktest;

namespace {

Dataset bicolor(Gen& g, std::size_t n, std::int64_t span = 20) {
    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t p = 0; p < n; ++p) groups[p] = {p % 2};
    return Dataset(MetricSpace::euclidean(2, grid_points(g, n, 2, span)), groups);
}

}  // namespace

TEST_SUITE("approx") {

TEST_CASE("constraint parsing") {
    CHECK(Constraint::parse("fair").kind == Constraint::Kind::fair);
    const auto l = Constraint::parse("lower:3");
    CHECK(l.kind == Constraint::Kind::lower);
    CHECK(l.param == 3);
    CHECK(Constraint::parse("cap:5").to_string() == "cap:5");
    CHECK(Constraint::parse("div:2").kind == Constraint::Kind::diversity);
    CHECK(Constraint::parse("chromatic").kind == Constraint::Kind::chromatic);
    CHECK_THROWS_AS(Constraint::parse("cap"), InputError);
    CHECK_THROWS_AS(Constraint::parse("lower:-1"), InputError);
    CHECK_THROWS_AS(Constraint::parse("matroid"), InputError);
    const auto spec = Constraint::diversity(2).fairness_for(3);
    CHECK(spec.alpha == std::vector<double>(3, 0.5));
    CHECK(spec.beta == std::vector<double>(3, 0.0));
}

TEST_CASE("aspect-ratio transform") {
    const std::size_t n = 2;
    const double D = 1.0;
    const double dmax = 2.0 * std::pow(2.0, 10) * D, dmin = 0.01 * D / 8.0;
    const auto far = MetricSpace::euclidean(1, {0.0, 3.0 * std::pow(2.0, 10)});
    const auto t = reduce_aspect_ratio(far, D, n, Objective::median);
    CHECK(t.dist(0, 1) == doctest::Approx(dmax + dmin));
    CHECK(t.dist(0, 0) == 0.0);

    const auto dup = MetricSpace::euclidean(1, {5.0, 5.0});
    CHECK(reduce_aspect_ratio(dup, D, n, Objective::median).dist(0, 1) == doctest::Approx(dmin));

    // means works with the square root of the cost bound
    const auto tm = reduce_aspect_ratio(dup, 4.0, n, Objective::means);
    CHECK(tm.dist(0, 1) == doctest::Approx(0.01 * 2.0 / 8.0));

    const auto same = reduce_aspect_ratio(far, 0.0, n, Objective::median);
    CHECK(same.dist(0, 1) == doctest::Approx(far.dist(0, 1)));
}

TEST_CASE("upper bound") {
    const Dataset singles(MetricSpace::euclidean(1, {0, 4, 9}), {{0}, {0}, {0}});
    CHECK(cost_upper_bound(singles, 3, FairnessSpec{{1.0}, {1.0}}, Objective::median, 1) == 0.0);

    for (std::uint64_t s = 0; s < 20; ++s) {
        Gen g(s);
        const auto ds = bicolor(g, 8);
        const FairnessSpec spec{{0.6, 0.6}, {0.4, 0.4}};
        const auto opt = exact_fair_optimum(ds, 2, spec, Objective::median);
        REQUIRE(opt.feasible);
        CHECK(cost_upper_bound(ds, 2, spec, Objective::median, s) >= opt.cost - 1e-9);
    }
}

TEST_CASE("one center without constraints") {
    Gen g(6);
    const auto ds = random_dataset(g, 10, 1);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < 10; ++c) {
        double cost = 0;
        for (std::size_t p = 0; p < 10; ++p) cost += ds.space().dist(p, c);
        best = std::min(best, cost);
    }
    const auto sol = fair_cluster_metric(ds, 1, FairnessSpec::unconstrained(1), 0.5, Objective::median, 3);
    CHECK(sol.cost <= 3.5 * best);
    CHECK(sol.centers.size() == 1);
}

TEST_CASE("metric pipeline against the fair optimum") {
    OracleBudget budget;
    budget.max_points = 10;
    for (std::uint64_t s = 0; s < 12; ++s) {
        Gen g(50 + s);
        const auto ds = bicolor(g, 10);
        const FairnessSpec spec{{0.6, 0.6}, {0.4, 0.4}};
        for (Objective obj : {Objective::median, Objective::means}) {
            const auto opt = exact_fair_optimum(ds, 2, spec, obj, {}, budget);
            REQUIRE(opt.feasible);
            const auto sol = fair_cluster_metric(ds, 2, spec, 0.5, obj, s);
            CHECK(fairness_check(sol.assignment, ds, spec).empty());
            CHECK(sol.cost <= (obj == Objective::median ? 3.5 : 9.5) * opt.cost + 1e-9);
            CHECK(sol.meta.guess_space_exhaustive);
        }
    }
}

TEST_CASE("pipelines are deterministic and thread-count independent") {
    Gen g(8);
    const auto ds = bicolor(g, 14);
    const FairnessSpec spec{{0.6, 0.6}, {0.4, 0.4}};
    ApproxOptions one, two;
    two.threads = 2;
    const auto a = fair_cluster_metric(ds, 2, spec, 0.5, Objective::median, 9, one);
    const auto b = fair_cluster_metric(ds, 2, spec, 0.5, Objective::median, 9, one);
    const auto c = fair_cluster_metric(ds, 2, spec, 0.5, Objective::median, 9, two);
    CHECK(a.cost == b.cost);
    CHECK(a.centers == b.centers);
    CHECK(a.assignment.entries == b.assignment.entries);
    CHECK(a.cost == c.cost);
    CHECK(a.centers == c.centers);

    const auto e1 = fair_cluster_euclidean(ds, 2, spec, 0.5, Objective::means, 4, one);
    const auto e2 = fair_cluster_euclidean(ds, 2, spec, 0.5, Objective::means, 4, two);
    CHECK(e1.cost == e2.cost);
    CHECK(e1.centers == e2.centers);
}

TEST_CASE("guess budget caps the enumeration") {
    Gen g(9);
    const auto ds = bicolor(g, 12);
    ApproxOptions opts;
    opts.guess_budget = 3;
    const auto sol = fair_cluster_metric(ds, 2, FairnessSpec{{0.6, 0.6}, {0.4, 0.4}}, 0.5, Objective::median, 1, opts);
    CHECK(!sol.meta.guess_space_exhaustive);
    CHECK(sol.meta.guesses_evaluated <= 3);
}

TEST_CASE("euclidean pipeline on fair singletons") {
    const Dataset ds(MetricSpace::euclidean(2, {0, 0, 5, 5, 9, 1}), {{0}, {0}, {0}});
    const auto sol = fair_cluster_euclidean(ds, 3, FairnessSpec{{1.0}, {1.0}}, 0.5, Objective::means, 2);
    CHECK(sol.cost == doctest::Approx(0.0));
}

TEST_CASE("euclidean pipeline recovers two separated bicolor clusters") {
    int good = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        Gen g(s);
        std::vector<double> xs;
        std::vector<std::vector<std::size_t>> groups;
        for (std::size_t p = 0; p < 12; ++p) {
            xs.push_back((p < 6 ? 0.0 : 30.0) + g.real(-2, 2));
            xs.push_back(g.real(-2, 2));
            groups.push_back({p % 2});
        }
        const Dataset ds(MetricSpace::euclidean(2, xs), groups);
        const FairnessSpec spec{{0.5, 0.5}, {0.5, 0.5}};
        OracleBudget budget;
        budget.max_points = 12;
        const auto opt = exact_fair_optimum_free(ds, 2, spec, Objective::means, budget);
        const auto sol = fair_cluster_euclidean(ds, 2, spec, 0.5, Objective::means, s);
        good += sol.cost <= 1.5 * opt.cost;
    }
    CHECK(good >= 9);
}

TEST_CASE("unconstrained fairness picks the same centers as the capacity-n pipeline") {
    Gen g(10);
    const auto ds = random_dataset(g, 12, 1);
    const auto fair = constrained_cluster(ds, 2, 0.5, Objective::median, Constraint::fair(FairnessSpec::unconstrained(1)),
                                          Regime::metric, 5);
    const auto cap = constrained_cluster(ds, 2, 0.5, Objective::median, Constraint::capacity(12), Regime::metric, 5);
    CHECK(fair.cost == doctest::Approx(cap.cost));
}

TEST_CASE("variant pipelines") {
    Gen g(11);
    const auto ds = random_dataset(g, 8, 1);
    const auto lower = constrained_cluster(ds, 2, 0.5, Objective::median, Constraint::lower(4), Regime::metric, 1);
    const auto opt = exact_variant_optimum(ds, 2, Constraint::lower(4), Objective::median);
    REQUIRE(opt.feasible);
    CHECK(satisfies(Constraint::lower(4), lower.assignment, ds));
    CHECK(lower.cost <= 3.5 * opt.cost + 1e-9);

    // one point per color: chromatic is plain clustering
    std::vector<std::vector<std::size_t>> colors(8);
    for (std::size_t p = 0; p < 8; ++p) colors[p] = {p};
    const Dataset cds(ds.space(), colors);
    const auto chrom = constrained_cluster(cds, 2, 0.5, Objective::median, Constraint::chromatic(), Regime::metric, 1);
    const auto plain = exact_variant_optimum(ds, 2, Constraint::capacity(8), Objective::median);
    CHECK(chrom.cost <= 3.5 * plain.cost + 1e-9);

    const auto div = constrained_cluster(cds, 2, 0.5, Objective::median, Constraint::diversity(2), Regime::metric, 1);
    CHECK(satisfies(Constraint::diversity(2), div.assignment, cds));
}

TEST_CASE("infeasible spec is reported") {
    const Dataset ds(MetricSpace::euclidean(1, {0, 1, 2}), {{0}, {0}, {1}});
    CHECK_THROWS_AS(fair_cluster_metric(ds, 1, FairnessSpec{{0.5, 0.5}, {0.5, 0.5}}, 0.5, Objective::median, 1),
                    InfeasibleError);
}

TEST_CASE("reduced instance keeps class weights") {
    Gen g(13);
    const auto ds = random_dataset(g, 50, 3, 2, 40);
    CoresetConfig cfg;
    cfg.forced_s = 2;
    const auto red = reduce_instance(ds, 2, 0.5, Objective::median, 3, cfg);
    const auto w = class_weights(red.W, ds.num_classes());
    const auto sz = ds.class_sizes();
    for (std::size_t t = 0; t < sz.size(); ++t) CHECK(w[t] == static_cast<std::int64_t>(sz[t]));
    CHECK(red.epsilon0 == doctest::Approx(split_epsilon(0.5)));

    const auto small = reduce_instance(random_dataset(g, 6, 1), 2, 0.5, Objective::median, 3);
    CHECK(small.W.size() == 6);
}

}
