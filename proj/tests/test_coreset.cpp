#include <doctest.h>

#include <map>
#include <set>

#include "fairkit/coreset.hpp"
#include "fairkit/oracle.hpp"
#include "fairkit/random.hpp"
#include "support.hpp"

using namespace fktest;

TEST_SUITE("coreset") {

TEST_CASE("ring boundaries") {
    const double mu = 1.5;
    CHECK(ring_index(0.0, mu) == 0);
    CHECK(ring_index(mu, mu) == 0);
    CHECK(ring_index(2 * mu, mu) == 1);
    CHECK(ring_index(4 * mu, mu) == 2);
    CHECK(ring_index(3 * mu, mu) == 2);
    CHECK(ring_index(4 * mu * 1.000001, mu) == 3);
}

TEST_CASE("ring predicate property") {
    Gen g(5);
    for (int i = 0; i < 2000; ++i) {
        const double mu = g.real(0.01, 10);
        const double r = g.real(0, 1000);
        const int j = ring_index(r, mu);
        if (j == 0) {
            CHECK(r <= mu);
        } else {
            CHECK(r > std::ldexp(mu, j - 1));
            CHECK(r <= std::ldexp(mu, j));
        }
    }
}

TEST_CASE("sample size plug-in") {
    CoresetConfig cfg;
    cfg.c_med = 1.0;
    // ln 2 < 1 and ln 3 in (1, 2)
    CHECK(sample_size(2, 1, 1.0, Objective::median, Regime::metric, 1, cfg).s == 1);
    CHECK(sample_size(3, 1, 1.0, Objective::median, Regime::metric, 1, cfg).s == 2);
    // means uses eps^5: ceil(4 * 2 * ln 100 / 0.5^5) = ceil(1178.9...)
    CHECK(sample_size(100, 2, 0.5, Objective::means, Regime::metric, 1).s == 1179);
    // euclidean adds d ln(1/eps): ceil(4 * (ln 100 + 2 ln 2) / 0.125)
    CHECK(sample_size(100, 1, 0.5, Objective::median, Regime::euclidean, 2).s == 192);
    cfg.forced_s = 7;
    CHECK(sample_size(100, 2, 0.5, Objective::means, Regime::metric, 1, cfg).s == 7);
}

TEST_CASE("ring-class sampling") {
    Rng rng(1);
    const WeightedSet three{{0, 0, 1}, {1, 0, 1}, {2, 0, 1}};
    const auto all = sample_ring_class(three, 5, rng);
    CHECK(all == three);

    WeightedSet ten;
    for (std::size_t i = 0; i < 10; ++i) ten.push_back({i, 0, 1});
    const auto five = sample_ring_class(ten, 5, rng);
    CHECK(five.size() == 5);
    CHECK(total_weight(five) == 10);
    std::set<std::size_t> ids;
    for (const auto& it : five) ids.insert(it.point);
    CHECK(ids.size() == 5);

    CHECK(sample_ring_class({}, 5, rng).empty());
}

TEST_CASE("sampling keeps the total for weighted inputs") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        Gen g(s);
        Rng rng(s);
        WeightedSet pts;
        const std::size_t m = 1 + g.index(12);
        for (std::size_t i = 0; i < m; ++i) pts.push_back({i, 0, g.integer(1, 9)});
        const std::size_t want = 1 + g.index(10);
        const auto out = sample_ring_class(pts, want, rng);
        CHECK(total_weight(out) == total_weight(pts));
        for (const auto& it : out) CHECK(it.weight >= 1);
        if (total_weight(pts) > static_cast<std::int64_t>(want)) CHECK(out.size() <= want);
    }
}

TEST_CASE("small inputs come back unchanged") {
    Gen g(8);
    const auto ds = random_dataset(g, 12, 2);
    const auto cs = build_coreset(ds.space(), unit_weights(ds), ds.num_classes(), 2, 0.5, Objective::median, 3);
    CHECK(cs.items.size() == 12);
    for (const auto& it : cs.items) CHECK(it.weight == 1);
    REQUIRE(cs.cells.size() == cs.items.size());
    // every (M, C) cost is identical
    const auto C = centers_at({0, 5});
    ConstraintMatrix M(2, ds.num_classes());
    const auto sizes = ds.class_sizes();
    for (std::size_t t = 0; t < sizes.size(); ++t) {
        M(0, t) = static_cast<std::int64_t>(sizes[t] / 2);
        M(1, t) = static_cast<std::int64_t>(sizes[t] - sizes[t] / 2);
    }
    CHECK(exact_constrained_cost(ds.space(), cs.items, M, C, Objective::median) ==
          doctest::Approx(exact_constrained_cost(ds.space(), unit_weights(ds), M, C, Objective::median)));
}

TEST_CASE("class weights are conserved and cells are consistent") {
    for (std::uint64_t s = 0; s < 150; ++s) {
        Gen g(100 + s);
        const std::size_t n = 20 + g.index(60);
        const auto ds = random_dataset(g, n, 1 + g.index(3), 2, 50);
        CoresetConfig cfg;
        cfg.forced_s = 1 + g.index(3);
        const Objective obj = g.coin() ? Objective::median : Objective::means;
        const auto cs = build_coreset(ds.space(), unit_weights(ds), ds.num_classes(), 1 + g.index(3), 0.5, obj, s, cfg);
        const auto got = class_weights(cs.items, ds.num_classes());
        const auto sizes = ds.class_sizes();
        for (std::size_t t = 0; t < sizes.size(); ++t) CHECK(got[t] == static_cast<std::int64_t>(sizes[t]));
        // per cell: at most s items, each from the cell and the class it claims
        std::map<std::tuple<std::size_t, int, std::size_t>, std::size_t> per_cell;
        for (std::size_t i = 0; i < cs.items.size(); ++i) {
            const auto& it = cs.items[i];
            CHECK(ds.class_of(it.point) == it.cls);
            CHECK(cs.rings.ring_of[it.point] == cs.cells[i]);
            ++per_cell[{cs.cells[i].center, cs.cells[i].ring, it.cls}];
        }
        for (const auto& [cell, count] : per_cell) CHECK(count <= cfg.forced_s);
    }
}

TEST_CASE("same seed, same coreset") {
    Gen g(4);
    const auto ds = random_dataset(g, 60, 2, 2, 40);
    CoresetConfig cfg;
    cfg.forced_s = 2;
    const auto a = build_universal_coreset(ds, 2, 0.5, Objective::means, 42, cfg);
    const auto b = build_universal_coreset(ds, 2, 0.5, Objective::means, 42, cfg);
    CHECK(a == b);
}

TEST_CASE("coincident points give one representative per cell") {
    const Dataset ds(MetricSpace::euclidean(1, std::vector<double>(10, 3.0)),
                     {{0}, {0}, {0}, {1}, {1}, {0}, {1}, {0}, {0}, {0}});
    CoresetConfig cfg;
    cfg.forced_s = 1;
    const auto cs = build_coreset(ds.space(), unit_weights(ds), 2, 1, 0.5, Objective::median, 1, cfg);
    CHECK(cs.items.size() == 2);
    CHECK(class_weights(cs.items, 2) == std::vector<std::int64_t>{7, 3});
}

}
