#include <doctest.h>

#include "fairkit/streaming.hpp"
#include "support.hpp"

using namespace fktest;

namespace {

StreamConfig small_config(std::uint64_t seed = 1) {
    StreamConfig sc;
    sc.k = 2;
    sc.epsilon = 1.0;
    sc.seed = seed;
    sc.coreset.forced_s = 1;
    return sc;
}

}  // namespace

TEST_SUITE("streaming") {

TEST_CASE("bucket threshold") {
    auto st = StreamState::disjoint(2, 1, small_config());
    REQUIRE(st.T() == 4);  // 1 * 2^2 / 1^3
    for (int i = 0; i < 3; ++i) st.insert({double(i), 0.0}, {0});
    for (std::size_t j = 1; j < st.buckets().size(); ++j) CHECK(st.buckets()[j].items.empty());
    CHECK(st.buckets()[0].items.size() == 3);
    st.insert({3.0, 0.0}, {0});
    CHECK(st.buckets()[0].items.empty());
    REQUIRE(st.buckets().size() >= 2);
    CHECK(st.buckets()[1].represented == 4);
    std::int64_t w = 0;
    for (const auto& it : st.buckets()[1].items) w += it.weight;
    CHECK(w == 4);
    CHECK(st.buckets()[1].rho == doctest::Approx(1.0 / (8.0 * 4.0)));
}

TEST_CASE("nonempty buckets follow the binary counter") {
    auto st = StreamState::disjoint(1, 1, small_config(3));
    const std::int64_t T = st.T();
    for (std::int64_t n = 1; n <= 70; ++n) {
        st.insert({static_cast<double>(n % 13)}, {0});
        const auto full = n / T;
        CHECK(static_cast<std::int64_t>(st.buckets()[0].items.size()) == n % T);
        for (std::size_t j = 1; j < st.buckets().size(); ++j) {
            const bool bit = (full >> (j - 1)) & 1;
            CHECK(!st.buckets()[j].items.empty() == bit);
            if (bit) CHECK(st.buckets()[j].represented == (T << (j - 1)));
        }
    }
}

TEST_CASE("short streams return the raw points") {
    auto st = StreamState::disjoint(2, 2, small_config());
    st.insert({1, 2}, {0});
    st.insert({3, 4}, {1});
    const auto out = stream_coreset(st);
    REQUIRE(out.items.size() == 2);
    for (const auto& it : out.items) CHECK(it.weight == 1);
    CHECK(out.points.space().coords(1)[1] == 4.0);
    CHECK(out.points.groups_of(1) == std::vector<std::size_t>{1});
}

TEST_CASE("class weights survive merge and reduce at every prefix") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Gen g(seed);
        StreamState st(2, {{0}, {1}, {0, 1}}, 2, small_config(seed));
        std::vector<std::int64_t> counts(3, 0);
        const std::vector<std::vector<std::size_t>> sets{{0}, {1}, {0, 1}};
        for (int i = 0; i < 80; ++i) {
            const auto c = g.index(3);
            st.insert({g.real(0, 9), g.real(0, 9)}, sets[c]);
            ++counts[c];
            const auto out = stream_coreset(st);
            std::vector<std::int64_t> got(3, 0);
            for (const auto& it : out.items) got[st.class_of_groups(out.points.groups_of(it.point))] += it.weight;
            CHECK(got == counts);
        }
    }
}

TEST_CASE("invalid insertions") {
    auto st = StreamState::disjoint(2, 2, small_config());
    CHECK_THROWS_AS(st.insert({1.0}, {0}), InputError);
    CHECK_THROWS_AS(st.insert({1.0, 1.0}, {5}), InputError);
    CHECK_THROWS_AS(st.insert({1.0, 1.0}, {0, 1}), InputError);  // outside the universe
    CHECK_THROWS_AS(st.insert({1.0, 1.0}, {}), InputError);
    StreamConfig bad = small_config();
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(StreamState::disjoint(2, 2, bad), InputError);
}

TEST_CASE("class universe can grow") {
    auto st = StreamState::disjoint(1, 2, small_config());
    const auto T0 = st.T();
    st.insert({1.0}, {0});
    st.reset_classes({{0}, {1}, {0, 1}}, 2);
    CHECK(st.T() > T0);
    st.insert({2.0}, {0, 1});
    CHECK(st.class_of_groups({1, 0}) == 2);
    CHECK_THROWS_AS(st.reset_classes({{0}}, 2), InputError);
    CHECK_THROWS_AS(st.reset_classes({{1}, {0}, {0, 1}}, 2), InputError);
}

}
