#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "wmh/baselines.hpp"
#include "wmh/error.hpp"
#include "wmh/estimate.hpp"
#include "wmh/rng.hpp"

using namespace wmh;

TEST_CASE("ioffe_hash is consistent") {
    SparseVector x({{1, 0.4}, {3, 2.5}, {8, 7.0}}, 10);
    for (std::uint64_t slot = 0; slot < 50; ++slot) {
        auto a = ioffe_hash(x, slot, 17);
        CHECK(a == ioffe_hash(x, slot, 17));
        CHECK(x.at(a.k_star) > 0.0);
    }
    auto sk = ioffe_sketch(x, 50, 17);
    for (std::uint64_t slot = 0; slot < 50; ++slot) {
        auto h = ioffe_hash(x, slot, 17);
        CHECK(sk.values[slot] == h.k_star);
        CHECK(sk.levels[slot] == h.t_star);
    }
    CHECK_THROWS_AS(ioffe_hash(SparseVector({}, 3), 0, 1), UsageError);
    CHECK_THROWS_AS(ioffe_sketch(x, 0, 1), UsageError);
}

TEST_CASE("ioffe identical vectors always collide, disjoint never do") {
    SparseVector x({{0, 1.3}, {4, 0.2}}, 10);
    SparseVector y({{5, 1.3}, {9, 0.2}}, 10);
    auto a = ioffe_sketch(x, 500, 3);
    CHECK(estimate_from_sketches(a, ioffe_sketch(x, 500, 3)).j_hat == 1.0);
    auto b = ioffe_sketch(x, 10000, 3);
    auto c = ioffe_sketch(y, 10000, 3);
    CHECK(estimate_from_sketches(b, c).j_hat == 0.0);
}

TEST_CASE("ioffe collision rate tracks J") {
    std::mt19937_64 gen(100);
    for (double target : {0.25, 0.6}) {
        auto p = oracle::pair_with_jaccard(target, gen, 20);
        const std::size_t k = 10000;
        auto est = estimate_from_sketches(ioffe_sketch(p.x, k, 9), ioffe_sketch(p.y, k, 9));
        CHECK(std::abs(est.j_hat - target) < 3.0 * std::sqrt(target * (1 - target) / k));
    }
}

TEST_CASE("ioffe handles weights below one and very large weights") {
    SparseVector x({{0, 1e-6}, {1, 1e9}}, 2);
    auto s = ioffe_sketch(x, 200, 1);
    std::size_t big = 0;
    for (auto v : s.values) big += v == 1 ? 1 : 0;
    CHECK(big == 200);
}

TEST_CASE("reduce_to_unweighted") {
    SparseVector three({{0, 3.0}}, 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto s = reduce_to_unweighted(three, seed);
        CHECK(s.elements == std::vector<SetElement>{{1, 0}, {2, 0}, {3, 0}});
    }
    CHECK(reduce_to_unweighted(SparseVector({}, 4), 1).elements.empty());

    SparseVector half({{0, 0.5}}, 1);
    int hits = 0;
    const int n = 10000;
    for (int seed = 0; seed < n; ++seed) hits += reduce_to_unweighted(half, slot_seed(1, seed)).elements.size();
    CHECK(std::abs(hits / static_cast<double>(n) - 0.5) < 0.016);

    SparseVector mixed({{2, 2.7}, {5, 0.1}}, 6);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto s = reduce_to_unweighted(mixed, seed);
        std::set<SetElement> unique(s.elements.begin(), s.elements.end());
        CHECK(unique.size() == s.elements.size());
        for (const auto& e : s.elements) CHECK(static_cast<double>(e.level) <= std::ceil(mixed.at(e.coord)));
    }
}

TEST_CASE("reduction refuses sets that are too large") {
    CHECK_THROWS_AS(reduce_to_unweighted(SparseVector({{0, 1e12}}, 1), 1), ResourceError);
}

TEST_CASE("2-universal hash matches direct modular arithmetic") {
    std::mt19937_64 gen(12);
    for (int t = 0; t < 200; ++t) {
        auto h = UniversalHash::for_slot(gen(), t);
        CHECK(h.a >= 1);
        CHECK(h.a < kMersenne61);
        CHECK(h.b < kMersenne61);
        for (int i = 0; i < 50; ++i) {
            std::uint64_t key = gen() % kMersenne61;
            unsigned __int128 direct = (static_cast<unsigned __int128>(h.a) * key + h.b) % kMersenne61;
            REQUIRE(h(key) == static_cast<std::uint64_t>(direct));
        }
    }
}

TEST_CASE("minwise_unweighted") {
    UnweightedSet s{{{1, 0}, {2, 0}, {1, 3}}, 4};
    CHECK(minwise_unweighted(s, 3, 8) == minwise_unweighted(s, 3, 8));

    UnweightedSet single{{{2, 1}}, 4};
    auto h = UniversalHash::for_slot(8, 5);
    CHECK(minwise_unweighted(single, 5, 8) == h(element_key({2, 1}, 4)));
    CHECK(element_key({2, 1}, 4) == 9);

    UnweightedSet empty{{}, 4};
    CHECK(minwise_unweighted(empty, 0, 1) == kEmptySetHash);

    SparseVector x({{0, 3.0}, {2, 1.0}}, 3);
    SparseVector e({}, 3);
    auto a = reduction_sketch(x, 64, 2);
    CHECK(estimate_from_sketches(a, reduction_sketch(x, 64, 2)).j_hat == 1.0);
    auto z = reduction_sketch(e, 64, 2);
    CHECK(estimate_from_sketches(z, z).j_hat == 0.0);
}

TEST_CASE("integer weights: reduced-set Jaccard equals generalized Jaccard") {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Entry> ex;
        std::vector<Entry> ey;
        for (Index i = 0; i < 15; ++i) {
            if (gen() % 3) ex.push_back({i, static_cast<double>(1 + gen() % 6)});
            if (gen() % 3) ey.push_back({i, static_cast<double>(1 + gen() % 6)});
        }
        ex.push_back({15, 1.0});
        SparseVector x(ex, 16);
        SparseVector y(ey, 16);
        auto sx = reduce_to_unweighted(x, gen());
        auto sy = reduce_to_unweighted(y, gen());
        std::vector<SetElement> inter;
        std::vector<SetElement> uni;
        std::set_intersection(sx.elements.begin(), sx.elements.end(), sy.elements.begin(), sy.elements.end(),
                              std::back_inserter(inter));
        std::set_union(sx.elements.begin(), sx.elements.end(), sy.elements.begin(), sy.elements.end(),
                       std::back_inserter(uni));
        double reduced = static_cast<double>(inter.size()) / static_cast<double>(uni.size());
        CHECK(reduced == doctest::Approx(oracle::dense_jaccard(x, y)).epsilon(1e-15));
    }
}
