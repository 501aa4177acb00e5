#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "wmh/error.hpp"
#include "wmh/estimate.hpp"
#include "wmh/redgreen.hpp"
#include "wmh/rng.hpp"
#include "wmh/sketcher.hpp"

using namespace wmh;

TEST_CASE("exact_jaccard examples") {
    SparseVector x({{0, 1.0}, {1, 2.0}}, 2);
    SparseVector y({{0, 2.0}, {1, 1.0}}, 2);
    CHECK(exact_jaccard(x, x) == 1.0);
    CHECK(exact_jaccard(x, y) == 0.5);
    CHECK(exact_jaccard(SparseVector({{0, 1.0}}, 3), SparseVector({{2, 4.0}}, 3)) == 0.0);
    CHECK_THROWS_AS(exact_jaccard(x, SparseVector({{0, 1.0}}, 3)), UsageError);
    CHECK_THROWS_AS(exact_jaccard(SparseVector({}, 2), SparseVector({}, 2)), DomainError);
    CHECK(exact_jaccard(SparseVector({}, 2), x) == 0.0);
}

TEST_CASE("property: exact_jaccard matches dense evaluation, is symmetric, in range") {
    std::mt19937_64 gen(2);
    for (int t = 0; t < 300; ++t) {
        auto x = oracle::random_vector(gen, 30, 0.4, 4.0);
        auto y = oracle::random_vector(gen, 30, 0.4, 4.0);
        if (x.empty() && y.empty()) continue;
        double j = exact_jaccard(x, y);
        CHECK(j == doctest::Approx(oracle::dense_jaccard(x, y)).epsilon(1e-12));
        CHECK(j == exact_jaccard(y, x));
        CHECK(j >= 0.0);
        CHECK(j <= 1.0);
    }
}

TEST_CASE("estimate_from_sketches") {
    Sketch a{Scheme::RedGreen, 7, 11, {1, 2, 3, 4}, {}};
    auto r = estimate_from_sketches(a, a);
    CHECK(r.j_hat == 1.0);
    CHECK(r.std_err == 0.0);
    CHECK(r.k == 4);

    Sketch b = a;
    b.values = {1, 9, 3, 9};
    r = estimate_from_sketches(a, b);
    CHECK(r.j_hat == 0.5);
    CHECK(r.std_err == doctest::Approx(std::sqrt(0.25 / 4)));
    CHECK(estimate_from_sketches(a, b, 1).j_hat == 1.0);
    CHECK(estimate_from_sketches(b, a).j_hat == r.j_hat);
    CHECK_THROWS_AS(estimate_from_sketches(a, b, 0), UsageError);
    CHECK_THROWS_AS(estimate_from_sketches(a, b, 5), UsageError);

    auto expect_field = [&](Sketch other, const char* field) {
        try {
            estimate_from_sketches(a, other);
            FAIL("expected IncompatibleError");
        } catch (const IncompatibleError& e) {
            CHECK(std::string(e.what()).find(field) != std::string::npos);
        }
    };
    Sketch c = a;
    c.scheme = Scheme::Reduction;
    expect_field(c, "scheme");
    c = a;
    c.master_seed = 8;
    expect_field(c, "master_seed");
    c = a;
    c.layout_id = 12;
    expect_field(c, "layout_id");
    c = a;
    c.values.push_back(5);
    expect_field(c, "k");
}

TEST_CASE("ioffe slots compare both fields") {
    Sketch a{Scheme::Ioffe, 1, 0, {3, 3}, {1, 2}};
    Sketch b{Scheme::Ioffe, 1, 0, {3, 3}, {1, 5}};
    CHECK(estimate_from_sketches(a, b).j_hat == 0.5);
}

TEST_CASE("disjoint supports never collide under red-green") {
    Dataset ds({SparseVector({{0, 1.0}, {1, 0.5}}, 4), SparseVector({{2, 2.0}, {3, 0.25}}, 4)});
    auto l = RedGreenLayout::build(dataset_maxima(ds), 1.0);
    RedGreenHasher h(l);
    auto est = estimate_from_sketches(h.sketch(ds[0], 500, 1), h.sketch(ds[1], 500, 1));
    CHECK(est.j_hat == 0.0);
}

TEST_CASE("mean estimate over 200 seeds is unbiased at J = 0.5") {
    SparseVector x({{0, 1.0}, {1, 2.0}}, 2);
    SparseVector y({{0, 2.0}, {1, 1.0}}, 2);
    auto l = RedGreenLayout::build(std::vector<double>{2.0, 2.0}, 1.0);
    RedGreenHasher h(l);
    const std::size_t k = 50;
    const int reps = 200;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto seed = slot_seed(555, r);
        sum += estimate_from_sketches(h.sketch(x, k, seed), h.sketch(y, k, seed)).j_hat;
    }
    CHECK(std::abs(sum / reps - 0.5) < 3.0 * std::sqrt(0.25 / (reps * k)));
}

TEST_CASE("error_curve") {
    SparseVector x({{0, 1.0}, {1, 2.0}}, 2);
    SparseVector y({{0, 2.0}, {1, 1.0}}, 2);
    auto l = RedGreenLayout::build(std::vector<double>{2.0, 2.0}, 64.0);
    Sketcher rg(Scheme::RedGreen, &l);

    auto same = error_curve(x, x, rg, 10, 20);
    REQUIRE(same.size() == 10);
    for (const auto& p : same) CHECK(p.mae == 0.0);

    auto curve = error_curve(x, y, rg, 50, 200);
    CHECK(curve.front().k == 1);
    CHECK(curve.front().mae == doctest::Approx(0.5));  // |{0,1} - 0.5|
    CHECK(curve.back().mae < curve.front().mae);
    CHECK(curve.back().se > 0.0);

    CHECK_THROWS_AS(error_curve(x, y, rg, 0, 5), UsageError);
    CHECK_THROWS_AS(error_curve(x, y, rg, 5, 0), UsageError);
}

TEST_CASE("curve CSV has one row per k") {
    CurveSet c;
    c.redgreen = {{1, 0.5, 0.0}, {2, 0.25, 0.0}};
    c.ioffe = {{1, 0.4, 0.0}, {2, 0.2, 0.0}};
    std::ostringstream out;
    write_curves_csv(out, c);
    CHECK(out.str() == "k,mae_redgreen,mae_ioffe,mae_reduction\n1,0.5,0.4,\n2,0.25,0.2,\n");
    std::ostringstream js;
    write_curves_json(js, c);
    CHECK(js.str().find("\"ioffe\"") != std::string::npos);
}

TEST_CASE("hash_stats") {
    std::vector<Sketch> ones{{Scheme::RedGreen, 1, 1, {1, 1, 1}, {}}, {Scheme::RedGreen, 1, 1, {1, 1}, {}}};
    auto s = hash_stats(ones);
    CHECK(s.mean == 1.0);
    CHECK(s.max == 1);
    CHECK(s.bits_needed == 1);
    CHECK(s.mean_log2 == 0.0);
    CHECK(s.count == 5);

    std::vector<std::uint64_t> v{1, 2, 7, 8};
    auto t = hash_stats(v);
    CHECK(t.bits_needed == 4);  // ceil(log2(9))
    CHECK(t.max == 8);

    CHECK_THROWS_AS(hash_stats(std::span<const Sketch>{}), UsageError);
    std::vector<Sketch> mixed{{Scheme::RedGreen, 1, 1, {1}, {}}, {Scheme::Ioffe, 1, 1, {1}, {0}}};
    CHECK_THROWS_AS(hash_stats(mixed), UsageError);
}

TEST_CASE("hash_stats on s = 0.1 vectors") {
    auto l = RedGreenLayout::build(std::vector<double>{1000.0}, 1.0);
    RedGreenHasher h(l);
    SparseVector x({{0, 100.0}}, 1);
    std::vector<Sketch> sk;
    for (int i = 0; i < 100; ++i) sk.push_back(h.sketch(x, 500, slot_seed(10, i)));
    auto s = hash_stats(sk);
    CHECK(std::abs(s.mean - 10.0) < 0.3);
    CHECK(s.bits_needed <= 9);
}
