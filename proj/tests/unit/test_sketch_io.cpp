#include <random>
#include <sstream>

#include "doctest.h"
#include "wmh/baselines.hpp"
#include "wmh/error.hpp"
#include "wmh/redgreen.hpp"
#include "wmh/sketch.hpp"

using namespace wmh;

namespace {

std::vector<Sketch> random_sketches(Scheme scheme, std::uint32_t k, std::mt19937_64& gen) {
    std::vector<Sketch> out;
    for (int n = 0; n < 5; ++n) {
        Sketch s{scheme, 42, 77, {}, {}};
        for (std::uint32_t i = 0; i < k; ++i) {
            s.values.push_back(scheme == Scheme::RedGreen ? 1 + gen() % 65535 : gen());
            if (scheme == Scheme::Ioffe) s.levels.push_back(static_cast<std::int64_t>(gen()));
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

TEST_CASE("property: sketch files round trip for every scheme") {
    std::mt19937_64 gen(1);
    for (auto scheme : {Scheme::RedGreen, Scheme::Ioffe, Scheme::Reduction}) {
        auto sk = random_sketches(scheme, 13, gen);
        std::stringstream buf;
        write_sketches(buf, sk, scheme, 13, 42, 77);
        CHECK(read_sketches(buf) == sk);
    }
}

TEST_CASE("sketch file layout") {
    std::vector<Sketch> sk{{Scheme::RedGreen, 5, 6, {1, 258}, {}}};
    std::stringstream buf;
    write_sketches(buf, sk, Scheme::RedGreen, 2, 5, 6);
    auto bytes = buf.str();
    CHECK(bytes.substr(0, 4) == "WMHS");
    CHECK(bytes.size() == 40 + 2 * 2);
    CHECK(bytes[8] == 1);                                   // scheme id
    CHECK(static_cast<unsigned char>(bytes[40]) == 1);      // first value, little-endian u16
    CHECK(static_cast<unsigned char>(bytes[42]) == 2);
    CHECK(static_cast<unsigned char>(bytes[43]) == 1);
}

TEST_CASE("sketch file errors") {
    std::vector<Sketch> wide{{Scheme::RedGreen, 1, 1, {70000}, {}}};
    std::stringstream out;
    CHECK_THROWS_AS(write_sketches(out, wide, Scheme::RedGreen, 1, 1, 1), ResourceError);
    std::vector<Sketch> other{{Scheme::RedGreen, 2, 1, {3}, {}}};
    CHECK_THROWS_AS(write_sketches(out, other, Scheme::RedGreen, 1, 1, 1), IncompatibleError);

    std::istringstream bad("WMHX");
    CHECK_THROWS_AS(read_sketches(bad), FormatError);

    std::vector<Sketch> ok{{Scheme::Reduction, 1, 1, {3, 4}, {}}};
    std::stringstream good;
    write_sketches(good, ok, Scheme::Reduction, 2, 1, 1);
    std::istringstream cut(good.str().substr(0, good.str().size() - 1));
    CHECK_THROWS_AS(read_sketches(cut), FormatError);
}

TEST_CASE("json output") {
    std::vector<Sketch> sk{{Scheme::Ioffe, 3, 0, {4}, {-2}}};
    std::ostringstream out;
    write_sketches_json(out, sk);
    CHECK(out.str().find("[[4,-2]]") != std::string::npos);
}

TEST_CASE("scheme names") {
    for (auto s : {Scheme::RedGreen, Scheme::Ioffe, Scheme::Reduction}) CHECK(parse_scheme(to_string(s)) == s);
    CHECK_THROWS_AS(parse_scheme("simhash"), UsageError);
    SchemeConfig c;
    CHECK_NOTHROW(c.validate());
    c.k = 0;
    CHECK_THROWS_AS(c.validate(), UsageError);
    c = {};
    c.alpha = -1.0;
    CHECK_THROWS_AS(c.validate(), UsageError);
    c = {};
    c.delta = 1.0;
    CHECK_THROWS_AS(c.validate(), UsageError);
}
