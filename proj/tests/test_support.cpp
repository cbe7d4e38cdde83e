#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "casimir/diagnostics.hpp"
#include "casimir/errors.hpp"
#include "casimir/interpolation.hpp"
#include "casimir/keyvalue.hpp"
#include "casimir/parallel.hpp"

using namespace casimir;

TEST_CASE("key-value documents") {
    std::istringstream in(
        "# leading comment\n"
        "material = gold.cfg\n"
        "[geometry]\n"
        "radius_um = 99.6   # trailing comment\n"
        "angles = 0, 1.2, 2.4\n"
        "[oscillator]\n"
        "f = 1\n"
        "[oscillator]\n"
        "f = 2\n");
    const auto doc = KeyValueDocument::parse(in, "t");
    CHECK(doc.root().get_string("material") == "gold.cfg");
    const auto& g = doc.require_section("geometry");
    CHECK(g.get_double("radius_um") == doctest::Approx(99.6));
    const auto angles = g.get_double_list("angles");
    REQUIRE(angles.size() == 3);
    CHECK(angles[1] == doctest::Approx(1.2));
    CHECK(doc.sections("oscillator").size() == 2);
    CHECK_THROWS_AS(doc.section("oscillator"), ConfigError);
    CHECK_THROWS_AS(g.get_double("missing"), ConfigError);
    CHECK(g.get_double("missing", 3.0) == 3.0);
    CHECK_THROWS_AS(g.reject_unknown({"radius_um"}), ConfigError);
    CHECK_NOTHROW(g.reject_unknown({"radius_um", "angles"}));
}

TEST_CASE("key-value rejects duplicates and junk") {
    std::istringstream dup("a = 1\na = 2\n");
    CHECK_THROWS_AS(KeyValueDocument::parse(dup), ConfigError);
    std::istringstream junk("[s]\nno equals sign\n");
    CHECK_THROWS_AS(KeyValueDocument::parse(junk), ConfigError);
    std::istringstream bad("x = 1.5abc\n");
    const auto doc = KeyValueDocument::parse(bad);
    CHECK_THROWS_AS(doc.root().get_double("x"), ConfigError);
}

TEST_CASE("monotone cubic reproduces knots and stays monotone") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y{0.0, 0.1, 0.1, 2.0, 2.1};
    const MonotoneCubic f(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(f(x[i]) == y[i]);
    double prev = f(0.0);
    for (int i = 1; i <= 400; ++i) {
        const double v = f(i * 0.01);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
    // flat segment stays flat
    CHECK(f(1.5) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK_THROWS_AS(f(-0.1), RangeError);
    CHECK_THROWS_AS(f(4.1), RangeError);
    CHECK_THROWS_AS(MonotoneCubic({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(MonotoneCubic({0.0, 1.0, 1.0, 2.0}, {0.0, 1.0, 2.0, 3.0}), DomainError);
}

TEST_CASE("monotone cubic is exact for straight lines") {
    const MonotoneCubic f({1.0, 2.0, 4.0, 7.0}, {3.0, 5.0, 9.0, 15.0});
    CHECK(f(3.3) == doctest::Approx(7.6));
    CHECK(f.derivative(5.0) == doctest::Approx(2.0));
}

TEST_CASE("geometric grid") {
    const auto g = geometric_grid(1.0, 1000.0, 4);
    REQUIRE(g.size() == 4);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == 1000.0);
    CHECK(g[1] == doctest::Approx(10.0));
}

TEST_CASE("parallel_for covers every index and rethrows") {
    set_thread_count(4);
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                        if (i == 7) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    set_thread_count(1);
}

TEST_CASE("warnings go to the installed handler") {
    std::string seen;
    auto previous = set_warning_handler([&](const std::string& m) { seen = m; });
    warn("hello");
    set_warning_handler(previous);
    CHECK(seen == "hello");
}
