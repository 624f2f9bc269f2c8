#include "doctest.h"

#include <cmath>
#include <set>

#include "glsim/errors.hpp"
#include "glsim/parallel.hpp"
#include "glsim/rational.hpp"
#include "glsim/rng.hpp"

using namespace glsim;

TEST_CASE("counter rng is deterministic and stream-independent") {
    CounterRng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    CounterRng base(42);
    CounterRng s1 = base.stream(1);
    CounterRng s2 = base.stream(2);
    std::set<uint64_t> seen;
    for (int i = 0; i < 50; ++i) {
        seen.insert(s1.next());
        seen.insert(s2.next());
    }
    CHECK(seen.size() == 100);  // no collisions across streams

    // Consuming the parent does not perturb derived streams.
    CounterRng parent(7);
    CounterRng before = parent.stream(3);
    parent.next();
    parent.next();
    CounterRng after = parent.stream(3);
    for (int i = 0; i < 20; ++i) CHECK(before.next() == after.next());
}

TEST_CASE("bounded draws are exactly in range and roughly uniform") {
    CounterRng rng(123);
    int counts[9] = {0};
    const int kDraws = 90000;
    for (int i = 0; i < kDraws; ++i) {
        uint64_t v = rng.bounded(9);
        REQUIRE(v < 9);
        counts[v] += 1;
    }
    for (int c : counts) {
        CHECK(std::abs(c - kDraws / 9) < 500);  // ~5 sigma
    }
}

TEST_CASE("uniform01 stays in the half-open unit interval") {
    CounterRng rng(5);
    for (int i = 0; i < 1000; ++i) {
        double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("rational parsing covers fractions, decimals and integers") {
    CHECK(parse_rational("8/9") == Rational(8, 9));
    CHECK(parse_rational("0.1") == Rational(1, 10));
    CHECK(parse_rational("1") == Rational(1));
    CHECK(parse_rational("-0.25") == Rational(-1, 4));
    CHECK(to_string(parse_rational("4/6")) == "2/3");
    CHECK_THROWS_AS(parse_rational("1/0"), domain_error);
    CHECK_THROWS_AS(parse_rational("abc"), domain_error);
    CHECK(ceil_rational(Rational(9, 10)) == 1);
    CHECK(ceil_rational(Rational(18, 10)) == 2);
    CHECK(ceil_rational(Rational(2)) == 2);
    CHECK(ceil_rational(Rational(-3, 2)) == -1);
}

TEST_CASE("partitioned reduce is independent of partition count") {
    auto run = [](int partitions) {
        return partitioned_reduce<int64_t>(
            0, 1000, 0,
            [](int64_t lo, int64_t hi) {
                int64_t acc = 0;
                for (int64_t i = lo; i < hi; ++i) acc += i * i;
                return acc;
            },
            [](int64_t a, int64_t b) { return a + b; }, partitions);
    };
    int64_t expect = run(1);
    CHECK(run(2) == expect);
    CHECK(run(7) == expect);
    CHECK(run(1000) == expect);
}
