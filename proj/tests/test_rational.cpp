#include <doctest.h>

#include <limits>
#include <random>
#include <sstream>

#include "fbl/rational.hpp"

using fbl::Rat;

TEST_CASE("canonical form") {
    CHECK(Rat(6, 4).num() == 3);
    CHECK(Rat(6, 4).den() == 2);
    CHECK(Rat(3, -9) == Rat(-1, 3));
    CHECK(Rat(-3, -9) == Rat(1, 3));
    CHECK(Rat(0, -5).den() == 1);
    CHECK(Rat(0, -5).str() == "0/1");
    CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
}

TEST_CASE("arithmetic is exact") {
    CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
    CHECK(Rat(1, 3) - Rat(1, 2) == Rat(-1, 6));
    CHECK(Rat(2, 3) * Rat(9, 4) == Rat(3, 2));
    CHECK(Rat(2, 3) / Rat(4, 9) == Rat(3, 2));
    CHECK(-Rat(2, 3) == Rat(-2, 3));
    CHECK_THROWS_AS(Rat(1) / Rat(0), std::domain_error);

    Rat acc;
    for (int i = 0; i < 10; ++i) acc += Rat(1, 10);
    CHECK(acc == Rat(1));
}

TEST_CASE("ordering") {
    CHECK(Rat(1, 3) < Rat(1, 2));
    CHECK(Rat(-1, 2) < Rat(-1, 3));
    CHECK(Rat(4284, 3284) > Rat(1304, 1000));
    CHECK(Rat(821, 250) == Rat(3284, 1000));
    CHECK(fbl::max(Rat(3, 2), Rat(6, 5)) == Rat(3, 2));
    CHECK(fbl::min(Rat(3, 2), Rat(6, 5)) == Rat(6, 5));
}

TEST_CASE("ordering agrees with long double on random fractions") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> n(-1000000, 1000000), d(1, 1000000);
    for (int i = 0; i < 20000; ++i) {
        const Rat a(n(rng), d(rng)), b(n(rng), d(rng));
        const long double x = static_cast<long double>(a.num()) / a.den();
        const long double y = static_cast<long double>(b.num()) / b.den();
        if (x < y) CHECK(a < b);
        if (x > y) CHECK(a > b);
        CHECK((a + b) - b == a);
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
}

TEST_CASE("overflow is reported, not wrapped") {
    const Rat big(std::numeric_limits<std::int64_t>::max());
    CHECK_THROWS_AS(big + Rat(1), std::overflow_error);
    CHECK_THROWS_AS(big * Rat(2), std::overflow_error);
    const Rat huge(std::numeric_limits<std::int64_t>::max(), 3);
    CHECK(huge * Rat(3) == big);  // reduces before it would overflow
}

TEST_CASE("parse") {
    CHECK(Rat::parse("7") == Rat(7));
    CHECK(Rat::parse("-7") == Rat(-7));
    CHECK(Rat::parse("3284/1000") == Rat(821, 250));
    CHECK(Rat::parse("3.284") == Rat(821, 250));
    CHECK(Rat::parse("1.01") == Rat(101, 100));
    CHECK(Rat::parse("-0.5") == Rat(-1, 2));
    CHECK(Rat::parse("10/3") == Rat(10, 3));
    for (const char* bad : {"", "/", "1/", "/2", "1/0", "a", "1.2.3", "1/-2", "3e5", " 1"}) {
        CAPTURE(bad);
        CHECK_THROWS(Rat::parse(bad));
    }
}

TEST_CASE("rendering") {
    CHECK(Rat(11).str() == "11/1");
    CHECK(Rat(-13, 11).str() == "-13/11");
    CHECK(Rat(13, 11).decimal(6) == "1.181818");
    CHECK(Rat(1071, 821).decimal(6) == "1.304507");
    CHECK(Rat(1, 8).decimal(2) == "0.13");
    CHECK(Rat(-1, 8).decimal(2) == "-0.13");
    CHECK(Rat(5).decimal(3) == "5.000");
    CHECK(Rat(2, 3).decimal(0) == "1");
    std::ostringstream os;
    os << Rat(3, 2);
    CHECK(os.str() == "3/2");
}
