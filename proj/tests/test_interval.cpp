#include <doctest.h>

#include "test_util.hpp"
#include "thicksum/errors.hpp"
#include "thicksum/interval.hpp"

using namespace thicksum;
using testutil::R;
using testutil::U;

TEST_CASE("rational parsing and rendering") {
    CHECK(parse_rational("6/4") == R(3, 2));
    CHECK(parse_rational("-1.25e-1") == R(-1, 8));
    CHECK(parse_rational("7") == R(7));
    CHECK(to_string(R(6, 4)) == "3/2");
    CHECK(to_string(R(4, 2)) == "2");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK(parse_extended("inf").is_infinite());
    CHECK(ExtendedRational(R(5)) < ExtendedRational::infinity());
}

TEST_CASE("normalize") {
    CHECK(normalize({Interval(0, 1), Interval(1, 2)}) == U({{0, 2}}));
    CHECK(normalize({Interval(2, 3), Interval(0, 1)}) == U({{0, 1}, {2, 3}}));
    CHECK(normalize({Interval(0, 2), Interval(1, 3), Interval(5, 5)}) == U({{0, 3}, {5, 5}}));
    CHECK_THROWS_AS(normalize({}), EmptySetError);
    CHECK_THROWS_AS(Interval(2, 1), DomainError);
}

TEST_CASE("minkowski sum") {
    CHECK(minkowski_sum(U({{0, 1}}), U({{0, 1}})) == U({{0, 2}}));
    IntervalUnion c2 = middle_cantor(R(1, 3), 2);
    CHECK(minkowski_sum(c2, c2) == U({{0, 2}}));

    IntervalUnion k = U({{0, 1}, {10, 11}});
    IntervalUnion s = minkowski_sum(k, k);
    CHECK(s == U({{0, 2}, {10, 12}, {20, 22}}));
    // grid membership oracle at step 1/64
    const Rational step = R(1, 64);
    for (Rational z = -1; z <= 23; z += step) {
        bool member = false;
        for (Rational x = 0; x <= 11 && !member; x += step) member = k.contains(x) && k.contains(z - x);
        CHECK(member == s.contains(z));
    }
}

TEST_CASE("gaps, diameter, hull, largest gap") {
    CHECK(U({{0, 1}}).gaps().empty());
    auto g = U({{0, 1}, {2, 3}}).gaps();
    REQUIRE(g.size() == 1);
    CHECK(g[0] == Interval(1, 2));
    auto c1 = middle_cantor(R(1, 3), 1);
    CHECK(c1 == U({{0, R(1, 3)}, {R(2, 3), 1}}));
    REQUIRE(c1.gaps().size() == 1);
    CHECK(c1.gaps()[0] == Interval(R(1, 3), R(2, 3)));

    CHECK(U({{0, 1}, {2, 3}}).diam() == 3);
    CHECK(U({{0, 1}, {2, 3}}).largest_gap_length() == 1);
    CHECK(U({{5, 5}}).diam() == 0);
    CHECK(middle_cantor(R(1, 3), 2).largest_gap_length() == R(1, 3));
    CHECK(U({{0, 1}, {2, 3}}).hull() == Interval(0, 3));
}

TEST_CASE("covers") {
    CHECK(U({{0, 2}}).covers(Interval(R(1, 2), R(3, 2))));
    CHECK_FALSE(U({{0, 1}, {2, 3}}).covers(Interval(R(1, 2), R(5, 2))));
    CHECK(U({{0, 2}, {2, 3}}).covers(Interval(1, 3)));
}

TEST_CASE("affine image and union") {
    auto k = U({{0, 1}, {2, 3}});
    CHECK(k.affine(2, 1) == U({{1, 3}, {5, 7}}));
    std::vector<IntervalUnion> sets{U({{0, 1}}), U({{1, 2}}), U({{4, 5}})};
    CHECK(set_union(sets) == U({{0, 2}, {4, 5}}));
}
