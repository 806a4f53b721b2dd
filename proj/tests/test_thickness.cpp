#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "test_util.hpp"
#include "thicksum/errors.hpp"
#include "thicksum/thickness.hpp"

using namespace thicksum;
using testutil::R;
using testutil::U;

namespace {

// Direct evaluation of the definition: for each listed gap and endpoint, the
// bridge runs to the nearest earlier-listed gap or the hull boundary.
Rational tau_by_definition(const IntervalUnion& k, const std::vector<std::size_t>& order) {
    auto gaps = k.gaps();
    Rational best = -1;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const Interval& u = gaps[order[pos]];
        Rational left = k.min(), right = k.max();
        for (std::size_t e = 0; e < pos; ++e) {
            const Interval& w = gaps[order[e]];
            if (w.hi <= u.lo) left = std::max(left, w.hi);
            if (w.lo >= u.hi) right = std::min(right, w.lo);
        }
        Rational r = std::min(u.lo - left, right - u.hi) / u.length();
        if (best < 0 || r < best) best = r;
    }
    return best;
}

}  // namespace

TEST_CASE("tau for a presentation") {
    auto k = U({{0, 1}, {2, 3}});
    CHECK(tau_for_presentation(k, GapPresentation({0}, 1)) == ExtendedRational(1));

    auto k3 = U({{0, 1}, {2, 3}, {10, 11}});
    CHECK(tau_for_presentation(k3, GapPresentation::canonical(k3)) == ExtendedRational(R(1, 7)));
    CHECK(tau_by_definition(k3, {1, 0}) == R(1, 7));

    for (unsigned n = 1; n <= 4; ++n) {
        auto c = middle_cantor(R(1, 3), n);
        auto p = GapPresentation::canonical(c);
        CHECK(tau_for_presentation(c, p) == ExtendedRational(1));
        CHECK(tau_by_definition(c, p.order()) == 1);
    }
    CHECK_THROWS(GapPresentation({0, 0}, 2));
}

TEST_CASE("tau") {
    CHECK(tau(U({{0, 5}})).is_infinite());
    CHECK(tau(U({{0, 4}, {5, 9}})) == ExtendedRational(4));
    for (unsigned k = 1; k <= 3; ++k) {
        auto c = middle_cantor(R(1, 3), k);
        CHECK(tau(c) == ExtendedRational(1));
        // oracle: maximum of the definition over every gap ordering
        std::vector<std::size_t> order(c.gaps().size());
        std::iota(order.begin(), order.end(), 0);
        Rational best = -1;
        do {
            best = std::max(best, tau_by_definition(c, order));
        } while (std::next_permutation(order.begin(), order.end()));
        CHECK(best == 1);
    }
}

TEST_CASE("tau brute force") {
    CHECK(tau_bruteforce(U({{0, 1}, {2, 3}})) == ExtendedRational(1));
    CHECK(tau_bruteforce(middle_cantor(R(1, 3), 2)) == ExtendedRational(1));
    auto k = U({{0, 1}, {R(3, 2), 4}, {5, 9}, {R(19, 2), 10}});
    CHECK(tau_bruteforce(k) == tau(k));
    CHECK_THROWS_AS(tau_bruteforce(middle_cantor(R(1, 3), 4)), RefusedError);  // 15 gaps
}

TEST_CASE("gap lemma predicate") {
    auto k = U({{0, 1}, {2, 3}});
    CHECK_FALSE(gap_lemma_applies(k, k));
    auto t = U({{0, 4}, {5, 9}});
    CHECK(gap_lemma_applies(t, t));
    CHECK(minkowski_sum(t, t) == U({{0, 18}}));
    CHECK(gap_lemma_applies(U({{0, 1}}), U({{0, R(1, 2)}, {R(3, 2), 2}})));
    CHECK_FALSE(gap_lemma_applies(U({{0, 1}}), U({{0, R(1, 2)}, {2, 3}})));  // gap 3/2 > diam 1
}

TEST_CASE("longest gap bound") {
    CHECK(longest_gap_bound(U({{0, 4}, {5, 9}}), 2));
    CHECK(1 <= R(9, 5));
    CHECK(longest_gap_bound(U({{0, 1}, {2, 3}}), R(1, 2)));
    CHECK(longest_gap_bound(U({{0, 3}}), 100));
    CHECK_THROWS_AS(longest_gap_bound(U({{0, 1}, {2, 3}}), 1), RefusedError);
}

TEST_CASE("affine invariance of tau") {
    auto k = U({{0, 1}, {R(3, 2), 4}, {5, 9}});
    CHECK(tau(k) == tau(k.affine(R(7, 3), R(-5, 2))));
}
