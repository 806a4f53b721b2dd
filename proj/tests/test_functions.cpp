#include <doctest.h>

#include "test_util.hpp"
#include "thicksum/errors.hpp"
#include "thicksum/function.hpp"

using namespace thicksum;
using detail::RealInterval;
using testutil::R;
using testutil::U;

namespace {

Enclosure reference_exp(const Rational& q) { return RealInterval::point(q, 256).exp().to_enclosure(); }

bool overlaps(const Enclosure& a, const Enclosure& b) { return a.lo <= b.hi && b.lo <= a.hi; }

}  // namespace

TEST_CASE("eval") {
    CHECK(eval(AdmissibleFunction::power(2), 3).lo == 9);
    CHECK(eval(AdmissibleFunction::power(2), 3).is_exact());
    auto e0 = eval(AdmissibleFunction::exp(R(3, 7)), 0);
    CHECK(e0.is_exact());
    CHECK(e0.lo == 1);
    auto g = AdmissibleFunction::pwa({{0, 0}, {1, 2}}, FinalSlope{1});
    CHECK(eval(g, R(1, 2)).lo == 1);
    CHECK(eval(g, 3).lo == 4);
    CHECK_THROWS_AS(eval(g, -1), DomainError);

    auto ex = eval(AdmissibleFunction::exp(R(1, 3)), 2, 80);
    CHECK(ex.width() <= pow2_neg(80));
    CHECK(overlaps(ex, reference_exp(R(2, 3))));
}

TEST_CASE("upper and lower derivatives") {
    auto g = AdmissibleFunction::pwa({{0, 0}, {1, 1}}, FinalSlope{3});
    auto d = upper_lower_derivative(g, 1);
    CHECK(d.upper.value.lo == 3);
    CHECK(d.lower.value.lo == 1);

    auto p = upper_lower_derivative(AdmissibleFunction::power(2), 5);
    CHECK(p.upper.value.contains(10));
    CHECK(p.lower.value.contains(10));

    Rational r = R(1, 2), x = 3;
    auto e = upper_lower_derivative(AdmissibleFunction::exp(r), x);
    Enclosure truth = (RealInterval::point(r, 256) * RealInterval::point(r * x, 256).exp()).to_enclosure();
    CHECK(overlaps(e.upper.value, truth));
    CHECK(overlaps(e.lower.value, truth));
    CHECK(e.upper.value.width() < R(1, 1000000));
}

TEST_CASE("lambda at finite M") {
    Rational r = R(3, 4), a = R(2, 3);
    auto l = lambda(AdmissibleFunction::exp(r), a, 5);
    REQUIRE(l.log_value);
    CHECK(*l.log_value == r * a);
    CHECK(overlaps(Enclosure{l.lower.value(), l.upper.value()}, reference_exp(r * a)));

    auto id = lambda(AdmissibleFunction::power(1), 3, 2);
    CHECK(id.exact);
    CHECK(id.upper == ExtendedRational(1));

    // slopes 1 and 3 alternate with period 1 < gamma
    auto g = AdmissibleFunction::pwa({{0, 0}, {1, 1}}, PeriodicTail{{{R(1, 2), 1}, {R(1, 2), 3}}});
    auto lg = lambda(g, 2, 0);
    CHECK(lg.exact);
    CHECK(lg.upper == ExtendedRational(3));

    // (M + gamma) / M to the |m - 1|
    auto pw = lambda(AdmissibleFunction::power(3), 1, 2);
    CHECK(pw.exact);
    CHECK(pw.upper == ExtendedRational(R(9, 4)));
    CHECK(lambda(AdmissibleFunction::power(R(1, 2)), 1, 0).is_infinite());
}

TEST_CASE("lambda limit") {
    for (const char* m : {"1/3", "1", "2", "7/2"}) {
        auto l = lambda_limit(AdmissibleFunction::power(R(m)), R(5, 2));
        CHECK(l.exact);
        CHECK(l.upper == ExtendedRational(1));
    }
    auto s1 = lambda_limit(AdmissibleFunction::stretched_exp(R(1, 2), 1), 3);
    REQUIRE(s1.log_value);
    CHECK(*s1.log_value == R(3, 2));
    CHECK(overlaps(Enclosure{s1.lower.value(), s1.upper.value()}, reference_exp(R(3, 2))));
    CHECK(lambda_limit(AdmissibleFunction::stretched_exp(1, 2), 1).is_infinite());
    CHECK(lambda_limit(AdmissibleFunction::stretched_exp(1, R(1, 2)), 1).upper == ExtendedRational(1));

    auto untailed = lambda_limit(AdmissibleFunction::pwa({{0, 0}, {1, 1}}, NoTail{}), 1);
    CHECK_FALSE(untailed.exact);
    CHECK(untailed.upper.is_infinite());
}

TEST_CASE("classify") {
    CHECK(classify(AdmissibleFunction::power(3)) == RelativeVariation::TRV);
    CHECK(classify(AdmissibleFunction::exp(R(1, 5))) == RelativeVariation::BRV_not_TRV);
    CHECK(classify(AdmissibleFunction::stretched_exp(1, 2)) == RelativeVariation::not_BRV);
    CHECK(classify(AdmissibleFunction::stretched_exp(1, R(1, 2))) == RelativeVariation::TRV);
    auto periodic = AdmissibleFunction::pwa({{0, 0}, {1, 1}}, PeriodicTail{{{1, 1}, {1, 2}}});
    CHECK(classify(periodic) == RelativeVariation::BRV_not_TRV);
    CHECK(classify(AdmissibleFunction::pwa({{0, 0}, {1, 1}}, FinalSlope{5})) == RelativeVariation::TRV);
}

TEST_CASE("value ratio and sum/product bounds") {
    Rational gamma = R(1, 2);
    auto g = AdmissibleFunction::exp(2);
    auto vr = value_ratio_limit(g, gamma);
    CHECK(certainly_leq(vr, lambda_limit(g, 2 * gamma)));
    CHECK(certainly_leq(lambda_limit(g, 2 * gamma), lambda_limit(g, gamma) * lambda_limit(g, gamma)));

    auto sum = AdmissibleFunction::scaled_sum({{1, AdmissibleFunction::exp(1)}, {3, AdmissibleFunction::power(2)}});
    CHECK(lambda_limit(sum, 1).upper <= lambda_limit(AdmissibleFunction::exp(1), 1).upper);

    auto prod = AdmissibleFunction::product(AdmissibleFunction::exp(1), AdmissibleFunction::exp(2));
    // true limit e^{3 gamma} must lie below the reported bound
    auto bound = lambda_limit(prod, gamma);
    CHECK(ExtendedRational(reference_exp(3 * gamma).hi) <= bound.upper);

    auto a = AdmissibleFunction::pwa({{0, 1}, {1, 2}}, PeriodicTail{{{1, 1}, {1, 3}}});
    auto b = AdmissibleFunction::pwa({{0, 0}, {1, 4}}, PeriodicTail{{{1, 2}, {1, 2}}});
    auto ab = add_pwa(a, b);
    CHECK(eval(ab, R(5, 2)).lo == eval(a, R(5, 2)).lo + eval(b, R(5, 2)).lo);
    CHECK(lambda(ab, 1, 0).upper <= max(lambda(a, 1, 0), lambda(b, 1, 0)).upper);
}

TEST_CASE("value ratio bound at finite M") {
    auto g = AdmissibleFunction::power(2);
    auto b = value_ratio_bound(g, 1, 4);
    CHECK(b.is_finite());
    CHECK(ExtendedRational(R(25, 16)) <= b);
    CHECK(value_ratio_bound(g, 1, 0).is_infinite());
}

TEST_CASE("apply to set") {
    auto img = apply_to_set(AdmissibleFunction::power(2), U({{0, 1}, {2, 3}}));
    CHECK(img.exact);
    CHECK(img.outer == U({{0, 1}, {4, 9}}));
    auto k = U({{0, 1}, {R(3, 2), 4}});
    CHECK(apply_to_set(AdmissibleFunction::pwa({{0, 0}, {1, 1}}, FinalSlope{1}), k).outer == k);

    Rational r = R(5, 4);
    auto e = apply_to_set(AdmissibleFunction::exp(r), U({{0, 1}}), 60);
    REQUIRE(e.inner);
    Enclosure er = reference_exp(r);
    CHECK(e.outer.min() <= 1);
    CHECK(e.outer.max() >= er.hi);
    CHECK(e.inner->max() <= er.lo);
    CHECK(e.outer.max() - e.inner->max() <= pow2_neg(58));
}

TEST_CASE("non-BRV construction") {
    auto h = AdmissibleFunction::power(1);
    auto g = construct_non_brv(h, 8);
    const auto& p = *g.as<PiecewiseAffine>();
    REQUIRE(p.points.size() >= 4);
    CHECK(p.points[1].second > p.points[0].second);
    // g(y_n) = n/2 <= n <= h(y_n) at every breakpoint past the first
    for (std::size_t i = 1; i < p.points.size(); ++i) CHECK(p.points[i].second <= eval(h, p.points[i].first).lo);
    // consecutive slope ratios grow at least linearly
    for (std::size_t n = 2; n + 1 < p.points.size(); ++n) {
        Rational s0 = (p.points[n].second - p.points[n - 1].second) / (p.points[n].first - p.points[n - 1].first);
        Rational s1 = (p.points[n + 1].second - p.points[n].second) / (p.points[n + 1].first - p.points[n].first);
        CHECK(s0 / s1 >= static_cast<long>(n));
    }
    CHECK(lambda(g, 1000, 0).lower >= ExtendedRational(6));
}

TEST_CASE("JSON-free describe") {
    CHECK(AdmissibleFunction::exp(R(1, 2)).describe().find("1/2") != std::string::npos);
}
