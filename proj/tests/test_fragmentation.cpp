#include <doctest.h>

#include <variant>

#include "test_util.hpp"
#include "thicksum/errors.hpp"
#include "thicksum/fragmentation.hpp"

using namespace thicksum;
using testutil::R;
using testutil::U;

TEST_CASE("F(A, a)") {
    auto f = make_FAa(1, 1, 2);
    REQUIRE(f.prefix_size() == 3);
    CHECK(f.fragment(0) == U({{0, 1}}));
    CHECK(f.fragment(1) == U({{2, 3}}));
    CHECK(f.fragment(2) == U({{4, 5}}));
    CHECK(f.fragment(7) == U({{14, 15}}));  // tail rule

    auto g = make_FAa(R(3, 2), R(2, 7), 5);
    for (std::size_t n = 0; n < 8; ++n) {
        CHECK(fragment_distance(g, n) == R(2, 7));
        CHECK(g.fragment(n).diam() == R(3, 2));
    }
    CHECK(g.translate_from() == std::optional<std::size_t>(0));
}

TEST_CASE("fragmentation invariants") {
    CHECK_THROWS_AS(Fragmentation({U({{0, 2}}), U({{1, 3}})}), DomainError);
    CHECK_THROWS_AS(Fragmentation({U({{0, 2}})}, TranslateTail{2}), DomainError);
    CHECK_THROWS_AS(Fragmentation({}), EmptySetError);
    Fragmentation f({U({{0, 1}}), U({{3, 4}})});
    CHECK_THROWS_AS(f.fragment(2), RefusedError);
    auto s = shift_to_origin(shift(f, 5));
    CHECK(s.fragment(1) == U({{3, 4}}));
}

TEST_CASE("Cantor fragments") {
    CHECK(tau(make_cantor_fragments(1, 1, R(1, 3), 3, 2).fragment(1)) == ExtendedRational(1));
    CHECK(tau(make_cantor_fragments(1, 1, R(1, 5), 3, 2).fragment(1)) == ExtendedRational(2));
    // (1 - alpha) / (2 alpha) in general
    Rational alpha = R(1, 9);
    CHECK(tau(make_cantor_fragments(2, 1, alpha, 2, 2).fragment(0)) == ExtendedRational((1 - alpha) / (2 * alpha)));
    CHECK(tau(make_cantor_fragments(1, 1, R(1, 5), 0, 2).fragment(0)).is_infinite());
    auto f = make_cantor_fragments(2, R(1, 2), R(1, 5), 2, 4);
    CHECK(f.fragment(3).min() == 3 * (2 + R(1, 2)));
    CHECK(f.fragment(3).diam() == 2);
}

TEST_CASE("certify thick") {
    auto ok = certify_thick(make_FAa(1, R(1, 2), 10), 1, R(3, 5), R(1, 100));
    REQUIRE(std::holds_alternative<ThicknessCertificate>(ok));
    CHECK(std::get<ThicknessCertificate>(ok).tail_proof == TailProof::GeneratorUniform);

    auto strict = certify_thick(make_FAa(1, 1, 10), 1, 1, R(1, 100));
    REQUIRE(std::holds_alternative<CertificationFailure>(strict));
    CHECK(std::get<CertificationFailure>(strict).condition == "dist");
    CHECK(std::get<CertificationFailure>(strict).index == 0);

    auto cantor = certify_thick(make_cantor_fragments(1, R(1, 2), R(1, 5), 3, 6), 1, R(3, 5), 2);
    CHECK(std::holds_alternative<ThicknessCertificate>(cantor));
    auto too_thick = certify_thick(make_cantor_fragments(1, R(1, 2), R(1, 5), 3, 6), 1, R(3, 5), R(21, 10));
    REQUIRE(std::holds_alternative<CertificationFailure>(too_thick));
    CHECK(std::get<CertificationFailure>(too_thick).condition == "tau");

    auto diam = certify_thick(make_FAa(3, R(1, 2), 4), 1, 1, 1);
    REQUIRE(std::holds_alternative<CertificationFailure>(diam));
    CHECK(std::get<CertificationFailure>(diam).condition == "diam_upper");

    // an irregular first fragment can be skipped
    Fragmentation f({U({{0, R(1, 2)}}), U({{1, 2}}), U({{R(5, 2), R(7, 2)}})}, TranslateTail{R(3, 2)});
    CHECK(std::holds_alternative<CertificationFailure>(certify_thick(f, 1, 1, 1)));
    auto skipped = certify_thick(f, 1, 1, 1, 1);
    REQUIRE(std::holds_alternative<ThicknessCertificate>(skipped));
    CHECK(std::get<ThicknessCertificate>(skipped).skipped == 1);
}

TEST_CASE("certify sparse") {
    auto f = make_FAa(2, R(1, 3), 6);
    CHECK(std::holds_alternative<SparsityCertificate>(certify_sparse(f, R(1, 3))));
    auto fail = certify_sparse(f, R(2, 3));
    REQUIRE(std::holds_alternative<CertificationFailure>(fail));
    CHECK(std::get<CertificationFailure>(fail).index == 0);
    CHECK(std::holds_alternative<SparsityCertificate>(certify_sparse(Fragmentation({U({{0, 1}})}), 100)));
}

TEST_CASE("collapse counterexample") {
    Rational A = 1, a = R(1, 2), eps = R(1, 10);
    auto f = make_FAa(A, a, 4);
    auto g = make_collapse_counterexample(f, eps);
    auto imgs = image_fragments(g, f, 12);
    for (std::size_t n = 0; n < imgs.size(); ++n) {
        CHECK(imgs[n].exact);
        CHECK(imgs[n].outer.diam() <= 2 * eps);
        CHECK(imgs[n].outer.min() >= Rational(static_cast<long>(n)) - eps);
        CHECK(imgs[n].outer.max() <= Rational(static_cast<long>(n)) + eps);
        if (n + 1 < imgs.size()) CHECK(imgs[n + 1].outer.min() - imgs[n].outer.max() >= 1 - 2 * eps);
    }
    Rational mechanism = (1 - 2 * eps) * A / (2 * eps * a) * (a / (A + a));
    auto l = lambda(g, A + a, 0);
    CHECK(l.lower >= ExtendedRational(mechanism));
    CHECK(l.upper.is_finite());
    CHECK_THROWS_AS(make_collapse_counterexample(f, R(1, 4)), DomainError);
}
