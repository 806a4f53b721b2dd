#include <doctest.h>

#include "test_util.hpp"
#include "thicksum/errors.hpp"
#include "thicksum/halfline.hpp"
#include "thicksum/phase_scan.hpp"

using namespace thicksum;
using testutil::R;
using testutil::U;

namespace {

ScanRow one_cell(const Rational& A, const Rational& r, const Rational& a) {
    ScanConfig cfg;
    cfg.A = A;
    cfg.r_grid = {r};
    cfg.a_grid = {a};
    cfg.fragments = 24;
    cfg.threads = 1;
    auto rows = phase_scan(cfg);
    REQUIRE(rows.size() == 1);
    return rows[0];
}

}  // namespace

TEST_CASE("chain certification") {
    auto f = make_FAa(1, R(1, 2), 8);
    auto v = chain_certify(f, AdmissibleFunction::power(2), ChainParams{1, R(3, 5), 1}, 200);
    CHECK(v.status == VerdictStatus::CertifiedHalfLine);
    REQUIRE(v.from);
    REQUIRE_FALSE(v.chain.empty());
    // consecutive links overlap
    for (std::size_t i = 0; i + 1 < v.chain.size(); ++i) {
        CHECK(v.chain[i].j.hi >= v.chain[i].j_prime.lo);
        CHECK(v.chain[i].j_prime.hi >= v.chain[i + 1].j.lo);
    }
    auto cov = sum_coverage_for(f, AdmissibleFunction::power(2), *v.from, *v.from + 100);
    CHECK(cov.covered);

    auto e = chain_certify(make_FAa(10, 1, 6), AdmissibleFunction::exp(R(1, 2)), ChainParams{10, 1, 1}, 1000);
    CHECK(e.status == VerdictStatus::CertifiedHalfLine);

    auto id = chain_certify(make_FAa(1, 2, 6), AdmissibleFunction::power(1), ChainParams{1, R(5, 2), 1}, 100);
    CHECK(id.status != VerdictStatus::CertifiedHalfLine);
}

TEST_CASE("large thickness chain") {
    auto f = make_cantor_fragments(1, R(2, 5), R(1, 11), 2, 6);
    auto g = AdmissibleFunction::exp(R(1, 10));
    auto v = chain_certify_bigtau(f, g, BigTauParams{1, R(1, 2), R(6, 5), 5}, 500);
    CHECK(v.status == VerdictStatus::CertifiedHalfLine);

    Rational r7 = 1;
    for (int i = 0; i < 7; ++i) r7 *= R(6, 5);
    auto edge = chain_certify_bigtau(f, g, BigTauParams{1, R(1, 2), R(6, 5), r7}, 500);
    CHECK(edge.status == VerdictStatus::Inconclusive);

    auto wide = chain_certify_bigtau(f, g, BigTauParams{1, R(3, 5), R(6, 5), 5}, 500);
    CHECK(wide.status == VerdictStatus::Inconclusive);
    CHECK(wide.reason.find("a < A / R^3") != std::string::npos);
}

TEST_CASE("stratum refutation") {
    auto f = make_FAa(1, 1, 12);
    auto g = AdmissibleFunction::exp(1);
    auto v = stratum_refute(EnvelopeData(2, envelope_factor(f, g, 14)), 12);
    REQUIRE(v.status == VerdictStatus::CertifiedNoHalfLine);
    REQUIRE(v.n0);
    REQUIRE_FALSE(v.gaps.empty());
    // every witness gap is missed by the exact image sum
    auto images = image_fragments(g, f, 16);
    for (const auto& w : v.gaps) {
        auto cov = sum_coverage_upto(images, w.gap.lo, w.gap.hi);
        CHECK_FALSE(cov.covered);
    }

    std::vector<Rational> x, y;
    Rational p = 1;
    for (int n = 0; n < 6; ++n, p *= 4) {
        x.push_back(p);
        y.push_back(2 * p);
    }
    auto geo = geometric_envelope(AdmissibleFunction::power(1), x, y, 4);
    CHECK(stratum_refute(EnvelopeData(2, geo), 6).status == VerdictStatus::CertifiedNoHalfLine);

    auto lin = envelope_factor(make_FAa(1, 1, 8), AdmissibleFunction::power(1), 8);
    CHECK(stratum_refute(EnvelopeData(2, lin), 6).status == VerdictStatus::Inconclusive);
}

TEST_CASE("coverage") {
    auto f = make_FAa(1, R(1, 2), 4);
    auto cov = sum_coverage_for(f, AdmissibleFunction::power(1), 0, 20);
    CHECK(cov.covered);
    CHECK(cov.exact);
    CHECK(cov.gaps.empty());

    auto c = middle_cantor(R(1, 3), 3);
    std::vector<ImageEnclosure> single{apply_to_set(AdmissibleFunction::power(1), c)};
    CHECK(sum_coverage_upto(single, 0, 2, true).covered);
    CHECK_THROWS_AS(sum_coverage_upto(single, 0, 2), RefusedError);

    auto sparse = sum_coverage_for(make_FAa(1, 3, 4), AdmissibleFunction::power(1), 0, 20);
    CHECK_FALSE(sparse.covered);
    REQUIRE_FALSE(sparse.gaps.empty());
    CHECK(sparse.gaps[0] == Interval(2, 4));
}

TEST_CASE("phase scan cells") {
    CHECK(one_cell(1, 1, R(6932, 10000)).verdict == VerdictStatus::CertifiedNoHalfLine);
    auto below = one_cell(1, 1, R(6931, 10000));
    CHECK(below.verdict != VerdictStatus::CertifiedNoHalfLine);
    CHECK(below.ra_vs_log2 == Comparison::Less);
    CHECK(one_cell(10, R(1, 2), 1).verdict == VerdictStatus::CertifiedHalfLine);
    CHECK(one_cell(1, 2, 1).verdict == VerdictStatus::CertifiedNoHalfLine);
}

TEST_CASE("grid parsing") {
    CHECK(parse_grid("1/2,1") == std::vector<Rational>{R(1, 2), 1});
    CHECK(parse_grid("0:1:1/4").size() == 5);
    CHECK_THROWS(parse_grid("1:0:1/4"));
}
