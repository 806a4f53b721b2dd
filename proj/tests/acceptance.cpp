// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "thicksum/enclosure.hpp"
#include "thicksum/fragmentation.hpp"
#include "thicksum/function.hpp"
#include "thicksum/halfline.hpp"
#include "thicksum/interval.hpp"
#include "thicksum/phase_scan.hpp"
#include "thicksum/properties.hpp"
#include "thicksum/thickness.hpp"

using namespace thicksum;

namespace {

using Check = std::function<bool(std::ostringstream&)>;

struct Criterion {
    int id;
    std::string title;
    double limit_ms;
    Check check;
};

Rational q(long p, long d = 1) { return make_rational(p, d); }

Rational nearest_integer(const Rational& x) {
    Rational shifted = x + q(1, 2);
    mpz_class k;
    mpz_fdiv_q(k.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
    return Rational(k);
}

bool properties_pass(const std::vector<std::string>& names, std::size_t cases, std::ostringstream& note) {
    SuiteOptions opts;
    opts.seed = 20240101;
    opts.cases = cases;
    bool ok = true;
    std::size_t total = 0;
    for (const auto& r : run_properties(names, opts)) {
        total += r.cases;
        if (!r.passed()) {
            ok = false;
            note << " " << r.name << " failed: " << r.counterexample;
        }
    }
    note << total << " cases";
    return ok;
}

bool middle_thirds(std::ostringstream& note) {
    for (unsigned k = 1; k <= 6; ++k) {
        auto c = middle_cantor(q(1, 3), k);
        if (!(minkowski_sum(c, c) == normalize({Interval(0, 2)}))) {
            note << "depth " << k;
            return false;
        }
    }
    note << "depths 1..6 give [0, 2]";
    return true;
}

bool lambda_closed_forms(std::ostringstream& note) {
    std::mt19937_64 rng(4242);
    auto rat = [&](long lo, long hi, long den) {
        return q(std::uniform_int_distribution<long>(lo, hi)(rng), den);
    };
    const Rational width_cap = pow2_neg(40);
    for (int i = 0; i < 50; ++i) {
        Rational r = rat(1, 40, 8), a = rat(1, 40, 8), M = rat(0, 100, 4);
        auto l = lambda(AdmissibleFunction::exp(r), a, M);
        if (!l.lower.is_finite() || !l.upper.is_finite()) return false;
        Enclosure truth = detail::RealInterval::point(Rational(r * a), 256).exp().to_enclosure();
        Rational lo = l.lower.value(), hi = l.upper.value();
        if (!(lo <= truth.lo && truth.hi <= hi) || hi - lo > width_cap) {
            note << "exp r=" << to_string(r) << " a=" << to_string(a) << " M=" << to_string(M);
            return false;
        }
    }
    for (int i = 0; i < 20; ++i) {
        Rational m = rat(1, 60, 6), gamma = rat(1, 40, 4);
        auto l = lambda_limit(AdmissibleFunction::power(m), gamma);
        if (!l.exact || !(l.upper == ExtendedRational(1)) || !(l.lower == ExtendedRational(1))) {
            note << "power m=" << to_string(m) << " gamma=" << to_string(gamma);
            return false;
        }
    }
    note << "50 exponential and 20 power cases";
    return true;
}

bool phase_transition(std::ostringstream& note) {
    ScanConfig cfg;
    cfg.A = 10;
    for (long k = 1; k <= 30; ++k) {
        cfg.r_grid.push_back(q(k, 10));
        cfg.a_grid.push_back(q(k, 10));
    }
    cfg.fragments = 40;
    auto rows = phase_scan(cfg);
    std::size_t above = 0, below = 0, open = 0;
    for (const auto& row : rows) {
        auto where = [&] { return "r=" + to_string(row.r) + " a=" + to_string(row.a); };
        if (row.note == "conflict") {
            note << "conflict at " << where();
            return false;
        }
        if (row.ra_vs_log2 == Comparison::Unresolved) {
            note << "unresolved comparison at " << where();
            return false;
        }
        if (row.ra_vs_log2 != Comparison::Less) {
            if (row.verdict != VerdictStatus::CertifiedNoHalfLine) {
                note << "expected refutation at " << where();
                return false;
            }
            ++above;
        } else if (row.a_large) {
            if (row.verdict != VerdictStatus::CertifiedHalfLine) {
                note << "expected half-line at " << where();
                return false;
            }
            ++below;
        } else {
            if (row.verdict == VerdictStatus::CertifiedNoHalfLine) {
                note << "refuted below log 2 at " << where();
                return false;
            }
            ++open;
        }
    }
    note << rows.size() << " cells: " << above << " refuted, " << below << " certified, " << open
         << " outside the large-A region";
    return rows.size() == 900;
}

bool cantor_power_instance(std::ostringstream& note) {
    auto f = make_cantor_fragments(1, q(1, 2), q(1, 5), 3, 8);
    auto g = AdmissibleFunction::power(2);
    if (!(tau(f.fragment(0)) == ExtendedRational(2))) return false;
    auto v = chain_certify(f, g, ChainParams{1, q(3, 5), 1}, 10000);
    if (v.status != VerdictStatus::CertifiedHalfLine || !v.from) {
        note << "verdict " << to_string(v.status) << ": " << v.reason;
        return false;
    }
    auto cov = sum_coverage_for(f, g, *v.from, 10000);
    note << "from " << to_string(*v.from) << ", " << cov.fragments_used << " fragments, " << cov.gaps.size()
         << " gaps";
    return cov.covered && cov.gaps.empty();
}

bool exp_witnesses(std::ostringstream& note) {
    auto f = make_FAa(1, 1, 4);
    auto g = AdmissibleFunction::exp(1);
    auto v = stratum_refute(EnvelopeData(2, envelope_factor(f, g, 22)), 20);
    if (v.status != VerdictStatus::CertifiedNoHalfLine) {
        note << v.reason;
        return false;
    }
    auto images = image_fragments(g, f, 23);
    std::size_t checked = 0;
    for (const auto& w : v.gaps) {
        if (w.n > 20) continue;
        auto rep = sum_coverage_upto(images, w.gap.lo, w.gap.hi);
        bool inside = std::any_of(rep.gaps.begin(), rep.gaps.end(), [&](const Interval& gap) {
            return gap.lo <= w.gap.lo && w.gap.hi <= gap.hi;
        });
        if (!inside) {
            note << "witness n=" << w.n << " meets the sum";
            return false;
        }
        ++checked;
    }
    note << "N0=" << *v.n0 << ", " << checked << " witnesses";
    return checked > 0 && v.gaps.back().n == 20;
}

bool collapse(std::ostringstream& note) {
    Rational eps = q(1, 10);
    auto f = make_FAa(1, q(1, 2), 4);
    auto g = make_collapse_counterexample(f, eps);
    auto images = image_fragments(g, f, 32);
    std::vector<IntervalUnion> outer;
    for (const auto& im : images) {
        if (!im.exact) return false;
        outer.push_back(im.outer);
    }
    auto img = set_union(outer);
    auto sum = minkowski_sum(img, img);
    for (const auto& p : sum.parts()) {
        if (p.lo > 30) break;
        Rational n = nearest_integer(p.lo);
        if (p.lo < n - 2 * eps || p.hi > n + 2 * eps) {
            note << "part " << to_string(p) << " leaves the neighborhood of " << to_string(n);
            return false;
        }
    }
    for (const auto& gap : sum.gaps()) {
        if (gap.lo > 30) break;
        if (gap.length() < q(3, 5)) {
            note << "short gap " << to_string(gap);
            return false;
        }
    }
    auto rep = sum_coverage_upto(images, 0, 30);
    note << rep.gaps.size() << " gaps below 30";
    return rep.gaps.size() == 30;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "middle-thirds self-sum", 1e3, middle_thirds},
        {2, "thickness oracle agreement", 30e3,
         [](std::ostringstream& n) { return properties_pass({"tau_bruteforce_agreement"}, 500, n); }},
        {3, "gap lemma soundness", 30e3,
         [](std::ostringstream& n) { return properties_pass({"gap_lemma_soundness"}, 500, n); }},
        {4, "lambda closed forms", 10e3, lambda_closed_forms},
        {5, "lambda calculus suite", 60e3,
         [](std::ostringstream& n) {
             return properties_pass({"lambda_pwa_oracle", "lambda_submultiplicative", "lambda_sum_bound",
                                     "value_ratio_bound", "value_ratio_sampled", "lambda_product_pwa",
                                     "slope_sandwich", "mean_ratio_bound"},
                                    1000, n);
         }},
        {6, "thickness transfer", 30e3,
         [](std::ostringstream& n) { return properties_pass({"thickness_transfer", "longest_gap_bound"}, 500, n); }},
        {7, "phase transition grid", 300e3, phase_transition},
        {8, "Cantor fragments under x^2", 60e3, cantor_power_instance},
        {9, "exponential gap witnesses", 60e3, exp_witnesses},
        {10, "collapse counterexample", 10e3, collapse},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        std::ostringstream note;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.check(note);
        } catch (const std::exception& e) {
            note << " threw: " << e.what();
        }
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (ok && ms > c.limit_ms) {
            ok = false;
            note << " (over the " << c.limit_ms << " ms budget)";
        }
        if (!ok) ++failures;
        std::printf("%s criterion %d: %s: %s (%.0f ms)\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    note.str().c_str(), ms);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
