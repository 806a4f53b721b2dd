#include "thicksum/properties.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "thicksum/errors.hpp"
#include "thicksum/fragmentation.hpp"
#include "thicksum/function.hpp"
#include "thicksum/halfline.hpp"
#include "thicksum/interval.hpp"
#include "thicksum/phase_scan.hpp"
#include "thicksum/thickness.hpp"

namespace thicksum {

namespace {

using Rng = std::mt19937_64;
using detail::RealInterval;

enum class Outcome { Pass, Fail, Skip };

long rint(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
Rational rnd(Rng& rng, long lo, long hi, long den) { return make_rational(rint(rng, lo, hi), den); }
bool coin(Rng& rng, int percent = 50) { return rint(rng, 0, 99) < percent; }

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Each case gets its own generator so a failure is reproducible from
// (seed, property, attempt) alone.
Rng case_rng(std::uint64_t seed, std::uint64_t stream, std::size_t attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(attempt)};
    return Rng(seq);
}

template <class Body>
CheckResult drive(const std::string& name, const SuiteOptions& o, std::size_t cases, Body body) {
    CheckResult res;
    res.name = name;
    const std::uint64_t stream = fnv1a(name);
    const std::size_t limit = cases * 50 + 100;
    for (std::size_t attempt = 0; res.cases < cases && attempt < limit; ++attempt) {
        Rng rng = case_rng(o.seed, stream, attempt);
        std::ostringstream detail;
        Outcome out;
        try {
            out = body(rng, detail);
        } catch (const std::exception& e) {
            out = Outcome::Fail;
            detail << " threw: " << e.what();
        }
        if (out == Outcome::Skip) continue;
        ++res.cases;
        if (out == Outcome::Fail) {
            ++res.failures;
            std::string text = "case " + std::to_string(attempt) + ": " + detail.str();
            if (res.counterexample.empty() || text.size() < res.counterexample.size())
                res.counterexample = text;
        }
    }
    return res;
}

std::size_t scaled(const SuiteOptions& o, std::size_t divisor) {
    return std::max<std::size_t>(1, o.cases / divisor);
}

// ---------------------------------------------------------------------------
// Generators

// Union of 1..max_gaps+1 parts with distinct endpoints on the 1/den grid of [0, 4].
IntervalUnion random_union(Rng& rng, std::size_t max_gaps, long den = 32) {
    std::size_t parts = static_cast<std::size_t>(rint(rng, 1, static_cast<long>(max_gaps) + 1));
    std::vector<long> ends;
    while (ends.size() < 2 * parts) {
        long v = rint(rng, 0, 4 * den);
        if (std::find(ends.begin(), ends.end(), v) == ends.end()) ends.push_back(v);
    }
    std::sort(ends.begin(), ends.end());
    std::vector<Interval> raw;
    for (std::size_t i = 0; i < parts; ++i)
        raw.emplace_back(make_rational(ends[2 * i], den), make_rational(ends[2 * i + 1], den));
    return normalize(raw);
}

// Union with long parts and short gaps, so it is usually thick.
IntervalUnion random_thick_union(Rng& rng, std::size_t max_gaps) {
    std::size_t gaps = static_cast<std::size_t>(rint(rng, 0, static_cast<long>(max_gaps)));
    std::vector<Interval> raw;
    Rational cur = rnd(rng, 0, 32, 32);
    for (std::size_t i = 0; i <= gaps; ++i) {
        Rational len = rnd(rng, 2, 24, 32);
        raw.emplace_back(cur, cur + len);
        cur += len + rnd(rng, 1, 6, 32);
    }
    return normalize(raw);
}

std::string show(const IntervalUnion& k) { return to_string(k); }

// Breakpoints of random piecewise-affine functions lie on the 1/4 grid, so
// one-sided slopes can be read off exact difference quotients on the 1/8 grid.
const Rational kGrid = make_rational(1, 8);

struct PwaShape {
    std::vector<Rational> xs;             // breakpoints, xs[0] = 0
    std::vector<Rational> tail_lengths;   // empty: final slope
};

PwaShape random_shape(Rng& rng) {
    PwaShape s;
    s.xs.push_back(0);
    long n = rint(rng, 1, 4);
    for (long i = 0; i < n; ++i) s.xs.push_back(s.xs.back() + rnd(rng, 1, 8, 4));
    if (coin(rng, 75)) {
        long segs = rint(rng, 1, 3);
        for (long i = 0; i < segs; ++i) s.tail_lengths.push_back(rnd(rng, 1, 8, 4));
    }
    return s;
}

AdmissibleFunction random_pwa_on(Rng& rng, const PwaShape& s) {
    std::vector<std::pair<Rational, Rational>> pts;
    Rational y = rnd(rng, 1, 8, 4);
    pts.emplace_back(s.xs[0], y);
    for (std::size_t i = 1; i < s.xs.size(); ++i) {
        y += (s.xs[i] - s.xs[i - 1]) * rnd(rng, 1, 16, 4);
        pts.emplace_back(s.xs[i], y);
    }
    if (s.tail_lengths.empty()) return AdmissibleFunction::pwa(pts, FinalSlope{rnd(rng, 1, 16, 4)});
    PeriodicTail t;
    for (const auto& len : s.tail_lengths) t.segments.push_back({len, rnd(rng, 1, 16, 4)});
    return AdmissibleFunction::pwa(pts, t);
}

AdmissibleFunction random_pwa(Rng& rng) { return random_pwa_on(rng, random_shape(rng)); }

// x^P exp(sum c x^b) in closed form, for the asymptotic oracle.
struct BuiltinSpec {
    AdmissibleFunction g;
    Rational power = 0;
    std::vector<std::pair<Rational, Rational>> exps;  // (c, b)
};

BuiltinSpec random_builtin(Rng& rng, bool brv_only = false) {
    switch (rint(rng, 0, 3)) {
        case 0: {
            Rational m = rnd(rng, 1, 32, 8);
            return {AdmissibleFunction::power(m), m, {}};
        }
        case 1: {
            Rational r = rnd(rng, 1, 30, 10);
            return {AdmissibleFunction::exp(r), 0, {{r, 1}}};
        }
        case 2: {
            Rational a = rnd(rng, 1, 20, 10);
            Rational b = brv_only ? rnd(rng, 1, 4, 4) : rnd(rng, 1, 8, 4);
            return {AdmissibleFunction::stretched_exp(a, b), 0, {{a, b}}};
        }
        default:
            return {AdmissibleFunction::identity(), 1, {}};
    }
}

BuiltinSpec builtin_product(const BuiltinSpec& f, const BuiltinSpec& h) {
    BuiltinSpec out{AdmissibleFunction::product(f.g, h.g), f.power + h.power, f.exps};
    out.exps.insert(out.exps.end(), h.exps.begin(), h.exps.end());
    return out;
}

// lim Lambda(x^P exp(sum c x^b), gamma): infinite when some b > 1, else
// exp(gamma * sum_{b = 1} c).
LambdaEstimate builtin_lambda_oracle(const BuiltinSpec& s, const Rational& gamma) {
    Rational rate = 0;
    for (const auto& [c, b] : s.exps) {
        if (b > 1) return LambdaEstimate::exact_infinity();
        if (b == 1) rate += c;
    }
    return LambdaEstimate::exp_of(rate * gamma, 96);
}

// One-sided slopes computed from values only: pieces of a random PWA function
// never break strictly between consecutive 1/8 grid points.
struct OneSided {
    Rational left, right;
};

Rational floor_grid(const Rational& x) {
    Rational q = x / kGrid;
    mpz_class k = q.get_num() / q.get_den();
    return Rational(k) * kGrid;
}

Rational value_of(const AdmissibleFunction& g, const Rational& x) {
    Enclosure e = eval(g, x);
    if (!e.is_exact()) throw DomainError("oracle needs an exact function");
    return e.lo;
}

OneSided slopes_oracle(const AdmissibleFunction& g, const Rational& x) {
    if (auto* p = g.as<Product>()) {
        OneSided a = slopes_oracle(p->factors[0], x), b = slopes_oracle(p->factors[1], x);
        Rational ga = value_of(p->factors[0], x), gb = value_of(p->factors[1], x);
        return {a.left * gb + ga * b.left, a.right * gb + ga * b.right};
    }
    Rational lo = floor_grid(x);
    Rational next = lo + kGrid;
    Rational prev = lo == x ? Rational(lo - kGrid) : lo;
    Rational gx = value_of(g, x);
    Rational right = (value_of(g, next) - gx) / (next - x);
    if (prev < 0) return {right, right};
    Rational left = (gx - value_of(g, prev)) / (x - prev);
    return {left, right};
}

// max D+(x) / D-(y) over grid points x, y in [from, to] with |x - y| <= gamma.
Rational grid_lambda(const AdmissibleFunction& g, const Rational& gamma, const Rational& from,
                     const Rational& to) {
    std::vector<Rational> dp, dm;
    for (Rational x = from; x <= to; x += kGrid) {
        OneSided s = slopes_oracle(g, x);
        dp.push_back(std::max(s.left, s.right));
        dm.push_back(std::min(s.left, s.right));
    }
    Rational steps_q = gamma / kGrid;
    std::size_t w = static_cast<std::size_t>(mpz_class(steps_q.get_num() / steps_q.get_den()).get_ui());
    Rational best = 0;
    for (std::size_t i = 0; i < dp.size(); ++i) {
        std::size_t lo = i >= w ? i - w : 0, hi = std::min(dp.size() - 1, i + w);
        Rational mn = dm[lo];
        for (std::size_t j = lo + 1; j <= hi; ++j)
            if (dm[j] < mn) mn = dm[j];
        Rational r = dp[i] / mn;
        if (r > best) best = r;
    }
    return best;
}

const PiecewiseAffine& pwa_of(const AdmissibleFunction& g) { return *g.as<PiecewiseAffine>(); }

Rational tail_period(const PiecewiseAffine& p) {
    Rational per = 0;
    if (auto* t = std::get_if<PeriodicTail>(&p.tail))
        for (const auto& s : t->segments) per += s.length;
    return per;
}

// Window past which the oracle sees every configuration of a tailed PWA function.
Rational oracle_window(const AdmissibleFunction& g, const Rational& gamma, const Rational& m) {
    const auto& p = pwa_of(g);
    Rational start = std::max(m, p.points.back().first);
    return start + gamma + 2 * tail_period(p) + 1;
}

// c * g for a PWA function.
AdmissibleFunction scale_pwa(const AdmissibleFunction& g, const Rational& c) {
    const auto& p = pwa_of(g);
    auto pts = p.points;
    for (auto& pt : pts) pt.second *= c;
    PwaTail tail = p.tail;
    if (auto* f = std::get_if<FinalSlope>(&tail)) f->slope *= c;
    if (auto* t = std::get_if<PeriodicTail>(&tail))
        for (auto& s : t->segments) s.slope *= c;
    return AdmissibleFunction::pwa(std::move(pts), std::move(tail));
}

// Asymptotic average slope.
Rational mean_slope(const AdmissibleFunction& g) {
    const auto& p = pwa_of(g);
    if (auto* f = std::get_if<FinalSlope>(&p.tail)) return f->slope;
    const auto& t = std::get<PeriodicTail>(p.tail);
    Rational rise = 0, len = 0;
    for (const auto& s : t.segments) {
        rise += s.length * s.slope;
        len += s.length;
    }
    return rise / len;
}

std::string show(const LambdaEstimate& e) { return to_string(e); }

bool upper_leq(const LambdaEstimate& a, const LambdaEstimate& b) { return a.upper <= b.upper; }
bool value_leq(const Rational& v, const LambdaEstimate& b) { return ExtendedRational(v) <= b.upper; }

// ---------------------------------------------------------------------------
// Interval unions

CheckResult prop_normalize_idempotent(const SuiteOptions& o) {
    return drive("normalize_idempotent", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        std::vector<Interval> raw;
        long n = rint(rng, 1, 8);
        for (long i = 0; i < n; ++i) {
            Rational a = rnd(rng, 0, 64, 16), b = rnd(rng, 0, 64, 16);
            raw.emplace_back(std::min(a, b), std::max(a, b));
        }
        IntervalUnion k = normalize(raw);
        d << "K=" << show(k);
        if (!(normalize(k.parts()) == k)) return Outcome::Fail;
        for (const auto& r : raw)
            if (!k.covers(r)) return Outcome::Fail;
        for (std::size_t i = 0; i + 1 < k.size(); ++i)
            if (!(k.parts()[i].hi < k.parts()[i + 1].lo)) return Outcome::Fail;
        return Outcome::Pass;
    });
}

CheckResult prop_minkowski_algebra(const SuiteOptions& o) {
    return drive("minkowski_algebra", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        IntervalUnion a = random_union(rng, 4), b = random_union(rng, 4), c = random_union(rng, 3);
        d << "A=" << show(a) << " B=" << show(b) << " C=" << show(c);
        if (!(minkowski_sum(a, b) == minkowski_sum(b, a))) return Outcome::Fail;
        if (!(minkowski_sum(minkowski_sum(a, b), c) == minkowski_sum(a, minkowski_sum(b, c))))
            return Outcome::Fail;
        return Outcome::Pass;
    });
}

// Membership oracle on the 1/16 grid; endpoints on the 1/8 grid make it exact.
CheckResult prop_minkowski_grid(const SuiteOptions& o) {
    return drive("minkowski_grid_oracle", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        IntervalUnion a = random_union(rng, 3, 8).affine(make_rational(1, 2), 0);
        IntervalUnion b = random_union(rng, 3, 8).affine(make_rational(1, 2), 0);
        IntervalUnion s = minkowski_sum(a, b);
        d << "A=" << show(a) << " B=" << show(b) << " sum=" << show(s);
        const Rational step = make_rational(1, 16);
        for (Rational z = 0; z <= 4; z += step) {
            bool member = false;
            for (Rational x = 0; x <= 2 && !member; x += step)
                member = a.contains(x) && b.contains(z - x);
            if (member != s.contains(z)) {
                d << " at z=" << to_string(z);
                return Outcome::Fail;
            }
        }
        return Outcome::Pass;
    });
}

// Extremes of the sum and the translates A + min B, min A + B lie in it. With
// inject_fault the claim is strengthened to "the sum is always the hull sum".
CheckResult prop_minkowski_hull(const SuiteOptions& o) {
    bool fault = o.inject_fault;
    return drive("minkowski_hull", o, o.cases, [fault](Rng& rng, std::ostringstream& d) {
        IntervalUnion a = random_union(rng, 3), b = random_union(rng, 3);
        IntervalUnion s = minkowski_sum(a, b);
        d << "A=" << show(a) << " B=" << show(b) << " sum=" << show(s);
        if (s.min() != a.min() + b.min() || s.max() != a.max() + b.max()) return Outcome::Fail;
        for (const auto& p : a.parts())
            if (!s.covers(Interval(p.lo + b.min(), p.hi + b.min()))) return Outcome::Fail;
        for (const auto& p : b.parts())
            if (!s.covers(Interval(p.lo + a.min(), p.hi + a.min()))) return Outcome::Fail;
        if (fault && !s.is_interval()) return Outcome::Fail;
        return Outcome::Pass;
    });
}

CheckResult prop_cantor_self_sum(const SuiteOptions& o) {
    CheckResult res{"cantor_self_sum", 0, 0, {}};
    for (unsigned k = 1; k <= 6; ++k) {
        IntervalUnion c = middle_cantor(make_rational(1, 3), k);
        ++res.cases;
        if (!(minkowski_sum(c, c) == IntervalUnion(Interval(0, 2)))) {
            ++res.failures;
            if (res.counterexample.empty()) res.counterexample = "depth " + std::to_string(k);
        }
    }
    (void)o;
    return res;
}

// ---------------------------------------------------------------------------
// Thickness

CheckResult prop_tau_bruteforce(const SuiteOptions& o) {
    return drive("tau_bruteforce_agreement", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        IntervalUnion k = coin(rng) ? random_union(rng, 6) : random_thick_union(rng, 6);
        auto t = tau(k), b = tau_bruteforce(k);
        d << "K=" << show(k) << " tau=" << to_string(t) << " brute=" << to_string(b);
        return t == b ? Outcome::Pass : Outcome::Fail;
    });
}

CheckResult prop_gap_lemma(const SuiteOptions& o) {
    return drive("gap_lemma_soundness", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        IntervalUnion a = coin(rng, 80) ? random_thick_union(rng, 4) : random_union(rng, 4);
        IntervalUnion b = coin(rng, 80) ? random_thick_union(rng, 4) : random_union(rng, 4);
        if (!gap_lemma_applies(a, b)) return Outcome::Skip;
        IntervalUnion s = minkowski_sum(a, b);
        d << "A=" << show(a) << " B=" << show(b) << " sum=" << show(s);
        return s == IntervalUnion(Interval(a.min() + b.min(), a.max() + b.max())) ? Outcome::Pass
                                                                                  : Outcome::Fail;
    });
}

CheckResult prop_tau_affine(const SuiteOptions& o) {
    return drive("tau_affine_invariance", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        IntervalUnion k = random_union(rng, 5);
        Rational s = rnd(rng, 1, 40, 7), t = rnd(rng, -20, 20, 3);
        d << "K=" << show(k) << " scale=" << to_string(s) << " shift=" << to_string(t);
        return tau(k) == tau(k.affine(s, t)) ? Outcome::Pass : Outcome::Fail;
    });
}

CheckResult prop_longest_gap(const SuiteOptions& o) {
    return drive("longest_gap_bound", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        IntervalUnion k = coin(rng) ? random_union(rng, 6) : random_thick_union(rng, 6);
        auto t = tau(k);
        if (t.is_infinite() || t.value() == 0) return Outcome::Skip;
        Rational beta = t.value() * rnd(rng, 0, 31, 32);
        d << "K=" << show(k) << " beta=" << to_string(beta);
        // Independent check of the claimed inequality.
        if (k.largest_gap_length() * (1 + 2 * beta) > k.diam()) return Outcome::Fail;
        return longest_gap_bound(k, beta) ? Outcome::Pass : Outcome::Fail;
    });
}

// ---------------------------------------------------------------------------
// Relative variation

CheckResult prop_lambda_oracle(const SuiteOptions& o) {
    return drive("lambda_pwa_oracle", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        auto g = random_pwa(rng);
        Rational gamma = rnd(rng, 1, 24, 8), m = rnd(rng, 0, 80, 8);
        auto l = lambda(g, gamma, m);
        Rational oracle = grid_lambda(g, gamma, m, oracle_window(g, gamma, m));
        d << "g=" << g.describe() << " gamma=" << to_string(gamma) << " M=" << to_string(m)
          << " lambda=" << show(l) << " oracle=" << to_string(oracle);
        return l.exact && l.upper == ExtendedRational(oracle) ? Outcome::Pass : Outcome::Fail;
    });
}

CheckResult prop_submultiplicative(const SuiteOptions& o) {
    return drive("lambda_submultiplicative", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        auto g = random_pwa(rng);
        Rational g1 = rnd(rng, 1, 24, 8), g2 = rnd(rng, 1, 24, 8), m = rnd(rng, 0, 80, 8);
        d << "g=" << g.describe() << " gamma1=" << to_string(g1) << " gamma2=" << to_string(g2)
          << " M=" << to_string(m);
        auto lhs = lambda(g, g1 + g2, m), rhs = lambda(g, g1, m) * lambda(g, g2, m);
        auto lhs_lim = lambda_limit(g, g1 + g2), rhs_lim = lambda_limit(g, g1) * lambda_limit(g, g2);
        d << " lhs=" << show(lhs) << " rhs=" << show(rhs);
        return upper_leq(lhs, rhs) && upper_leq(lhs_lim, rhs_lim) ? Outcome::Pass : Outcome::Fail;
    });
}

CheckResult prop_sum_bound(const SuiteOptions& o) {
    return drive("lambda_sum_bound", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        PwaShape shape = random_shape(rng);
        auto g = random_pwa_on(rng, shape), h = random_pwa_on(rng, shape);
        auto gh = add_pwa(g, h);
        Rational gamma = rnd(rng, 1, 24, 8), m = rnd(rng, 0, 80, 8);
        d << "g=" << g.describe() << " h=" << h.describe() << " gamma=" << to_string(gamma)
          << " M=" << to_string(m);
        Rational oracle = grid_lambda(gh, gamma, m, oracle_window(gh, gamma, m));
        auto bound = max(lambda(g, gamma, m), lambda(h, gamma, m));
        auto bound_lim = max(lambda_limit(g, gamma), lambda_limit(h, gamma));
        d << " oracle=" << to_string(oracle) << " bound=" << show(bound);
        if (!value_leq(oracle, bound)) return Outcome::Fail;
        if (!upper_leq(lambda(gh, gamma, m), bound)) return Outcome::Fail;
        return upper_leq(lambda_limit(gh, gamma), bound_lim) ? Outcome::Pass : Outcome::Fail;
    });
}

CheckResult prop_value_ratio(const SuiteOptions& o) {
    return drive("value_ratio_bound", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        Rational gamma = rnd(rng, 1, 24, 8);
        AdmissibleFunction g = AdmissibleFunction::identity();
        LambdaEstimate oracle;
        if (coin(rng, 70)) {
            g = random_pwa(rng);
            oracle = LambdaEstimate::exact_value(1);  // increments bounded, values unbounded
        } else {
            auto s = random_builtin(rng, true);
            g = s.g;
            oracle = builtin_lambda_oracle(s, gamma);  // g(x + gamma)/g(x) has the same limit
        }
        auto vr = value_ratio_limit(g, gamma);
        auto l2 = lambda_limit(g, 2 * gamma), l1 = lambda_limit(g, gamma);
        d << "g=" << g.describe() << " gamma=" << to_string(gamma) << " ratio=" << show(vr)
          << " lambda(2gamma)=" << show(l2) << " lambda(gamma)^2=" << show(l1 * l1);
        if (!(oracle.lower <= vr.upper)) return Outcome::Fail;
        if (!certainly_leq(oracle, l2) && !(oracle.upper <= l2.upper)) return Outcome::Fail;
        if (!(l2.upper <= (l1 * l1).upper) && !certainly_leq(l2, l1 * l1)) return Outcome::Fail;
        return Outcome::Pass;
    });
}

CheckResult prop_value_ratio_sampled(const SuiteOptions& o) {
    return drive("value_ratio_sampled", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        auto g = random_pwa(rng);
        Rational gamma = rnd(rng, 1, 24, 8), m = rnd(rng, 0, 80, 8);
        auto bound = value_ratio_bound(g, gamma, m);
        d << "g=" << g.describe() << " gamma=" << to_string(gamma) << " M=" << to_string(m)
          << " bound=" << to_string(bound);
        Rational to = oracle_window(g, gamma, m) + 4;
        for (int i = 0; i < 40; ++i) {
            Rational y = m + (to - m) * rnd(rng, 0, 96, 96);
            Rational x = y + gamma * rnd(rng, 0, 12, 12);
            Rational ratio = value_of(g, x) / value_of(g, y);
            if (ExtendedRational(ratio) > bound) {
                d << " x=" << to_string(x) << " y=" << to_string(y) << " ratio=" << to_string(ratio);
                return Outcome::Fail;
            }
        }
        return Outcome::Pass;
    });
}

// Finite-M Leibniz oracle on sampled pairs and the asymptotic oracle
// Lambda(c_h g + c_g h) for the limit.
CheckResult prop_product_pwa(const SuiteOptions& o) {
    return drive("lambda_product_pwa", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        PwaShape shape = random_shape(rng);
        auto g = random_pwa_on(rng, shape), h = random_pwa_on(rng, shape);
        auto gh = AdmissibleFunction::product(g, h);
        Rational gamma = rnd(rng, 1, 24, 8), m = rnd(rng, 0, 80, 8);
        d << "g=" << g.describe() << " h=" << h.describe() << " gamma=" << to_string(gamma)
          << " M=" << to_string(m);
        auto bound = lambda(gh, gamma, m);
        Rational to = std::max(oracle_window(g, gamma, m), oracle_window(h, gamma, m));
        Rational steps = (to - m) / kGrid;
        long n = mpz_class(steps.get_num() / steps.get_den()).get_si();
        Rational wq = gamma / kGrid;
        long w = mpz_class(wq.get_num() / wq.get_den()).get_si();
        for (int i = 0; i < 24; ++i) {
            long xi = rint(rng, 0, n);
            long yi = std::clamp(xi + rint(rng, -w, w), 0L, n);
            Rational x = m + kGrid * xi, y = m + kGrid * yi;
            OneSided sx = slopes_oracle(gh, x), sy = slopes_oracle(gh, y);
            Rational ratio = std::max(sx.left, sx.right) / std::min(sy.left, sy.right);
            if (!value_leq(ratio, bound)) {
                d << " x=" << to_string(x) << " y=" << to_string(y) << " ratio=" << to_string(ratio)
                  << " bound=" << show(bound);
                return Outcome::Fail;
            }
        }
        auto mix = add_pwa(scale_pwa(g, mean_slope(h)), scale_pwa(h, mean_slope(g)));
        auto limit_oracle = lambda_limit(mix, gamma);
        auto limit_bound = lambda_limit(gh, gamma);
        d << " limit oracle=" << show(limit_oracle) << " bound=" << show(limit_bound);
        return upper_leq(limit_oracle, limit_bound) ? Outcome::Pass : Outcome::Fail;
    });
}

CheckResult prop_product_builtin(const SuiteOptions& o) {
    return drive("lambda_product_builtin", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        auto f = random_builtin(rng), h = random_builtin(rng);
        auto p = builtin_product(f, h);
        Rational gamma = rnd(rng, 1, 24, 8);
        auto oracle = builtin_lambda_oracle(p, gamma);
        auto bound = lambda_limit(p.g, gamma);
        d << "g=" << p.g.describe() << " gamma=" << to_string(gamma) << " oracle=" << show(oracle)
          << " bound=" << show(bound);
        return upper_leq(oracle, bound) ? Outcome::Pass : Outcome::Fail;
    });
}

CheckResult prop_slope_sandwich(const SuiteOptions& o) {
    return drive("slope_sandwich", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        auto g = random_pwa(rng);
        Rational a = rnd(rng, 0, 140, 7);
        Rational b = a + rnd(rng, 1, 60, 7);
        d << "g=" << g.describe() << " [" << to_string(a) << ", " << to_string(b) << "]";
        Rational secant = (value_of(g, b) - value_of(g, a)) / (b - a);
        // Every piece meeting [a, b] is seen at a, b or an interior grid point.
        Rational lo = slopes_oracle(g, a).right, hi = lo;
        auto take = [&](const Rational& v) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        };
        take(slopes_oracle(g, b).left);
        for (Rational x = floor_grid(a) + kGrid; x < b; x += kGrid) {
            OneSided s = slopes_oracle(g, x);
            take(s.left);
            take(s.right);
        }
        d << " inf=" << to_string(lo) << " secant=" << to_string(secant) << " sup=" << to_string(hi);
        return lo <= secant && secant <= hi ? Outcome::Pass : Outcome::Fail;
    });
}

CheckResult prop_mean_ratio(const SuiteOptions& o) {
    return drive("mean_ratio_bound", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        auto g = random_pwa(rng);
        Rational gamma = rnd(rng, 1, 24, 8), m = rnd(rng, 0, 80, 8);
        std::vector<Rational> p;
        for (int i = 0; i < 4; ++i) p.push_back(m + gamma * rnd(rng, 0, 60, 60));
        if (p[0] == p[1] || p[2] == p[3]) return Outcome::Skip;
        Rational a = std::min(p[0], p[1]), b = std::max(p[0], p[1]);
        Rational c = std::min(p[2], p[3]), dd = std::max(p[2], p[3]);
        auto l = lambda(g, gamma, m);
        d << "g=" << g.describe() << " M=" << to_string(m) << " gamma=" << to_string(gamma) << " [a,b]=["
          << to_string(a) << "," << to_string(b) << "] [c,d]=[" << to_string(c) << "," << to_string(dd)
          << "] lambda=" << show(l);
        if (l.upper.is_infinite()) return Outcome::Skip;
        Rational lhs = (value_of(g, dd) - value_of(g, c)) / (value_of(g, b) - value_of(g, a));
        Rational rhs = (dd - c) / ((b - a) * l.upper.value());
        return lhs >= rhs ? Outcome::Pass : Outcome::Fail;
    });
}

CheckResult prop_classify_gamma(const SuiteOptions& o) {
    return drive("classify_gamma_independence", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        AdmissibleFunction g = AdmissibleFunction::identity();
        switch (rint(rng, 0, 2)) {
            case 0: g = random_pwa(rng); break;
            case 1: g = random_builtin(rng).g; break;
            default: g = builtin_product(random_builtin(rng), random_builtin(rng)).g;
        }
        auto base = classify(g, 1);
        d << "g=" << g.describe() << " class(1)=" << to_string(base);
        for (const Rational& gamma : {make_rational(1, 2), make_rational(2), make_rational(5)}) {
            auto c = classify(g, gamma);
            if (c != base) {
                d << " class(" << to_string(gamma) << ")=" << to_string(c);
                return Outcome::Fail;
            }
        }
        return Outcome::Pass;
    });
}

// g(1 + n) <= g(1) rho^n with rho = value_ratio_bound(g, 1, 1).
CheckResult prop_exponential_bound(const SuiteOptions& o) {
    return drive("exponential_bound", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        AdmissibleFunction g = coin(rng) ? random_pwa(rng) : random_builtin(rng, true).g;
        auto rho = value_ratio_bound(g, 1, 1);
        d << "g=" << g.describe() << " rho=" << to_string(rho);
        if (rho.is_infinite()) return Outcome::Fail;
        Rational amp = eval(g, 1).hi;
        Rational bound = amp;
        for (unsigned long n = 1; n <= 30; ++n) {
            bound *= rho.value();
            if (eval(g, Rational(1 + static_cast<long>(n))).lo > bound) {
                d << " n=" << n;
                return Outcome::Fail;
            }
        }
        return Outcome::Pass;
    });
}

CheckResult prop_exp_closed_form(const SuiteOptions& o) {
    return drive("exp_lambda_closed_form", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        Rational r = rnd(rng, 1, 50, 10), a = rnd(rng, 1, 50, 10), m = rnd(rng, 0, 100, 10);
        auto l = lambda(AdmissibleFunction::exp(r), a, m, 48);
        Enclosure truth = RealInterval::point(r * a, 256).exp().to_enclosure();
        d << "r=" << to_string(r) << " a=" << to_string(a) << " M=" << to_string(m) << " lambda=" << show(l);
        if (l.upper.is_infinite()) return Outcome::Fail;
        Rational width = l.upper.value() - l.lower.value();
        if (width > pow2_neg(40)) return Outcome::Fail;
        if (ExtendedRational(truth.hi) < l.lower || l.upper < ExtendedRational(truth.lo)) return Outcome::Fail;
        return l.log_value && *l.log_value == r * a ? Outcome::Pass : Outcome::Fail;
    });
}

CheckResult prop_power_trivial(const SuiteOptions& o) {
    return drive("power_lambda_trivial", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        Rational m = rnd(rng, 1, 64, 8), gamma = rnd(rng, 1, 40, 8);
        auto l = lambda_limit(AdmissibleFunction::power(m), gamma);
        d << "m=" << to_string(m) << " gamma=" << to_string(gamma) << " lambda=" << show(l);
        return l.exact && l.upper == ExtendedRational(1) ? Outcome::Pass : Outcome::Fail;
    });
}

// ---------------------------------------------------------------------------
// Images and half-line engine

CheckResult prop_thickness_transfer(const SuiteOptions& o) {
    return drive("thickness_transfer", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        auto g = random_pwa(rng);
        Rational m = rnd(rng, 0, 80, 8), gamma = rnd(rng, 1, 24, 8);
        IntervalUnion k = random_union(rng, 5).affine(gamma / 4, m);
        auto img = apply_to_set(g, k);
        auto l = lambda(g, gamma, m);
        d << "g=" << g.describe() << " K=" << show(k) << " M=" << to_string(m)
          << " gamma=" << to_string(gamma) << " lambda=" << show(l);
        if (!img.exact || l.upper.is_infinite()) return Outcome::Fail;
        auto tk = tau(k), tg = tau(img.outer);
        d << " tau(K)=" << to_string(tk) << " tau(gK)=" << to_string(tg);
        if (tk.is_infinite()) return tg.is_infinite() ? Outcome::Pass : Outcome::Fail;
        if (tg.is_infinite()) return Outcome::Fail;
        if (tg.value() * l.upper.value() < tk.value()) return Outcome::Fail;
        for (const auto& set : {k, img.outer}) {
            auto t = tau(set);
            if (t.value() == 0) continue;
            Rational beta = t.value() * rnd(rng, 0, 31, 32);
            if (set.largest_gap_length() * (1 + 2 * beta) > set.diam()) return Outcome::Fail;
            if (!longest_gap_bound(set, beta)) return Outcome::Fail;
        }
        return Outcome::Pass;
    });
}

CheckResult prop_image_ordering(const SuiteOptions& o) {
    return drive("image_ordering", o, o.cases, [](Rng& rng, std::ostringstream& d) {
        auto g = coin(rng, 70) ? random_pwa(rng) : random_builtin(rng).g;
        Rational A = rnd(rng, 1, 8, 4), a = rnd(rng, 1, 8, 4);
        Fragmentation f = coin(rng) ? make_FAa(A, a, 6)
                                    : make_cantor_fragments(A, a, make_rational(1, 5), 2, 6);
        auto imgs = image_fragments(g, f, 8);
        d << "g=" << g.describe() << " A=" << to_string(A) << " a=" << to_string(a);
        for (std::size_t n = 0; n < imgs.size(); ++n) {
            const auto& im = imgs[n];
            if (im.inner) {
                if (im.inner->min() < im.outer.min() || im.inner->max() > im.outer.max()) return Outcome::Fail;
                if (im.inner->size() != f.fragment(n).size()) return Outcome::Fail;
            }
            if (im.exact && !(im.inner && *im.inner == im.outer)) return Outcome::Fail;
            if (n + 1 < imgs.size() && !(im.outer.max() < imgs[n + 1].outer.min())) {
                d << " overlap at " << n;
                return Outcome::Fail;
            }
        }
        return Outcome::Pass;
    });
}

// Certified chains must agree with exact coverage computed from the images.
CheckResult prop_chain_coverage(const SuiteOptions& o) {
    return drive("chain_coverage_soundness", o, scaled(o, 10), [](Rng& rng, std::ostringstream& d) {
        Rational alpha = coin(rng) ? make_rational(1, 5) : make_rational(1, 7);
        unsigned depth = static_cast<unsigned>(rint(rng, 1, 2));
        Rational A = rnd(rng, 1, 2, 1), a = rnd(rng, 1, 2, 4);
        AdmissibleFunction g = AdmissibleFunction::identity();
        switch (rint(rng, 0, 2)) {
            case 0: g = AdmissibleFunction::power(2); break;
            case 1: g = AdmissibleFunction::power(make_rational(3, 2)); break;
            default: g = AdmissibleFunction::power(rnd(rng, 5, 12, 4));
        }
        Fragmentation f = make_cantor_fragments(A, a, alpha, depth, 3);
        Rational chain_a = a + make_rational(1, 10);
        d << "g=" << g.describe() << " A=" << to_string(A) << " a=" << to_string(a)
          << " alpha=" << to_string(alpha) << " depth=" << depth;
        auto v = chain_certify(f, g, ChainParams{A, chain_a, 1, 0}, 400);
        if (v.status != VerdictStatus::CertifiedHalfLine) return Outcome::Skip;
        for (std::size_t i = 0; i < v.chain.size(); ++i) {
            const auto& l = v.chain[i];
            if (l.j.hi < l.j_prime.lo) return Outcome::Fail;
            if (i + 1 < v.chain.size() && l.j_prime.hi < v.chain[i + 1].j.lo) return Outcome::Fail;
        }
        Rational from = *v.from;
        Rational X = from + 200;
        auto rep = sum_coverage_for(f, g, from, X);
        d << " from=" << to_string(from) << " certified=" << rep.coverage_certified;
        return rep.coverage_certified && rep.covered && rep.gaps.empty() ? Outcome::Pass : Outcome::Fail;
    });
}

// Gap witnesses must lie in gaps of the exact outer-enclosure sum.
CheckResult prop_stratum_gaps(const SuiteOptions& o) {
    return drive("stratum_gap_soundness", o, scaled(o, 10), [](Rng& rng, std::ostringstream& d) {
        Rational r = rnd(rng, 5, 20, 10), a = rnd(rng, 1, 20, 10), A = rnd(rng, 1, 4, 2);
        if (r * a < make_rational(7, 10)) return Outcome::Skip;
        auto g = AdmissibleFunction::exp(r);
        Fragmentation f = make_FAa(A, a, 12);
        auto env = envelope_factor(f, g, 14);
        auto v = stratum_refute({env, env}, 8);
        d << "r=" << to_string(r) << " a=" << to_string(a) << " A=" << to_string(A);
        if (v.status != VerdictStatus::CertifiedNoHalfLine || v.gaps.empty()) return Outcome::Fail;
        for (const auto& w : v.gaps) {
            auto rep = sum_coverage_for(f, g, 0, w.gap.hi);
            bool inside = std::any_of(rep.gaps.begin(), rep.gaps.end(), [&](const Interval& gap) {
                return gap.lo <= w.gap.lo && w.gap.hi <= gap.hi;
            });
            if (!inside) {
                d << " witness n=" << w.n << " " << to_string(w.gap);
                return Outcome::Fail;
            }
        }
        return Outcome::Pass;
    });
}

// Scan verdicts never contradict each other or the side of log 2 they fall on.
CheckResult prop_phase_consistency(const SuiteOptions& o) {
    return drive("phase_consistency", o, scaled(o, 10), [](Rng& rng, std::ostringstream& d) {
        ScanConfig cfg;
        cfg.A = rnd(rng, 2, 10, 1);
        cfg.r_grid = {rnd(rng, 1, 30, 10)};
        cfg.a_grid = {rnd(rng, 1, 30, 10)};
        cfg.fragments = 16;
        cfg.threads = 1;
        auto row = phase_scan(cfg).front();
        d << "A=" << to_string(cfg.A) << " r=" << to_string(row.r) << " a=" << to_string(row.a)
          << " verdict=" << to_string(row.verdict) << " note=" << row.note;
        if (row.note == "conflict") return Outcome::Fail;
        if (row.verdict == VerdictStatus::CertifiedHalfLine && row.ra_vs_log2 != Comparison::Less)
            return Outcome::Fail;
        if (row.verdict == VerdictStatus::CertifiedNoHalfLine && row.a_large) return Outcome::Fail;
        return Outcome::Pass;
    });
}

}  // namespace

const std::vector<CheckInfo>& property_suite() {
    static const std::vector<CheckInfo> suite = {
        {"normalize_idempotent", "interval", "normalize is idempotent and covers its input", prop_normalize_idempotent},
        {"minkowski_algebra", "interval", "Minkowski sum is commutative and associative", prop_minkowski_algebra},
        {"minkowski_grid_oracle", "interval", "Minkowski sum agrees with a grid membership oracle", prop_minkowski_grid},
        {"minkowski_hull", "interval", "sum extremes and translates lie in the sum", prop_minkowski_hull},
        {"cantor_self_sum", "interval", "middle-thirds approximants sum to [0, 2]", prop_cantor_self_sum},
        {"tau_bruteforce_agreement", "thickness", "canonical thickness equals the brute-force maximum", prop_tau_bruteforce},
        {"gap_lemma_soundness", "thickness", "gap lemma hypotheses imply an interval sum", prop_gap_lemma},
        {"tau_affine_invariance", "thickness", "thickness is invariant under affine maps", prop_tau_affine},
        {"longest_gap_bound", "thickness", "largest gap <= diam / (1 + 2 beta) for beta < tau", prop_longest_gap},
        {"lambda_pwa_oracle", "lambda", "lambda of PWA functions equals a grid oracle", prop_lambda_oracle},
        {"lambda_submultiplicative", "lambda", "lambda(g1 + g2) <= lambda(g1) lambda(g2)", prop_submultiplicative},
        {"lambda_sum_bound", "lambda", "lambda(g + h) <= max(lambda(g), lambda(h))", prop_sum_bound},
        {"value_ratio_bound", "lambda", "value ratio limit <= lambda(2 gamma) <= lambda(gamma)^2", prop_value_ratio},
        {"value_ratio_sampled", "lambda", "sampled value ratios stay below value_ratio_bound", prop_value_ratio_sampled},
        {"lambda_product_pwa", "lambda", "product bound against Leibniz and asymptotic oracles", prop_product_pwa},
        {"lambda_product_builtin", "lambda", "product bound against closed-form limits", prop_product_builtin},
        {"slope_sandwich", "lambda", "secant slope lies between inf D- and sup D+", prop_slope_sandwich},
        {"mean_ratio_bound", "lambda", "ratio of increments is at least the length ratio over lambda", prop_mean_ratio},
        {"classify_gamma_independence", "lambda", "relative variation class does not depend on gamma", prop_classify_gamma},
        {"exponential_bound", "lambda", "BRV functions grow at most exponentially", prop_exponential_bound},
        {"exp_lambda_closed_form", "lambda", "lambda(e^{rx}, a, M) encloses e^{ra}", prop_exp_closed_form},
        {"power_lambda_trivial", "lambda", "powers have trivial relative variation", prop_power_trivial},
        {"thickness_transfer", "halfline", "tau(g[K]) >= tau(K) / lambda and largest-gap bound", prop_thickness_transfer},
        {"image_ordering", "halfline", "image fragments stay ordered and inner inside outer", prop_image_ordering},
        {"chain_coverage_soundness", "halfline", "certified chains agree with exact coverage", prop_chain_coverage},
        {"stratum_gap_soundness", "halfline", "gap witnesses are gaps of the outer sum", prop_stratum_gaps},
        {"phase_consistency", "halfline", "scan verdicts are consistent with log 2", prop_phase_consistency},
    };
    return suite;
}

std::vector<CheckResult> run_properties(const std::vector<std::string>& selection,
                                           const SuiteOptions& options) {
    std::vector<CheckResult> out;
    for (const auto& p : property_suite()) {
        bool chosen = selection.empty() ||
                      std::any_of(selection.begin(), selection.end(),
                                  [&](const std::string& s) { return s == p.name || s == p.group; });
        if (chosen) out.push_back(p.run(options));
    }
    if (out.empty()) throw DomainError("no property matches the selection");
    return out;
}

}  // namespace thicksum
