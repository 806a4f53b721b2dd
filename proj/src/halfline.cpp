#include "thicksum/halfline.hpp"

#include <algorithm>
#include <functional>

#include "thicksum/errors.hpp"

namespace thicksum {

using detail::RealInterval;

const char* to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::CertifiedHalfLine: return "CertifiedHalfLine";
        case VerdictStatus::CertifiedNoHalfLine: return "CertifiedNoHalfLine";
        case VerdictStatus::CoveredUpToHorizon: return "CoveredUpToHorizon";
        case VerdictStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

constexpr mpfr_prec_t kStartPrec = 128;
constexpr mpfr_prec_t kMaxPrec = 1 << 13;
constexpr std::size_t kIndexCap = std::size_t{1} << 20;
constexpr std::size_t kLinkCap = 100000;

Comparison sign_of(const Enclosure& e) {
    if (e.lo > 0) return Comparison::Greater;
    if (e.hi < 0) return Comparison::Less;
    if (e.lo == 0 && e.hi == 0) return Comparison::Equal;
    return Comparison::Unresolved;
}

// c * g(x)
struct Term {
    Rational coeff;
    const AdmissibleFunction* g;
    Rational x;
};

// Sign of sum c_i g_i(x_i): exact when every g_i is, otherwise refined until
// the enclosure excludes zero or the precision cap is hit.
Comparison sign_of_sum(const std::vector<Term>& terms) {
    bool exact = std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.g->is_exact(); });
    if (exact) {
        Rational s = 0;
        for (const auto& t : terms) s += t.coeff * eval(*t.g, t.x).lo;
        return sign_of(Enclosure::exact(s));
    }
    for (mpfr_prec_t p = kStartPrec; p <= kMaxPrec; p *= 2) {
        RealInterval s = RealInterval::point(0, p);
        for (const auto& t : terms) s = s + RealInterval::point(t.coeff, p) * detail::eval_interval(*t.g, t.x, p);
        Comparison c = sign_of(s.to_enclosure());
        if (c != Comparison::Unresolved) return c;
    }
    return Comparison::Unresolved;
}

Enclosure enclose_sum(const std::vector<Term>& terms) {
    bool exact = std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.g->is_exact(); });
    if (exact) {
        Rational s = 0;
        for (const auto& t : terms) s += t.coeff * eval(*t.g, t.x).lo;
        return Enclosure::exact(s);
    }
    RealInterval s = RealInterval::point(0, kStartPrec);
    for (const auto& t : terms)
        s = s + RealInterval::point(t.coeff, kStartPrec) * detail::eval_interval(*t.g, t.x, kStartPrec);
    return s.to_enclosure();
}

// ---------------------------------------------------------------------------
// Chain

struct ImageSummary {
    Enclosure gx;  // g(min K_n)
    Enclosure gy;  // g(max K_n)
    ThicknessValue tau_lo;
    Rational gap_up;
    Rational diam_lo;
};

Enclosure value_at(const AdmissibleFunction& g, const Rational& x, mpfr_prec_t prec) {
    if (g.is_exact()) return eval(g, x);
    return detail::eval_interval(g, x, prec).to_enclosure();
}

ImageSummary summarize(const Fragmentation& f, const AdmissibleFunction& g, std::size_t n,
                       mpfr_prec_t prec, unsigned long precision) {
    IntervalUnion k = f.fragment(n);
    if (k.min() < 0) throw DomainError("fragments must lie in [0, inf)");
    ImageSummary s{value_at(g, k.min(), prec), value_at(g, k.max(), prec), ExtendedRational::infinity(), 0, 0};
    if (g.is_exact()) {
        IntervalUnion img = apply_to_set(g, k).outer;
        s.tau_lo = tau(img);
        s.gap_up = img.largest_gap_length();
        s.diam_lo = img.diam();
        return s;
    }
    s.diam_lo = s.gy.lo - s.gx.hi;
    if (k.is_interval()) return s;
    // Thickness transfer: tau(g[K]) >= tau(K) / Lambda(g, diam K, min K).
    ThicknessValue t = tau(k);
    ExtendedRational lam = lambda(g, k.diam(), k.min(), precision).upper;
    if (lam.is_infinite())
        s.tau_lo = Rational(0);
    else if (t.is_infinite())
        s.tau_lo = t;
    else
        s.tau_lo = Rational(t.value() / lam.value());
    Rational direct = 0;
    for (const auto& gap : k.gaps()) {
        Rational len = value_at(g, gap.hi, prec).hi - value_at(g, gap.lo, prec).lo;
        if (len > direct) direct = len;
    }
    s.gap_up = direct;
    if (s.tau_lo.is_finite() && s.tau_lo.value() > 0) {
        Rational by_tau = (s.gy.hi - s.gx.lo) / (1 + 2 * s.tau_lo.value());
        if (by_tau < s.gap_up) s.gap_up = by_tau;
    }
    return s;
}

enum class Check { Holds, Fails, Unresolved };

struct PairOutcome {
    Check check = Check::Holds;
    std::string what;
};

bool tau_product_gt_one(const ThicknessValue& a, const ThicknessValue& b) {
    if (a.is_infinite() || b.is_infinite()) {
        // inf * t > 1 iff t > 0
        const ThicknessValue& other = a.is_infinite() ? b : a;
        return other.is_infinite() || other.value() > 0;
    }
    return a.value() * b.value() > 1;
}

// a_lo >= b_hi holds, a_hi < b_lo fails, otherwise unresolved.
Check geq(const Rational& a_lo, const Rational& a_hi, const Rational& b_lo, const Rational& b_hi) {
    if (a_lo >= b_hi) return Check::Holds;
    if (a_hi < b_lo) return Check::Fails;
    return Check::Unresolved;
}

PairOutcome check_pair_at(const ImageSummary& s, const ImageSummary& t) {
    if (!tau_product_gt_one(s.tau_lo, s.tau_lo)) return {Check::Fails, "tau(K~_n)^2 > 1"};
    if (!tau_product_gt_one(s.tau_lo, t.tau_lo)) return {Check::Fails, "tau(K~_n) tau(K~_{n+1}) > 1"};
    if (!(s.gap_up <= s.diam_lo)) return {Check::Fails, "largest gap of K~_n <= diam K~_n"};
    if (!(s.gap_up <= t.diam_lo)) return {Check::Fails, "largest gap of K~_n <= diam K~_{n+1}"};
    if (!(t.gap_up <= s.diam_lo)) return {Check::Fails, "largest gap of K~_{n+1} <= diam K~_n"};
    Check c1 = geq(2 * s.gy.lo, 2 * s.gy.hi, s.gx.lo + t.gx.lo, s.gx.hi + t.gx.hi);
    if (c1 != Check::Holds) return {c1, "2g(y_n) >= g(x_n) + g(x_{n+1})"};
    Check c2 = geq(s.gy.lo + t.gy.lo, s.gy.hi + t.gy.hi, 2 * t.gx.lo, 2 * t.gx.hi);
    if (c2 != Check::Holds) return {c2, "g(y_n) + g(y_{n+1}) >= 2g(x_{n+1})"};
    return {};
}

PairOutcome check_pair(const Fragmentation& f, const AdmissibleFunction& g, std::size_t n,
                       unsigned long precision) {
    PairOutcome out;
    for (mpfr_prec_t p = kStartPrec; p <= kMaxPrec; p *= 2) {
        out = check_pair_at(summarize(f, g, n, p, precision), summarize(f, g, n + 1, p, precision));
        if (out.check != Check::Unresolved || g.is_exact()) return out;
    }
    return out;
}

std::string pair_failure(std::size_t n, const PairOutcome& o) {
    return std::string(o.check == Check::Unresolved ? "unresolved" : "fails") + " at n = " +
           std::to_string(n) + ": " + o.what;
}

void add_links(HalfLineVerdict& v, const Fragmentation& f, const AdmissibleFunction& g, std::size_t n0,
               const Rational& horizon, unsigned long precision) {
    for (std::size_t n = n0; n < n0 + kLinkCap && f.has_fragment(n + 1); ++n) {
        ImageSummary s = summarize(f, g, n, kStartPrec, precision);
        if (2 * s.gx.lo > horizon) break;
        ImageSummary t = summarize(f, g, n + 1, kStartPrec, precision);
        Rational jlo = 2 * s.gx.hi, jhi = 2 * s.gy.lo;
        Rational plo = s.gx.hi + t.gx.hi, phi = s.gy.lo + t.gy.lo;
        if (jlo > jhi || plo > phi) break;
        v.chain.push_back({n, Interval(jlo, jhi), Interval(plo, phi)});
    }
}

// Direct checks of pairs top, top-1, ..., 0; returns the least n0 with every
// pair in [n0, top] verified, or nullopt if pair `top` itself fails.
struct DescentResult {
    std::size_t n0;
    std::optional<std::pair<std::size_t, PairOutcome>> stopped_by;
};

DescentResult descend(const Fragmentation& f, const AdmissibleFunction& g, std::size_t top,
                      unsigned long precision) {
    for (std::size_t n = top + 1; n-- > 0;) {
        PairOutcome o = check_pair(f, g, n, precision);
        if (o.check != Check::Holds) return {n + 1, std::make_pair(n, o)};
    }
    return {0, std::nullopt};
}

HalfLineVerdict certified(const Fragmentation& f, const AdmissibleFunction& g, std::size_t n0,
                          std::string tail_argument, std::string reason, const Rational& horizon,
                          unsigned long precision) {
    HalfLineVerdict v;
    v.status = VerdictStatus::CertifiedHalfLine;
    v.n0 = n0;
    v.from = 2 * summarize(f, g, n0, kStartPrec, precision).gx.hi;
    v.tail_argument = std::move(tail_argument);
    v.reason = std::move(reason);
    add_links(v, f, g, n0, horizon, precision);
    return v;
}

// Chain checked directly up to the horizon, no tail argument.
HalfLineVerdict direct_chain(const Fragmentation& f, const AdmissibleFunction& g, const Rational& horizon,
                             std::string tail_failure, unsigned long precision) {
    HalfLineVerdict v;
    v.tail_argument = "none";
    std::optional<std::pair<std::size_t, PairOutcome>> last_fail;
    std::size_t n = 0;
    bool reached = false;
    for (; n < kIndexCap; ++n) {
        if (!f.has_fragment(n + 1)) break;
        ImageSummary s = summarize(f, g, n, kStartPrec, precision);
        if (2 * s.gx.lo > horizon) {
            reached = true;
            break;
        }
        PairOutcome o = check_pair(f, g, n, precision);
        if (o.check != Check::Holds) last_fail = std::make_pair(n, o);
    }
    std::string chain_note = last_fail ? "chain " + pair_failure(last_fail->first, last_fail->second) : "";
    std::size_t n0 = last_fail ? last_fail->first + 1 : 0;
    if (reached && n0 < n) {
        v.status = VerdictStatus::CoveredUpToHorizon;
        v.n0 = n0;
        v.from = 2 * summarize(f, g, n0, kStartPrec, precision).gx.hi;
        v.horizon = horizon;
        v.reason = tail_failure;
        add_links(v, f, g, n0, horizon, precision);
        return v;
    }
    v.status = VerdictStatus::Inconclusive;
    v.reason = tail_failure;
    if (!reached) v.reason += "; prefix ends before the horizon";
    if (!chain_note.empty()) v.reason += "; " + chain_note;
    return v;
}

// Least index >= start with ok(n), assuming ok is monotone; nullopt if none
// below the cap.
std::optional<std::size_t> first_ok(std::size_t start, const std::function<bool(std::size_t)>& ok) {
    if (ok(start)) return start;
    std::size_t lo = start, step = 1, hi = start + 1;
    while (!ok(hi)) {
        lo = hi;
        step *= 2;
        hi = start + step;
        if (hi > kIndexCap) return std::nullopt;
    }
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

std::optional<HalfLineVerdict> exponential_tail(const Fragmentation& f, const AdmissibleFunction& g,
                                                const Rational& horizon, unsigned long precision,
                                                std::string& note) {
    const auto* e = g.as<Exp>();
    if (!e || !f.tail()) return std::nullopt;
    // g(x + P) = e^{rP} g(x): pairs past s are scaled copies of pair s.
    std::size_t s = *f.translate_from();
    PairOutcome top = check_pair(f, g, s, precision);
    if (top.check != Check::Holds) {
        note = "self-similar tail " + pair_failure(s, top);
        return std::nullopt;
    }
    DescentResult d = descend(f, g, s, precision);
    return certified(f, g, d.n0, "exponential-homogeneity", "pairs past n = " + std::to_string(s) +
                     " are scaled copies", horizon, precision);
}

}  // namespace

HalfLineVerdict chain_certify(const Fragmentation& f, const AdmissibleFunction& g, const ChainParams& params,
                              const Rational& horizon, unsigned long precision) {
    if (params.A <= 0 || params.a <= 0 || params.eps <= 0)
        throw DomainError("chain_certify needs A, a, eps > 0");
    std::string exp_note;
    if (auto v = exponential_tail(f, g, horizon, precision, exp_note)) return *v;

    std::string tail_failure;
    ThickResult cert = certify_thick(f, params.A, params.a, Rational(1 + params.eps), params.skip);
    if (auto* fail = std::get_if<CertificationFailure>(&cert)) {
        tail_failure = "precondition: not (A, a, 1 + eps)-thick: " + fail->condition + " at n = " +
                       std::to_string(fail->index) + " (" + fail->detail + ")";
    } else if (std::get<ThicknessCertificate>(cert).tail_proof != TailProof::GeneratorUniform) {
        tail_failure = "precondition: thickness holds on the prefix only (no tail rule)";
    } else if (params.a >= params.A) {
        tail_failure = "threshold: cube root of A/a <= 1 <= Lambda(g, A)";
    } else {
        const Rational q1 = (1 + params.eps) / (1 + params.eps / 2);
        const Rational q2(3, 2);
        const Rational q3 = params.A / params.a;
        auto meets = [&](const ExtendedRational& l) {
            if (l.is_infinite()) return false;
            const Rational& L = l.value();
            return pow_int(L, 2) < q1 && pow_int(L, 5) < q2 && pow_int(L, 3) < q3;
        };
        LambdaEstimate lim = lambda_limit(g, params.A, precision);
        bool hopeless = lim.lower.is_infinite() ||
                        (lim.lower.is_finite() && !(pow_int(lim.lower.value(), 2) < q1 &&
                                                    pow_int(lim.lower.value(), 5) < q2 &&
                                                    pow_int(lim.lower.value(), 3) < q3));
        std::optional<std::size_t> n_lambda;
        if (!hopeless) {
            n_lambda = first_ok(params.skip, [&](std::size_t n) {
                return meets(lambda(g, params.A, f.fragment(n).min(), precision).upper);
            });
        }
        if (n_lambda) {
            std::size_t n0 = *n_lambda;
            std::string reason = "Lambda(g, A, min K_n) below threshold from n = " + std::to_string(n0);
            if (n0 > 0) n0 = descend(f, g, n0 - 1, precision).n0;
            return certified(f, g, n0, "lambda-threshold", reason, horizon, precision);
        }
        tail_failure = "threshold: Lambda(g, A) bound " + to_string(lim) + " not below min{sqrt(" +
                       to_string(q1) + "), 5th root(3/2), cube root(" + to_string(q3) + ")}";
    }
    if (!exp_note.empty()) tail_failure += "; " + exp_note;
    return direct_chain(f, g, horizon, tail_failure, precision);
}

HalfLineVerdict chain_certify_bigtau(const Fragmentation& f, const AdmissibleFunction& g,
                                     const BigTauParams& params, const Rational& horizon,
                                     unsigned long precision) {
    if (params.A <= 0 || params.a <= 0 || params.R <= 1 || params.tau <= 0)
        throw DomainError("chain_certify_bigtau needs A, a, tau > 0 and R > 1");
    auto inconclusive = [](std::string reason) {
        HalfLineVerdict v;
        v.reason = std::move(reason);
        return v;
    };
    if (!(params.tau > pow_int(params.R, 7)))
        return inconclusive("precondition: tau > R^7 fails (tau = " + to_string(params.tau) +
                            ", R^7 = " + to_string(pow_int(params.R, 7)) + ")");
    if (!(params.a < params.A / pow_int(params.R, 3)))
        return inconclusive("precondition: a < A / R^3 fails");
    ThickResult cert = certify_thick(f, params.A, params.a, params.tau);
    if (auto* fail = std::get_if<CertificationFailure>(&cert))
        return inconclusive("precondition: not (A, a, tau)-thick: " + fail->condition + " at n = " +
                            std::to_string(fail->index) + " (" + fail->detail + ")");
    if (std::get<ThicknessCertificate>(cert).tail_proof != TailProof::GeneratorUniform)
        return inconclusive("precondition: thickness holds on the prefix only (no tail rule)");
    LambdaEstimate lim = lambda_limit(g, params.A, precision);
    if (!(lim.upper <= ExtendedRational(params.R)))
        return inconclusive("precondition: Lambda(g, A) <= R not certified (" + to_string(lim) + ")");

    auto meets = [&](std::size_t n) {
        ExtendedRational r = lambda(g, params.A, f.fragment(n).min(), precision).upper;
        if (r.is_infinite()) return false;
        return params.tau > pow_int(r.value(), 7) && params.a < params.A / pow_int(r.value(), 3);
    };
    auto n_lambda = first_ok(0, meets);
    if (!n_lambda) return inconclusive("threshold: Lambda(g, A, M) never certified below the R bounds");
    std::size_t n0 = *n_lambda;
    std::string reason = "Lambda(g, A, min K_n) meets tau > R^7, a < A/R^3 from n = " + std::to_string(n0);
    if (n0 > 0) n0 = descend(f, g, n0 - 1, precision).n0;
    return certified(f, g, n0, "lambda-threshold", reason, horizon, precision);
}

// ---------------------------------------------------------------------------
// Envelopes and the stratum criterion

namespace {

std::optional<Rational> linear_slope(const AdmissibleFunction& g) {
    const auto* p = g.as<PiecewiseAffine>();
    if (!p || p->points.front().second != 0) return std::nullopt;
    const auto* fs = std::get_if<FinalSlope>(&p->tail);
    if (!fs) return std::nullopt;
    for (std::size_t i = 0; i + 1 < p->points.size(); ++i) {
        Rational s = (p->points[i + 1].second - p->points[i].second) /
                     (p->points[i + 1].first - p->points[i].first);
        if (s != fs->slope) return std::nullopt;
    }
    return fs->slope;
}

}  // namespace

EnvelopeFactor envelope_factor(const Fragmentation& f, const AdmissibleFunction& g, std::size_t count) {
    if (count < 2) throw DomainError("envelope needs at least two fragments");
    EnvelopeFactor e{g, {}, {}, std::nullopt, std::nullopt};
    for (std::size_t n = 0; n < count; ++n) {
        IntervalUnion k = f.fragment(n);
        e.x.push_back(k.min());
        e.y.push_back(k.max());
    }
    if (const auto* ex = g.as<Exp>(); ex && f.tail()) {
        e.homogeneous_from = *f.translate_from();
        e.step = StepScale{std::nullopt, Rational(ex->r * f.tail()->period)};
    }
    return e;
}

EnvelopeFactor geometric_envelope(const AdmissibleFunction& g, std::vector<Rational> x, std::vector<Rational> y,
                                  const Rational& rho) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("envelope needs matching x, y of length >= 2");
    for (std::size_t n = 0; n < x.size(); ++n) {
        if (!(x[n] < y[n]) || (n + 1 < x.size() && !(y[n] < x[n + 1])))
            throw DomainError("envelope needs x_n < y_n < x_{n+1}");
    }
    if (rho <= 1) throw DomainError("geometric ratio must exceed 1");
    StepScale step;
    if (linear_slope(g)) {
        step.exact = rho;
    } else if (const auto* p = g.as<Power>(); p && p->m.get_den() == 1) {
        step.exact = pow_int(rho, p->m.get_num().get_ui());
    } else {
        throw DomainError("geometric envelope needs g linear through 0 or an integer power");
    }
    std::size_t s = x.size() - 1;
    while (s > 0 && x[s] == rho * x[s - 1] && y[s] == rho * y[s - 1]) --s;
    return EnvelopeFactor{g, std::move(x), std::move(y), s, step};
}

HalfLineVerdict stratum_refute(const EnvelopeData& factors, std::size_t horizon) {
    if (factors.empty() || factors.size() > 4) throw DomainError("stratum_refute supports 1 to 4 factors");
    const std::size_t d = factors.size();
    std::size_t size = factors[0].size();
    for (const auto& e : factors) {
        if (e.x.size() != e.y.size() || e.size() < 2) throw DomainError("malformed envelope");
        size = std::min(size, e.size());
    }

    auto lhs_terms = [&](std::size_t n) {
        std::vector<Term> t;
        for (const auto& e : factors) t.push_back({1, &e.g, e.y[n]});
        return t;
    };
    auto rhs_terms = [&](std::size_t n, std::size_t k) {
        std::vector<Term> t{{1, &factors[k].g, factors[k].x[n + 1]}};
        for (std::size_t j = 0; j < d; ++j)
            if (j != k) t.push_back({1, &factors[j].g, factors[j].x[0]});
        return t;
    };
    // sum_j y_{n,j} < x_{n+1,k} + sum_{j != k} x_{0,j} for every k
    auto holds = [&](std::size_t n) {
        for (std::size_t k = 0; k < d; ++k) {
            auto t = rhs_terms(n, k);
            for (auto& l : lhs_terms(n)) t.push_back({-1, l.g, l.x});
            if (sign_of_sum(t) != Comparison::Greater) return false;
        }
        return true;
    };

    HalfLineVerdict v;
    std::size_t last = size - 2;

    // Tail: common scale from T on, and sum_j y_{T,j} <= x_{T+1,k}.
    std::optional<std::size_t> T;
    std::string tail_note;
    bool homogeneous = std::all_of(factors.begin(), factors.end(), [&](const EnvelopeFactor& e) {
        return e.homogeneous_from && e.step && *e.step == *factors[0].step;
    });
    if (!homogeneous) {
        tail_note = "no common geometric tail rule";
    } else {
        std::size_t t = 0;
        for (const auto& e : factors) t = std::max(t, *e.homogeneous_from);
        if (t > last) {
            tail_note = "tail rule starts past the envelope prefix";
        } else {
            bool ok = true;
            for (std::size_t k = 0; k < d && ok; ++k) {
                std::vector<Term> rest;
                for (std::size_t j = 0; j < d; ++j)
                    if (j != k) rest.push_back({1, &factors[j].g, factors[j].x[0]});
                bool strict_needed = rest.empty() || sign_of_sum(rest) != Comparison::Greater;
                std::vector<Term> diff{{1, &factors[k].g, factors[k].x[t + 1]}};
                for (auto& l : lhs_terms(t)) diff.push_back({-1, l.g, l.x});
                Comparison c = sign_of_sum(diff);
                ok = c == Comparison::Greater || (!strict_needed && c == Comparison::Equal);
                if (!ok)
                    tail_note = std::string("tail inequality sum_j y_{T,j} <= x_{T+1,k} ") +
                                (c == Comparison::Unresolved ? "unresolved" : "fails") + " at T = " +
                                std::to_string(t) + ", k = " + std::to_string(k);
            }
            if (ok) T = t;
        }
    }

    std::size_t top = T ? *T : last;
    std::size_t n0 = top + 1;
    while (n0 > 0 && holds(n0 - 1)) --n0;
    if (n0 > top) {
        v.reason = "stratum inequality fails at n = " + std::to_string(top);
        if (!tail_note.empty()) v.reason += "; " + tail_note;
        return v;
    }
    v.n0 = n0;
    if (!T) {
        v.reason = tail_note + "; inequality holds on the prefix from n = " + std::to_string(n0);
        return v;
    }
    if (n0 > horizon) {
        v.reason = "N0 = " + std::to_string(n0) + " beyond the search horizon";
        return v;
    }
    v.status = VerdictStatus::CertifiedNoHalfLine;
    v.tail_argument = "geometric-scaling";
    v.reason = "stratum inequality holds from N0 = " + std::to_string(n0) + ", scaled tail from T = " +
               std::to_string(*T);
    for (std::size_t n = n0; n <= std::min(horizon, last); ++n) {
        Enclosure lo = enclose_sum(lhs_terms(n));
        std::optional<Rational> hi;
        for (std::size_t k = 0; k < d; ++k) {
            Rational r = enclose_sum(rhs_terms(n, k)).lo;
            if (!hi || r < *hi) hi = r;
        }
        if (lo.hi < *hi) v.gaps.push_back({n, Interval(lo.hi, *hi)});
    }
    return v;
}

// ---------------------------------------------------------------------------
// Exact coverage

CoverageReport sum_coverage_upto(std::span<const ImageEnclosure> images, const Rational& c, const Rational& X,
                                 bool whole_set) {
    if (images.empty()) throw DomainError("sum_coverage_upto needs fragments");
    if (c > X) throw DomainError("sum_coverage_upto needs c <= X");
    const Rational base = images.front().outer.min();
    if (!whole_set && images.back().outer.max() < X - base)
        throw RefusedError("sum_coverage_upto: fragments must reach X - min = " + to_string(Rational(X - base)) +
                           "; the last of " + std::to_string(images.size()) + " ends at " +
                           to_string(images.back().outer.max()));
    std::vector<IntervalUnion> outer, inner;
    bool exact = true;
    for (std::size_t i = 0; i < images.size(); ++i) {
        exact = exact && images[i].exact;
        for (std::size_t j = i; j < images.size(); ++j) {
            if (images[i].outer.min() + images[j].outer.min() > X) break;
            outer.push_back(minkowski_sum(images[i].outer, images[j].outer));
            if (images[i].inner && images[j].inner)
                inner.push_back(minkowski_sum(*images[i].inner, *images[j].inner));
        }
    }
    CoverageReport rep{c, X, false, false, exact, {}, images.size()};
    Interval target(c, X);
    IntervalUnion out = set_union(outer);
    rep.covered = out.covers(target);
    rep.coverage_certified = !inner.empty() && set_union(inner).covers(target);
    Rational cursor = c;
    for (const auto& p : out.parts()) {
        if (p.hi < cursor) continue;
        if (p.lo > X) break;
        if (p.lo > cursor) rep.gaps.emplace_back(cursor, p.lo);
        cursor = p.hi;
        if (cursor >= X) break;
    }
    if (cursor < X) rep.gaps.emplace_back(cursor, X);
    return rep;
}

CoverageReport sum_coverage_for(const Fragmentation& f, const AdmissibleFunction& g, const Rational& c,
                                const Rational& X, unsigned long precision) {
    std::vector<ImageEnclosure> images;
    for (std::size_t n = 0;; ++n) {
        if (!f.has_fragment(n))
            throw RefusedError("sum_coverage_for: prefix of " + std::to_string(n) +
                               " fragments ends before X and there is no tail rule");
        if (n >= kIndexCap) throw RefusedError("sum_coverage_for: too many fragments");
        images.push_back(apply_to_set(g, f.fragment(n), precision));
        if (images.back().outer.max() >= X - images.front().outer.min()) break;
    }
    return sum_coverage_upto(images, c, X);
}

}  // namespace thicksum
