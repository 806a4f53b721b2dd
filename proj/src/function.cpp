#include "thicksum/function.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include "thicksum/errors.hpp"

namespace thicksum {

using detail::RealInterval;

namespace {

// ---------------------------------------------------------------------------
// Piecewise-affine machinery

struct Piece {
    Rational l;
    std::optional<Rational> r;  // nullopt: extends to +inf
    Rational slope;
};

class Pwa {
public:
    explicit Pwa(const PiecewiseAffine& f) : f_(f) {
        const auto& pts = f.points;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            slopes_.push_back((pts[i + 1].second - pts[i].second) /
                              (pts[i + 1].first - pts[i].first));
        if (auto* p = std::get_if<PeriodicTail>(&f.tail)) {
            Rational off = 0;
            for (const auto& s : p->segments) {
                offsets_.push_back(off);
                rises_.push_back(off_rise_);
                off += s.length;
                off_rise_ += s.length * s.slope;
            }
            period_ = off;
        }
    }

    const Rational& x_last() const { return f_.points.back().first; }
    const Rational& y_last() const { return f_.points.back().second; }
    bool has_tail() const { return !std::holds_alternative<NoTail>(f_.tail); }
    bool periodic() const { return std::holds_alternative<PeriodicTail>(f_.tail); }
    const Rational& period() const { return period_; }

    Rational value(const Rational& x) const {
        if (x < 0) throw DomainError("piecewise-affine function evaluated at a negative point");
        const auto& pts = f_.points;
        if (x <= x_last()) {
            auto it = std::upper_bound(pts.begin(), pts.end(), x,
                                       [](const Rational& v, const auto& p) { return v < p.first; });
            std::size_t i = static_cast<std::size_t>(it - pts.begin()) - 1;
            if (pts[i].first == x) return pts[i].second;
            return pts[i].second + slopes_[i] * (x - pts[i].first);
        }
        if (auto* fs = std::get_if<FinalSlope>(&f_.tail)) return y_last() + fs->slope * (x - x_last());
        if (auto* p = std::get_if<PeriodicTail>(&f_.tail)) {
            Rational rel = x - x_last();
            Rational q = rel / period_;
            mpz_class kk = q.get_num() / q.get_den();
            Rational base_x = x_last() + Rational(kk) * period_;
            Rational base_y = y_last() + Rational(kk) * off_rise_;
            Rational within = x - base_x;
            for (std::size_t j = 0; j < p->segments.size(); ++j) {
                const auto& s = p->segments[j];
                if (within <= offsets_[j] + s.length || j + 1 == p->segments.size())
                    return base_y + rises_[j] + s.slope * (within - offsets_[j]);
            }
        }
        throw DomainError("piecewise-affine function has no declared tail beyond x = " +
                          to_string(x_last()));
    }

    // Slopes of the pieces immediately left and right of x.
    std::pair<Rational, Rational> slopes_at(const Rational& x) const {
        if (x < 0) throw DomainError("piecewise-affine slope at a negative point");
        auto pieces = pieces_between(x, x);
        if (pieces.empty())
            throw DomainError("piecewise-affine function has no declared tail beyond x = " +
                              to_string(x_last()));
        const Piece* left = nullptr;
        const Piece* right = nullptr;
        for (const auto& p : pieces) {
            if (p.l < x && (!p.r || *p.r >= x)) left = &p;
            if (p.l <= x && (!p.r || *p.r > x)) right = &p;
        }
        if (!right) {
            // x is the last breakpoint and nothing is declared beyond it.
            throw DomainError("piecewise-affine function has no declared tail beyond x = " +
                              to_string(x_last()));
        }
        if (!left) left = right;  // x == 0
        return {left->slope, right->slope};
    }

    // All pieces whose closure meets [from, to].
    std::vector<Piece> pieces_between(const Rational& from, const Rational& to) const {
        std::vector<Piece> out;
        const auto& pts = f_.points;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (pts[i + 1].first >= from && pts[i].first <= to)
                out.push_back({pts[i].first, pts[i + 1].first, slopes_[i]});
        }
        if (to < x_last()) return out;
        if (auto* fs = std::get_if<FinalSlope>(&f_.tail)) {
            out.push_back({x_last(), std::nullopt, fs->slope});
        } else if (auto* p = std::get_if<PeriodicTail>(&f_.tail)) {
            Rational start = from > x_last() ? from - x_last() : Rational(0);
            Rational q = start / period_;
            mpz_class k = q.get_num() / q.get_den();
            for (;; ++k) {
                Rational base = x_last() + Rational(k) * period_;
                if (base > to) break;
                for (std::size_t j = 0; j < p->segments.size(); ++j) {
                    Rational l = base + offsets_[j];
                    Rational r = l + p->segments[j].length;
                    if (r >= from && l <= to) out.push_back({l, r, p->segments[j].slope});
                }
            }
        }
        return out;
    }

    // Every breakpoint in [from, to], including unrolled tail breakpoints.
    std::vector<Rational> breakpoints_between(const Rational& from, const Rational& to) const {
        std::set<Rational> s;
        for (const auto& p : pieces_between(from, to)) {
            if (p.l >= from && p.l <= to) s.insert(p.l);
            if (p.r && *p.r >= from && *p.r <= to) s.insert(*p.r);
        }
        return {s.begin(), s.end()};
    }

private:
    const PiecewiseAffine& f_;
    std::vector<Rational> slopes_;
    std::vector<Rational> offsets_;
    std::vector<Rational> rises_;
    Rational period_ = 0;
    Rational off_rise_ = 0;
};

ExtendedRational ext_mul(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.is_infinite() || b.is_infinite()) return ExtendedRational::infinity();
    return Rational(a.value() * b.value());
}

Rational clamp_one(const Rational& v) { return v < 1 ? Rational(1) : v; }

// sup of slope ratios over pairs of pieces whose clipped closures are within gamma.
Rational pwa_piece_pair_sup(const std::vector<Piece>& pieces, const Rational& gamma,
                            const Rational& m) {
    Rational best = 1;
    for (const auto& a : pieces) {
        Rational al = a.l < m ? m : a.l;
        for (const auto& b : pieces) {
            Rational bl = b.l < m ? m : b.l;
            // distance between [al, a.r] and [bl, b.r]
            Rational dist = 0;
            if (a.r && bl > *a.r) dist = bl - *a.r;
            if (b.r && al > *b.r) dist = al - *b.r;
            if (dist > gamma) continue;
            Rational ratio = a.slope / b.slope;
            if (ratio > best) best = ratio;
        }
    }
    return best;
}

LambdaEstimate pwa_lambda(const PiecewiseAffine& f, const Rational& gamma, const Rational& m) {
    Pwa p(f);
    if (!p.has_tail()) {
        auto pieces = p.pieces_between(m, p.x_last());
        pieces.erase(std::remove_if(pieces.begin(), pieces.end(),
                                    [&](const Piece& pc) { return pc.r && *pc.r < m; }),
                     pieces.end());
        Rational known = pieces.empty() ? Rational(1) : pwa_piece_pair_sup(pieces, gamma, m);
        return LambdaEstimate::bounds(known, ExtendedRational::infinity());
    }
    Rational start = m > p.x_last() ? m : p.x_last();
    Rational reach = start + gamma;
    if (p.periodic()) reach += 2 * p.period();
    auto pieces = p.pieces_between(m, reach);
    return LambdaEstimate::exact_value(pwa_piece_pair_sup(pieces, gamma, m));
}

ExtendedRational pwa_value_ratio_bound(const PiecewiseAffine& f, const Rational& gamma,
                                       const Rational& m) {
    Pwa p(f);
    if (!p.has_tail()) return ExtendedRational::infinity();
    if (p.value(m) == 0) return ExtendedRational::infinity();
    const Rational& xl = p.x_last();
    Rational tail_start = m > xl ? m : xl;

    // On [M, tail_start] both g(y) and g(y + gamma) are affine between
    // consecutive candidates, so the ratio is monotone there.
    std::set<Rational> cand{m, tail_start};
    for (const auto& b : p.breakpoints_between(m, tail_start + gamma)) {
        if (b >= m && b <= tail_start) cand.insert(b);
        Rational c = b - gamma;
        if (c >= m && c <= tail_start) cand.insert(c);
    }
    Rational best = 1;
    for (const auto& y : cand) {
        Rational ratio = p.value(y + gamma) / p.value(y);
        if (ratio > best) best = ratio;
    }
    if (!p.periodic()) return best;  // final slope: ratio decreasing beyond tail_start

    // Periodic tail: g(y + gamma) - g(y) is periodic past x_last, so the ratio
    // is at most 1 + max increment / g(tail_start).
    const Rational& per = p.period();
    std::set<Rational> tail_cand{xl, xl + per};
    for (const auto& b : p.breakpoints_between(xl, xl + per + gamma)) {
        if (b >= xl && b <= xl + per) tail_cand.insert(b);
        Rational c = b - gamma;
        if (c >= xl && c <= xl + per) tail_cand.insert(c);
    }
    Rational max_inc = 0;
    for (const auto& y : tail_cand) {
        Rational inc = p.value(y + gamma) - p.value(y);
        if (inc > max_inc) max_inc = inc;
    }
    Rational tail_bound = 1 + max_inc / p.value(tail_start);
    return best > tail_bound ? best : tail_bound;
}

// ---------------------------------------------------------------------------
// Builtin closed forms via certified interval evaluation

RealInterval ri(const Rational& v, mpfr_prec_t prec) { return RealInterval::point(v, prec); }

Enclosure builtin_value(const FunctionVariant& v, const Rational& x, unsigned long bits) {
    if (auto* p = std::get_if<Power>(&v)) return pow_enclosure(x, p->m, bits);
    if (auto* e = std::get_if<Exp>(&v)) return exp_enclosure(e->r * x, bits);
    if (auto* s = std::get_if<StretchedExp>(&v)) {
        if (x == 0) return Enclosure::exact(1);
        return certify(
            [&](mpfr_prec_t prec) {
                return (ri(s->a, prec) * ri(x, prec).pow(ri(s->b, prec))).exp();
            },
            bits);
    }
    throw DomainError("builtin_value: not a builtin");
}

SlopeEnclosure builtin_slope(const FunctionVariant& v, const Rational& x, unsigned long bits) {
    if (auto* p = std::get_if<Power>(&v)) {
        if (p->m == 1) return {Enclosure::exact(1)};
        if (x == 0) {
            if (p->m > 1) return {Enclosure::exact(0)};
            return {Enclosure::exact(0), true};
        }
        Enclosure e = pow_enclosure(x, p->m > 1 ? Rational(p->m - 1) : Rational(1 - p->m), bits + 8);
        if (p->m < 1) {
            // m x^{m-1} = m / x^{1-m}
            if (e.is_exact()) return {Enclosure::exact(p->m / e.lo)};
            return {certify(
                [&](mpfr_prec_t prec) {
                    return ri(p->m, prec) / ri(x, prec).pow(ri(1 - p->m, prec));
                },
                bits)};
        }
        if (e.is_exact()) return {Enclosure::exact(p->m * e.lo)};
        return {certify(
            [&](mpfr_prec_t prec) { return ri(p->m, prec) * ri(x, prec).pow(ri(p->m - 1, prec)); },
            bits)};
    }
    if (auto* e = std::get_if<Exp>(&v)) {
        return {certify([&](mpfr_prec_t prec) { return ri(e->r, prec) * (ri(e->r * x, prec)).exp(); },
                        bits)};
    }
    if (auto* s = std::get_if<StretchedExp>(&v)) {
        if (x == 0) {
            if (s->b > 1) return {Enclosure::exact(0)};
            if (s->b == 1) return {Enclosure::exact(s->a)};
            return {Enclosure::exact(0), true};
        }
        return {certify(
            [&](mpfr_prec_t prec) {
                auto lx = ri(x, prec).log();
                auto xb = (ri(s->b, prec) * lx).exp();
                return ri(s->a * s->b, prec) * ((ri(s->b - 1, prec) * lx).exp()) *
                       (ri(s->a, prec) * xb).exp();
            },
            bits)};
    }
    throw DomainError("builtin_slope: not a builtin");
}

// ---------------------------------------------------------------------------
// Generic evaluation (may be wider than requested; callers tighten)

Enclosure eval_raw(const AdmissibleFunction& g, const Rational& x, unsigned long bits);

struct OneSided {
    SlopeEnclosure left;
    SlopeEnclosure right;
};

OneSided one_sided_raw(const AdmissibleFunction& g, const Rational& x, unsigned long bits);

Enclosure eval_raw(const AdmissibleFunction& g, const Rational& x, unsigned long bits) {
    const auto& v = g.variant();
    if (auto* p = std::get_if<PiecewiseAffine>(&v)) return Enclosure::exact(Pwa(*p).value(x));
    if (auto* s = std::get_if<ScaledSum>(&v)) {
        Enclosure acc = Enclosure::exact(0);
        for (const auto& [c, f] : s->terms) acc = acc + scale(eval_raw(f, x, bits + 4), c);
        return acc;
    }
    if (auto* pr = std::get_if<Product>(&v))
        return mul_nonneg(eval_raw(pr->factors[0], x, bits + 4), eval_raw(pr->factors[1], x, bits + 4));
    return builtin_value(v, x, bits);
}

SlopeEnclosure add_slopes(const SlopeEnclosure& a, const SlopeEnclosure& b) {
    if (a.infinite || b.infinite) return {Enclosure::exact(0), true};
    return {a.value + b.value};
}

OneSided one_sided_raw(const AdmissibleFunction& g, const Rational& x, unsigned long bits) {
    if (x < 0) throw DomainError("derivative requested at a negative point");
    const auto& v = g.variant();
    if (auto* p = std::get_if<PiecewiseAffine>(&v)) {
        auto [l, r] = Pwa(*p).slopes_at(x);
        return {{Enclosure::exact(l)}, {Enclosure::exact(r)}};
    }
    if (auto* s = std::get_if<ScaledSum>(&v)) {
        OneSided acc{{Enclosure::exact(0)}, {Enclosure::exact(0)}};
        for (const auto& [c, f] : s->terms) {
            auto d = one_sided_raw(f, x, bits + 4);
            acc.left = add_slopes(acc.left, {scale(d.left.value, c), d.left.infinite});
            acc.right = add_slopes(acc.right, {scale(d.right.value, c), d.right.infinite});
        }
        return acc;
    }
    if (auto* pr = std::get_if<Product>(&v)) {
        const auto& f = pr->factors[0];
        const auto& h = pr->factors[1];
        Enclosure fv = eval_raw(f, x, bits + 4), hv = eval_raw(h, x, bits + 4);
        auto df = one_sided_raw(f, x, bits + 4), dh = one_sided_raw(h, x, bits + 4);
        auto side = [&](const SlopeEnclosure& a, const SlopeEnclosure& b) -> SlopeEnclosure {
            // (fh)' = f h' + h f', values nonnegative
            bool inf = (a.infinite && hv.hi > 0) || (b.infinite && fv.hi > 0);
            if (a.infinite && hv.lo > 0) return {Enclosure::exact(0), true};
            if (b.infinite && fv.lo > 0) return {Enclosure::exact(0), true};
            if (inf) throw RefusedError("indeterminate product derivative (0 * inf)");
            return {mul_nonneg(fv, b.value) + mul_nonneg(hv, a.value)};
        };
        return {side(df.left, dh.left), side(df.right, dh.right)};
    }
    auto d = builtin_slope(v, x, bits);
    return {d, d};
}

SlopeEnclosure slope_max(const SlopeEnclosure& a, const SlopeEnclosure& b) {
    if (a.infinite) return a;
    if (b.infinite) return b;
    return {{std::max(a.value.lo, b.value.lo), std::max(a.value.hi, b.value.hi)}};
}

SlopeEnclosure slope_min(const SlopeEnclosure& a, const SlopeEnclosure& b) {
    if (a.infinite) return b;
    if (b.infinite) return a;
    return {{std::min(a.value.lo, b.value.lo), std::min(a.value.hi, b.value.hi)}};
}

// Lower bound on lambda(g, gamma, M) from a grid of window pairs.
ExtendedRational sampled_lambda_lower(const AdmissibleFunction& g, const Rational& gamma,
                                      const Rational& m, unsigned long bits) {
    std::vector<Rational> xs;
    for (int k = 0; k <= 16; ++k) xs.push_back(m + gamma * Rational(k, 4));
    std::vector<DerivativePair> d;
    d.reserve(xs.size());
    for (const auto& x : xs) d.push_back(upper_lower_derivative(g, x, bits));
    Rational best = 1;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (abs(xs[i] - xs[j]) > gamma) continue;
            const auto& up = d[i].upper;
            const auto& lo = d[j].lower;
            if (lo.infinite) continue;
            if (up.infinite) return ExtendedRational::infinity();
            if (up.value.lo <= 0) continue;
            if (lo.value.hi <= 0) return ExtendedRational::infinity();
            Rational r = up.value.lo / lo.value.hi;
            if (r > best) best = r;
        }
    }
    return best;
}

LambdaEstimate from_enclosure(const Enclosure& e) {
    return LambdaEstimate::bounds(clamp_one(e.lo), clamp_one(e.hi));
}

LambdaEstimate stretched_lambda(const StretchedExp& s, const AdmissibleFunction& g,
                                const Rational& gamma, const Rational& m, unsigned long bits) {
    if (s.b == 1) return LambdaEstimate::exp_of(s.a * gamma, bits);
    if (s.b > 1 || m == 0) return LambdaEstimate::exact_infinity();

    // phi = log g' = log(ab) + (b-1) log x + a x^b is increasing and concave
    // past T = (ab)^{-1/b}, so windows beyond T are maximized at y = T.
    auto closed_form_at = [&](const Rational& y) {
        return certify(
            [&](mpfr_prec_t prec) {
                auto lhs = (ri(y + gamma, prec) / ri(y, prec)).pow(ri(1 - s.b, prec));
                auto ga = ri(s.a, prec) *
                          (ri(y + gamma, prec).pow(ri(s.b, prec)) - ri(y, prec).pow(ri(s.b, prec)));
                return ga.exp() / lhs;
            },
            bits);
    };
    Enclosure t_enc = certify(
        [&](mpfr_prec_t prec) {
            return (ri(s.a * s.b, prec).log() * ri(Rational(-1) / s.b, prec)).exp();
        },
        16);
    Rational t = t_enc.hi;
    if (m >= t) return from_enclosure(closed_form_at(m));

    // Cell bound on [M, T + gamma] for windows with a point below T.
    const int cells = 64;
    Rational h = (t + gamma - m) / cells;
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits + 32);
    std::vector<Enclosure> phi;
    for (int i = 0; i < cells; ++i) {
        Rational c = m + h * i, dd = m + h * (i + 1);
        RealInterval x(c, dd, prec);
        auto e = (ri(s.a * s.b, prec).log() + ri(s.b - 1, prec) * x.log() +
                  ri(s.a, prec) * (ri(s.b, prec) * x.log()).exp())
                     .to_enclosure();
        phi.push_back(e);
    }
    Rational max_diff = 0;
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            Rational dist = h * (std::abs(i - j) > 0 ? std::abs(i - j) - 1 : 0);
            if (dist > gamma) continue;
            Rational diff = phi[i].hi - phi[j].lo;
            if (diff > max_diff) max_diff = diff;
        }
    Rational upper = exp_enclosure(max_diff, bits).hi;
    Rational tail = closed_form_at(t).hi;
    if (tail > upper) upper = tail;
    ExtendedRational lower = sampled_lambda_lower(g, gamma, m, bits);
    return LambdaEstimate::bounds(lower, clamp_one(upper));
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

AdmissibleFunction AdmissibleFunction::pwa(std::vector<std::pair<Rational, Rational>> points,
                                           PwaTail tail) {
    if (points.empty()) throw DomainError("piecewise-affine function needs at least one point");
    if (points.front().first != 0)
        throw DomainError("piecewise-affine function must start at x = 0");
    if (points.front().second < 0) throw DomainError("piecewise-affine function must be nonnegative");
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i + 1].first <= points[i].first)
            throw DomainError("piecewise-affine breakpoints must have increasing x");
        if (points[i + 1].second <= points[i].second)
            throw DomainError("piecewise-affine function must be strictly increasing");
    }
    if (auto* fs = std::get_if<FinalSlope>(&tail)) {
        if (fs->slope <= 0) throw DomainError("final slope must be positive");
    } else if (auto* p = std::get_if<PeriodicTail>(&tail)) {
        if (p->segments.empty()) throw DomainError("periodic tail needs at least one segment");
        for (const auto& s : p->segments)
            if (s.length <= 0 || s.slope <= 0)
                throw DomainError("periodic tail segments need positive length and slope");
    } else if (points.size() < 2) {
        throw DomainError("piecewise-affine function needs two points or a declared tail");
    }
    return AdmissibleFunction(PiecewiseAffine{std::move(points), std::move(tail)});
}

AdmissibleFunction AdmissibleFunction::identity() {
    return pwa({{0, 0}, {1, 1}}, FinalSlope{1});
}

AdmissibleFunction AdmissibleFunction::power(Rational m) {
    if (m <= 0) throw DomainError("power exponent must be positive");
    return AdmissibleFunction(Power{std::move(m)});
}

AdmissibleFunction AdmissibleFunction::stretched_exp(Rational a, Rational b) {
    if (a <= 0 || b <= 0) throw DomainError("stretched exponential needs a, b > 0");
    return AdmissibleFunction(StretchedExp{std::move(a), std::move(b)});
}

AdmissibleFunction AdmissibleFunction::exp(Rational r) {
    if (r <= 0) throw DomainError("exponential rate must be positive");
    return AdmissibleFunction(Exp{std::move(r)});
}

AdmissibleFunction AdmissibleFunction::scaled_sum(
    std::vector<std::pair<Rational, AdmissibleFunction>> terms) {
    if (terms.empty()) throw DomainError("sum needs at least one term");
    for (const auto& t : terms)
        if (t.first <= 0) throw DomainError("sum coefficients must be positive");
    return AdmissibleFunction(ScaledSum{std::move(terms)});
}

AdmissibleFunction AdmissibleFunction::product(AdmissibleFunction f, AdmissibleFunction g) {
    return AdmissibleFunction(Product{{std::move(f), std::move(g)}});
}

bool AdmissibleFunction::is_exact() const {
    const auto& v = variant();
    if (std::holds_alternative<PiecewiseAffine>(v)) return true;
    if (auto* p = std::get_if<Power>(&v)) return p->m.get_den() == 1;
    if (auto* s = std::get_if<ScaledSum>(&v))
        return std::all_of(s->terms.begin(), s->terms.end(),
                           [](const auto& t) { return t.second.is_exact(); });
    if (auto* pr = std::get_if<Product>(&v))
        return pr->factors[0].is_exact() && pr->factors[1].is_exact();
    return false;
}

std::string AdmissibleFunction::describe() const {
    const auto& v = variant();
    if (auto* p = std::get_if<PiecewiseAffine>(&v)) {
        std::string s = "pwa(" + std::to_string(p->points.size()) + " points";
        if (auto* fs = std::get_if<FinalSlope>(&p->tail)) s += ", final slope " + to_string(fs->slope);
        if (auto* pt = std::get_if<PeriodicTail>(&p->tail))
            s += ", periodic tail of " + std::to_string(pt->segments.size()) + " segments";
        return s + ")";
    }
    if (auto* p = std::get_if<Power>(&v)) return "x^(" + to_string(p->m) + ")";
    if (auto* e = std::get_if<Exp>(&v)) return "exp(" + to_string(e->r) + " x)";
    if (auto* s = std::get_if<StretchedExp>(&v))
        return "exp(" + to_string(s->a) + " x^(" + to_string(s->b) + "))";
    if (auto* s = std::get_if<ScaledSum>(&v)) {
        std::string out;
        for (const auto& [c, f] : s->terms) {
            if (!out.empty()) out += " + ";
            out += to_string(c) + "*" + f.describe();
        }
        return "(" + out + ")";
    }
    const auto& pr = std::get<Product>(v);
    return "(" + pr.factors[0].describe() + " * " + pr.factors[1].describe() + ")";
}

// ---------------------------------------------------------------------------
// Evaluation and derivatives

RealInterval detail::eval_interval(const AdmissibleFunction& g, const Rational& x, mpfr_prec_t prec) {
    if (x < 0) throw DomainError("eval at a negative point " + to_string(x));
    const auto& v = g.variant();
    if (auto* p = std::get_if<PiecewiseAffine>(&v)) return ri(Pwa(*p).value(x), prec);
    if (auto* p = std::get_if<Power>(&v)) {
        if (p->m.get_den() == 1 || x == 0) return ri(pow_enclosure(x, p->m, 0).lo, prec);
        return ri(x, prec).pow(ri(p->m, prec));
    }
    if (auto* e = std::get_if<Exp>(&v)) return ri(e->r * x, prec).exp();
    if (auto* s = std::get_if<StretchedExp>(&v)) {
        if (x == 0) return ri(1, prec);
        return (ri(s->a, prec) * ri(x, prec).pow(ri(s->b, prec))).exp();
    }
    if (auto* s = std::get_if<ScaledSum>(&v)) {
        RealInterval acc = ri(0, prec);
        for (const auto& [c, f] : s->terms) acc = acc + ri(c, prec) * eval_interval(f, x, prec);
        return acc;
    }
    const auto& pr = std::get<Product>(v);
    return eval_interval(pr.factors[0], x, prec) * eval_interval(pr.factors[1], x, prec);
}

Enclosure eval(const AdmissibleFunction& g, const Rational& x, unsigned long precision) {
    if (x < 0) throw DomainError("eval at a negative point " + to_string(x));
    const Rational target = pow2_neg(precision);
    for (unsigned long bits = precision;; bits = bits * 2 + 16) {
        Enclosure e = eval_raw(g, x, bits);
        if (e.width() <= target) return e;
        if (bits > (1UL << 16)) throw RefusedError("eval: could not reach the requested width");
    }
}

DerivativePair upper_lower_derivative(const AdmissibleFunction& g, const Rational& x,
                                      unsigned long precision) {
    const Rational target = pow2_neg(precision);
    for (unsigned long bits = precision;; bits = bits * 2 + 16) {
        auto d = one_sided_raw(g, x, bits);
        DerivativePair out{slope_max(d.left, d.right), slope_min(d.left, d.right)};
        bool ok = (out.upper.infinite || out.upper.value.width() <= target) &&
                  (out.lower.infinite || out.lower.value.width() <= target);
        if (ok) return out;
        if (bits > (1UL << 16)) throw RefusedError("derivative: could not reach the requested width");
    }
}

// ---------------------------------------------------------------------------
// LambdaEstimate

LambdaEstimate LambdaEstimate::exact_value(const Rational& v) {
    LambdaEstimate e;
    e.lower = v;
    e.upper = v;
    e.exact = true;
    if (v == 1) e.log_value = Rational(0);
    return e;
}

LambdaEstimate LambdaEstimate::exact_infinity() {
    LambdaEstimate e;
    e.lower = ExtendedRational::infinity();
    e.upper = ExtendedRational::infinity();
    e.exact = true;
    return e;
}

LambdaEstimate LambdaEstimate::exp_of(const Rational& q, unsigned long precision) {
    Enclosure enc = exp_enclosure(q, precision);
    LambdaEstimate e;
    e.lower = clamp_one(enc.lo);
    e.upper = clamp_one(enc.hi);
    e.exact = enc.is_exact();
    e.log_value = q;
    return e;
}

LambdaEstimate LambdaEstimate::bounds(ExtendedRational lo, ExtendedRational hi) {
    if (lo > hi) throw DomainError("LambdaEstimate: lower bound exceeds upper bound");
    LambdaEstimate e;
    e.exact = lo == hi;
    if (e.exact && lo.is_finite() && lo.value() == 1) e.log_value = Rational(0);
    e.lower = std::move(lo);
    e.upper = std::move(hi);
    return e;
}

LambdaEstimate operator*(const LambdaEstimate& a, const LambdaEstimate& b) {
    LambdaEstimate e;
    e.lower = ext_mul(a.lower, b.lower);
    e.upper = ext_mul(a.upper, b.upper);
    e.exact = a.exact && b.exact;
    if (a.log_value && b.log_value) e.log_value = *a.log_value + *b.log_value;
    return e;
}

LambdaEstimate max(const LambdaEstimate& a, const LambdaEstimate& b) {
    if (a.log_value && b.log_value) return *a.log_value >= *b.log_value ? a : b;
    if (a.lower >= b.upper) return a;
    if (b.lower >= a.upper) return b;
    return LambdaEstimate::bounds(std::max(a.lower, b.lower), std::max(a.upper, b.upper));
}

bool certainly_leq(const LambdaEstimate& a, const LambdaEstimate& b) {
    if (a.log_value && b.log_value) return *a.log_value <= *b.log_value;
    if (a.upper.is_infinite()) return b.lower.is_infinite();
    return a.upper <= b.lower;
}

bool certainly_less(const LambdaEstimate& a, const Rational& c) {
    return a.upper < ExtendedRational(c);
}

std::string to_string(const LambdaEstimate& e) {
    std::string s = e.exact ? to_string(e.lower)
                            : "[" + to_string(e.lower) + ", " + to_string(e.upper) + "]";
    if (e.log_value) s += " (= exp(" + to_string(*e.log_value) + "))";
    return s;
}

// ---------------------------------------------------------------------------
// Relative variation

LambdaEstimate lambda(const AdmissibleFunction& g, const Rational& gamma, const Rational& m,
                      unsigned long precision) {
    if (gamma <= 0) throw DomainError("lambda: gamma must be positive");
    if (m < 0) throw DomainError("lambda: M must be nonnegative");
    const auto& v = g.variant();
    if (auto* p = std::get_if<PiecewiseAffine>(&v)) return pwa_lambda(*p, gamma, m);
    if (auto* p = std::get_if<Power>(&v)) {
        if (p->m == 1) return LambdaEstimate::exact_value(1);
        if (m == 0) return LambdaEstimate::exact_infinity();
        Rational expo = p->m > 1 ? Rational(p->m - 1) : Rational(1 - p->m);
        Enclosure e = pow_enclosure((m + gamma) / m, expo, precision);
        if (e.is_exact()) return LambdaEstimate::exact_value(e.lo);
        return from_enclosure(e);
    }
    if (auto* e = std::get_if<Exp>(&v)) return LambdaEstimate::exp_of(e->r * gamma, precision);
    if (auto* s = std::get_if<StretchedExp>(&v)) return stretched_lambda(*s, g, gamma, m, precision);
    if (auto* s = std::get_if<ScaledSum>(&v)) {
        ExtendedRational upper = 1;
        for (const auto& t : s->terms) {
            auto c = lambda(t.second, gamma, m, precision);
            if (c.upper > upper) upper = c.upper;
        }
        if (upper == ExtendedRational(1)) return LambdaEstimate::exact_value(1);
        ExtendedRational lower = sampled_lambda_lower(g, gamma, m, precision);
        if (lower > upper) lower = upper;
        return LambdaEstimate::bounds(lower, upper);
    }
    const auto& pr = std::get<Product>(v);
    const auto& f = pr.factors[0];
    const auto& h = pr.factors[1];
    auto lf = lambda(f, gamma, m, precision), lh = lambda(h, gamma, m, precision);
    auto rf = value_ratio_bound(f, gamma, m, precision), rh = value_ratio_bound(h, gamma, m, precision);
    ExtendedRational a = ext_mul(rf, lh.upper), b = ext_mul(rh, lf.upper);
    ExtendedRational upper = a > b ? a : b;
    ExtendedRational lower = sampled_lambda_lower(g, gamma, m, precision);
    if (lower > upper) lower = upper;
    return LambdaEstimate::bounds(lower, upper);
}

LambdaEstimate lambda_limit(const AdmissibleFunction& g, const Rational& gamma,
                            unsigned long precision) {
    if (gamma <= 0) throw DomainError("lambda_limit: gamma must be positive");
    const auto& v = g.variant();
    if (auto* p = std::get_if<PiecewiseAffine>(&v)) {
        if (std::holds_alternative<FinalSlope>(p->tail)) return LambdaEstimate::exact_value(1);
        if (std::holds_alternative<PeriodicTail>(p->tail))
            // periodic and nonincreasing in M past the last breakpoint, hence constant
            return pwa_lambda(*p, gamma, p->points.back().first);
        return LambdaEstimate::bounds(1, ExtendedRational::infinity());
    }
    if (std::holds_alternative<Power>(v)) return LambdaEstimate::exact_value(1);
    if (auto* e = std::get_if<Exp>(&v)) return LambdaEstimate::exp_of(e->r * gamma, precision);
    if (auto* s = std::get_if<StretchedExp>(&v)) {
        if (s->b < 1) return LambdaEstimate::exact_value(1);
        if (s->b == 1) return LambdaEstimate::exp_of(s->a * gamma, precision);
        return LambdaEstimate::exact_infinity();
    }
    if (auto* s = std::get_if<ScaledSum>(&v)) {
        // Lambda(g + h) <= max(Lambda(g), Lambda(h)); positive scaling is free.
        ExtendedRational upper = 1;
        for (const auto& t : s->terms) {
            auto c = lambda_limit(t.second, gamma, precision);
            if (c.upper > upper) upper = c.upper;
        }
        return LambdaEstimate::bounds(1, upper);
    }
    // Lambda(gh) <= Lambda(g) Lambda(h) max(Lambda(g), Lambda(h))
    const auto& pr = std::get<Product>(v);
    auto lf = lambda_limit(pr.factors[0], gamma, precision);
    auto lh = lambda_limit(pr.factors[1], gamma, precision);
    auto bound = lf * lh * max(lf, lh);
    return LambdaEstimate::bounds(1, bound.upper);
}

ExtendedRational value_ratio_bound(const AdmissibleFunction& g, const Rational& gamma,
                                   const Rational& m, unsigned long precision) {
    if (gamma <= 0) throw DomainError("value_ratio_bound: gamma must be positive");
    const auto& v = g.variant();
    if (auto* p = std::get_if<PiecewiseAffine>(&v)) return pwa_value_ratio_bound(*p, gamma, m);
    if (auto* p = std::get_if<Power>(&v)) {
        if (m == 0) return ExtendedRational::infinity();
        return pow_enclosure((m + gamma) / m, p->m, precision).hi;
    }
    if (auto* e = std::get_if<Exp>(&v)) return exp_enclosure(e->r * gamma, precision).hi;
    if (auto* s = std::get_if<StretchedExp>(&v)) {
        if (s->b > 1) return ExtendedRational::infinity();
        // (y + gamma)^b - y^b is nonincreasing for b <= 1
        return certify(
                   [&](mpfr_prec_t prec) {
                       return (ri(s->a, prec) * ((ri(m + gamma, prec)).pow(ri(s->b, prec)) -
                                                 (m == 0 ? ri(0, prec)
                                                         : ri(m, prec).pow(ri(s->b, prec)))))
                           .exp();
                   },
                   precision)
            .hi;
    }
    if (auto* s = std::get_if<ScaledSum>(&v)) {
        ExtendedRational best = 1;
        for (const auto& t : s->terms) {
            auto b = value_ratio_bound(t.second, gamma, m, precision);
            if (b > best) best = b;
        }
        return best;
    }
    const auto& pr = std::get<Product>(v);
    return ext_mul(value_ratio_bound(pr.factors[0], gamma, m, precision),
                   value_ratio_bound(pr.factors[1], gamma, m, precision));
}

LambdaEstimate value_ratio_limit(const AdmissibleFunction& g, const Rational& gamma,
                                 unsigned long precision) {
    if (gamma <= 0) throw DomainError("value_ratio_limit: gamma must be positive");
    const auto& v = g.variant();
    if (auto* p = std::get_if<PiecewiseAffine>(&v)) {
        if (std::holds_alternative<NoTail>(p->tail))
            return LambdaEstimate::bounds(1, ExtendedRational::infinity());
        return LambdaEstimate::exact_value(1);
    }
    if (std::holds_alternative<Power>(v)) return LambdaEstimate::exact_value(1);
    if (auto* e = std::get_if<Exp>(&v)) return LambdaEstimate::exp_of(e->r * gamma, precision);
    if (auto* s = std::get_if<StretchedExp>(&v)) {
        if (s->b < 1) return LambdaEstimate::exact_value(1);
        if (s->b == 1) return LambdaEstimate::exp_of(s->a * gamma, precision);
        return LambdaEstimate::exact_infinity();
    }
    if (auto* s = std::get_if<ScaledSum>(&v)) {
        ExtendedRational upper = 1;
        for (const auto& t : s->terms) {
            auto c = value_ratio_limit(t.second, gamma, precision);
            if (c.upper > upper) upper = c.upper;
        }
        return LambdaEstimate::bounds(1, upper);
    }
    const auto& pr = std::get<Product>(v);
    auto a = value_ratio_limit(pr.factors[0], gamma, precision);
    auto b = value_ratio_limit(pr.factors[1], gamma, precision);
    return LambdaEstimate::bounds(1, (a * b).upper);
}

const char* to_string(RelativeVariation c) {
    switch (c) {
        case RelativeVariation::TRV: return "TRV";
        case RelativeVariation::BRV_not_TRV: return "BRV_not_TRV";
        case RelativeVariation::not_BRV: return "not_BRV";
        case RelativeVariation::unknown: return "unknown";
    }
    return "?";
}

RelativeVariation classify(const AdmissibleFunction& g, const Rational& gamma,
                           unsigned long precision) {
    auto l = lambda_limit(g, gamma, precision);
    if ((l.log_value && *l.log_value == 0) || l.upper == ExtendedRational(1))
        return RelativeVariation::TRV;
    if (l.lower.is_infinite()) return RelativeVariation::not_BRV;
    if (l.upper.is_finite() && ((l.log_value && *l.log_value > 0) || l.lower > ExtendedRational(1)))
        return RelativeVariation::BRV_not_TRV;
    return RelativeVariation::unknown;
}

// ---------------------------------------------------------------------------
// Images and constructions

ImageEnclosure apply_to_set(const AdmissibleFunction& g, const IntervalUnion& k,
                            unsigned long precision) {
    if (k.min() < 0) throw DomainError("apply_to_set: set must lie in [0, inf)");
    std::vector<Interval> outer, inner;
    for (const auto& p : k.parts()) {
        Enclosure a = eval(g, p.lo, precision);
        Enclosure b = p.lo == p.hi ? a : eval(g, p.hi, precision);
        outer.emplace_back(a.lo, b.hi);
        if (a.hi <= b.lo) inner.emplace_back(a.hi, b.lo);
    }
    ImageEnclosure out{normalize(outer), std::nullopt, g.is_exact()};
    if (!inner.empty()) out.inner = normalize(inner);
    return out;
}

Rational preimage_upper(const AdmissibleFunction& g, const Rational& target, unsigned long precision) {
    if (eval(g, 0, precision).lo >= target) return 0;
    Rational hi = 1;
    int doublings = 0;
    while (eval(g, hi, precision).lo < target) {
        hi *= 2;
        if (++doublings > 4096) throw RefusedError("preimage_upper: target not reached");
    }
    Rational lo = hi == 1 ? Rational(0) : hi / 2;
    unsigned long steps = std::min<unsigned long>(precision, 48);
    for (unsigned long i = 0; i < steps; ++i) {
        Rational mid = (lo + hi) / 2;
        if (eval(g, mid, precision).lo >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

AdmissibleFunction construct_non_brv(const AdmissibleFunction& h, std::size_t breakpoints,
                                     unsigned long precision) {
    if (breakpoints < 3) throw DomainError("construct_non_brv: need at least 3 breakpoints");
    std::vector<Rational> y{0};
    for (std::size_t n = 1; n < breakpoints; ++n) {
        Rational xn = preimage_upper(h, Rational(static_cast<long>(n)), precision);
        Rational next;
        if (n == 1) {
            next = xn > 1 ? xn : Rational(1);
        } else {
            Rational grow = y[n - 1] + Rational(static_cast<long>(n - 1)) * (y[n - 1] - y[n - 2]);
            next = xn > grow ? xn : grow;
            if (next <= y[n - 1]) next = y[n - 1] + 1;
        }
        y.push_back(next);
    }
    std::vector<std::pair<Rational, Rational>> pts;
    for (std::size_t n = 0; n < y.size(); ++n) pts.emplace_back(y[n], Rational(static_cast<long>(n), 2));
    Rational last_slope = Rational(1, 2) / (y.back() - y[y.size() - 2]);
    return AdmissibleFunction::pwa(std::move(pts), FinalSlope{last_slope});
}

AdmissibleFunction add_pwa(const AdmissibleFunction& f, const AdmissibleFunction& g) {
    const auto* pf = f.as<PiecewiseAffine>();
    const auto* pg = g.as<PiecewiseAffine>();
    if (!pf || !pg) throw DomainError("add_pwa: both summands must be piecewise affine");
    if (pf->tail.index() != pg->tail.index())
        throw DomainError("add_pwa: tails must be of the same kind");
    Pwa a(*pf), b(*pg);
    Rational end = std::max(a.x_last(), b.x_last());
    std::set<Rational> xs;
    for (const auto& p : pf->points) xs.insert(p.first);
    for (const auto& p : pg->points) xs.insert(p.first);
    PwaTail tail = NoTail{};
    if (auto* ta = std::get_if<FinalSlope>(&pf->tail)) {
        tail = FinalSlope{ta->slope + std::get<FinalSlope>(pg->tail).slope};
    } else if (auto* ta = std::get_if<PeriodicTail>(&pf->tail)) {
        const auto& tb = std::get<PeriodicTail>(pg->tail);
        if (ta->segments.size() != tb.segments.size())
            throw DomainError("add_pwa: periodic tails must share segment lengths");
        PeriodicTail t;
        for (std::size_t i = 0; i < ta->segments.size(); ++i) {
            if (ta->segments[i].length != tb.segments[i].length)
                throw DomainError("add_pwa: periodic tails must share segment lengths");
            t.segments.push_back({ta->segments[i].length, ta->segments[i].slope + tb.segments[i].slope});
        }
        if (a.x_last() != b.x_last())
            throw DomainError("add_pwa: periodic tails must start at the same point");
        tail = std::move(t);
    } else if (a.x_last() != b.x_last()) {
        throw DomainError("add_pwa: functions without tails must share their domain");
    }
    // Breakpoints of the shorter one's tail inside the common finite range.
    for (const auto& x : a.breakpoints_between(0, end)) xs.insert(x);
    for (const auto& x : b.breakpoints_between(0, end)) xs.insert(x);
    std::vector<std::pair<Rational, Rational>> pts;
    for (const auto& x : xs)
        if (x <= end) pts.emplace_back(x, a.value(x) + b.value(x));
    return AdmissibleFunction::pwa(std::move(pts), std::move(tail));
}

}  // namespace thicksum
