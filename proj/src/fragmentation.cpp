#include "thicksum/fragmentation.hpp"

#include "thicksum/errors.hpp"

namespace thicksum {

Fragmentation::Fragmentation(std::vector<IntervalUnion> fragments, std::optional<TranslateTail> tail)
    : fragments_(std::move(fragments)), tail_(std::move(tail)) {
    if (fragments_.empty()) throw EmptySetError("fragmentation needs at least one fragment");
    for (std::size_t n = 0; n + 1 < fragments_.size(); ++n) {
        if (!(fragments_[n].max() < fragments_[n + 1].min()))
            throw DomainError("fragments must satisfy max K_n < min K_{n+1} (n = " +
                              std::to_string(n) + ")");
    }
    if (tail_) {
        if (tail_->period <= fragments_.back().diam())
            throw DomainError("translate period must exceed the diameter of the last fragment");
    }
}

IntervalUnion Fragmentation::fragment(std::size_t n) const {
    if (n < fragments_.size()) return fragments_[n];
    if (!tail_)
        throw RefusedError("fragment " + std::to_string(n) + " requested beyond a prefix of " +
                           std::to_string(fragments_.size()) + " without a tail rule");
    Rational steps(static_cast<unsigned long>(n - last_index()));
    return fragments_.back().affine(1, steps * tail_->period);
}

std::optional<std::size_t> Fragmentation::translate_from() const {
    if (!tail_) return std::nullopt;
    std::size_t s = last_index();
    while (s > 0 && fragments_[s - 1].affine(1, tail_->period) == fragments_[s]) --s;
    return s;
}

Rational fragment_distance(const Fragmentation& f, std::size_t n) {
    return f.fragment(n + 1).min() - f.fragment(n).max();
}

Fragmentation shift(const Fragmentation& f, const Rational& d) {
    std::vector<IntervalUnion> out;
    out.reserve(f.prefix_size());
    for (const auto& k : f.prefix()) out.push_back(k.affine(1, d));
    return Fragmentation(std::move(out), f.tail());
}

Fragmentation shift_to_origin(const Fragmentation& f) { return shift(f, -f.prefix().front().min()); }

Fragmentation make_FAa(const Rational& A, const Rational& a, std::size_t N) {
    if (A <= 0 || a <= 0) throw DomainError("F(A, a) needs A, a > 0");
    std::vector<IntervalUnion> frags;
    for (std::size_t n = 0; n <= N; ++n) {
        Rational lo = Rational(static_cast<unsigned long>(n)) * (A + a);
        frags.emplace_back(Interval(lo, lo + A));
    }
    return Fragmentation(std::move(frags), TranslateTail{A + a});
}

Fragmentation make_cantor_fragments(const Rational& A, const Rational& a, const Rational& alpha,
                                    unsigned depth, std::size_t N) {
    if (A <= 0 || a <= 0) throw DomainError("Cantor fragments need A, a > 0");
    IntervalUnion base = middle_cantor(alpha, depth).affine(A, 0);
    std::vector<IntervalUnion> frags;
    for (std::size_t n = 0; n <= N; ++n)
        frags.push_back(base.affine(1, Rational(static_cast<unsigned long>(n)) * (A + a)));
    return Fragmentation(std::move(frags), TranslateTail{A + a});
}

const char* to_string(TailProof t) {
    return t == TailProof::GeneratorUniform ? "generator-uniform" : "none";
}

namespace {

std::optional<CertificationFailure> check_fragment(const IntervalUnion& k, std::size_t n,
                                                   const Rational& A, const ThicknessValue& tau_min) {
    Rational d = k.diam();
    if (d < A) return CertificationFailure{"diam_lower", n, "diam " + to_string(d) + " < A = " + to_string(A)};
    if (d > 2 * A)
        return CertificationFailure{"diam_upper", n,
                                    "diam " + to_string(d) + " > 2A = " + to_string(Rational(2 * A))};
    ThicknessValue t = tau(k);
    if (t < tau_min)
        return CertificationFailure{"tau", n, "tau " + to_string(t) + " < " + to_string(tau_min)};
    return std::nullopt;
}

}  // namespace

ThickResult certify_thick(const Fragmentation& f, const Rational& A, const Rational& a,
                          const ThicknessValue& tau_min, std::size_t skip) {
    if (A <= 0) throw DomainError("certify_thick needs A > 0");
    const std::size_t last = f.last_index();
    if (skip > last) throw DomainError("certify_thick: skip exceeds the prefix");
    for (std::size_t n = skip; n <= last; ++n) {
        if (auto fail = check_fragment(f.prefix()[n], n, A, tau_min)) return *fail;
        if (n < last || f.tail()) {
            Rational d = fragment_distance(f, n);
            if (!(d < a))
                return CertificationFailure{"dist", n,
                                            "dist " + to_string(d) + " >= a = " + to_string(a)};
        }
    }
    // Every tail fragment is a translate of K_L at the same distance.
    return ThicknessCertificate{A, a, tau_min, skip, last + 1,
                                f.tail() ? TailProof::GeneratorUniform : TailProof::None};
}

SparseResult certify_sparse(const Fragmentation& f, const Rational& a) {
    const std::size_t last = f.last_index();
    for (std::size_t n = 0; n < last || (n == last && f.tail()); ++n) {
        Rational d = fragment_distance(f, n);
        if (d < a)
            return CertificationFailure{"dist", n, "dist " + to_string(d) + " < a = " + to_string(a)};
    }
    return SparsityCertificate{a, last + 1, f.tail() ? TailProof::GeneratorUniform : TailProof::None};
}

AdmissibleFunction make_collapse_counterexample(const Fragmentation& f, const Rational& eps) {
    if (eps <= 0 || eps >= Rational(1, 4)) throw DomainError("collapse counterexample needs 0 < eps < 1/4");
    if (f.prefix().front().min() < 0) throw DomainError("fragmentation must lie in [0, inf)");
    std::vector<std::pair<Rational, Rational>> pts{{0, 0}};
    for (std::size_t n = 0; n <= f.last_index(); ++n) {
        const auto& k = f.prefix()[n];
        if (k.diam() <= 0) throw DomainError("collapse counterexample needs fragments of positive diameter");
        Rational level(static_cast<unsigned long>(n));
        if (n == 0) {
            if (k.min() > 0) pts.emplace_back(k.min(), eps / 2);
        } else {
            pts.emplace_back(k.min(), level - eps);
        }
        pts.emplace_back(k.max(), level + eps);
    }
    const auto& last = f.prefix().back();
    if (f.tail()) {
        Rational gap = last.min() + f.tail()->period - last.max();
        PeriodicTail tail{{{gap, (1 - 2 * eps) / gap}, {last.diam(), 2 * eps / last.diam()}}};
        return AdmissibleFunction::pwa(std::move(pts), std::move(tail));
    }
    Rational slope = pts.size() >= 2 ? (pts.back().second - pts[pts.size() - 2].second) /
                                           (pts.back().first - pts[pts.size() - 2].first)
                                     : Rational(1);
    return AdmissibleFunction::pwa(std::move(pts), FinalSlope{slope});
}

std::vector<ImageEnclosure> image_fragments(const AdmissibleFunction& g, const Fragmentation& f,
                                            std::size_t count, unsigned long precision) {
    std::vector<ImageEnclosure> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) out.push_back(apply_to_set(g, f.fragment(n), precision));
    return out;
}

}  // namespace thicksum
