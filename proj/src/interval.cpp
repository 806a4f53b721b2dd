#include "thicksum/interval.hpp"

#include <algorithm>

#include "thicksum/errors.hpp"

namespace thicksum {

Interval::Interval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo > hi) throw DomainError("interval with lo > hi: " + to_string(lo) + " > " + to_string(hi));
}

std::string to_string(const Interval& i) {
    return "[" + to_string(i.lo) + "," + to_string(i.hi) + "]";
}

IntervalUnion::IntervalUnion(Interval single) { parts_.push_back(std::move(single)); }

IntervalUnion normalize(std::vector<Interval> raw) {
    if (raw.empty()) throw EmptySetError("normalize: empty interval list");
    std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
        int c = cmp(a.lo, b.lo);
        return c != 0 ? c < 0 : a.hi < b.hi;
    });
    IntervalUnion out;
    out.parts_.reserve(raw.size());
    for (auto& iv : raw) {
        if (!out.parts_.empty() && iv.lo <= out.parts_.back().hi) {
            if (iv.hi > out.parts_.back().hi) out.parts_.back().hi = std::move(iv.hi);
        } else {
            out.parts_.push_back(std::move(iv));
        }
    }
    out.parts_.shrink_to_fit();
    return out;
}

std::vector<Interval> IntervalUnion::gaps() const {
    std::vector<Interval> out;
    out.reserve(parts_.size() > 0 ? parts_.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < parts_.size(); ++i)
        out.emplace_back(parts_[i].hi, parts_[i + 1].lo);
    return out;
}

Rational IntervalUnion::largest_gap_length() const {
    Rational best = 0;
    for (std::size_t i = 0; i + 1 < parts_.size(); ++i) {
        Rational len = parts_[i + 1].lo - parts_[i].hi;
        if (len > best) best = len;
    }
    return best;
}

bool IntervalUnion::contains(const Rational& x) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                               [](const Rational& v, const Interval& p) { return v < p.lo; });
    if (it == parts_.begin()) return false;
    return x <= std::prev(it)->hi;
}

bool IntervalUnion::covers(const Interval& j) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), j.lo,
                               [](const Rational& v, const Interval& p) { return v < p.lo; });
    if (it == parts_.begin()) return false;
    return j.hi <= std::prev(it)->hi;
}

IntervalUnion IntervalUnion::affine(const Rational& scale, const Rational& shift) const {
    if (scale <= 0) throw DomainError("affine image needs a positive scale");
    IntervalUnion out;
    out.parts_.reserve(parts_.size());
    for (const auto& p : parts_) out.parts_.emplace_back(scale * p.lo + shift, scale * p.hi + shift);
    return out;
}

IntervalUnion minkowski_sum(const IntervalUnion& a, const IntervalUnion& b) {
    std::vector<Interval> raw;
    raw.reserve(a.size() * b.size());
    for (const auto& p : a.parts())
        for (const auto& q : b.parts()) raw.emplace_back(p.lo + q.lo, p.hi + q.hi);
    return normalize(std::move(raw));
}

IntervalUnion set_union(std::span<const IntervalUnion> sets) {
    std::vector<Interval> raw;
    for (const auto& s : sets) raw.insert(raw.end(), s.parts().begin(), s.parts().end());
    return normalize(std::move(raw));
}

std::string to_string(const IntervalUnion& k) {
    std::string s = "[";
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) s += ",";
        s += to_string(k.parts()[i]);
    }
    return s + "]";
}

IntervalUnion middle_cantor(const Rational& alpha, unsigned depth) {
    if (alpha <= 0 || alpha >= 1) throw DomainError("middle_cantor: alpha must lie in (0,1)");
    std::vector<Interval> level{Interval(0, 1)};
    Rational keep = (1 - alpha) / 2;
    for (unsigned d = 0; d < depth; ++d) {
        std::vector<Interval> next;
        next.reserve(level.size() * 2);
        for (const auto& iv : level) {
            Rational piece = iv.length() * keep;
            next.emplace_back(iv.lo, iv.lo + piece);
            next.emplace_back(iv.hi - piece, iv.hi);
        }
        level = std::move(next);
    }
    return normalize(std::move(level));
}

}  // namespace thicksum
