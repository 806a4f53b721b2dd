#ifndef THICKSUM_INTERVAL_HPP
#define THICKSUM_INTERVAL_HPP

#include <span>
#include <string>
#include <vector>

#include "thicksum/rational.hpp"

namespace thicksum {

/// Closed interval [lo, hi] with exact endpoints; lo == hi is a point.
struct Interval {
    Rational lo;
    Rational hi;

    Interval() = default;
    /// Throws DomainError when lo > hi.
    Interval(Rational lo_, Rational hi_);

    Rational length() const { return hi - lo; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

std::string to_string(const Interval& i);

/**
 * Finite union of closed intervals in canonical form: parts sorted, pairwise
 * disjoint, separated by gaps of positive length. Always nonempty.
 *
 * The only way to obtain one is through normalize() (or the single-interval
 * constructor), so every value in circulation is canonical.
 */
class IntervalUnion {
public:
    explicit IntervalUnion(Interval single);

    const std::vector<Interval>& parts() const { return parts_; }
    std::size_t size() const { return parts_.size(); }

    const Rational& min() const { return parts_.front().lo; }
    const Rational& max() const { return parts_.back().hi; }
    Interval hull() const { return Interval(min(), max()); }
    Rational diam() const { return max() - min(); }
    bool is_interval() const { return parts_.size() == 1; }

    /// Bounded components of hull \ K, returned as (left end, right end)
    /// pairs in left-to-right order. Empty for a single interval.
    std::vector<Interval> gaps() const;
    Rational largest_gap_length() const;

    bool contains(const Rational& x) const;
    /// True iff J is a subset of this set.
    bool covers(const Interval& j) const;

    /// Image under x -> scale*x + shift with scale > 0.
    IntervalUnion affine(const Rational& scale, const Rational& shift) const;

    friend bool operator==(const IntervalUnion& a, const IntervalUnion& b) {
        return a.parts_ == b.parts_;
    }

    friend IntervalUnion normalize(std::vector<Interval> raw);

private:
    IntervalUnion() = default;
    std::vector<Interval> parts_;
};

/// Sorts and merges overlapping or touching intervals. Throws EmptySetError
/// on empty input.
IntervalUnion normalize(std::vector<Interval> raw);

/// Exact {a + b : a in A, b in B}.
IntervalUnion minkowski_sum(const IntervalUnion& a, const IntervalUnion& b);

/// Union of several canonical sets.
IntervalUnion set_union(std::span<const IntervalUnion> sets);

std::string to_string(const IntervalUnion& k);

/// Depth-k approximant of the middle-alpha Cantor set in [0, 1]: every level
/// removes the open middle alpha-fraction of each remaining interval.
IntervalUnion middle_cantor(const Rational& alpha, unsigned depth);

}  // namespace thicksum

#endif
