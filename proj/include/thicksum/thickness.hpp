#ifndef THICKSUM_THICKNESS_HPP
#define THICKSUM_THICKNESS_HPP

#include <cstddef>
#include <vector>

#include "thicksum/interval.hpp"
#include "thicksum/rational.hpp"

namespace thicksum {

/// Thickness value: a nonnegative rational, or +inf exactly when the set is a
/// single interval.
using ThicknessValue = ExtendedRational;

/// An ordering of the gaps of a compact set, stored as a permutation of the
/// indices into IntervalUnion::gaps().
class GapPresentation {
public:
    /// Validates that `order` is a permutation of 0..gap_count-1.
    GapPresentation(std::vector<std::size_t> order, std::size_t gap_count);

    /// Gaps by nonincreasing length, ties broken left to right. This ordering
    /// realizes the supremum over presentations.
    static GapPresentation canonical(const IntervalUnion& k);

    const std::vector<std::size_t>& order() const { return order_; }

private:
    std::vector<std::size_t> order_;
};

/// inf over the listed gaps U and their endpoints u of |B|/|U|, where B is the
/// component of hull \ (U_1 u ... u U_n) containing u. +inf for an interval.
ThicknessValue tau_for_presentation(const IntervalUnion& k, const GapPresentation& p);

/// Thickness via the canonical presentation.
ThicknessValue tau(const IntervalUnion& k);

/// Maximum over all gap orderings. Refuses sets with more than 8 gaps.
ThicknessValue tau_bruteforce(const IntervalUnion& k);

inline constexpr std::size_t kBruteforceGapLimit = 8;

/// Newhouse gap-lemma hypotheses: tau(K) tau(K2) > 1, and the largest gap of
/// each set is at most the diameter of the other. When true,
/// K + K2 = [min K + min K2, max K + max K2].
bool gap_lemma_applies(const IntervalUnion& k, const IntervalUnion& k2);

/// Same predicate from precomputed summaries; an infinite thickness makes the
/// product condition hold regardless of the other factor.
bool gap_lemma_holds(const ThicknessValue& tau_k, const Rational& gap_k, const Rational& diam_k,
                     const ThicknessValue& tau_k2, const Rational& gap_k2,
                     const Rational& diam_k2);

/// Checks largest_gap(K) <= diam(K) / (1 + 2 beta). Refuses unless tau(K) > beta.
bool longest_gap_bound(const IntervalUnion& k, const Rational& beta);

}  // namespace thicksum

#endif
