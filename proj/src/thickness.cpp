#include "thicksum/thickness.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "thicksum/errors.hpp"

namespace thicksum {

GapPresentation::GapPresentation(std::vector<std::size_t> order, std::size_t gap_count)
    : order_(std::move(order)) {
    if (order_.size() != gap_count)
        throw DomainError("presentation must list every gap exactly once");
    std::vector<bool> seen(gap_count, false);
    for (auto i : order_) {
        if (i >= gap_count || seen[i]) throw DomainError("presentation is not a permutation");
        seen[i] = true;
    }
}

GapPresentation GapPresentation::canonical(const IntervalUnion& k) {
    const auto& parts = k.parts();
    const std::size_t g = parts.size() - 1;
    std::vector<Rational> len(g);
    for (std::size_t i = 0; i < g; ++i) len[i] = parts[i + 1].lo - parts[i].hi;
    std::vector<std::size_t> order(g);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return len[a] > len[b]; });
    return GapPresentation(std::move(order), g);
}

ThicknessValue tau_for_presentation(const IntervalUnion& k, const GapPresentation& p) {
    const auto& parts = k.parts();
    if (parts.size() == 1) return ThicknessValue::infinity();
    if (p.order().size() != parts.size() - 1)
        throw DomainError("presentation does not match the gap count of the set");

    // Gap i sits between parts[i] and parts[i+1]. Placed gaps are tracked by
    // index, which orders them by position.
    std::set<std::size_t> placed;
    std::optional<Rational> best;
    for (std::size_t i : p.order()) {
        auto right = placed.upper_bound(i);
        const Rational& left_end =
            right == placed.begin() ? parts.front().lo : parts[*std::prev(right) + 1].lo;
        const Rational& right_end = right == placed.end() ? parts.back().hi : parts[*right].hi;
        Rational gap = parts[i + 1].lo - parts[i].hi;
        Rational bridge = std::min(parts[i].hi - left_end, right_end - parts[i + 1].lo);
        Rational ratio = bridge / gap;
        if (!best || ratio < *best) best = std::move(ratio);
        placed.insert(i);
    }
    return *best;
}

ThicknessValue tau(const IntervalUnion& k) {
    if (k.is_interval()) return ThicknessValue::infinity();
    return tau_for_presentation(k, GapPresentation::canonical(k));
}

ThicknessValue tau_bruteforce(const IntervalUnion& k) {
    if (k.is_interval()) return ThicknessValue::infinity();
    const std::size_t g = k.size() - 1;
    if (g > kBruteforceGapLimit)
        throw RefusedError("tau_bruteforce: " + std::to_string(g) + " gaps exceeds the limit of " +
                           std::to_string(kBruteforceGapLimit));
    std::vector<std::size_t> order(g);
    std::iota(order.begin(), order.end(), std::size_t{0});
    ThicknessValue best = 0;
    do {
        auto t = tau_for_presentation(k, GapPresentation(order, g));
        if (t > best) best = t;
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

bool gap_lemma_holds(const ThicknessValue& tau_k, const Rational& gap_k, const Rational& diam_k,
                     const ThicknessValue& tau_k2, const Rational& gap_k2,
                     const Rational& diam_k2) {
    bool product_ok;
    if (tau_k.is_infinite() || tau_k2.is_infinite())
        product_ok = true;
    else
        product_ok = tau_k.value() * tau_k2.value() > 1;
    return product_ok && gap_k2 <= diam_k && gap_k <= diam_k2;
}

bool gap_lemma_applies(const IntervalUnion& k, const IntervalUnion& k2) {
    return gap_lemma_holds(tau(k), k.largest_gap_length(), k.diam(), tau(k2),
                           k2.largest_gap_length(), k2.diam());
}

bool longest_gap_bound(const IntervalUnion& k, const Rational& beta) {
    if (!(tau(k) > ExtendedRational(beta)))
        throw RefusedError("longest_gap_bound: requires tau(K) > beta = " + to_string(beta));
    if (beta < 0) throw RefusedError("longest_gap_bound: beta must be nonnegative");
    return k.largest_gap_length() * (1 + 2 * beta) <= k.diam();
}

}  // namespace thicksum
