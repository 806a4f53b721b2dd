#ifndef THICKSUM_TEST_UTIL_HPP
#define THICKSUM_TEST_UTIL_HPP

#include <initializer_list>
#include <utility>
#include <vector>

#include "thicksum/interval.hpp"
#include "thicksum/rational.hpp"

namespace testutil {

inline thicksum::Rational R(const char* s) { return thicksum::parse_rational(s); }
inline thicksum::Rational R(long p, long q = 1) { return thicksum::make_rational(p, q); }

inline thicksum::IntervalUnion U(std::initializer_list<std::pair<thicksum::Rational, thicksum::Rational>> parts) {
    std::vector<thicksum::Interval> raw;
    for (const auto& [lo, hi] : parts) raw.emplace_back(lo, hi);
    return thicksum::normalize(raw);
}

}  // namespace testutil

#endif
