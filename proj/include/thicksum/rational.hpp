#ifndef THICKSUM_RATIONAL_HPP
#define THICKSUM_RATIONAL_HPP

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace thicksum {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal literal such as "-1.25e-3" into an
/// exact rational. Throws ParseError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Exact rendering: "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Decimal rendering with a fixed number of fractional digits (rounded toward
/// zero). For human-readable output only.
std::string to_decimal(const Rational& q, int digits = 6);

/// Builds p/q in canonical form.
Rational make_rational(long p, long q = 1);

/// 2^-bits as an exact rational.
Rational pow2_neg(unsigned long bits);

/// q^k for a nonnegative integer exponent.
Rational pow_int(const Rational& q, unsigned long k);

/// A nonnegative rational or +infinity. Infinity is a distinct state, never a
/// sentinel numeric value.
class ExtendedRational {
public:
    ExtendedRational() : value_(Rational(0)) {}
    ExtendedRational(Rational v) : value_(std::move(v)) {}  // NOLINT: implicit by design of the value type
    ExtendedRational(long v) : value_(Rational(v)) {}       // NOLINT

    static ExtendedRational infinity() {
        ExtendedRational e;
        e.value_.reset();
        return e;
    }

    bool is_infinite() const { return !value_.has_value(); }
    bool is_finite() const { return value_.has_value(); }

    /// Finite value; throws DomainError when infinite.
    const Rational& value() const;

    friend bool operator==(const ExtendedRational& a, const ExtendedRational& b);
    friend std::strong_ordering operator<=>(const ExtendedRational& a,
                                            const ExtendedRational& b);

private:
    std::optional<Rational> value_;
};

/// "inf" or the exact fraction.
std::string to_string(const ExtendedRational& e);

/// Accepts "inf" in addition to every format parse_rational accepts.
ExtendedRational parse_extended(std::string_view text);

}  // namespace thicksum

#endif
