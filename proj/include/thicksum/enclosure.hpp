#ifndef THICKSUM_ENCLOSURE_HPP
#define THICKSUM_ENCLOSURE_HPP

#include <functional>
#include <string>

#include <mpfr.h>

#include "thicksum/rational.hpp"

namespace thicksum {

/// Exact rational bounds [lo, hi] certified to contain a real quantity.
struct Enclosure {
    Rational lo;
    Rational hi;

    static Enclosure exact(const Rational& v) { return {v, v}; }

    bool is_exact() const { return lo == hi; }
    Rational width() const { return hi - lo; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }

    // Certified comparisons: true only when every point of the enclosure
    // satisfies the relation.
    bool certainly_less(const Rational& x) const { return hi < x; }
    bool certainly_leq(const Rational& x) const { return hi <= x; }
    bool certainly_greater(const Rational& x) const { return lo > x; }
    bool certainly_geq(const Rational& x) const { return lo >= x; }
};

Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
/// Product of enclosures of nonnegative quantities.
Enclosure mul_nonneg(const Enclosure& a, const Enclosure& b);
Enclosure scale(const Enclosure& a, const Rational& c);  // c >= 0

std::string to_string(const Enclosure& e);

namespace detail {

/// Owning wrapper around an mpfr_t.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec);
    Mpfr(const Mpfr& other);
    Mpfr(Mpfr&& other) noexcept;
    Mpfr& operator=(Mpfr other) noexcept;
    ~Mpfr();

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }

private:
    mpfr_t value_;
};

/**
 * Interval of two MPFR numbers maintained with outward (directed) rounding.
 * Each operation widens lo downward and hi upward, so the represented
 * interval always contains the exact result.
 */
class RealInterval {
public:
    RealInterval(const Rational& lo, const Rational& hi, mpfr_prec_t prec);
    static RealInterval point(const Rational& v, mpfr_prec_t prec) { return {v, v, prec}; }

    mpfr_prec_t precision() const { return prec_; }

    RealInterval operator+(const RealInterval& o) const;
    RealInterval operator-(const RealInterval& o) const;
    RealInterval operator*(const RealInterval& o) const;
    /// Requires o strictly positive or strictly negative.
    RealInterval operator/(const RealInterval& o) const;

    RealInterval exp() const;
    /// Requires a strictly positive interval.
    RealInterval log() const;
    /// x^q for x >= 0 via exp(q log x); exact rational powers are handled by
    /// the caller.
    RealInterval pow(const RealInterval& q) const;

    bool strictly_positive() const;
    Enclosure to_enclosure() const;

private:
    RealInterval(Mpfr lo, Mpfr hi, mpfr_prec_t prec)
        : prec_(prec), lo_(std::move(lo)), hi_(std::move(hi)) {}

    mpfr_prec_t prec_;
    Mpfr lo_;
    Mpfr hi_;
};

}  // namespace detail

/// Re-evaluates `expr` at increasing working precision until the enclosure is
/// no wider than 2^-target_bits. Throws RefusedError when the working-precision
/// cap is reached first.
Enclosure certify(const std::function<detail::RealInterval(mpfr_prec_t)>& expr,
                  unsigned long target_bits);

/// Enclosure of e^q for rational q, width <= 2^-target_bits.
Enclosure exp_enclosure(const Rational& q, unsigned long target_bits);

/// Enclosure of log(q) for rational q > 0.
Enclosure log_enclosure(const Rational& q, unsigned long target_bits);

/// Enclosure of x^q for rational x >= 0 and rational q > 0; exact when q is
/// an integer.
Enclosure pow_enclosure(const Rational& x, const Rational& q, unsigned long target_bits);

enum class Comparison { Less, Equal, Greater, Unresolved };

const char* to_string(Comparison c);

/// Compares e^q against the rational c > 0, tightening the enclosure until the
/// comparison resolves or the precision cap is hit. For rational q != 0, e^q is
/// transcendental, so only q == 0 can produce Equal.
Comparison compare_exp(const Rational& q, const Rational& c, unsigned long start_bits = 64,
                       unsigned long max_bits = 1UL << 14);

/// Resolves a comparison of an enclosed quantity against a rational, given a
/// way to recompute the enclosure at a requested target width.
Comparison compare_refined(const std::function<Enclosure(unsigned long)>& enclose,
                           const Rational& c, unsigned long start_bits = 64,
                           unsigned long max_bits = 1UL << 14);

}  // namespace thicksum

#endif
