#ifndef THICKSUM_FUNCTION_HPP
#define THICKSUM_FUNCTION_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "thicksum/enclosure.hpp"
#include "thicksum/interval.hpp"
#include "thicksum/rational.hpp"

namespace thicksum {

class AdmissibleFunction;

/// One affine piece of a periodic tail.
struct Segment {
    Rational length;
    Rational slope;
};

struct NoTail {};
struct FinalSlope {
    Rational slope;
};
/// The listed segments repeat forever after the last breakpoint.
struct PeriodicTail {
    std::vector<Segment> segments;
};
using PwaTail = std::variant<NoTail, FinalSlope, PeriodicTail>;

/// Continuous piecewise-affine function through (x_i, y_i), x_0 = 0, both
/// coordinates strictly increasing, continued past the last breakpoint by its
/// tail. Without a declared tail the function is unknown beyond the last
/// breakpoint.
struct PiecewiseAffine {
    std::vector<std::pair<Rational, Rational>> points;
    PwaTail tail;
};
struct Power {
    Rational m;
};
/// e^{a x^b}
struct StretchedExp {
    Rational a;
    Rational b;
};
/// e^{r x}
struct Exp {
    Rational r;
};
struct ScaledSum {
    std::vector<std::pair<Rational, AdmissibleFunction>> terms;
};
struct Product {
    std::vector<AdmissibleFunction> factors;  // exactly two
};

using FunctionVariant =
    std::variant<PiecewiseAffine, Power, StretchedExp, Exp, ScaledSum, Product>;

/**
 * Continuous, strictly increasing g: R+ -> R+ with g(x) -> inf. Immutable and
 * cheap to copy; the variant payload is shared.
 */
class AdmissibleFunction {
public:
    static AdmissibleFunction pwa(std::vector<std::pair<Rational, Rational>> points, PwaTail tail);
    static AdmissibleFunction identity();
    static AdmissibleFunction power(Rational m);
    static AdmissibleFunction stretched_exp(Rational a, Rational b);
    static AdmissibleFunction exp(Rational r);
    static AdmissibleFunction scaled_sum(std::vector<std::pair<Rational, AdmissibleFunction>> terms);
    static AdmissibleFunction product(AdmissibleFunction f, AdmissibleFunction g);

    const FunctionVariant& variant() const { return *node_; }

    template <class T>
    const T* as() const {
        return std::get_if<T>(node_.get());
    }

    /// True when every value and one-sided slope is an exact rational.
    bool is_exact() const;

    std::string describe() const;

private:
    explicit AdmissibleFunction(FunctionVariant v)
        : node_(std::make_shared<const FunctionVariant>(std::move(v))) {}
    std::shared_ptr<const FunctionVariant> node_;
};

/// Default target width exponent for enclosures.
inline constexpr unsigned long kDefaultPrecision = 64;

/// Enclosure of g(x), width <= 2^-precision; exact for exact functions.
Enclosure eval(const AdmissibleFunction& g, const Rational& x,
               unsigned long precision = kDefaultPrecision);

namespace detail {
/// g(x) at working precision `prec`. Accuracy is relative, which suits
/// comparisons between very large values.
RealInterval eval_interval(const AdmissibleFunction& g, const Rational& x, mpfr_prec_t prec);
}  // namespace detail

/// Enclosure of a derivative that may be +infinite (e.g. x^{1/2} at 0).
struct SlopeEnclosure {
    Enclosure value;
    bool infinite = false;
};

/// Upper and lower derivatives D+(g,x), D-(g,x).
struct DerivativePair {
    SlopeEnclosure upper;
    SlopeEnclosure lower;
};

DerivativePair upper_lower_derivative(const AdmissibleFunction& g, const Rational& x,
                                      unsigned long precision = kDefaultPrecision);

/**
 * Certified bounds on a relative-variation quantity. When `log_value` is set
 * the quantity equals e^{log_value} exactly, which lets callers compare
 * closed forms such as e^{2 r g} == (e^{r g})^2 without enclosure slack.
 */
struct LambdaEstimate {
    ExtendedRational lower = 1;
    ExtendedRational upper = 1;
    bool exact = true;
    std::optional<Rational> log_value;

    static LambdaEstimate exact_value(const Rational& v);
    static LambdaEstimate exact_infinity();
    static LambdaEstimate exp_of(const Rational& q, unsigned long precision);
    static LambdaEstimate bounds(ExtendedRational lo, ExtendedRational hi);

    bool is_infinite() const { return lower.is_infinite(); }
};

LambdaEstimate operator*(const LambdaEstimate& a, const LambdaEstimate& b);
LambdaEstimate max(const LambdaEstimate& a, const LambdaEstimate& b);
/// Certified a <= b (closed forms compared symbolically when available).
bool certainly_leq(const LambdaEstimate& a, const LambdaEstimate& b);
/// Certified a < c for a rational constant c.
bool certainly_less(const LambdaEstimate& a, const Rational& c);
std::string to_string(const LambdaEstimate& e);

/// sup{ D+(g,x) / D-(g,y) : x, y >= M, |x - y| <= gamma }.
LambdaEstimate lambda(const AdmissibleFunction& g, const Rational& gamma, const Rational& m,
                      unsigned long precision = kDefaultPrecision);

/// lim_{M -> inf} lambda(g, gamma, M).
LambdaEstimate lambda_limit(const AdmissibleFunction& g, const Rational& gamma,
                            unsigned long precision = kDefaultPrecision);

/// Upper bound on sup{ g(x) / g(y) : x, y >= M, |x - y| <= gamma }.
ExtendedRational value_ratio_bound(const AdmissibleFunction& g, const Rational& gamma,
                                   const Rational& m, unsigned long precision = kDefaultPrecision);

/// Bounds on lim_{M -> inf} sup{ g(x) / g(y) : x, y >= M, |x - y| <= gamma }.
LambdaEstimate value_ratio_limit(const AdmissibleFunction& g, const Rational& gamma,
                                 unsigned long precision = kDefaultPrecision);

enum class RelativeVariation { TRV, BRV_not_TRV, not_BRV, unknown };
const char* to_string(RelativeVariation c);

/// Classification from lambda_limit at the given gamma (1 by default; the
/// class does not depend on gamma).
RelativeVariation classify(const AdmissibleFunction& g, const Rational& gamma = 1,
                           unsigned long precision = kDefaultPrecision);

/// Monotone image g[K]. `outer` contains the true image; `inner`, when
/// present, is contained in it. For exact functions both equal the image.
struct ImageEnclosure {
    IntervalUnion outer;
    std::optional<IntervalUnion> inner;
    bool exact = false;
};

ImageEnclosure apply_to_set(const AdmissibleFunction& g, const IntervalUnion& k,
                            unsigned long precision = kDefaultPrecision);

/// Smallest-ish rational x (within 2^-precision relative bisection) with
/// g(x) >= target, certified.
Rational preimage_upper(const AdmissibleFunction& g, const Rational& target,
                        unsigned long precision = kDefaultPrecision);

/**
 * Piecewise-affine g <= h beyond x_1 that is not of bounded relative
 * variation: g(y_n) = n/2 with y_n >= x_n (h(x_n) = n) and
 * y_{n+1} - y_n >= n (y_n - y_{n-1}), truncated after `breakpoints` nodes and
 * continued with the last slope.
 */
AdmissibleFunction construct_non_brv(const AdmissibleFunction& h, std::size_t breakpoints,
                                     unsigned long precision = kDefaultPrecision);

/// Sum of two piecewise-affine functions as a piecewise-affine function.
/// Both tails must be of the same kind; periodic tails must share their
/// segment lengths.
AdmissibleFunction add_pwa(const AdmissibleFunction& f, const AdmissibleFunction& g);

}  // namespace thicksum

#endif
