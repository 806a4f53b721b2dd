#include "thicksum/enclosure.hpp"

#include <algorithm>
#include <array>

#include "thicksum/errors.hpp"

namespace thicksum {

namespace {

constexpr unsigned long kMaxWorkingBits = 1UL << 17;

Rational min4(const std::array<Rational, 4>& v) { return *std::min_element(v.begin(), v.end()); }
Rational max4(const std::array<Rational, 4>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Enclosure operator-(const Enclosure& a, const Enclosure& b) { return {a.lo - b.hi, a.hi - b.lo}; }

Enclosure mul_nonneg(const Enclosure& a, const Enclosure& b) {
    if (a.lo >= 0 && b.lo >= 0) return {a.lo * b.lo, a.hi * b.hi};
    std::array<Rational, 4> v{a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {min4(v), max4(v)};
}

Enclosure scale(const Enclosure& a, const Rational& c) { return {a.lo * c, a.hi * c}; }

std::string to_string(const Enclosure& e) {
    if (e.is_exact()) return to_string(e.lo);
    return "[" + to_string(e.lo) + "," + to_string(e.hi) + "]";
}

const char* to_string(Comparison c) {
    switch (c) {
        case Comparison::Less: return "less";
        case Comparison::Equal: return "equal";
        case Comparison::Greater: return "greater";
        case Comparison::Unresolved: return "unresolved";
    }
    return "?";
}

namespace detail {

Mpfr::Mpfr(mpfr_prec_t prec) {
    mpfr_init2(value_, prec);
    mpfr_set_zero(value_, 1);
}

Mpfr::Mpfr(const Mpfr& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

Mpfr::Mpfr(Mpfr&& other) noexcept {
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
}

Mpfr& Mpfr::operator=(Mpfr other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

Mpfr::~Mpfr() { mpfr_clear(value_); }

RealInterval::RealInterval(const Rational& lo, const Rational& hi, mpfr_prec_t prec)
    : prec_(prec), lo_(prec), hi_(prec) {
    if (lo > hi) throw DomainError("RealInterval: lo > hi");
    mpfr_set_q(lo_.get(), lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_.get(), hi.get_mpq_t(), MPFR_RNDU);
}

RealInterval RealInterval::operator+(const RealInterval& o) const {
    Mpfr lo(prec_), hi(prec_);
    mpfr_add(lo.get(), lo_.get(), o.lo_.get(), MPFR_RNDD);
    mpfr_add(hi.get(), hi_.get(), o.hi_.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), prec_};
}

RealInterval RealInterval::operator-(const RealInterval& o) const {
    Mpfr lo(prec_), hi(prec_);
    mpfr_sub(lo.get(), lo_.get(), o.hi_.get(), MPFR_RNDD);
    mpfr_sub(hi.get(), hi_.get(), o.lo_.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), prec_};
}

RealInterval RealInterval::operator*(const RealInterval& o) const {
    Mpfr lo(prec_), hi(prec_), t(prec_);
    const std::array<std::pair<mpfr_srcptr, mpfr_srcptr>, 4> pairs{{
        {lo_.get(), o.lo_.get()},
        {lo_.get(), o.hi_.get()},
        {hi_.get(), o.lo_.get()},
        {hi_.get(), o.hi_.get()},
    }};
    bool first = true;
    for (auto [x, y] : pairs) {
        mpfr_mul(t.get(), x, y, MPFR_RNDD);
        if (first || mpfr_less_p(t.get(), lo.get())) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
        mpfr_mul(t.get(), x, y, MPFR_RNDU);
        if (first || mpfr_greater_p(t.get(), hi.get())) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
        first = false;
    }
    return {std::move(lo), std::move(hi), prec_};
}

RealInterval RealInterval::operator/(const RealInterval& o) const {
    bool positive = mpfr_sgn(o.lo_.get()) > 0;
    bool negative = mpfr_sgn(o.hi_.get()) < 0;
    if (!positive && !negative) throw DomainError("RealInterval: division by an interval containing 0");
    Mpfr lo(prec_), hi(prec_);
    mpfr_ui_div(lo.get(), 1, o.hi_.get(), MPFR_RNDD);
    mpfr_ui_div(hi.get(), 1, o.lo_.get(), MPFR_RNDU);
    return *this * RealInterval(std::move(lo), std::move(hi), prec_);
}

RealInterval RealInterval::exp() const {
    Mpfr lo(prec_), hi(prec_);
    mpfr_exp(lo.get(), lo_.get(), MPFR_RNDD);
    mpfr_exp(hi.get(), hi_.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), prec_};
}

RealInterval RealInterval::log() const {
    if (!strictly_positive()) throw DomainError("RealInterval: log of a non-positive interval");
    Mpfr lo(prec_), hi(prec_);
    mpfr_log(lo.get(), lo_.get(), MPFR_RNDD);
    mpfr_log(hi.get(), hi_.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), prec_};
}

RealInterval RealInterval::pow(const RealInterval& q) const { return (q * log()).exp(); }

bool RealInterval::strictly_positive() const { return mpfr_sgn(lo_.get()) > 0; }

Enclosure RealInterval::to_enclosure() const {
    if (!mpfr_number_p(lo_.get()) || !mpfr_number_p(hi_.get()))
        throw RefusedError("enclosure overflowed the floating-point exponent range");
    Rational lo, hi;
    mpfr_get_q(lo.get_mpq_t(), lo_.get());
    mpfr_get_q(hi.get_mpq_t(), hi_.get());
    return {lo, hi};
}

}  // namespace detail

Enclosure certify(const std::function<detail::RealInterval(mpfr_prec_t)>& expr,
                  unsigned long target_bits) {
    const Rational target = pow2_neg(target_bits);
    unsigned long prec = target_bits + 64;
    while (true) {
        Enclosure e = expr(static_cast<mpfr_prec_t>(prec)).to_enclosure();
        if (e.width() <= target) return e;
        if (prec >= kMaxWorkingBits)
            throw RefusedError("could not reach enclosure width 2^-" + std::to_string(target_bits) +
                               " within the working-precision cap");
        // The width scales like 2^(magnitude - prec); jump straight to a
        // precision that should suffice instead of doubling blindly.
        long excess = static_cast<long>(mpz_sizeinbase(e.width().get_num_mpz_t(), 2)) -
                      static_cast<long>(mpz_sizeinbase(e.width().get_den_mpz_t(), 2)) +
                      static_cast<long>(target_bits);
        prec = std::min(kMaxWorkingBits,
                        std::max(prec * 2, prec + static_cast<unsigned long>(std::max(0L, excess)) + 32));
    }
}

Enclosure exp_enclosure(const Rational& q, unsigned long target_bits) {
    if (q == 0) return Enclosure::exact(1);
    return certify([&](mpfr_prec_t p) { return detail::RealInterval::point(q, p).exp(); },
                   target_bits);
}

Enclosure log_enclosure(const Rational& q, unsigned long target_bits) {
    if (q <= 0) throw DomainError("log of a non-positive number");
    if (q == 1) return Enclosure::exact(0);
    return certify([&](mpfr_prec_t p) { return detail::RealInterval::point(q, p).log(); },
                   target_bits);
}

Enclosure pow_enclosure(const Rational& x, const Rational& q, unsigned long target_bits) {
    if (x < 0) throw DomainError("pow of a negative base");
    if (q <= 0) throw DomainError("pow with a non-positive exponent");
    if (x == 0) return Enclosure::exact(0);
    if (q.get_den() == 1 && q.get_num().fits_ulong_p())
        return Enclosure::exact(pow_int(x, q.get_num().get_ui()));
    return certify(
        [&](mpfr_prec_t p) {
            return detail::RealInterval::point(x, p).pow(detail::RealInterval::point(q, p));
        },
        target_bits);
}

Comparison compare_refined(const std::function<Enclosure(unsigned long)>& enclose,
                           const Rational& c, unsigned long start_bits, unsigned long max_bits) {
    for (unsigned long bits = start_bits;; bits *= 2) {
        Enclosure e = enclose(bits);
        if (e.is_exact() && e.lo == c) return Comparison::Equal;
        if (e.hi < c) return Comparison::Less;
        if (e.lo > c) return Comparison::Greater;
        if (bits >= max_bits) return Comparison::Unresolved;
    }
}

Comparison compare_exp(const Rational& q, const Rational& c, unsigned long start_bits,
                       unsigned long max_bits) {
    return compare_refined([&](unsigned long bits) { return exp_enclosure(q, bits); }, c,
                           start_bits, max_bits);
}

}  // namespace thicksum
