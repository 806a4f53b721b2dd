#include "thicksum/rational.hpp"

#include <cctype>

#include "thicksum/errors.hpp"

namespace thicksum {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Rational pow10(long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
    Rational r(p);
    if (e < 0) r = 1 / r;
    return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
    s = s.substr(start);
    if (s.empty()) throw ParseError("empty number");

    bool negative = false;
    std::string_view body(s);
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }

    Rational result;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw ParseError("malformed fraction '" + s + "'");
        mpz_class n(std::string(num), 10), d(std::string(den), 10);
        if (d == 0) throw ParseError("zero denominator in '" + s + "'");
        result = Rational(n, d);
        result.canonicalize();
    } else {
        long exponent = 0;
        auto e = body.find_first_of("eE");
        std::string_view mantissa = body.substr(0, e);
        if (e != std::string_view::npos) {
            std::string_view exp_text = body.substr(e + 1);
            bool exp_negative = false;
            if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
                exp_negative = exp_text.front() == '-';
                exp_text.remove_prefix(1);
            }
            if (!all_digits(exp_text) || exp_text.size() > 6)
                throw ParseError("malformed exponent in '" + s + "'");
            exponent = std::stol(std::string(exp_text));
            if (exp_negative) exponent = -exponent;
        }
        auto dot = mantissa.find('.');
        std::string_view int_part = mantissa.substr(0, dot);
        std::string_view frac_part =
            dot == std::string_view::npos ? std::string_view{} : mantissa.substr(dot + 1);
        if (int_part.empty() && frac_part.empty()) throw ParseError("malformed number '" + s + "'");
        if ((!int_part.empty() && !all_digits(int_part)) ||
            (!frac_part.empty() && !all_digits(frac_part)))
            throw ParseError("malformed number '" + s + "'");
        std::string digits = std::string(int_part) + std::string(frac_part);
        mpz_class n(digits, 10);
        result = Rational(n) * pow10(exponent - static_cast<long>(frac_part.size()));
    }
    if (negative) result = -result;
    return result;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

std::string to_decimal(const Rational& q, int digits) {
    Rational scaled = abs(q) * pow10(digits);
    mpz_class whole = scaled.get_num() / scaled.get_den();
    std::string s = whole.get_str(10);
    if (digits > 0) {
        if (s.size() <= static_cast<std::size_t>(digits))
            s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    }
    return (q < 0 ? "-" : "") + s;
}

Rational make_rational(long p, long q) {
    if (q == 0) throw DomainError("zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

Rational pow2_neg(unsigned long bits) {
    mpz_class d = 1;
    d <<= bits;
    return Rational(mpz_class(1), d);
}

Rational pow_int(const Rational& q, unsigned long k) {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), q.get_num_mpz_t(), k);
    mpz_pow_ui(d.get_mpz_t(), q.get_den_mpz_t(), k);
    return Rational(n, d);
}

const Rational& ExtendedRational::value() const {
    if (!value_) throw DomainError("value of an infinite quantity requested");
    return *value_;
}

bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
    return *a.value_ == *b.value_;
}

std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.is_infinite())
        return b.is_infinite() ? std::strong_ordering::equal : std::strong_ordering::greater;
    if (b.is_infinite()) return std::strong_ordering::less;
    int c = cmp(*a.value_, *b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string to_string(const ExtendedRational& e) {
    return e.is_infinite() ? std::string("inf") : to_string(e.value());
}

ExtendedRational parse_extended(std::string_view text) {
    if (text == "inf" || text == "+inf" || text == "infinity") return ExtendedRational::infinity();
    return parse_rational(text);
}

}  // namespace thicksum
