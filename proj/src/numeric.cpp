#include "cistair/numeric.hpp"

#include <cstdio>

namespace cistair {

std::string Scalar<double>::to_string(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

bool exact_isqrt(const mpz_class& v, mpz_class& root) {
    if (sgn(v) < 0) return false;
    mpz_class rem;
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t());
    return sgn(rem) == 0;
}

}  // namespace

Rational Scalar<Rational>::sqrt(const Rational& x) {
    mpz_class n, d;
    if (!exact_isqrt(x.get_num(), n) || !exact_isqrt(x.get_den(), d))
        fail(ErrorCode::NotExact, "square root of " + x.get_str() + " is not rational");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) fail(ErrorCode::InvalidInput, "empty rational literal");
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational r;
        if (r.set_str(text, 10) != 0) fail(ErrorCode::InvalidInput, "bad rational literal: " + text);
        if (sgn(r.get_den()) == 0) fail(ErrorCode::InvalidInput, "zero denominator: " + text);
        r.canonicalize();
        return r;
    }
    // Decimal: sign, digits, optional fraction, optional exponent.
    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') neg = text[i++] == '-';
    std::string digits;
    long scale = 0;
    bool seen_dot = false, any = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            any = true;
            if (seen_dot) --scale;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (!any) fail(ErrorCode::InvalidInput, "bad numeric literal: " + text);
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') fail(ErrorCode::InvalidInput, "bad numeric literal: " + text);
        try {
            std::size_t used = 0;
            scale += std::stol(text.substr(i + 1), &used);
            if (i + 1 + used != text.size()) throw std::invalid_argument("trail");
        } catch (const std::exception&) {
            fail(ErrorCode::InvalidInput, "bad exponent: " + text);
        }
    }
    mpz_class num(digits, 10);
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    Rational r = scale >= 0 ? Rational(num * pow10) : Rational(num, pow10);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

}  // namespace cistair
