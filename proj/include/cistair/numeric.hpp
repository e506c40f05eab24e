#pragma once

#include <cmath>
#include <string>

#include <gmpxx.h>

#include "cistair/errors.hpp"

namespace cistair {

using Rational = mpq_class;

// Scalar policy. The exact path never rounds: a square root of a
// non-square rational throws NotExact.
template <class T>
struct Scalar;

template <>
struct Scalar<double> {
    static constexpr bool exact = false;
    static double sqrt(double x) { return std::sqrt(x < 0.0 ? 0.0 : x); }
    static double to_double(double x) { return x; }
    static double from_int(long v) { return static_cast<double>(v); }
    static bool is_zero(double x, double tol) { return std::fabs(x) <= tol; }
    static std::string to_string(double x);
};

template <>
struct Scalar<Rational> {
    static constexpr bool exact = true;
    static Rational sqrt(const Rational& x);
    static double to_double(const Rational& x) { return x.get_d(); }
    static Rational from_int(long v) { return Rational(v); }
    static bool is_zero(const Rational& x, double) { return sgn(x) == 0; }
    static std::string to_string(const Rational& x) { return x.get_str(); }
};

template <class T>
T abs_value(const T& x) {
    if (x < T(0)) return T(-x);
    return x;
}

// Exact rational from a decimal or p/q string.
Rational parse_rational(const std::string& text);

}  // namespace cistair
