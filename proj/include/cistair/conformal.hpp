#pragma once

#include <array>
#include <limits>

#include "cistair/complex.hpp"

namespace cistair {

// Real 2x2 matrix, row major: m[0]=m11, m[1]=m12, m[2]=m21, m[3]=m22.
template <class T>
struct Mat2 {
    std::array<T, 4> m{T(0), T(0), T(0), T(0)};

    Mat2() = default;
    Mat2(T m11, T m12, T m21, T m22) : m{std::move(m11), std::move(m12), std::move(m21), std::move(m22)} {}

    const T& operator()(int i, int j) const { return m[2 * i + j]; }
    T& operator()(int i, int j) { return m[2 * i + j]; }

    T det() const { return T(m[0] * m[3] - m[1] * m[2]); }
    T trace() const { return T(m[0] + m[3]); }
    Mat2 transpose() const { return {m[0], m[2], m[1], m[3]}; }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {T(a.m[0] * b.m[0] + a.m[1] * b.m[2]), T(a.m[0] * b.m[1] + a.m[1] * b.m[3]),
                T(a.m[2] * b.m[0] + a.m[3] * b.m[2]), T(a.m[2] * b.m[1] + a.m[3] * b.m[3])};
    }
    friend bool operator==(const Mat2& a, const Mat2& b) { return a.m == b.m; }
};

// Conformal coordinates A = (a+, a-):  A v = a+ v + a- conj(v).
template <class T>
struct ConformalMatrix {
    Cplx<T> ap;
    Cplx<T> am;

    ConformalMatrix() = default;
    ConformalMatrix(Cplx<T> p, Cplx<T> m) : ap(std::move(p)), am(std::move(m)) {}

    static ConformalMatrix from_real(const Mat2<T>& a) {
        const T two(2);
        return {Cplx<T>(T((a.m[0] + a.m[3]) / two), T((a.m[2] - a.m[1]) / two)),
                Cplx<T>(T((a.m[0] - a.m[3]) / two), T((a.m[2] + a.m[1]) / two))};
    }

    Mat2<T> to_real() const {
        return {T(ap.re + am.re), T(am.im - ap.im), T(ap.im + am.im), T(ap.re - am.re)};
    }

    static ConformalMatrix identity() { return {Cplx<T>(T(1)), Cplx<T>()}; }
    static ConformalMatrix J() { return {Cplx<T>(), Cplx<T>(T(1))}; }
    // Rotation given by a unit complex number r = e^{i theta}.
    static ConformalMatrix rotation(const Cplx<T>& r) { return {r, Cplx<T>()}; }
    // J R_theta = (0, e^{-i theta}).
    static ConformalMatrix conj_rotation(const Cplx<T>& r) { return {Cplx<T>(), r.conj()}; }

    friend ConformalMatrix operator+(const ConformalMatrix& a, const ConformalMatrix& b) {
        return {a.ap + b.ap, a.am + b.am};
    }
    friend ConformalMatrix operator-(const ConformalMatrix& a, const ConformalMatrix& b) {
        return {a.ap - b.ap, a.am - b.am};
    }
    friend ConformalMatrix operator-(const ConformalMatrix& a) { return {-a.ap, -a.am}; }
    friend ConformalMatrix operator*(const T& s, const ConformalMatrix& a) { return {s * a.ap, s * a.am}; }
    friend bool operator==(const ConformalMatrix& a, const ConformalMatrix& b) {
        return a.ap == b.ap && a.am == b.am;
    }
    friend bool operator!=(const ConformalMatrix& a, const ConformalMatrix& b) { return !(a == b); }

    // Matrix product A B.
    friend ConformalMatrix compose(const ConformalMatrix& a, const ConformalMatrix& b) {
        return {a.ap * b.ap + a.am * b.am.conj(), a.ap * b.am + a.am * b.ap.conj()};
    }

    ConformalMatrix transpose() const { return {ap.conj(), am}; }

    T det() const { return T(ap.norm2() - am.norm2()); }
    T hs_norm2() const { return T(T(2) * ap.norm2() + T(2) * am.norm2()); }
    T hs_norm() const { return Scalar<T>::sqrt(hs_norm2()); }
    T op_norm() const { return T(ap.abs() + am.abs()); }
};

// Second complex dilatation a-/conj(a+); infinite when a+ = 0.
template <class T>
struct Dilatation {
    bool infinite = false;
    Cplx<T> value;
};

template <class T>
Dilatation<T> second_dilatation(const ConformalMatrix<T>& a) {
    if (a.ap.norm2() == T(0)) return {true, {}};
    return {false, a.am / a.ap.conj()};
}

// Distortion ||A||^2 / |det A|; +inf for singular matrices.
template <class T>
double distortion(const ConformalMatrix<T>& a) {
    const double p = Scalar<T>::to_double(a.ap.norm2());
    const double m = Scalar<T>::to_double(a.am.norm2());
    const double d = std::fabs(p - m);
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    const double op = std::sqrt(p) + std::sqrt(m);
    return op * op / d;
}

template <class T>
ConformalMatrix<double> to_double(const ConformalMatrix<T>& a) {
    return {to_double(a.ap), to_double(a.am)};
}

inline ConformalMatrix<Rational> to_rational(const ConformalMatrix<double>& a) {
    return {{Rational(a.ap.re), Rational(a.ap.im)}, {Rational(a.am.re), Rational(a.am.im)}};
}

template <class T>
bool is_rank_one_or_zero(const ConformalMatrix<T>& d, double tol = 1e-9) {
    if constexpr (Scalar<T>::exact) {
        return d.det() == T(0);
    } else {
        return std::fabs(d.det()) <= tol * d.hs_norm2();
    }
}

using CM = ConformalMatrix<double>;
using CMq = ConformalMatrix<Rational>;

}  // namespace cistair
