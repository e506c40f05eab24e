#pragma once

#include "cistair/numeric.hpp"

namespace cistair {

// Minimal complex number over an arbitrary ordered field.
template <class T>
struct Cplx {
    T re{0};
    T im{0};

    Cplx() = default;
    Cplx(T r) : re(std::move(r)), im(0) {}
    Cplx(T r, T i) : re(std::move(r)), im(std::move(i)) {}

    friend Cplx operator+(const Cplx& a, const Cplx& b) { return {T(a.re + b.re), T(a.im + b.im)}; }
    friend Cplx operator-(const Cplx& a, const Cplx& b) { return {T(a.re - b.re), T(a.im - b.im)}; }
    friend Cplx operator-(const Cplx& a) { return {T(-a.re), T(-a.im)}; }
    friend Cplx operator*(const Cplx& a, const Cplx& b) {
        return {T(a.re * b.re - a.im * b.im), T(a.re * b.im + a.im * b.re)};
    }
    friend Cplx operator*(const T& s, const Cplx& a) { return {T(s * a.re), T(s * a.im)}; }
    friend Cplx operator*(const Cplx& a, const T& s) { return {T(s * a.re), T(s * a.im)}; }
    friend Cplx operator/(const Cplx& a, const T& s) { return {T(a.re / s), T(a.im / s)}; }
    friend Cplx operator/(const Cplx& a, const Cplx& b) {
        T d = b.norm2();
        if (d == T(0)) fail(ErrorCode::Domain, "complex division by zero");
        return (a * b.conj()) / d;
    }
    friend bool operator==(const Cplx& a, const Cplx& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Cplx& a, const Cplx& b) { return !(a == b); }

    Cplx& operator+=(const Cplx& b) { return *this = *this + b; }
    Cplx& operator-=(const Cplx& b) { return *this = *this - b; }

    Cplx conj() const { return {re, T(-im)}; }
    T norm2() const { return T(re * re + im * im); }
    T abs() const { return Scalar<T>::sqrt(norm2()); }
    double arg() const { return std::atan2(Scalar<T>::to_double(im), Scalar<T>::to_double(re)); }
};

template <class T>
Cplx<T> conj(const Cplx<T>& z) {
    return z.conj();
}

template <class T>
Cplx<double> to_double(const Cplx<T>& z) {
    return {Scalar<T>::to_double(z.re), Scalar<T>::to_double(z.im)};
}

}  // namespace cistair
