#pragma once

#include <cmath>

#include "cistair/coefficients.hpp"

namespace cistair {

template <class T>
struct TargetSpec {
    DiagonalPairParams<T> params;

    // d_j(a) = k Re a + i s_j Im a
    Cplx<T> d(int j, const Cplx<T>& a) const {
        const T& sj = j == 1 ? params.s1 : params.s2;
        return {T(params.k * a.re), T(sj * a.im)};
    }

    // Second coordinate of the T_j element with first coordinate a.
    Cplx<T> partner(int j, const Cplx<T>& a) const {
        Cplx<T> v = d(j, a.conj());
        return j == 1 ? v : -v;
    }

    ConformalMatrix<T> element(int j, const Cplx<T>& a) const { return {a, partner(j, a)}; }

    bool contains(const ConformalMatrix<T>& A, int j) const {
        if constexpr (Scalar<T>::exact) {
            return A.am == partner(j, A.ap);
        } else {
            return dist_to_target(A, j) <= 1e-12 * std::max(1.0, A.hs_norm());
        }
    }

    // Orthogonal projection onto the real 2-plane T_j (HS inner product).
    ConformalMatrix<T> project(const ConformalMatrix<T>& A, int j) const {
        // Orthogonal basis: E1 = element(1), E2 = element(i).
        const ConformalMatrix<T> e1 = element(j, Cplx<T>(T(1)));
        const ConformalMatrix<T> e2 = element(j, Cplx<T>(T(0), T(1)));
        auto inner = [](const ConformalMatrix<T>& x, const ConformalMatrix<T>& y) {
            return T(x.ap.re * y.ap.re + x.ap.im * y.ap.im + x.am.re * y.am.re + x.am.im * y.am.im);
        };
        const T c1 = T(inner(A, e1) / inner(e1, e1));
        const T c2 = T(inner(A, e2) / inner(e2, e2));
        return c1 * e1 + c2 * e2;
    }

    T dist2_to_target(const ConformalMatrix<T>& A, int j) const { return (A - project(A, j)).hs_norm2(); }

    double dist_to_target(const ConformalMatrix<T>& A, int j) const {
        return std::sqrt(Scalar<T>::to_double(dist2_to_target(A, j)));
    }

    double dist_to_T(const ConformalMatrix<T>& A) const {
        return std::min(dist_to_target(A, 1), dist_to_target(A, 2));
    }
};

// Real coordinate form of T_j: rows (E; R_{pi/2} sigma_j E).
inline bool in_real_target(const Mat2<double>& M, int j, double K, double S1, double S2, double tol) {
    const double x = M(0, 0), y = -M(0, 1);
    const double r21 = j == 1 ? y / S1 : S2 * y;
    const double r22 = j == 1 ? x / K : K * x;
    return std::fabs(M(1, 0) - r21) <= tol && std::fabs(M(1, 1) - r22) <= tol;
}

template <class T>
struct InfinityDecomposition {
    ConformalMatrix<T> Q;  // in T_1
    ConformalMatrix<T> P;  // t J R
    T mu1{0};              // weight of Q
    T t{0};
    Cplx<T> r;             // R = (r, 0), r = e^{i theta}
    bool degenerate = false;

    double theta() const { return std::atan2(Scalar<T>::to_double(r.im), Scalar<T>::to_double(r.re)); }
};

// Unit complex r with JR = (0, conj r) parallel to b - d1(conj a).
template <class T>
Cplx<T> rotation_of(const TargetSpec<T>& ts, const ConformalMatrix<T>& A) {
    const Cplx<T> w = A.am - ts.d(1, A.ap.conj());
    const T n2 = w.norm2();
    if constexpr (Scalar<T>::exact) {
        if (n2 == T(0)) fail(ErrorCode::Domain, "theta_A undefined: A lies in T1");
    } else {
        if (std::sqrt(n2) <= 1e-12 * std::max(1.0, A.hs_norm()))
            fail(ErrorCode::Domain, "theta_A undefined: A lies in T1");
    }
    return w.conj() / Scalar<T>::sqrt(n2);
}

// theta_A = -arg(b - d1(conj a)) in (-pi, pi].
inline double theta_of(const TargetSpec<double>& ts, const CM& A) {
    const Cplx<double> r = rotation_of(ts, A);
    double th = std::atan2(r.im, r.re);
    if (th <= -M_PI) th += 2 * M_PI;
    return th;
}

template <class T>
InfinityDecomposition<T> decompose_through_infinity(const TargetSpec<T>& ts, const ConformalMatrix<T>& A,
                                                    double degenerate_tol = 1e-12) {
    InfinityDecomposition<T> out;
    const T a2 = A.ap.norm2();
    const T b2 = A.am.norm2();
    if (a2 == T(0) && b2 == T(0)) fail(ErrorCode::Domain, "decomposition of the zero matrix");
    bool deg;
    if constexpr (Scalar<T>::exact) {
        deg = a2 == T(0);
    } else {
        deg = std::sqrt(a2) <= degenerate_tol * std::sqrt(b2);
    }
    if (deg) {
        out.degenerate = true;
        out.mu1 = T(0);
        out.t = Scalar<T>::sqrt(b2);
        out.r = A.am.conj() / out.t;
        out.P = {Cplx<T>(), A.am};
        if constexpr (!Scalar<T>::exact) out.P.ap = Cplx<T>();
        out.Q = ConformalMatrix<T>();
        return out;
    }
    const Cplx<T> d = ts.d(1, A.ap.conj());
    const Cplx<T> w = A.am - d;
    out.r = rotation_of(ts, A);
    const T W2 = w.norm2();
    const T B = T(w.re * d.re + w.im * d.im);
    const T C = T(a2 - d.norm2());
    // t0 > 0 with |t0 w - d| = |a|: W2 t^2 - 2 B t - C = 0.
    const T root = Scalar<T>::sqrt(T(B * B + W2 * C));
    T t0;
    if (B >= T(0))
        t0 = T((B + root) / W2);
    else
        t0 = T(C / (root - B));
    const T rho = T(T(1) + T(1) / t0);
    out.Q = rho * ConformalMatrix<T>(A.ap, d);
    out.P = ConformalMatrix<T>(Cplx<T>(), T(rho * t0) * w);
    out.mu1 = T(T(1) / rho);
    out.t = T(rho * t0 * Scalar<T>::sqrt(W2));
    return out;
}

template <class T>
struct Conjugation {
    T lambda1, lambda2;
    ConformalMatrix<T> Q1, Q2;
};

// lambda > 0 solving A l^2 + 2 B l - 1 = 0, A > 0.
template <class T>
T positive_root(const T& A, const T& B) {
    const T root = Scalar<T>::sqrt(T(B * B + A));
    if (B >= T(0)) return T(T(1) / (root + B));
    return T((root - B) / A);
}

template <class T>
Conjugation<T> connect_to_conjugation(const TargetSpec<T>& ts, const Cplx<T>& a, const Cplx<T>& r) {
    if (a.norm2() == T(0)) fail(ErrorCode::Domain, "connect_to_conjugation needs a != 0");
    Conjugation<T> c;
    T lam[2];
    for (int j = 1; j <= 2; ++j) {
        const Cplx<T> dj = ts.d(j, a);
        const T Aj = T(a.norm2() - dj.norm2());
        const T Bj = T(r.re * dj.re + r.im * dj.im);  // Re(conj(r) d_j(a))
        lam[j - 1] = positive_root(Aj, Bj);
    }
    c.lambda1 = lam[0];
    c.lambda2 = lam[1];
    c.Q1 = c.lambda1 * ConformalMatrix<T>(a, ts.d(1, a.conj()));
    c.Q2 = c.lambda2 * ConformalMatrix<T>(-a, ts.d(2, a.conj()));
    return c;
}

}  // namespace cistair
