#pragma once

#include <vector>

#include "cistair/laminate.hpp"
#include "cistair/targets.hpp"

namespace cistair {

template <class T>
struct ThetaFunctions {
    double theta = 0;
    Cplx<T> r;  // e^{i theta}
    Cplx<T> a;  // x/k + i y/s
    T lambda1, lambda2, M1, M2, l, L, p;
    T H;        // harmonic mean of lambda1, lambda2
    double m_const = 0;
    ConformalMatrix<T> Q1, Q2;
};

// Angle given as a point (x, y) on the unit circle, so the exact path stays rational.
template <class T>
ThetaFunctions<T> theta_functions_at(const DiagonalPairParams<T>& params, const T& x, const T& y) {
    if (!(params.s > T(0))) fail(ErrorCode::Unsupported, "theta functions need s > 0");
    const TargetSpec<T> ts{params};
    ThetaFunctions<T> f;
    f.theta = std::atan2(Scalar<T>::to_double(y), Scalar<T>::to_double(x));
    f.r = {x, y};
    f.a = {T(x / params.k), T(y / params.s)};
    const Conjugation<T> c = connect_to_conjugation(ts, f.a, f.r);
    f.lambda1 = c.lambda1;
    f.lambda2 = c.lambda2;
    f.Q1 = c.Q1;
    f.Q2 = c.Q2;
    const T den = T((f.lambda1 + f.lambda2) / T(2) - f.lambda1 * f.lambda2);
    f.M1 = T(f.lambda1 / den);
    f.M2 = T(f.lambda2 / den);
    f.H = T(T(2) * f.lambda1 * f.lambda2 / (f.lambda1 + f.lambda2));
    f.l = T((f.M1 + f.M2) / T(2) - T(1));
    f.L = T((T(1) + f.l) / (T(1) - f.l));
    f.p = T(T(2) * f.L / (f.L + T(1)));
    return f;
}

// min over theta of M2/(2 - M2): dense grid plus golden-section polish.
double m_const(const DiagonalPairParams<double>& params, int grid = 10000);

ThetaFunctions<double> theta_functions(const DiagonalPairParams<double>& params, double theta,
                                       bool with_m_const = true);

template <class T>
struct StaircaseStep {
    Laminate<T> nu;
    Cplx<T> r;  // R = (r, 0)
    T n;
    T t;
    T mu1, mu2, mu3;
    T mass_up;
    ConformalMatrix<T> Q, P, tQ1, Ptilde, Q2n, top;  // top = (n+1) J R
    bool degenerate = false;
    double theta() const { return std::atan2(Scalar<T>::to_double(r.im), Scalar<T>::to_double(r.re)); }
};

// Builds the order-3 laminate for A given its decomposition, with step index n.
template <class T>
StaircaseStep<T> build_step(const DiagonalPairParams<T>& params, const ConformalMatrix<T>& A,
                            const InfinityDecomposition<T>& dec, const T& n) {
    StaircaseStep<T> s;
    s.n = n;
    s.t = dec.t;
    s.r = dec.r;
    s.mu1 = dec.mu1;
    s.degenerate = dec.degenerate;
    s.Q = dec.Q;
    s.P = dec.P;
    const ThetaFunctions<T> f = theta_functions_at(params, dec.r.re, dec.r.im);
    const T& t = s.t;
    const T dt = T(t - n);
    s.mu2 = T((f.M2 - dt * f.M2) / (T(2) * n + f.M2 + dt * (T(2) - f.M2)));
    s.mu3 = T((f.M1 - dt * f.M1) / (T(2) * (n + T(1))));
    const T n1 = T(n + T(1));
    s.tQ1 = t * f.Q1;
    s.Q2n = n1 * f.Q2;
    s.top = n1 * ConformalMatrix<T>::conj_rotation(dec.r);
    s.Ptilde = s.mu3 * s.Q2n + T(T(1) - s.mu3) * s.top;
    s.mass_up = T(T(T(1) - s.mu1) * T(T(1) - s.mu2) * T(T(1) - s.mu3));

    s.nu = Laminate<T>::dirac(A);
    std::size_t pi = 0;
    if (!dec.degenerate) {
        auto [qi, pj] = s.nu.split(0, s.Q, s.P, s.mu1);
        (void)qi;
        pi = static_cast<std::size_t>(pj);
    } else {
        // The root is P itself (up to roundoff); keep the tree exact at the root.
        s.nu = Laminate<T>::dirac(s.P);
    }
    auto [a1, a2] = s.nu.split(pi, s.tQ1, s.Ptilde, s.mu2);
    (void)a1;
    s.nu.split(static_cast<std::size_t>(a2), s.Q2n, s.top, s.mu3);
    return s;
}

struct StepOptions {
    double tol = 1e-9;
};

// Lemma step: A within rho of S_n. rho = 0 demands A = n J R exactly (within tol in floating point).
template <class T>
StaircaseStep<T> step(const DiagonalPairParams<T>& params, const ConformalMatrix<T>& A, long n, double rho,
                      double delta, const StepOptions& opt = {}) {
    if (n < 1) fail(ErrorCode::InvalidInput, "step index n must be >= 1");
    if (!(delta < M_PI / 4)) fail(ErrorCode::InvalidInput, "angle budget delta must be < pi/4");
    if (rho < 0 || rho >= 0.5) fail(ErrorCode::InvalidInput, "rho must lie in [0, 1/2)");
    const TargetSpec<T> ts{params};
    const InfinityDecomposition<T> dec = decompose_through_infinity(ts, A);
    const T nn = Scalar<T>::from_int(n);
    const double tn = std::fabs(Scalar<T>::to_double(dec.t) - static_cast<double>(n));
    if (rho == 0.0) {
        bool on;
        if constexpr (Scalar<T>::exact)
            on = dec.degenerate && dec.t == nn;
        else
            on = dec.degenerate && tn <= opt.tol * n;
        if (!on) fail(ErrorCode::InvalidInput, "rho = 0 step requires A on S_n");
    } else {
        const double a2 = Scalar<T>::to_double(A.ap.norm2());
        const double b = std::sqrt(Scalar<T>::to_double(A.am.norm2()));
        const double dist = std::sqrt(2 * a2 + 2 * (b - n) * (b - n));
        if (dist >= rho) fail(ErrorCode::InvalidInput, "A is not within rho of S_n");
    }
    StaircaseStep<T> s = build_step(params, A, dec, nn);
    return s;
}

// beta_n = 1 - p/n
inline double beta(double p, double n) { return 1.0 - p / n; }

struct BetaProduct {
    double product = 1.0;
    double log_product = 0.0;
    double residual = 0.0;
    long j0 = 0;
};

BetaProduct beta_product(const DiagonalPairParams<double>& params, double theta, long n);

struct IterateResult {
    Laminate<double> nu;
    std::vector<double> mass_series;    // index n-1 holds nu_n(S_{n+1})
    std::vector<double> moment_series;  // p(theta)-moment of nu_n
    std::vector<double> mu2, mu3;
    double p = 0;
};

// Exact-barycenter iteration from nu_0 = delta_{J R_theta}. Extra moment
// exponents may be tracked in `extra_moments` (one series per exponent).
IterateResult iterate(const DiagonalPairParams<double>& params, double theta, int N,
                      const std::vector<double>& extra_exponents = {},
                      std::vector<std::vector<double>>* extra_moments = nullptr, bool keep_laminate = true);

// Exact rational iteration, used as an oracle on short runs.
struct ExactIterate {
    Laminate<Rational> nu;
    std::vector<Rational> mass_series;
};
ExactIterate iterate_exact(const DiagonalPairParams<Rational>& params, const Rational& x, const Rational& y, int N);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cistair
