#include "cistair/coefficients.hpp"

#include <cmath>
#include <sstream>

namespace cistair {

namespace {

constexpr double kEllipticMargin = 1e-10;
constexpr double kZeroS = 1e-12;

double det_sym(const Mat2<double>& s) {
    const double off = 0.5 * (s.m[1] + s.m[2]);
    return s.m[0] * s.m[3] - off * off;
}

// (x + sqrt(x^2 - 4)) / 2 with x >= 2 up to roundoff.
double larger_root(double x, const char* name) {
    double disc = x * x - 4.0;
    if (disc < 0.0) {
        if (disc < -1e-9) {
            std::ostringstream os;
            os << name << " = " << x << " < 2";
            fail(ErrorCode::InvalidInput, os.str());
        }
        disc = 0.0;
    }
    return 0.5 * (x + std::sqrt(disc));
}

}  // namespace

double min_symmetric_eigenvalue(const Mat2<double>& s) {
    const double a = s.m[0], d = s.m[3], b = 0.5 * (s.m[1] + s.m[2]);
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), b);
    return mean - rad;
}

void validate_elliptic(const CoefficientPair& pair) {
    for (int j = 0; j < 2; ++j) {
        const Mat2<double>& s = j == 0 ? pair.sigma1 : pair.sigma2;
        for (double v : s.m)
            if (!std::isfinite(v)) fail(ErrorCode::InvalidInput, "non-finite coefficient entry");
        if (min_symmetric_eigenvalue(s) < kEllipticMargin) {
            std::ostringstream os;
            os << "sigma" << (j + 1) << " is not uniformly elliptic (min eigenvalue of symmetric part "
               << min_symmetric_eigenvalue(s) << ")";
            fail(ErrorCode::InvalidInput, os.str());
        }
    }
}

ExponentReport critical_exponents_general(const CoefficientPair& pair) {
    validate_elliptic(pair);
    const Mat2<double>& a = pair.sigma1;
    const Mat2<double>& b = pair.sigma2;
    ExponentReport r;
    r.d1 = det_sym(a);
    r.d2 = det_sym(b);
    const double root = std::sqrt(r.d1 * r.d2);
    r.m = (b(0, 0) * a(1, 1) + a(0, 0) * b(1, 1) - 0.5 * (b(0, 1) + b(1, 0)) * (a(0, 1) + a(1, 0))) / root;
    r.n = (a.det() + b.det() - 0.5 * (a(1, 0) - a(0, 1)) * (b(1, 0) - b(0, 1))) / root;
    r.K_star = std::sqrt(larger_root(r.m, "m")) * std::sqrt(larger_root(r.n, "n"));
    if (r.K_star - 1.0 <= 1e-12) {
        r.K_star = 1.0;
        r.single_phase = true;
        r.q_opt = 1.0;
        r.p_opt = std::numeric_limits<double>::infinity();
        return r;
    }
    r.q_opt = 2.0 * r.K_star / (r.K_star + 1.0);
    r.p_opt = 2.0 * r.K_star / (r.K_star - 1.0);
    return r;
}

const char* case_name(PairCase c) {
    switch (c) {
        case PairCase::Positive: return "s>0";
        case PairCase::Negative: return "s<0";
        case PairCase::Zero: return "s=0";
    }
    return "?";
}

template <class T>
DiagonalPairParams<T> diagonal_params_raw(const T& K, const T& S1, const T& S2) {
    if (!(K > T(1))) fail(ErrorCode::InvalidInput, "K must exceed 1");
    const T invK = T(T(1) / K);
    for (const T* Sj : {&S1, &S2}) {
        if (*Sj < invK || *Sj > K) fail(ErrorCode::InvalidInput, "S_j must lie in [1/K, K]");
    }
    DiagonalPairParams<T> p;
    p.K = K;
    p.S1 = S1;
    p.S2 = S2;
    p.k = T((K - T(1)) / (K + T(1)));
    p.s1 = T((S1 - T(1)) / (S1 + T(1)));
    p.s2 = T((S2 - T(1)) / (S2 + T(1)));
    p.s = T((p.s1 + p.s2) / T(2));
    p.S = T((T(1) + p.s) / (T(1) - p.s));
    if (Scalar<T>::is_zero(p.s, kZeroS))
        p.pair_case = PairCase::Zero;
    else if (p.s < T(0))
        p.pair_case = PairCase::Negative;
    else
        p.pair_case = PairCase::Positive;
    return p;
}

template <class T>
DiagonalPairParams<T> diagonal_params(const T& K, const T& S1, const T& S2) {
    DiagonalPairParams<T> p = diagonal_params_raw(K, S1, S2);
    if (p.pair_case == PairCase::Zero)
        fail(ErrorCode::Unsupported,
             "s = 0 (S1*S2 = 1): the degenerate case has no constructive staircase here");
    if (p.pair_case == PairCase::Negative) {
        p.s1 = T(-p.s1);
        p.s2 = T(-p.s2);
        p.s = T(-p.s);
        p.S = T((T(1) + p.s) / (T(1) - p.s));
        p.flipped = true;
    }
    return p;
}

template DiagonalPairParams<double> diagonal_params_raw(const double&, const double&, const double&);
template DiagonalPairParams<Rational> diagonal_params_raw(const Rational&, const Rational&, const Rational&);
template DiagonalPairParams<double> diagonal_params(const double&, const double&, const double&);
template DiagonalPairParams<Rational> diagonal_params(const Rational&, const Rational&, const Rational&);

DiagonalPairParams<double> to_double(const DiagonalPairParams<Rational>& p) {
    DiagonalPairParams<double> d;
    d.K = p.K.get_d();
    d.S1 = p.S1.get_d();
    d.S2 = p.S2.get_d();
    d.k = p.k.get_d();
    d.s1 = p.s1.get_d();
    d.s2 = p.s2.get_d();
    d.s = p.s.get_d();
    d.S = p.S.get_d();
    d.pair_case = p.pair_case;
    d.flipped = p.flipped;
    return d;
}

CoefficientPair diagonal_pair(double K, double S1, double S2) {
    return {{1.0 / K, 0.0, 0.0, 1.0 / S1}, {K, 0.0, 0.0, S2}};
}

bool match_diagonal_form(const CoefficientPair& pair, double& K, double& S1, double& S2, double tol) {
    const auto& a = pair.sigma1.m;
    const auto& b = pair.sigma2.m;
    if (std::fabs(a[1]) > tol || std::fabs(a[2]) > tol || std::fabs(b[1]) > tol || std::fabs(b[2]) > tol)
        return false;
    if (std::fabs(a[0] * b[0] - 1.0) > tol) return false;
    K = b[0];
    S1 = 1.0 / a[3];
    S2 = b[3];
    return K > 1.0;
}

Beltrami beltrami_from_sigma(const Mat2<double>& s) {
    const double den = 1.0 + s.trace() + s.det();
    if (!(den > 0.0)) fail(ErrorCode::InvalidInput, "1 + tr(sigma) + det(sigma) must be positive");
    Beltrami b;
    b.mu = {(s(1, 1) - s(0, 0)) / den, -(s(0, 1) + s(1, 0)) / den};
    b.nu = {(1.0 - s.det()) / den, (s(0, 1) - s(1, 0)) / den};
    if (b.mu.abs() + b.nu.abs() >= 1.0) fail(ErrorCode::InvalidInput, "|mu| + |nu| >= 1: sigma is not elliptic");
    return b;
}

Mat2<double> sigma_from_beltrami(const Cplx<double>& mu, const Cplx<double>& nu) {
    if (mu.abs() + nu.abs() >= 1.0) fail(ErrorCode::InvalidInput, "ellipticity violated: |mu| + |nu| >= 1");
    const Cplx<double> one(1.0);
    const double den = (one + nu).norm2() - mu.norm2();
    return {((one - mu).norm2() - nu.norm2()) / den, 2.0 * (nu - mu).im / den, -2.0 * (nu + mu).im / den,
            ((one + mu).norm2() - nu.norm2()) / den};
}

}  // namespace cistair
