#pragma once

#include "cistair/conformal.hpp"

namespace cistair {

struct CoefficientPair {
    Mat2<double> sigma1;
    Mat2<double> sigma2;
};

// Smallest eigenvalue of the symmetric part of s.
double min_symmetric_eigenvalue(const Mat2<double>& s);

// Throws InvalidInput unless both phases have symmetric-part eigenvalues >= 1e-10.
void validate_elliptic(const CoefficientPair& pair);

struct ExponentReport {
    double d1 = 0, d2 = 0, m = 0, n = 0;
    double K_star = 1;
    double p_opt = 0, q_opt = 0;
    bool single_phase = false;
};

ExponentReport critical_exponents_general(const CoefficientPair& pair);

enum class PairCase { Positive, Negative, Zero };

const char* case_name(PairCase c);

template <class T>
struct DiagonalPairParams {
    T K, S1, S2;
    T k, s1, s2, s, S;
    PairCase pair_case = PairCase::Positive;
    // s < 0 was reduced to s > 0: s1, s2, s, S hold the flipped values and
    // the targets of the original pair are transposes of the flipped ones.
    bool flipped = false;
};

// Builds the diagonal parameters; s = 0 throws Unsupported, bounds violations throw InvalidInput.
template <class T>
DiagonalPairParams<T> diagonal_params(const T& K, const T& S1, const T& S2);

// Same, without the s = 0 rejection or the s < 0 flip (classification only).
template <class T>
DiagonalPairParams<T> diagonal_params_raw(const T& K, const T& S1, const T& S2);

DiagonalPairParams<double> to_double(const DiagonalPairParams<Rational>& p);

// sigma1 = diag(1/K, 1/S1), sigma2 = diag(K, S2).
CoefficientPair diagonal_pair(double K, double S1, double S2);

// Recognizes the diagonal normal form; returns false for anything else.
bool match_diagonal_form(const CoefficientPair& pair, double& K, double& S1, double& S2, double tol = 1e-12);

struct Beltrami {
    Cplx<double> mu;
    Cplx<double> nu;
};

Beltrami beltrami_from_sigma(const Mat2<double>& sigma);
Mat2<double> sigma_from_beltrami(const Cplx<double>& mu, const Cplx<double>& nu);

}  // namespace cistair
