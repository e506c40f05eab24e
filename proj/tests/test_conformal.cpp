#include <random>

#include "cistair/conformal.hpp"
#include "doctest.h"

using namespace cistair;

namespace {

Mat2<double> random_mat(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return {u(g), u(g), u(g), u(g)};
}

double op_norm_real(const Mat2<double>& m) {
    // sqrt of the largest eigenvalue of M^T M
    const Mat2<double> g = m.transpose() * m;
    const double tr = g.trace(), det = g.det();
    return std::sqrt(0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4 * det))));
}

}  // namespace

TEST_CASE("real to conformal examples") {
    CHECK(CM::from_real({1, 0, 0, 1}) == CM({1, 0}, {0, 0}));
    CHECK(CM::from_real({0, -1, 1, 0}) == CM({0, 1}, {0, 0}));
    CHECK(CM::from_real({1, 0, 0, -1}) == CM::J());
}

TEST_CASE("exact round trip and product") {
    const Mat2<Rational> m(Rational(3, 7), Rational(-2), Rational(5, 3), Rational(1, 9));
    CHECK(CMq::from_real(m).to_real() == m);
    const CMq two{{Rational(2), Rational(0)}, {}};
    CHECK(compose(two, CMq::J()) == CMq({}, {Rational(2), Rational(0)}));
    CHECK(compose(CMq::J(), CMq::J()) == CMq::identity());
    // (3/5 + 4/5 i)^2 = -7/25 + 24/25 i
    const CMq R = CMq::rotation({Rational(3, 5), Rational(4, 5)});
    CHECK(compose(R, R) == CMq::rotation({Rational(-7, 25), Rational(24, 25)}));
}

TEST_CASE("conformal algebra matches real matrices") {
    std::mt19937_64 g(7);
    for (int i = 0; i < 2000; ++i) {
        const Mat2<double> a = random_mat(g), b = random_mat(g);
        const CM A = CM::from_real(a), B = CM::from_real(b);
        const Mat2<double> ab = a * b, back = compose(A, B).to_real();
        for (int k = 0; k < 4; ++k) CHECK(back.m[k] == doctest::Approx(ab.m[k]).epsilon(1e-12));
        CHECK(A.det() == doctest::Approx(a.det()).epsilon(1e-12));
        double hs = 0;
        for (double v : a.m) hs += v * v;
        CHECK(A.hs_norm2() == doctest::Approx(hs).epsilon(1e-12));
        CHECK(A.op_norm() == doctest::Approx(op_norm_real(a)).epsilon(1e-9));
        CHECK(compose(A, B).det() == doctest::Approx(A.det() * B.det()).epsilon(1e-10));
        const Mat2<double> rt = CM::from_real(a).to_real();
        for (int k = 0; k < 4; ++k) CHECK(rt.m[k] == doctest::Approx(a.m[k]).epsilon(1e-15));
    }
}

TEST_CASE("dilatation and distortion") {
    CHECK(!second_dilatation(CM::identity()).infinite);
    CHECK(second_dilatation(CM::identity()).value.abs() == 0.0);
    CHECK(second_dilatation(CM::J()).infinite);
    const CMq d = CMq::from_real({Rational(2), Rational(0), Rational(0), Rational(1)});
    CHECK(d == CMq({Rational(3, 2), 0}, {Rational(1, 2), 0}));
    CHECK(second_dilatation(d).value == Cplx<Rational>(Rational(1, 3)));
    CHECK(distortion(CM::identity()) == 1.0);
    CHECK(distortion(d) == doctest::Approx(2.0));
    CHECK(std::isinf(distortion(CM({1, 0}, {1, 0}))));

    std::mt19937_64 g(11);
    for (int i = 0; i < 2000; ++i) {
        const CM A = CM::from_real(random_mat(g));
        const CM C = CM::rotation({1.3, -0.4});
        const auto m1 = second_dilatation(A), m2 = second_dilatation(compose(A, C));
        CHECK((m1.value - m2.value).abs() <= 1e-12 * (1 + m1.value.abs()));
        const double mu = m1.value.abs();
        if (std::fabs(A.det()) > 1e-3)
            CHECK((1 + mu) / std::fabs(1 - mu) == doctest::Approx(distortion(A)).epsilon(1e-10));
    }
}
