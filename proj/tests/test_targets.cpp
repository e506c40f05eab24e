#include <random>

#include "cistair/targets.hpp"
#include "doctest.h"

using namespace cistair;

namespace {
using Cq = Cplx<Rational>;
TargetSpec<Rational> spec_q(long K, Rational S1, Rational S2) { return {diagonal_params<Rational>(K, S1, S2)}; }
}  // namespace

TEST_CASE("d operator") {
    const auto a = spec_q(2, 2, 2);
    CHECK(a.d(1, Cq(3)) == Cq(1));
    CHECK(a.d(2, Cq()) == Cq());
    const auto b = spec_q(2, 1, 2);
    CHECK(b.d(1, Cq(0, 6)) == Cq());
    CHECK(b.d(2, Cq(0, 6)) == Cq(0, 2));
}

TEST_CASE("target membership matches the real form") {
    const double K = 2, S1 = 1.5, S2 = 0.8;
    const TargetSpec<double> ts{diagonal_params<double>(K, S1, S2)};
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 1000; ++i) {
        const Cplx<double> a(u(g), u(g));
        for (int j = 1; j <= 2; ++j) {
            const CM Q = ts.element(j, a);
            CHECK(in_real_target(Q.to_real(), j, K, S1, S2, 1e-12));
            CHECK(ts.dist_to_target(Q, j) < 1e-12);
            CHECK(!in_real_target(Q.to_real(), 3 - j, K, S1, S2, 1e-6));
        }
        // projection is nearest among sampled elements
        const CM A{{u(g), u(g)}, {u(g), u(g)}};
        for (int j = 1; j <= 2; ++j) {
            const double d = ts.dist_to_target(A, j);
            for (int k = 0; k < 5; ++k) CHECK(d <= std::sqrt((A - ts.element(j, {u(g), u(g)})).hs_norm2()) + 1e-12);
        }
    }
    const TargetSpec<double> iso{diagonal_params<double>(2, 2, 2)};
    const double dj = iso.dist_to_target(CM::J(), 1);
    CHECK(dj > 0);
    CHECK(dj <= std::sqrt(2.0));
}

TEST_CASE("theta of a matrix") {
    const TargetSpec<double> ts{diagonal_params<double>(2, 2, 2)};
    CHECK(theta_of(ts, CM::J()) == 0.0);
    const double phi = 0.7;
    CHECK(theta_of(ts, CM({0, 0}, {std::cos(phi), std::sin(phi)})) == doctest::Approx(-phi));
    CHECK(theta_of(ts, 3.0 * CM::conj_rotation({std::cos(phi), std::sin(phi)})) == doctest::Approx(phi));
    CHECK_THROWS_AS(theta_of(ts, ts.element(1, {1.0, 2.0})), Error);
}

TEST_CASE("decomposition through infinity, exact") {
    const auto ts = spec_q(2, 2, 2);
    // A = Q0 + P0 with Q0 = (1, d1(1)) = (1, 1/3), P0 = (0, 1)
    const CMq A{Cq(1), Cq(Rational(4, 3))};
    const auto dec = decompose_through_infinity(ts, A);
    CHECK(!dec.degenerate);
    CHECK(dec.mu1 * dec.Q + (Rational(1) - dec.mu1) * dec.P == A);
    CHECK((dec.P - dec.Q).det() == 0);
    CHECK(ts.contains(dec.Q, 1));
    CHECK(dec.P == dec.t * CMq::conj_rotation(dec.r));
    CHECK(dec.mu1 == Rational(4, 7));
    CHECK(dec.Q == CMq(Cq(Rational(7, 4)), Cq(Rational(7, 12))));
    CHECK(dec.P == CMq(Cq(), Cq(Rational(7, 3))));

    const auto deg = decompose_through_infinity(ts, CMq(Cq(), Cq(Rational(3, 5), Rational(4, 5))));
    CHECK(deg.degenerate);
    CHECK(deg.mu1 == 0);
    CHECK(deg.P == CMq(Cq(), Cq(Rational(3, 5), Rational(4, 5))));
    CHECK_THROWS_AS(decompose_through_infinity(ts, CMq()), Error);
    CHECK_THROWS_AS(decompose_through_infinity(ts, ts.element(1, Cq(2, 1))), Error);
}

TEST_CASE("decomposition through infinity, random") {
    const TargetSpec<double> ts{diagonal_params<double>(3, 2, 0.7)};
    std::mt19937_64 g(9);
    std::normal_distribution<double> u;
    double cmax = 1;
    for (int i = 0; i < 20000; ++i) {
        CM A{{u(g), u(g)}, {u(g), u(g)}};
        A = (1.0 / A.hs_norm()) * A;
        const auto dec = decompose_through_infinity(ts, A);
        const CM bary = dec.mu1 * dec.Q + (1 - dec.mu1) * dec.P;
        CHECK((bary - A).hs_norm() < 1e-12);
        CHECK(is_rank_one_or_zero(dec.P - dec.Q));
        CHECK(ts.dist_to_target(dec.Q, 1) < 1e-12);
        CHECK((dec.P - dec.t * CM::conj_rotation(dec.r)).hs_norm() < 1e-12 * dec.t);
        CHECK(dec.mu1 >= 0);
        CHECK(dec.mu1 <= 1);
        for (double v : {(dec.P - dec.Q).hs_norm(), dec.P.hs_norm(), dec.Q.hs_norm()})
            cmax = std::max({cmax, v, 1 / v});
    }
    MESSAGE("empirical decomposition constant c = " << cmax);
    CHECK(std::isfinite(cmax));
}

TEST_CASE("connect to conjugation") {
    const auto a = spec_q(2, 2, 2);
    const auto c = connect_to_conjugation(a, Cq(3), Cq(1));
    CHECK(c.lambda1 == Rational(1, 4));
    CHECK(c.lambda2 == Rational(1, 4));
    CHECK(c.Q1 == CMq(Cq(Rational(3, 4)), Cq(Rational(1, 4))));
    CHECK(c.Q2 == CMq(Cq(Rational(-3, 4)), Cq(Rational(1, 4))));
    CHECK((c.Q1 - CMq::J()).det() == 0);
    CHECK((c.Q2 - CMq::J()).det() == 0);

    const auto b = spec_q(2, 1, 2);
    const auto d = connect_to_conjugation(b, Cq(0, 6), Cq(0, 1));
    CHECK(d.lambda1 == Rational(1, 6));
    CHECK(d.lambda2 == Rational(1, 8));
    const CMq JR = CMq::conj_rotation(Cq(0, 1));
    CHECK((d.Q1 - JR).det() == 0);
    CHECK((d.Q2 - JR).det() == 0);
    CHECK(b.contains(d.Q1, 1));
    CHECK(b.contains(d.Q2, 2));
    CHECK_THROWS_AS(connect_to_conjugation(b, Cq(), Cq(1)), Error);
}
