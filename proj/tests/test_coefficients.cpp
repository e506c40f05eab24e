#include <random>

#include "cistair/coefficients.hpp"
#include "doctest.h"

using namespace cistair;

TEST_CASE("exponents of the isotropic pair") {
    const CoefficientPair p{{0.5, 0, 0, 0.5}, {2, 0, 0, 2}};
    const auto r = critical_exponents_general(p);
    CHECK(r.m == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.n == doctest::Approx(17.0 / 4).epsilon(1e-14));
    CHECK(std::fabs(r.K_star - 2.0) < 1e-12);
    CHECK(std::fabs(r.q_opt - 4.0 / 3) < 1e-12);
    CHECK(std::fabs(r.p_opt - 4.0) < 1e-12);
}

TEST_CASE("single phase and invalid pairs") {
    const auto r = critical_exponents_general({{1, 0, 0, 1}, {1, 0, 0, 1}});
    CHECK(r.single_phase);
    CHECK(r.K_star == 1.0);
    CHECK_THROWS_AS(critical_exponents_general({{1, 0, 0, -1}, {1, 0, 0, 1}}), Error);
    CHECK_THROWS_AS(critical_exponents_general({{1, 0, 0, 1e-12}, {1, 0, 0, 1}}), Error);
}

TEST_CASE("diagonal normal form realizes K") {
    for (double K : {1.5, 2.0, 5.0})
        for (double S1 : {1 / K, 1.0, K})
            for (double S2 : {1 / K, 1.0, K}) {
                const auto r = critical_exponents_general(diagonal_pair(K, S1, S2));
                CHECK(r.K_star == doctest::Approx(K).epsilon(1e-12));
                CHECK(r.q_opt < 2.0);
                CHECK(r.p_opt > 2.0);
                CHECK(1 / r.q_opt + 1 / r.p_opt == doctest::Approx(1.0).epsilon(1e-14));
            }
}

TEST_CASE("diagonal parameters") {
    const auto a = diagonal_params<Rational>(2, 2, 2);
    CHECK(a.k == Rational(1, 3));
    CHECK(a.s1 == Rational(1, 3));
    CHECK(a.s == Rational(1, 3));
    CHECK(a.S == 2);
    const auto b = diagonal_params<Rational>(2, 1, 2);
    CHECK(b.s1 == 0);
    CHECK(b.s2 == Rational(1, 3));
    CHECK(b.s == Rational(1, 6));
    CHECK(b.S == Rational(7, 5));
    // both closed forms for s and S
    CHECK(b.s == Rational(2 - 1, 2 * 3));
    CHECK(b.S == Rational(1 + 2 + 4, 2 + 1 + 2));
    try {
        diagonal_params<Rational>(2, Rational(1, 2), 2);
        FAIL("expected s = 0 rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unsupported);
    }
    CHECK_THROWS_AS(diagonal_params<double>(2, 3, 1), Error);
    CHECK_THROWS_AS(diagonal_params<double>(1, 1, 1), Error);
    const auto n = diagonal_params<Rational>(3, Rational(1, 2), Rational(1, 3));
    CHECK(n.flipped);
    CHECK(n.pair_case == PairCase::Negative);
    CHECK(n.s > 0);
}

TEST_CASE("diagonal parameter bounds") {
    for (double K : {1.2, 2.0, 7.0})
        for (double S1 = 1 / K; S1 <= K; S1 += (K - 1 / K) / 7)
            for (double S2 = 1 / K; S2 <= K; S2 += (K - 1 / K) / 5) {
                const auto p = diagonal_params_raw<double>(K, S1, S2);
                CHECK(std::fabs(p.s - (S1 * S2 - 1) / ((1 + S1) * (1 + S2))) < 1e-14);
                CHECK(std::fabs(p.S - (S1 + S2 + 2 * S1 * S2) / (2 + S1 + S2)) < 1e-12 * K);
                CHECK(p.S >= 1 / K - 1e-12);
                CHECK(p.S <= K + 1e-12);
                CHECK(std::fabs(p.s1) <= p.k + 1e-15);
            }
}

TEST_CASE("beltrami coefficients") {
    auto b = beltrami_from_sigma({1, 0, 0, 1});
    CHECK(b.mu.abs() == 0.0);
    CHECK(b.nu.abs() == 0.0);
    b = beltrami_from_sigma({2, 0, 0, 2});
    CHECK(b.mu.abs() == 0.0);
    CHECK(b.nu.re == doctest::Approx(-1.0 / 3));
    b = beltrami_from_sigma({0.5, 0, 0, 0.5});
    CHECK(b.nu.re == doctest::Approx(1.0 / 3));
    const auto s = sigma_from_beltrami({0, 0}, {-1.0 / 3, 0});
    CHECK(s(0, 0) == doctest::Approx(2.0));
    CHECK(s(1, 1) == doctest::Approx(2.0));
    CHECK(std::fabs(s(0, 1)) < 1e-15);
    CHECK_THROWS_AS(sigma_from_beltrami({0.5, 0}, {0.5, 0}), Error);

    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(-1, 1);
    int done = 0;
    while (done < 20000) {
        const Cplx<double> mu(u(g), u(g)), nu(u(g), u(g));
        if (mu.abs() + nu.abs() > 0.9) continue;
        ++done;
        const auto sig = sigma_from_beltrami(mu, nu);
        const auto back = beltrami_from_sigma(sig);
        CHECK((back.mu - mu).abs() < 1e-12);
        CHECK((back.nu - nu).abs() < 1e-12);
    }
    // sigma -> (mu, nu) -> sigma on random elliptic, possibly non-symmetric sigma
    std::uniform_real_distribution<double> e(0.2, 5.0);
    for (int i = 0; i < 20000; ++i) {
        Mat2<double> sig{e(g), u(g), u(g), e(g)};
        if (min_symmetric_eigenvalue(sig) < 0.05) continue;
        const auto bm = beltrami_from_sigma(sig);
        const auto s2 = sigma_from_beltrami(bm.mu, bm.nu);
        for (int k = 0; k < 4; ++k) CHECK(s2.m[k] == doctest::Approx(sig.m[k]).epsilon(1e-10));
    }
}
