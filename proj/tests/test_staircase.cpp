#include <random>

#include "cistair/staircase.hpp"
#include "doctest.h"

using namespace cistair;

namespace {
using Cq = Cplx<Rational>;
}

TEST_CASE("theta functions at the endpoints, exact") {
    const auto a = diagonal_params<Rational>(2, 2, 2);
    const auto f0 = theta_functions_at<Rational>(a, 1, 0);
    CHECK(f0.a == Cq(3));
    CHECK(f0.lambda1 == Rational(1, 4));
    CHECK(f0.lambda2 == Rational(1, 4));
    CHECK(f0.M1 == Rational(4, 3));
    CHECK(f0.l == Rational(1, 3));
    CHECK(f0.L == 2);
    CHECK(f0.p == Rational(4, 3));

    const auto b = diagonal_params<Rational>(2, 1, 2);
    const auto f = theta_functions_at<Rational>(b, 0, 1);
    CHECK(f.lambda1 == Rational(1, 6));
    CHECK(f.lambda2 == Rational(1, 8));
    CHECK(f.H == Rational(1, 7));
    CHECK(f.l == 1 / (1 - f.H) - 1);
    CHECK(f.l == Rational(1, 6));
    CHECK(f.L == Rational(7, 5));
    CHECK(f.p == Rational(7, 6));
    CHECK(theta_functions_at<Rational>(b, 1, 0).p == Rational(4, 3));
    // endpoint formulas: lambda_j(0) = k/(1+k), lambda_j(pi/2) = s/(1+s_j)
    CHECK(f.lambda1 == b.s / (1 + b.s1));
    CHECK(f.lambda2 == b.s / (1 + b.s2));
    CHECK(theta_functions_at<Rational>(b, 1, 0).lambda2 == b.k / (1 + b.k));
}

TEST_CASE("theta function ranges and monotonicity") {
    for (auto [K, S1, S2] : {std::tuple{2.0, 2.0, 2.0}, {2.0, 1.0, 2.0}, {5.0, 0.5, 3.0}, {1.5, 1.4, 0.9}}) {
        const auto p = diagonal_params<double>(K, S1, S2);
        const double mc = m_const(p, 2000);
        CHECK(mc > 0);
        const int G = 10000;
        ThetaFunctions<double> prev = theta_functions(p, 0.0, false);
        for (int i = 1; i <= G; ++i) {
            const double th = M_PI * i / G;
            const auto f = theta_functions(p, th, false);
            for (auto [lam, sj] : {std::pair{f.lambda1, p.s1}, {f.lambda2, p.s2}}) {
                CHECK(lam >= p.s / (1 + sj) - 1e-12);
                CHECK(lam <= p.k / (1 + p.k) + 1e-12);
            }
            CHECK(f.l >= p.s - 1e-12);
            CHECK(f.l <= p.k + 1e-12);
            CHECK(f.L >= p.S - 1e-12);
            CHECK(f.L <= p.K + 1e-12);
            CHECK(f.M1 > 0);
            CHECK(f.M2 < 2);
            CHECK(1 + f.l == doctest::Approx(f.p).epsilon(1e-13));
            CHECK(f.M2 / (2 - f.M2) >= mc - 1e-12);
            if (p.s1 == p.k && p.s2 == p.k) {
                // s_j = k: the targets are isotropic and every theta function is constant
                CHECK(f.p == doctest::Approx(prev.p).epsilon(1e-14));
            } else if (th < M_PI / 2 - 1e-9) {
                CHECK(f.p < prev.p);
                CHECK(f.l < prev.l);
            } else if (th > M_PI / 2 + 1e-9) {
                CHECK(f.p > prev.p);
            }
            CHECK(f.p == doctest::Approx(theta_functions(p, -th, false).p).epsilon(1e-13));
            prev = f;
        }
        CHECK(theta_functions(p, 0, false).l == doctest::Approx(p.k));
        CHECK(theta_functions(p, M_PI / 2, false).l == doctest::Approx(p.s));
    }
}

TEST_CASE("staircase step at J, exact") {
    const auto a = diagonal_params<Rational>(2, 2, 2);
    const auto s = step(a, CMq::J(), 1, 0.0, 0.0);
    CHECK(s.degenerate);
    CHECK(s.t == 1);
    CHECK(s.mu2 == Rational(2, 5));
    CHECK(s.mu3 == Rational(1, 3));
    CHECK(s.mass_up == Rational(2, 5));
    const auto& at = s.nu.atoms();
    REQUIRE(at.size() == 3);
    auto weight_of = [&](const CMq& m) {
        for (const auto& x : at)
            if (x.matrix == m) return x.weight;
        return Rational(-1);
    };
    CHECK(weight_of(CMq(Cq(Rational(3, 4)), Cq(Rational(1, 4)))) == Rational(2, 5));
    CHECK(weight_of(CMq(Cq(Rational(-3, 2)), Cq(Rational(1, 2)))) == Rational(1, 5));
    CHECK(weight_of(CMq(Cq(), Cq(2))) == Rational(2, 5));
    CHECK(s.nu.barycenter() == CMq::J());
    CHECK(s.nu.validate().ok);
    for (const auto& n : s.nu.nodes())
        if (!n.leaf()) CHECK((s.nu.nodes()[n.left].matrix - s.nu.nodes()[n.right].matrix).det() == 0);
    // beta_3(R_0) = 1 - (4/3)/3 = 5/9
    CHECK(s.mass_up <= Rational(5, 9));
    CHECK(s.t * CMq::conj_rotation(s.r) == s.mu2 * s.tQ1 + (1 - s.mu2) * s.Ptilde);
}

TEST_CASE("step on S_n has the closed-form weights") {
    const auto a = diagonal_params<Rational>(2, 1, 2);
    for (const Cq r : {Cq(0, 1), Cq(-1, 0), Cq(0, -1)})
    for (long n : {1L, 2L, 7L, 30L}) {
        const auto f = theta_functions_at<Rational>(a, r.re, r.im);
        const auto s = step(a, Rational(n) * CMq::conj_rotation(r), n, 0.0, 0.0);
        CHECK(s.t == n);
        CHECK(s.mu2 == f.M2 / (2 * n + f.M2));
        CHECK(s.mu3 == f.M1 / (2 * (n + 1)));
        CHECK(s.nu.barycenter() == Rational(n) * CMq::conj_rotation(r));
        CHECK(s.nu.validate().ok);
    }
}

TEST_CASE("perturbed steps keep their invariants") {
    const auto p = diagonal_params<double>(2, 2, 2);
    const TargetSpec<double> ts{p};
    const double mc = m_const(p, 2000);
    std::mt19937_64 g(17);
    std::uniform_real_distribution<double> u(-1, 1);
    const double rho = 0.5 * std::min(mc, 0.5), delta = 0.3;
    double cmax = 0;
    for (int i = 0; i < 10000; ++i) {
        const long n = 1 + static_cast<long>(g() % 64);
        const double th = delta * u(g);
        // random point within rho/2 of S_n^delta
        CM A = static_cast<double>(n) * CM::conj_rotation({std::cos(th), std::sin(th)});
        CM E{{u(g), u(g)}, {u(g), u(g)}};
        A = A + (0.5 * rho * std::fabs(u(g)) / E.hs_norm()) * E;
        const auto s = step(p, A, n, rho, delta);
        CHECK((s.nu.barycenter() - A).hs_norm() < 1e-10 * n);
        CHECK(s.nu.validate().ok);
        CHECK(std::fabs(s.theta()) < delta + rho);
        CHECK(s.mu1 >= 0);
        CHECK(s.mu2 >= 0);
        CHECK(s.mu3 >= 0);
        const double b = beta(1 + theta_functions(p, s.theta(), false).l, n);
        const double b2 = beta(1 + theta_functions(p, s.theta(), false).l, n + 2);
        // sandwich constant needed: mass_up = (1 + c rho/n) beta
        cmax = std::max({cmax, (b - s.mass_up) * n / (rho * b), (s.mass_up - b2) * n / (rho * b2)});
        int on_top = 0;
        for (const auto& at : s.nu.atoms()) {
            const double op = at.matrix.op_norm();
            CHECK(op > n / 4.0);
            CHECK(op < 4.0 * n);
            if (ts.dist_to_T(at.matrix) > 1e-9) {
                ++on_top;
                CHECK((at.matrix - s.top).hs_norm() < 1e-12 * n);
            }
        }
        CHECK(on_top == 1);
    }
    MESSAGE("empirical growth sandwich constant c = " << cmax);
    CHECK(cmax < 50);
}

TEST_CASE("iteration agrees with the exact iteration") {
    const auto q = diagonal_params<Rational>(2, 2, 2);
    const auto ex = iterate_exact(q, 1, 0, 12);
    const auto fl = iterate(to_double(q), 0.0, 12);
    for (int n = 0; n < 12; ++n) CHECK(fl.mass_series[n] == doctest::Approx(ex.mass_series[n].get_d()).epsilon(1e-13));
    CHECK(ex.nu.barycenter() == CMq::J());
    CHECK(ex.nu.validate().ok);
    CHECK(fl.nu.validate().ok);
    CHECK(fl.moment_series.back() == doctest::Approx(fl.nu.p_moment(fl.p)).epsilon(1e-12));
    // S_{N+1} mass is the tail above every T atom
    double tmax = 0;
    const double top = 13 * std::sqrt(2.0);
    for (const auto& a : fl.nu.atoms())
        if (a.matrix.hs_norm() < top - 1e-9) tmax = std::max(tmax, a.matrix.hs_norm());
    CHECK(fl.nu.tail_mass(0.5 * (tmax + top)) == doctest::Approx(fl.mass_series.back()).epsilon(1e-9));
}

TEST_CASE("beta products against the Gamma function") {
    const auto p = diagonal_params<double>(2, 2, 2);
    for (double th : {0.0, 0.4, M_PI / 2}) {
        const double pp = 1 + theta_functions(p, th, false).l;
        for (long n : {8L, 100L, 12345L}) {
            const auto b = beta_product(p, th, n);
            const double j0 = static_cast<double>(b.j0);
            // prod_{j0}^n (j - p)/j = Gamma(n+1-p) Gamma(j0) / (Gamma(j0-p) Gamma(n+1))
            const double oracle = std::lgamma(n + 1 - pp) + std::lgamma(j0) - std::lgamma(j0 - pp) - std::lgamma(n + 1.0);
            CHECK(b.log_product == doctest::Approx(oracle).epsilon(1e-10));
        }
    }
    CHECK(beta(4.0 / 3, 3) == doctest::Approx(5.0 / 9));
    CHECK_THROWS_AS(beta_product(p, 0.0, 2), Error);
}
