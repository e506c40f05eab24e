#include "cistair/staircase.hpp"

#include <cmath>

namespace cistair {

namespace {

double m_ratio(const DiagonalPairParams<double>& params, double theta) {
    const auto f = theta_functions_at<double>(params, std::cos(theta), std::sin(theta));
    return f.M2 / (2.0 - f.M2);
}

}  // namespace

double m_const(const DiagonalPairParams<double>& params, int grid) {
    // M2/(2-M2) is pi-periodic; scan [0, pi).
    double best = m_ratio(params, 0.0);
    int arg = 0;
    for (int i = 1; i < grid; ++i) {
        const double v = m_ratio(params, M_PI * i / grid);
        if (v < best) {
            best = v;
            arg = i;
        }
    }
    double lo = M_PI * (arg - 1) / grid, hi = M_PI * (arg + 1) / grid;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60; ++it) {
        const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
        if (m_ratio(params, a) < m_ratio(params, b))
            hi = b;
        else
            lo = a;
    }
    return std::min(best, m_ratio(params, 0.5 * (lo + hi)));
}

ThetaFunctions<double> theta_functions(const DiagonalPairParams<double>& params, double theta, bool with_m_const) {
    ThetaFunctions<double> f = theta_functions_at<double>(params, std::cos(theta), std::sin(theta));
    f.theta = theta;
    if (with_m_const) f.m_const = m_const(params);
    return f;
}

BetaProduct beta_product(const DiagonalPairParams<double>& params, double theta, long n) {
    const auto f = theta_functions(params, theta, false);
    const double p = 1.0 + f.l;
    BetaProduct b;
    b.j0 = static_cast<long>(std::ceil(p)) + 1;
    if (n < b.j0) fail(ErrorCode::InvalidInput, "beta_product: n too small for positive factors");
    double s = 0.0;
    for (long j = b.j0; j <= n; ++j) s += std::log1p(-p / static_cast<double>(j));
    b.log_product = s;
    b.product = std::exp(s);
    b.residual = std::fabs(s + p * std::log(static_cast<double>(n)));
    return b;
}

IterateResult iterate(const DiagonalPairParams<double>& params, double theta, int N,
                      const std::vector<double>& extra_exponents, std::vector<std::vector<double>>* extra_moments,
                      bool keep_laminate) {
    if (N < 1) fail(ErrorCode::InvalidInput, "iterate needs N >= 1");
    const auto f = theta_functions(params, theta, false);
    IterateResult out;
    out.p = f.p;
    const Cplx<double> r(std::cos(theta), std::sin(theta));
    const CM JR = CM::conj_rotation(r);
    const double nq1 = f.Q1.hs_norm(), nq2 = f.Q2.hs_norm(), njr = JR.hs_norm();

    std::vector<double> exps{f.p};
    exps.insert(exps.end(), extra_exponents.begin(), extra_exponents.end());
    std::vector<double> moment(exps.size());
    for (std::size_t e = 0; e < exps.size(); ++e) moment[e] = std::pow(njr, exps[e]);
    if (extra_moments) extra_moments->assign(extra_exponents.size(), {});

    if (keep_laminate) {
        out.nu = Laminate<double>::dirac(JR);
        out.nu.set_merge(false);
    }
    std::size_t top = 0;
    double mass = 1.0;
    for (int n = 1; n <= N; ++n) {
        const double dn = n;
        const double mu2 = f.M2 / (2.0 * dn + f.M2);
        const double mu3 = f.M1 / (2.0 * (dn + 1.0));
        if (keep_laminate) {
            const CM P = dn * JR;
            const CM Q2n = (dn + 1.0) * f.Q2;
            const CM topm = (dn + 1.0) * JR;
            const CM Pt = mu3 * Q2n + (1.0 - mu3) * topm;
            auto [i1, i2] = out.nu.split(top, dn * f.Q1, Pt, mu2);
            (void)i1;
            (void)P;
            auto [j1, j2] = out.nu.split(static_cast<std::size_t>(i2), Q2n, topm, mu3);
            (void)j1;
            top = static_cast<std::size_t>(j2);
        }
        for (std::size_t e = 0; e < exps.size(); ++e) {
            const double q = exps[e];
            const double add = mu2 * std::pow(dn * nq1, q) + (1.0 - mu2) * mu3 * std::pow((dn + 1.0) * nq2, q) +
                               (1.0 - mu2) * (1.0 - mu3) * std::pow((dn + 1.0) * njr, q) - std::pow(dn * njr, q);
            moment[e] += mass * add;
        }
        mass *= (1.0 - mu2) * (1.0 - mu3);
        out.mu2.push_back(mu2);
        out.mu3.push_back(mu3);
        out.mass_series.push_back(mass);
        out.moment_series.push_back(moment[0]);
        if (extra_moments)
            for (std::size_t e = 1; e < exps.size(); ++e) (*extra_moments)[e - 1].push_back(moment[e]);
    }
    return out;
}

ExactIterate iterate_exact(const DiagonalPairParams<Rational>& params, const Rational& x, const Rational& y, int N) {
    ExactIterate out;
    const CMq JR = CMq::conj_rotation({x, y});
    out.nu = Laminate<Rational>::dirac(JR);
    std::size_t top = 0;
    Rational mass(1);
    for (int n = 1; n <= N; ++n) {
        const CMq A = out.nu.atoms()[top].matrix;
        const auto s = step(params, A, n, 0.0, 0.0);
        auto [i1, i2] = out.nu.split(top, s.tQ1, s.Ptilde, s.mu2);
        (void)i1;
        auto [j1, j2] = out.nu.split(static_cast<std::size_t>(i2), s.Q2n, s.top, s.mu3);
        (void)j1;
        top = static_cast<std::size_t>(j2);
        mass *= s.mass_up;
        out.mass_series.push_back(mass);
    }
    return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) fail(ErrorCode::InvalidInput, "slope fit needs >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) fail(ErrorCode::InvalidInput, "slope fit needs positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) fail(ErrorCode::InvalidInput, "slope fit needs distinct abscissae");
    return (n * sxy - sx * sy) / den;
}

}  // namespace cistair
