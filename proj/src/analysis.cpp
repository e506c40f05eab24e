#include "cistair/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "cistair/errors.hpp"
#include "cistair/staircase.hpp"

namespace cistair {

double matrix_norm(const Mat2<double>& G, NormKind kind) {
    if (kind == NormKind::HS) return std::sqrt(G.m[0] * G.m[0] + G.m[1] * G.m[1] + G.m[2] * G.m[2] + G.m[3] * G.m[3]);
    return ConformalMatrix<double>::from_real(G).op_norm();
}

std::vector<double> log_grid(double t0, double t1, int count) {
    if (!(t0 > 0) || !(t1 > t0) || count < 2) fail(ErrorCode::InvalidInput, "bad t grid");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = t0 * std::pow(t1 / t0, static_cast<double>(i) / (count - 1));
    g.back() = t1;
    return g;
}

DistributionProfile distribution_function(const PiecewiseAffineMap& m, const std::vector<double>& t_grid,
                                          double fit_min, double fit_max, NormKind kind) {
    std::vector<std::pair<double, double>> na;
    na.reserve(m.cells.size());
    for (const Cell& c : m.cells) na.push_back({matrix_norm(c.G, kind), polygon_area(c.poly)});
    std::sort(na.begin(), na.end());
    // suffix sums: mass strictly above a norm value
    std::vector<double> suffix(na.size() + 1, 0.0);
    for (std::size_t i = na.size(); i-- > 0;) suffix[i] = suffix[i + 1] + na[i].second;
    const double total = polygon_area(m.domain);

    DistributionProfile prof;
    prof.t_grid = t_grid;
    prof.fit_min = fit_min;
    prof.fit_max = fit_max;
    std::vector<double> fx, fy;
    for (double t : t_grid) {
        const auto it = std::upper_bound(na.begin(), na.end(), std::make_pair(t, HUGE_VAL));
        const double lam = std::clamp(suffix[it - na.begin()] / total, 0.0, 1.0);
        prof.lambda_values.push_back(lam);
        if (t >= fit_min && t <= fit_max && lam > 0) {
            fx.push_back(t);
            fy.push_back(lam);
        }
    }
    prof.fitted_slope = fx.size() >= 2 ? loglog_slope(fx, fy) : NAN;
    return prof;
}

double weak_lp_quasinorm(const DistributionProfile& prof, double p) {
    if (p < 1) fail(ErrorCode::InvalidInput, "quasinorm needs p >= 1");
    double s = 0;
    for (std::size_t i = 0; i < prof.t_grid.size(); ++i) s = std::max(s, std::pow(prof.t_grid[i], p) * prof.lambda_values[i]);
    return std::pow(s, 1.0 / p);
}

double lp_integral(const PiecewiseAffineMap& m, double p, NormKind kind) {
    if (p < 1) fail(ErrorCode::InvalidInput, "Lp integral needs p >= 1");
    double s = 0;
    for (const Cell& c : m.cells) s += polygon_area(c.poly) * std::pow(matrix_norm(c.G, kind), p);
    return s;
}

double layer_cake_integral(const PiecewiseAffineMap& m, double p, NormKind kind) {
    std::vector<std::pair<double, double>> na;
    for (const Cell& c : m.cells) na.push_back({matrix_norm(c.G, kind), polygon_area(c.poly)});
    std::sort(na.begin(), na.end());
    double above = 0;
    for (const auto& e : na) above += e.second;
    // lambda is constant between consecutive breakpoints
    double s = 0, prev = 0;
    for (const auto& e : na) {
        s += above * (std::pow(e.first, p) - std::pow(prev, p));
        above -= e.second;
        prev = e.first;
    }
    return s;
}

WeakResidual weak_residual(const PiecewiseAffineMap& m, const CoefficientPair& sigma, const SigmaField& field,
                           double gamma, int grid) {
    if (grid < 1) fail(ErrorCode::InvalidInput, "test grid must be >= 1");
    if (field.phase.size() != m.cells.size()) fail(ErrorCode::InvalidInput, "sigma field does not match mesh");
    double x0, x1, y0, y1;
    project_extent(m.domain, {1, 0}, x0, x1);
    project_extent(m.domain, {0, 1}, y0, y1);
    const double hx = (x1 - x0) / (grid + 1), hy = (y1 - y0) / (grid + 1);

    // flux sigma grad f^1 per cell
    std::vector<Vec2> flux(m.cells.size());
    for (std::size_t k = 0; k < m.cells.size(); ++k) {
        const Mat2<double>& s = field.phase[k] == 1 ? sigma.sigma1 : sigma.sigma2;
        const Vec2 e{m.cells[k].G(0, 0), m.cells[k].G(0, 1)};
        flux[k] = {s(0, 0) * e.x + s(0, 1) * e.y, s(1, 0) * e.x + s(1, 1) * e.y};
    }

    WeakResidual out;
    // int over a quadrant of |grad phi| for the bilinear hat: h_x h_y int_0^1 int_0^1 |((1-v)/h_x, (1-u)/h_y)|
    auto quadrant_l1 = [&]() {
        if (std::fabs(hx - hy) <= 1e-15 * hx) return hx * (std::sqrt(2.0) + std::log(1 + std::sqrt(2.0))) / 3.0;
        const int q = 400;
        double s = 0;
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) {
                const double u = (a + 0.5) / q, v = (b + 0.5) / q;
                s += std::hypot(v / hx, u / hy);
            }
        return hx * hy * s / (q * q);
    };
    const double l1 = 4 * quadrant_l1();

    for (int i = 1; i <= grid; ++i)
        for (int j = 1; j <= grid; ++j) {
            const double cx = x0 + i * hx, cy = y0 + j * hy;
            double val = 0;
            for (std::size_t k = 0; k < m.cells.size(); ++k) {
                double lo, hi, lo2, hi2;
                project_extent(m.cells[k].poly, {1, 0}, lo, hi);
                if (hi <= cx - hx || lo >= cx + hx) continue;
                project_extent(m.cells[k].poly, {0, 1}, lo2, hi2);
                if (hi2 <= cy - hy || lo2 >= cy + hy) continue;
                for (int sx = -1; sx <= 1; sx += 2)
                    for (int sy = -1; sy <= 1; sy += 2) {
                        // quadrant box between the centre and the corner (cx + sx hx, cy + sy hy)
                        Polygon p = m.cells[k].poly;
                        p = clip_halfplane(p, sx, 0, -sx * cx);
                        p = clip_halfplane(p, -sx, 0, sx * (cx + sx * hx));
                        p = clip_halfplane(p, 0, sy, -sy * cy);
                        p = clip_halfplane(p, 0, -sy, sy * (cy + sy * hy));
                        if (p.size() < 3) continue;
                        const double area = polygon_area(p);
                        const Vec2 g = polygon_centroid(p);
                        // grad phi is affine on the quadrant, so its centroid value integrates exactly
                        const double wx = 1 - std::fabs(g.x - cx) / hx, wy = 1 - std::fabs(g.y - cy) / hy;
                        const Vec2 gp{-sx * wy / hx, -sy * wx / hy};
                        val += area * dot(flux[k], gp);
                    }
            }
            ResidualEntry e{i, j, val, l1};
            out.entries.push_back(e);
            out.max_abs = std::max(out.max_abs, std::fabs(val));
            out.c = std::max(out.c, std::fabs(val) / (gamma * l1));
        }
    return out;
}

}  // namespace cistair
