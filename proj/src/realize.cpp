#include "cistair/realize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "cistair/staircase.hpp"

namespace cistair {

const char* kind_name(CellKind k) {
    switch (k) {
        case CellKind::Affine: return "affine";
        case CellKind::Target1: return "T1";
        case CellKind::Target2: return "T2";
        case CellKind::Top: return "top";
        case CellKind::Defect: return "defect";
    }
    return "?";
}

double PiecewiseAffineMap::cell_area() const {
    double s = 0;
    for (const auto& c : cells) s += polygon_area(c.poly);
    return s;
}

namespace {

double fro(const Mat2<double>& m) { return std::sqrt(m.m[0] * m.m[0] + m.m[1] * m.m[1] + m.m[2] * m.m[2] + m.m[3] * m.m[3]); }

Mat2<double> add(const Mat2<double>& a, const Mat2<double>& b, double s = 1.0) {
    return {a.m[0] + s * b.m[0], a.m[1] + s * b.m[1], a.m[2] + s * b.m[2], a.m[3] + s * b.m[3]};
}

Mat2<double> outer(Vec2 a, Vec2 v) { return {a.x * v.x, a.x * v.y, a.y * v.x, a.y * v.y}; }

// g(x) = gx * x + gy * y + g0
struct Affine1 {
    double gx, gy, g0;
};

// Keeps {g_other - g_self >= 0}.
Polygon clip_le(const Polygon& p, const Affine1& self, const Affine1& other) {
    double a = other.gx - self.gx, b = other.gy - self.gy, c = other.g0 - self.g0;
    const double n = std::hypot(a, b);
    if (n < 1e-300) return c >= 0 ? p : Polygon{};
    return clip_halfplane(p, a / n, b / n, c / n, 1e-14);
}

}  // namespace

void rank_one_factor(const Mat2<double>& D, Vec2& a, Vec2& nu) {
    const Vec2 r0{D(0, 0), D(0, 1)}, r1{D(1, 0), D(1, 1)};
    const Vec2 r = dot(r0, r0) >= dot(r1, r1) ? r0 : r1;
    const double len = std::hypot(r.x, r.y);
    if (len == 0) {
        a = {0, 0};
        nu = {1, 0};
        return;
    }
    nu = (1.0 / len) * r;
    a = {dot(r0, nu), dot(r1, nu)};
}

PiecewiseAffineMap realize_first_order(const Polygon& cell, const Mat2<double>& A, Vec2 offset, const Mat2<double>& B,
                                       const Mat2<double>& C, double lambda, const FirstOrderOptions& opt) {
    if (lambda < 0 || lambda > 1) fail(ErrorCode::InvalidInput, "split fraction outside [0,1]");
    if (opt.kappa < 1) fail(ErrorCode::InvalidInput, "boundary-layer slope kappa must be >= 1");
    const Mat2<double> D = add(B, C, -1.0);
    const Mat2<double> mix = add(C, D, lambda);
    const double scale = std::max({1.0, fro(A), fro(B), fro(C)});
    if (fro(add(mix, A, -1.0)) > 1e-10 * scale) fail(ErrorCode::Invariant, "A != lambda B + (1-lambda) C");
    if (std::fabs(D.det()) > 1e-9 * fro(D) * fro(D)) fail(ErrorCode::Invariant, "B - C is not rank-one");

    PiecewiseAffineMap out;
    out.domain = cell;
    out.boundary = A;
    auto emit = [&](Polygon poly, const Mat2<double>& G, Vec2 c, int atom) {
        Cell x;
        x.poly = std::move(poly);
        x.G = G;
        x.c = c;
        x.atom = atom;
        out.cells.push_back(std::move(x));
    };
    if (fro(D) <= 1e-14 * scale || lambda == 0 || lambda == 1) {
        emit(cell, A, offset, lambda == 0 ? 1 : 0);
        return out;
    }
    Vec2 a, nu;
    rank_one_factor(D, a, nu);
    double lo, hi, plo, phi;
    project_extent(cell, nu, lo, hi);
    project_extent(cell, {-nu.y, nu.x}, plo, phi);
    const double W = hi - lo, Lpar = std::max(phi - plo, 1e-300);
    const double want = lambda * (1 - lambda) * W / (opt.kappa * Lpar * opt.defect_target);
    int k = std::clamp(static_cast<int>(std::ceil(want)), opt.min_bands, opt.max_bands);
    if (opt.max_band_width > 0) k = std::max(k, static_cast<int>(std::ceil(W / opt.max_band_width - 1e-9)));
    const double p = W / k;
    const double cell_area = polygon_area(cell);

    std::vector<Affine1> edges;
    for (std::size_t i = 0, n = cell.size(); i < n; ++i) {
        const Vec2 e = cell[(i + 1) % n] - cell[i];
        const double len = std::hypot(e.x, e.y);
        if (len == 0) continue;
        const Vec2 in{-e.y / len, e.x / len};
        edges.push_back({opt.kappa * in.x, opt.kappa * in.y, -opt.kappa * dot(in, cell[i])});
    }
    for (int i = 0; i < k; ++i) {
        const double x0 = lo + i * p, x1 = i + 1 == k ? hi : lo + (i + 1) * p;
        Polygon band = clip_halfplane(cell, nu.x, nu.y, -x0, 1e-14);
        band = clip_halfplane(band, -nu.x, -nu.y, x1, 1e-14);
        if (band.empty()) continue;
        std::vector<Affine1> cand;
        cand.push_back({(1 - lambda) * nu.x, (1 - lambda) * nu.y, -(1 - lambda) * x0});
        cand.push_back({-lambda * nu.x, -lambda * nu.y, lambda * x1});
        cand.insert(cand.end(), edges.begin(), edges.end());
        for (std::size_t ci = 0; ci < cand.size(); ++ci) {
            Polygon region = band;
            for (std::size_t d = 0; d < cand.size() && !region.empty(); ++d)
                if (d != ci) region = clip_le(region, cand[ci], cand[d]);
            if (region.empty() || polygon_area(region) <= 1e-14 * cell_area) continue;
            const Affine1& g = cand[ci];
            const Mat2<double> G = add(A, outer(a, {g.gx, g.gy}));
            const Vec2 c = offset + g.g0 * a;
            emit(std::move(region), G, c, ci < 2 ? static_cast<int>(ci) : -1);
        }
    }
    return out;
}

namespace {

void realize_node(const Laminate<double>& lam, int node, const Polygon& poly, const Mat2<double>& G, Vec2 c,
                  const FirstOrderOptions& opt, PiecewiseAffineMap& out) {
    const auto& nd = lam.nodes()[node];
    if (nd.leaf()) {
        Cell x;
        x.poly = poly;
        x.G = G;
        x.c = c;
        x.atom = nd.atom;
        x.node = node;
        out.cells.push_back(std::move(x));
        return;
    }
    const auto sub = realize_first_order(poly, G, c, lam.nodes()[nd.left].matrix.to_real(),
                                         lam.nodes()[nd.right].matrix.to_real(), nd.lambda, opt);
    for (const auto& piece : sub.cells) {
        if (piece.atom == 0)
            realize_node(lam, nd.left, piece.poly, piece.G, piece.c, opt, out);
        else if (piece.atom == 1)
            realize_node(lam, nd.right, piece.poly, piece.G, piece.c, opt, out);
        else {
            Cell x = piece;
            x.atom = -1;
            x.node = node;
            out.cells.push_back(std::move(x));
        }
    }
}

}  // namespace

PiecewiseAffineMap realize_laminate(const Polygon& cell, const Mat2<double>& A, Vec2 offset,
                                    const Laminate<double>& lam, const FirstOrderOptions& opt) {
    PiecewiseAffineMap out;
    out.domain = cell;
    out.boundary = A;
    const Mat2<double> root = lam.nodes()[0].matrix.to_real();
    if (fro(add(root, A, -1.0)) > 1e-10 * std::max(1.0, fro(A)))
        fail(ErrorCode::InvalidInput, "laminate barycenter differs from the boundary gradient");
    realize_node(lam, 0, cell, A, offset, opt, out);
    return out;
}

// ---------------------------------------------------------------- audits

AuditResult audit_area(const PiecewiseAffineMap& m, double rel_tol) {
    AuditResult r;
    r.name = "area";
    const double dom = polygon_area(m.domain);
    const double sum = m.cell_area();
    r.worst = std::fabs(sum - dom) / dom;
    r.ok = r.worst <= rel_tol;
    if (!r.ok) {
        std::ostringstream os;
        os << "cell areas sum to " << sum << ", domain area " << dom;
        r.detail = os.str();
    }
    return r;
}

AuditResult audit_convexity(const PiecewiseAffineMap& m) {
    AuditResult r;
    r.name = "convexity";
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
        if (!is_convex_ccw(m.cells[i].poly, 1e-12)) {
            r.ok = false;
            r.detail = "cell " + std::to_string(i) + " is not a convex counter-clockwise polygon";
            return r;
        }
    }
    return r;
}

namespace {

struct EdgeRec {
    double phi, off;  // line key
    double s0, s1;    // parameter interval along the line direction
    Vec2 base, dir;
    int cell;
};

}  // namespace

AuditResult audit_continuity(const PiecewiseAffineMap& m, double tol) {
    AuditResult r;
    r.name = "continuity";
    std::vector<EdgeRec> edges;
    for (std::size_t ci = 0; ci < m.cells.size(); ++ci) {
        const Polygon& p = m.cells[ci].poly;
        for (std::size_t i = 0, n = p.size(); i < n; ++i) {
            Vec2 a = p[i], b = p[(i + 1) % n];
            Vec2 d = b - a;
            const double len = std::hypot(d.x, d.y);
            if (len < 1e-15) continue;
            d = (1.0 / len) * d;
            if (d.y < 0 || (d.y == 0 && d.x < 0)) d = -1.0 * d;
            double phi = std::atan2(d.y, d.x);
            if (phi >= M_PI - 1e-12) phi -= M_PI;
            const Vec2 nrm{-d.y, d.x};
            double s0 = dot(d, a), s1 = dot(d, b);
            if (s0 > s1) std::swap(s0, s1);
            edges.push_back({phi, dot(nrm, a), s0, s1, a, d, static_cast<int>(ci)});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const EdgeRec& x, const EdgeRec& y) {
        return x.phi != y.phi ? x.phi < y.phi : x.off < y.off;
    });
    // Cluster by angle, then by offset within each angle cluster.
    const double ang_tol = 1e-9, off_tol = 1e-10;
    long compared = 0;
    std::size_t i = 0;
    while (i < edges.size()) {
        std::size_t j = i + 1;
        while (j < edges.size() && edges[j].phi - edges[j - 1].phi <= ang_tol) ++j;
        std::vector<EdgeRec> group(edges.begin() + i, edges.begin() + j);
        std::sort(group.begin(), group.end(), [](const EdgeRec& x, const EdgeRec& y) { return x.off < y.off; });
        std::size_t u = 0;
        while (u < group.size()) {
            std::size_t v = u + 1;
            while (v < group.size() && group[v].off - group[v - 1].off <= off_tol) ++v;
            std::vector<const EdgeRec*> line;
            for (std::size_t w = u; w < v; ++w) line.push_back(&group[w]);
            std::sort(line.begin(), line.end(), [](const EdgeRec* x, const EdgeRec* y) { return x->s0 < y->s0; });
            // sweep overlapping intervals
            std::vector<const EdgeRec*> open;
            for (const EdgeRec* e : line) {
                open.erase(std::remove_if(open.begin(), open.end(),
                                          [&](const EdgeRec* o) { return o->s1 <= e->s0 + 1e-13; }),
                           open.end());
                for (const EdgeRec* o : open) {
                    if (o->cell == e->cell) continue;
                    const double lo = std::max(o->s0, e->s0), hi = std::min(o->s1, e->s1);
                    if (hi - lo <= 1e-13) continue;
                    const Cell& A = m.cells[e->cell];
                    const Cell& B = m.cells[o->cell];
                    for (double s : {lo, hi}) {
                        const Vec2 x = e->base + (s - dot(e->dir, e->base)) * e->dir;
                        const Vec2 fa = A.eval(x), fb = B.eval(x);
                        const double scale = std::max({1.0, std::hypot(fa.x, fa.y)});
                        const double err = std::hypot(fa.x - fb.x, fa.y - fb.y) / scale;
                        ++compared;
                        if (err > r.worst) r.worst = err;
                        if (err > tol && r.ok) {
                            r.ok = false;
                            std::ostringstream os;
                            os << "cells " << o->cell << " and " << e->cell << " disagree by " << err << " at ("
                               << x.x << ", " << x.y << ")";
                            r.detail = os.str();
                        }
                    }
                }
                open.push_back(e);
            }
            u = v;
        }
        i = j;
    }
    if (r.ok) r.detail = std::to_string(compared) + " shared-edge point comparisons";
    return r;
}

AuditResult audit_boundary(const PiecewiseAffineMap& m, double tol) {
    AuditResult r;
    r.name = "boundary";
    long checked = 0;
    const double diam = polygon_diameter(m.domain);
    for (std::size_t ci = 0; ci < m.cells.size(); ++ci) {
        const Cell& c = m.cells[ci];
        for (const Vec2& v : c.poly) {
            if (boundary_distance(m.domain, v) > 1e-12 * diam) continue;
            ++checked;
            const Vec2 f = c.eval(v);
            const Vec2 g{m.boundary(0, 0) * v.x + m.boundary(0, 1) * v.y, m.boundary(1, 0) * v.x + m.boundary(1, 1) * v.y};
            const double err = std::hypot(f.x - g.x, f.y - g.y) / std::max(1.0, std::hypot(g.x, g.y));
            r.worst = std::max(r.worst, err);
            if (err > tol && r.ok) {
                r.ok = false;
                std::ostringstream os;
                os << "cell " << ci << " misses the boundary datum by " << err << " at (" << v.x << ", " << v.y << ")";
                r.detail = os.str();
            }
        }
    }
    if (r.ok) r.detail = std::to_string(checked) + " boundary vertices";
    return r;
}

double sup_deviation(const PiecewiseAffineMap& m) {
    double s = 0;
    for (const auto& c : m.cells)
        for (const Vec2& v : c.poly) {
            const Vec2 f = c.eval(v);
            const Vec2 g{m.boundary(0, 0) * v.x + m.boundary(0, 1) * v.y, m.boundary(1, 0) * v.x + m.boundary(1, 1) * v.y};
            s = std::max(s, std::hypot(f.x - g.x, f.y - g.y));
        }
    return s;
}

double holder_seminorm(const PiecewiseAffineMap& m, double alpha, std::uint64_t seed, int samples) {
    struct VP {
        Vec2 x, h;
    };
    std::vector<VP> pts;
    double best = 0;
    auto dev = [&](const Cell& c, Vec2 v) {
        const Vec2 f = c.eval(v);
        return Vec2{f.x - (m.boundary(0, 0) * v.x + m.boundary(0, 1) * v.y),
                    f.y - (m.boundary(1, 0) * v.x + m.boundary(1, 1) * v.y)};
    };
    auto ratio = [&](const VP& a, const VP& b) {
        const double d = std::hypot(a.x.x - b.x.x, a.x.y - b.x.y);
        if (d < 1e-14) return 0.0;
        return std::hypot(a.h.x - b.h.x, a.h.y - b.h.y) / std::pow(d, alpha);
    };
    for (const auto& c : m.cells) {
        const std::size_t first = pts.size();
        for (const Vec2& v : c.poly) pts.push_back({v, dev(c, v)});
        for (std::size_t i = first; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, ratio(pts[i], pts[j]));
    }
    if (pts.size() > 1) {
        std::mt19937_64 g(seed);
        std::uniform_int_distribution<std::size_t> u(0, pts.size() - 1);
        for (int s = 0; s < samples; ++s) best = std::max(best, ratio(pts[u(g)], pts[u(g)]));
    }
    return best;
}

// ---------------------------------------------------------------- staircase map

namespace {

TargetSpec<double> original_targets(const DiagonalPairParams<double>& p) {
    return {diagonal_params_raw<double>(p.K, p.S1, p.S2)};
}

double dist_S1_T(const DiagonalPairParams<double>& p) {
    const auto ts = original_targets(p);
    double best = 1e300;
    for (int i = 0; i < 3600; ++i) {
        const double th = 2 * M_PI * i / 3600;
        best = std::min(best, ts.dist_to_T(CM::conj_rotation({std::cos(th), std::sin(th)})));
    }
    return best;
}

double p_of(const DiagonalPairParams<double>& p, double th) { return theta_functions(p, th, false).p; }

// Modulus of continuity of p at step delta, sampled on a grid.
double modulus(const DiagonalPairParams<double>& p, double delta) {
    double w = 0;
    const int G = 720;
    for (int i = 0; i < G; ++i) {
        const double th = 2 * M_PI * i / G;
        w = std::max(w, std::fabs(p_of(p, th + delta) - p_of(p, th)));
    }
    return w;
}

}  // namespace

double empirical_decomposition_constant(const DiagonalPairParams<double>& p, std::uint64_t seed, int samples) {
    const TargetSpec<double> ts{p};
    std::mt19937_64 g(seed);
    std::normal_distribution<double> u;
    double c = 1;
    for (int i = 0; i < samples; ++i) {
        CM A{{u(g), u(g)}, {u(g), u(g)}};
        A = (1.0 / A.hs_norm()) * A;
        if (ts.dist_to_target(A, 1) < 1e-6) continue;
        const auto d = decompose_through_infinity(ts, A);
        if (d.degenerate) continue;
        for (double v : {(d.P - d.Q).hs_norm(), d.P.hs_norm(), d.Q.hs_norm()}) c = std::max({c, v, 1 / v});
    }
    return c;
}

void derive_sequences(StaircaseParams& sp, const DiagonalPairParams<double>& coeffs) {
    if (sp.N < 1) fail(ErrorCode::InvalidInput, "depth N must be >= 1");
    if (!(sp.gamma > 0)) fail(ErrorCode::InvalidInput, "gamma must be positive");
    if (!(sp.epsilon > 0)) fail(ErrorCode::InvalidInput, "epsilon must be positive");
    if (!(sp.alpha > 0 && sp.alpha < 1)) fail(ErrorCode::InvalidInput, "alpha must lie in (0,1)");
    const double gap = 2 * coeffs.K / (coeffs.K + 1) - 2 * coeffs.S / (coeffs.S + 1);
    if (!(sp.delta0 > 0)) fail(ErrorCode::InvalidInput, "delta0 must be positive");
    if (gap > 1e-12 && sp.delta0 >= gap) fail(ErrorCode::InvalidInput, "delta0 must be below 2K/(K+1) - 2S/(S+1)");
    // largest delta < pi/4 (on a bisection) with modulus(delta) < delta0
    double lo = 0, hi = M_PI / 4 * 0.999;
    if (modulus(coeffs, hi) < sp.delta0) {
        lo = hi;
    } else {
        for (int it = 0; it < 40; ++it) {
            const double mid = 0.5 * (lo + hi);
            (modulus(coeffs, mid) < sp.delta0 ? lo : hi) = mid;
        }
    }
    sp.delta = lo;
    sp.m_const = m_const(coeffs);
    sp.c_hat = empirical_decomposition_constant(coeffs, sp.seed, 20000);
    sp.dist_S1_T = dist_S1_T(coeffs);
    sp.rho.assign(sp.N + 2, 0.0);
    sp.rho[1] = 0.25 * std::min({sp.m_const, 1 / sp.c_hat, sp.dist_S1_T, sp.gamma}) * 0.99;
    for (int n = 2; n <= sp.N + 1; ++n) sp.rho[n] = std::min(sp.rho[n - 1] * 0.99, sp.delta / 4 * std::ldexp(1.0, -n) * 0.99);
    sp.delta_n.assign(sp.N + 2, 0.0);
    for (int n = 2; n <= sp.N + 1; ++n) sp.delta_n[n] = sp.delta_n[n - 1] + sp.rho[n - 1];
}

std::vector<double> omega_areas_from_cells(const PiecewiseAffineMap& m, int depth) {
    // x in Omega_n  iff  n <= level, or the cell is still active (n = level + 1 for
    // refined pieces; every later n for frozen boundary-layer pieces).
    std::vector<double> a(depth + 1, 0.0);
    const double dom = polygon_area(m.domain);
    for (const auto& c : m.cells) {
        const double ar = polygon_area(c.poly) / dom;
        int top = c.level + (c.active ? 1 : 0);
        if (c.active && c.kind == CellKind::Defect) top = depth + 1;
        top = std::min(depth + 1, top);
        for (int n = 1; n <= top; ++n) a[n - 1] += ar;
    }
    return a;
}

StaircaseRun build_staircase_map(const StaircaseParams& params, const Polygon& domain,
                                 const DiagonalPairParams<double>& coeffs) {
    StaircaseRun run;
    run.params = params;
    run.coeffs = coeffs;
    derive_sequences(run.params, coeffs);
    const StaircaseParams& sp = run.params;
    if (!is_convex_ccw(domain, 1e-12)) fail(ErrorCode::InvalidInput, "domain must be a convex counter-clockwise polygon");
    const TargetSpec<double> ts{coeffs};
    const TargetSpec<double> orig = original_targets(coeffs);
    const double dom_area = polygon_area(domain);
    run.p_delta0 = theta_functions(coeffs, sp.delta, false).p;
    run.map.domain = domain;
    run.map.boundary = CM::J().to_real();

    // growth-sandwich constant from perturbed steps at the configured rho_1
    {
        std::mt19937_64 g(sp.seed + 1);
        std::uniform_real_distribution<double> u(-1, 1);
        double c = 0;
        for (int i = 0; i < 2000; ++i) {
            const long n = 1 + static_cast<long>(g() % 16);
            const double th = sp.delta * u(g);
            CM A = static_cast<double>(n) * CM::conj_rotation({std::cos(th), std::sin(th)});
            CM E{{u(g), u(g)}, {u(g), u(g)}};
            A = A + (0.5 * sp.rho[1] * std::fabs(u(g)) / E.hs_norm()) * E;
            const auto s = step(coeffs, A, n, sp.rho[1], sp.delta);
            const double pth = 1 + theta_functions(coeffs, s.theta(), false).l;
            const double b = beta(pth, n), b2 = beta(pth, n + 2);
            if (b > 0) c = std::max(c, (b - s.mass_up) * n / (sp.rho[1] * b));
            c = std::max(c, (s.mass_up - b2) * n / (sp.rho[1] * b2));
        }
        run.c_growth = c;
    }

    Cell root;
    root.poly = domain;
    root.G = run.map.boundary;
    root.level = 0;
    root.kind = CellKind::Affine;
    std::vector<Cell> active{root};
    std::vector<Cell> done;
    run.omega_n_areas.push_back(1.0);
    double lower = 1, upper = 1;
    const double p0 = 1 + theta_functions(coeffs, 0.0, false).l;
    const double pd = 1 + theta_functions(coeffs, sp.delta, false).l;
    run.levels.push_back({1, 1.0, 0.0, 0.0, 1.0, 1.0, 1});

    for (int n = 1; n <= sp.N; ++n) {
        std::vector<Cell> next, retired, frozen;
        double defect = 0, max_theta = 0;
        for (const Cell& cell : active) {
            if (cell.kind == CellKind::Defect) {
                // boundary-layer pieces are not refined further
                frozen.push_back(cell);
                continue;
            }
            CM A = CM::from_real(cell.G);
            if (coeffs.flipped) A = A.transpose();
            InfinityDecomposition<double> dec;
            try {
                dec = decompose_through_infinity(ts, A);
            } catch (const Error&) {
                Cell x = cell;
                x.level = n;
                x.active = false;
                retired.push_back(std::move(x));
                continue;
            }
            max_theta = std::max(max_theta, std::fabs(dec.theta()));
            StaircaseStep<double> st = build_step(coeffs, A, dec, dec.t);
            Laminate<double> lam = std::move(st.nu);
            if (coeffs.flipped) lam = lam.map_matrices([](const CM& m) { return m.transpose(); });
            PiecewiseAffineMap sub = realize_laminate(cell.poly, cell.G, cell.c, lam, sp.split);
            for (Cell& x : sub.cells) {
                x.level = n;
                const CM g = CM::from_real(x.G);
                const double d1 = orig.dist_to_target(g, 1), d2 = orig.dist_to_target(g, 2);
                if (std::min(d1, d2) < sp.rho[n + 1]) {
                    x.active = false;
                    x.kind = d1 <= d2 ? CellKind::Target1 : CellKind::Target2;
                    retired.push_back(std::move(x));
                } else {
                    x.active = true;
                    x.kind = x.atom < 0 ? CellKind::Defect : CellKind::Top;
                    if (x.atom < 0) defect += polygon_area(x.poly);
                    next.push_back(std::move(x));
                }
            }
            // nesting: every child lies inside its parent cell
            const double tol = 1e-9 * polygon_diameter(cell.poly);
            for (const Cell& x : sub.cells)
                for (Vec2 v : x.poly)
                    if (!polygon_contains(cell.poly, v, tol)) run.nesting_ok = false;
        }
        const long total = static_cast<long>(done.size() + retired.size() + next.size() + frozen.size());
        if (total > sp.cell_budget) {
            run.budget_exhausted = true;
            break;
        }
        done.insert(done.end(), std::make_move_iterator(retired.begin()), std::make_move_iterator(retired.end()));
        active = std::move(next);
        active.insert(active.end(), std::make_move_iterator(frozen.begin()), std::make_move_iterator(frozen.end()));
        run.achieved_depth = n;
        double area = 0;
        for (const Cell& c : active) area += polygon_area(c.poly);
        area /= dom_area;
        if (area > run.omega_n_areas.back() + 1e-12) run.nesting_ok = false;
        run.omega_n_areas.push_back(area);
        lower *= std::max(0.0, (1 - run.c_growth * sp.rho[n] / n) * beta(p0, n));
        upper *= (1 + run.c_growth * sp.rho[n] / n) * beta(pd, n + 2);
        LevelStats ls;
        ls.n = n + 1;
        ls.omega_area = area;
        ls.defect_area = defect / dom_area;
        ls.max_theta = max_theta;
        ls.lower = lower;
        ls.upper = upper;
        ls.cells = total;
        run.levels.push_back(ls);
    }
    done.insert(done.end(), std::make_move_iterator(active.begin()), std::make_move_iterator(active.end()));
    run.map.cells = std::move(done);
    return run;
}

SigmaField extract_sigma_field(const PiecewiseAffineMap& m, const DiagonalPairParams<double>& coeffs, double gamma) {
    const TargetSpec<double> ts = original_targets(coeffs);
    SigmaField f;
    const std::size_t n = m.cells.size();
    f.phase.resize(n);
    f.residual_a.resize(n);
    f.residual_b.resize(n);
    f.ambiguous.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const CM g = CM::from_real(m.cells[i].G);
        const double d1 = ts.dist_to_target(g, 1), d2 = ts.dist_to_target(g, 2);
        const int j = d1 <= d2 ? 1 : 2;
        f.phase[i] = j;
        if (std::fabs(d1 - d2) <= 1e-12 * std::max(1.0, g.hs_norm())) f.ambiguous[i] = 1;
        const Mat2<double> r = (g - ts.project(g, j)).to_real();
        f.residual_a[i] = {r(0, 0), r(0, 1)};
        f.residual_b[i] = {r(1, 0), r(1, 1)};
        if (!m.cells[i].active) {
            const double res = std::max(std::hypot(r(0, 0), r(0, 1)), std::hypot(r(1, 0), r(1, 1)));
            f.max_residual_retired = std::max(f.max_residual_retired, res);
            f.max_dist_retired = std::max(f.max_dist_retired, std::min(d1, d2));
        }
    }
    f.c_ratio = f.max_residual_retired / gamma;
    return f;
}

}  // namespace cistair
