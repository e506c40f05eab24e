#include "cistair/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cistair {

Polygon rectangle(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

double polygon_area(const Polygon& p) {
    double s = 0;
    for (std::size_t i = 0, n = p.size(); i < n; ++i) s += cross(p[i], p[(i + 1) % n]);
    return 0.5 * s;
}

Vec2 polygon_centroid(const Polygon& p) {
    double a = 0, cx = 0, cy = 0;
    // shift to the first vertex for accuracy on small cells
    const Vec2 o = p.empty() ? Vec2{} : p[0];
    for (std::size_t i = 0, n = p.size(); i < n; ++i) {
        const Vec2 u = p[i] - o, v = p[(i + 1) % n] - o;
        const double w = cross(u, v);
        a += w;
        cx += (u.x + v.x) * w;
        cy += (u.y + v.y) * w;
    }
    if (a == 0) return o;
    return {o.x + cx / (3 * a), o.y + cy / (3 * a)};
}

double polygon_diameter(const Polygon& p) {
    double d = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) d = std::max(d, std::hypot(p[i].x - p[j].x, p[i].y - p[j].y));
    return d;
}

Polygon clip_halfplane(const Polygon& p, double a, double b, double c, double eps) {
    Polygon out;
    const std::size_t n = p.size();
    if (n == 0) return out;
    out.reserve(n + 1);
    std::vector<double> v(n);
    bool all_in = true, all_out = true;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = a * p[i].x + b * p[i].y + c;
        if (std::fabs(v[i]) <= eps) v[i] = 0;
        if (v[i] < 0) all_in = false;
        if (v[i] > 0) all_out = false;
    }
    if (all_in) return p;
    if (all_out) return out;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        if (v[i] >= 0) out.push_back(p[i]);
        if ((v[i] > 0 && v[j] < 0) || (v[i] < 0 && v[j] > 0)) {
            const double t = v[i] / (v[i] - v[j]);
            out.push_back({p[i].x + t * (p[j].x - p[i].x), p[i].y + t * (p[j].y - p[i].y)});
        }
    }
    // drop consecutive duplicates
    Polygon clean;
    for (const Vec2& q : out) {
        if (!clean.empty() && clean.back().x == q.x && clean.back().y == q.y) continue;
        clean.push_back(q);
    }
    while (clean.size() > 1 && clean.front().x == clean.back().x && clean.front().y == clean.back().y)
        clean.pop_back();
    if (clean.size() < 3) clean.clear();
    return clean;
}

bool polygon_contains(const Polygon& p, Vec2 q, double eps) {
    for (std::size_t i = 0, n = p.size(); i < n; ++i) {
        const Vec2 e = p[(i + 1) % n] - p[i];
        const double len = std::hypot(e.x, e.y);
        if (len == 0) continue;
        if (cross(e, q - p[i]) / len < -eps) return false;
    }
    return true;
}

void project_extent(const Polygon& p, Vec2 dir, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const Vec2& q : p) {
        const double s = dot(dir, q);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
}

bool is_convex_ccw(const Polygon& p, double eps) {
    const std::size_t n = p.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = p[i], b = p[(i + 1) % n], c = p[(i + 2) % n];
        if (cross(b - a, c - b) < -eps) return false;
    }
    return polygon_area(p) > 0;
}

double boundary_distance(const Polygon& p, Vec2 q) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, n = p.size(); i < n; ++i) {
        const Vec2 a = p[i], e = p[(i + 1) % n] - a;
        const double L2 = dot(e, e);
        double t = L2 > 0 ? dot(q - a, e) / L2 : 0;
        t = std::clamp(t, 0.0, 1.0);
        const Vec2 d = q - (a + t * e);
        best = std::min(best, std::hypot(d.x, d.y));
    }
    return best;
}

}  // namespace cistair
