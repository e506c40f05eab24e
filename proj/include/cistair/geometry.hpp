#pragma once

#include <vector>

namespace cistair {

struct Vec2 {
    double x = 0;
    double y = 0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Convex polygon, counter-clockwise vertex order.
using Polygon = std::vector<Vec2>;

Polygon rectangle(double x0, double y0, double x1, double y1);
double polygon_area(const Polygon& p);
Vec2 polygon_centroid(const Polygon& p);
double polygon_diameter(const Polygon& p);
// Keeps the part where a*x + b*y + c >= 0. Vertices within eps of the line count as on it.
Polygon clip_halfplane(const Polygon& p, double a, double b, double c, double eps = 0.0);
bool polygon_contains(const Polygon& p, Vec2 q, double eps);
// Extent of the polygon along a unit direction.
void project_extent(const Polygon& p, Vec2 dir, double& lo, double& hi);
bool is_convex_ccw(const Polygon& p, double eps);
// Distance from q to the polygon boundary.
double boundary_distance(const Polygon& p, Vec2 q);

}  // namespace cistair
