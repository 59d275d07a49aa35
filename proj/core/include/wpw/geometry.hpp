#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace wpw {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 perp() const { return {-y, x}; } // rotated +90 degrees
};

/// Oriented cut line { q : q . (cos theta, sin theta) = c }, theta in [0, pi).
struct CutLine {
    double theta = 0.0;
    double c = 0.0;
    Vec2 normal() const { return {std::cos(theta), std::sin(theta)}; }
};

/// Bounded convex planar domain as a counterclockwise vertex list.
/// Construction enforces >= 3 vertices, convexity up to rounding and
/// positive area.
class ConvexPolygon {
public:
    explicit ConvexPolygon(std::vector<Vec2> vertices);

    const std::vector<Vec2>& vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }

    double area() const;
    Vec2 centroid() const;

    static ConvexPolygon rectangle(double x0, double y0, double x1, double y1);
    static ConvexPolygon regular(int n_sides, double circumradius, Vec2 center = {0, 0});

private:
    std::vector<Vec2> verts_;
};

/// Split by the half planes q.n <= c (left) and q.n >= c (right). Empty sides
/// come back disengaged; area is conserved: area(left) + area(right) =
/// area(poly) up to rounding.
std::pair<std::optional<ConvexPolygon>, std::optional<ConvexPolygon>>
clip(const ConvexPolygon& poly, const CutLine& line);

/// Maximum pairwise vertex distance (the polygon diameter).
double diameter(const ConvexPolygon& poly);

/// Minimal directional extent and a unit vector achieving it (the direction
/// across the strip). For convex polygons the minimum is attained with one
/// side flush against an edge.
struct WidthResult {
    double width = 0.0;
    Vec2 direction{0.0, 1.0};
};
WidthResult polygon_width(const ConvexPolygon& poly);

/// Deterministic convex polygon generator: vertices at sorted random angles
/// on a randomly scaled/rotated ellipse. Always strictly convex.
ConvexPolygon random_convex_polygon(std::uint64_t seed, int min_vertices = 5,
                                    int max_vertices = 10);

} // namespace wpw
