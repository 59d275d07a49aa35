#include "wpw/geometry.hpp"
#include "wpw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace wpw {

namespace {

double signed_area(const std::vector<Vec2>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % v.size()];
        a += p.cross(q);
    }
    return 0.5 * a;
}

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * u01(); }
};

} // namespace

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
    if (verts_.size() < 3)
        throw DomainError("ConvexPolygon needs at least 3 vertices");
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        const Vec2& a = verts_[i];
        const Vec2& b = verts_[(i + 1) % verts_.size()];
        const Vec2& c = verts_[(i + 2) % verts_.size()];
        const Vec2 e1 = b - a, e2 = c - b;
        const double tol = 1e-12 * std::max(1.0, e1.norm() * e2.norm());
        if (e1.cross(e2) < -tol)
            throw DomainError("ConvexPolygon vertices are not counterclockwise convex");
    }
    if (!(signed_area(verts_) > 0.0))
        throw DomainError("ConvexPolygon must have positive area");
}

double ConvexPolygon::area() const { return signed_area(verts_); }

Vec2 ConvexPolygon::centroid() const {
    double a6 = 0.0;
    Vec2 c{0.0, 0.0};
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        const Vec2& p = verts_[i];
        const Vec2& q = verts_[(i + 1) % verts_.size()];
        const double w = p.cross(q);
        a6 += w;
        c.x += (p.x + q.x) * w;
        c.y += (p.y + q.y) * w;
    }
    return {c.x / (3.0 * a6), c.y / (3.0 * a6)};
}

ConvexPolygon ConvexPolygon::rectangle(double x0, double y0, double x1, double y1) {
    return ConvexPolygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

ConvexPolygon ConvexPolygon::regular(int n_sides, double circumradius, Vec2 center) {
    std::vector<Vec2> v;
    v.reserve(static_cast<std::size_t>(n_sides));
    for (int i = 0; i < n_sides; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n_sides;
        v.push_back({center.x + circumradius * std::cos(a),
                     center.y + circumradius * std::sin(a)});
    }
    return ConvexPolygon(std::move(v));
}

std::pair<std::optional<ConvexPolygon>, std::optional<ConvexPolygon>>
clip(const ConvexPolygon& poly, const CutLine& line) {
    const Vec2 n = line.normal();
    const auto& v = poly.vertices();

    // geometric tolerance relative to the polygon scale
    double scale = 0.0;
    for (const Vec2& q : v)
        scale = std::max(scale, std::abs(q.dot(n)));
    const double eps = 1e-14 * std::max(scale, 1e-30);

    std::vector<Vec2> left, right;
    const std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % m];
        const double da = a.dot(n) - line.c;
        const double db = b.dot(n) - line.c;
        if (da <= eps)
            left.push_back(a);
        if (da >= -eps)
            right.push_back(a);
        if ((da < -eps && db > eps) || (da > eps && db < -eps)) {
            const double t = da / (da - db);
            const Vec2 x = a + (b - a) * t;
            left.push_back(x);
            right.push_back(x);
        }
    }

    auto build = [](std::vector<Vec2>& pts) -> std::optional<ConvexPolygon> {
        if (pts.size() < 3)
            return std::nullopt;
        if (!(signed_area(pts) > 0.0))
            return std::nullopt; // degenerate sliver below rounding
        return ConvexPolygon(std::move(pts));
    };
    return {build(left), build(right)};
}

double diameter(const ConvexPolygon& poly) {
    const auto& v = poly.vertices();
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            best = std::max(best, (v[i] - v[j]).norm());
    return best;
}

WidthResult polygon_width(const ConvexPolygon& poly) {
    const auto& v = poly.vertices();
    WidthResult out;
    out.width = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 e = v[(i + 1) % v.size()] - v[i];
        const double len = e.norm();
        if (len == 0.0)
            continue;
        const Vec2 n{-e.y / len, e.x / len}; // inward normal of a CCW edge
        double extent = 0.0;
        for (const Vec2& q : v)
            extent = std::max(extent, (q - v[i]).dot(n));
        if (extent < out.width) {
            out.width = extent;
            out.direction = n;
        }
    }
    return out;
}

ConvexPolygon random_convex_polygon(std::uint64_t seed, int min_vertices, int max_vertices) {
    SplitMix64 rng(seed * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL);
    const int n = min_vertices +
                  static_cast<int>(rng.next() %
                                   static_cast<std::uint64_t>(max_vertices - min_vertices + 1));
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (auto& a : angles)
        a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    std::sort(angles.begin(), angles.end());
    // enforce angular separation so no two vertices collapse
    for (int i = 1; i < n; ++i)
        angles[static_cast<std::size_t>(i)] = std::max(
            angles[static_cast<std::size_t>(i)], angles[static_cast<std::size_t>(i - 1)] + 0.05);
    if (angles.back() >= 2.0 * std::numbers::pi)
        for (auto& a : angles)
            a *= (2.0 * std::numbers::pi - 0.05) / angles.back();

    // affine image of the unit circle: guaranteed strictly convex
    const double ax = rng.uniform(0.5, 1.5), ay = rng.uniform(0.5, 1.5);
    const double rot = rng.uniform(0.0, std::numbers::pi);
    const double cr = std::cos(rot), sr = std::sin(rot);
    std::vector<Vec2> verts;
    verts.reserve(static_cast<std::size_t>(n));
    for (double a : angles) {
        const double ex = ax * std::cos(a), ey = ay * std::sin(a);
        verts.push_back({cr * ex - sr * ey, sr * ex + cr * ey});
    }
    return ConvexPolygon(std::move(verts));
}

} // namespace wpw
