#include "wpw/mesh2d.hpp"
#include "wpw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace wpw {

namespace {

double hash_jitter(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a * 0x9e3779b97f4a7c15ULL + b + 0x2545f4914f6cdd1dULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53 - 0.5; // in [-0.5, 0.5)
}

bool inside(const ConvexPolygon& poly, Vec2 q, double margin) {
    const auto& v = poly.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 a = v[i], b = v[(i + 1) % v.size()];
        const Vec2 e = b - a;
        const double len = e.norm();
        // signed distance to the edge line, positive inside (CCW)
        if (e.cross(q - a) / len < margin)
            return false;
    }
    return true;
}

struct Tri {
    int a, b, c;
    Vec2 cc;   // circumcenter
    double r2; // squared circumradius
    bool alive = true;
};

Tri make_tri(const std::vector<Vec2>& pts, int a, int b, int c) {
    Tri t{a, b, c, {0, 0}, 0.0, true};
    const Vec2 A = pts[static_cast<std::size_t>(a)];
    const Vec2 B = pts[static_cast<std::size_t>(b)];
    const Vec2 C = pts[static_cast<std::size_t>(c)];
    const double d = 2.0 * ((B - A).cross(C - A));
    const double a2 = A.dot(A), b2 = B.dot(B), c2 = C.dot(C);
    t.cc.x = (a2 * (B.y - C.y) + b2 * (C.y - A.y) + c2 * (A.y - B.y)) / d;
    t.cc.y = (a2 * (C.x - B.x) + b2 * (A.x - C.x) + c2 * (B.x - A.x)) / d;
    t.r2 = (A - t.cc).dot(A - t.cc);
    return t;
}

} // namespace

TriMesh triangulate(const ConvexPolygon& poly, double mesh_h) {
    if (!(mesh_h > 0.0))
        throw MeshError("triangulate requires mesh_h > 0");

    std::vector<Vec2> pts;
    const auto& v = poly.vertices();

    // boundary: vertices plus evenly spaced edge points
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 a = v[i], b = v[(i + 1) % v.size()];
        pts.push_back(a);
        const double len = (b - a).norm();
        const int n = static_cast<int>(std::ceil(len / mesh_h));
        for (int k = 1; k < n; ++k)
            pts.push_back(a + (b - a) * (static_cast<double>(k) / n));
    }

    // interior lattice with deterministic jitter
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Vec2& q : v) {
        xmin = std::min(xmin, q.x);
        xmax = std::max(xmax, q.x);
        ymin = std::min(ymin, q.y);
        ymax = std::max(ymax, q.y);
    }
    const std::int64_t nx = static_cast<std::int64_t>((xmax - xmin) / mesh_h) + 1;
    const std::int64_t ny = static_cast<std::int64_t>((ymax - ymin) / mesh_h) + 1;
    for (std::int64_t i = 0; i <= nx; ++i)
        for (std::int64_t j = 0; j <= ny; ++j) {
            Vec2 q{xmin + static_cast<double>(i) * mesh_h,
                   ymin + static_cast<double>(j) * mesh_h};
            q.x += 0.1 * mesh_h * hash_jitter(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
            q.y += 0.1 * mesh_h * hash_jitter(static_cast<std::uint64_t>(j) + 77,
                                              static_cast<std::uint64_t>(i) + 13);
            if (inside(poly, q, 0.45 * mesh_h))
                pts.push_back(q);
        }

    if (pts.size() < 3)
        throw MeshError("triangulate: not enough points at this mesh_h");

    // Bowyer-Watson over a super-triangle
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    const double R = 4.0 * std::max(xmax - xmin, ymax - ymin) + 1.0;
    const int n0 = static_cast<int>(pts.size());
    std::vector<Vec2> all = pts;
    all.push_back({cx - 2.0 * R, cy - R});
    all.push_back({cx + 2.0 * R, cy - R});
    all.push_back({cx, cy + 2.0 * R});

    std::vector<Tri> tris;
    tris.push_back(make_tri(all, n0, n0 + 1, n0 + 2));

    std::vector<std::array<int, 2>> boundary;
    for (int ip = 0; ip < n0; ++ip) {
        const Vec2 q = all[static_cast<std::size_t>(ip)];
        boundary.clear();
        // cavity: triangles whose circumcircle contains q
        for (Tri& t : tris) {
            if (!t.alive)
                continue;
            if ((q - t.cc).dot(q - t.cc) <= t.r2 * (1.0 + 1e-12)) {
                t.alive = false;
                const int e[3][2] = {{t.a, t.b}, {t.b, t.c}, {t.c, t.a}};
                for (const auto& ed : e) {
                    bool dup = false;
                    for (auto it = boundary.begin(); it != boundary.end(); ++it)
                        if ((*it)[0] == ed[1] && (*it)[1] == ed[0]) {
                            boundary.erase(it);
                            dup = true;
                            break;
                        }
                    if (!dup)
                        boundary.push_back({ed[0], ed[1]});
                }
            }
        }
        for (const auto& ed : boundary)
            tris.push_back(make_tri(all, ed[0], ed[1], ip));
        // periodically drop dead triangles to keep the scan linear-ish
        if (tris.size() > 4096) {
            std::vector<Tri> live;
            live.reserve(tris.size());
            for (const Tri& t : tris)
                if (t.alive)
                    live.push_back(t);
            tris.swap(live);
        }
    }

    TriMesh mesh;
    mesh.points = std::move(pts);
    for (const Tri& t : tris) {
        if (!t.alive || t.a >= n0 || t.b >= n0 || t.c >= n0)
            continue;
        const Vec2 A = all[static_cast<std::size_t>(t.a)];
        const Vec2 B = all[static_cast<std::size_t>(t.b)];
        const Vec2 C = all[static_cast<std::size_t>(t.c)];
        const double area2 = (B - A).cross(C - A);
        if (std::abs(area2) < 1e-14 * mesh_h * mesh_h)
            continue;
        if (area2 > 0.0)
            mesh.triangles.push_back({t.a, t.b, t.c});
        else
            mesh.triangles.push_back({t.a, t.c, t.b});
    }
    if (mesh.triangles.empty())
        throw MeshError("triangulate produced no interior triangles");
    return mesh;
}

} // namespace wpw
