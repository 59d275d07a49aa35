#pragma once

#include "wpw/geometry.hpp"

#include <array>
#include <vector>

namespace wpw {

/// Conforming P1 triangle mesh of a convex polygon.
struct TriMesh {
    std::vector<Vec2> points;
    std::vector<std::array<int, 3>> triangles; // counterclockwise
};

/// Deterministic Delaunay mesh: polygon vertices, boundary points at spacing
/// <= mesh_h, and an interior lattice of pitch mesh_h offset from the
/// boundary, with tiny index-hashed jitter to break cocircular degeneracies.
/// Throws MeshError when no valid triangulation results.
TriMesh triangulate(const ConvexPolygon& poly, double mesh_h);

} // namespace wpw
